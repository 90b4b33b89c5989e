//! Low-lying quasi-energies of long 1D walks without dense diagonalisation.
//!
//! A walk `W = M_p S` on a chain (site-dependent 2x2 `M_p`, shift-then-coin)
//! has a Hermitian part `H = (W + W^dag)/2` that is block tridiagonal with
//! zero diagonal blocks. Eigenvalues of `H` near 1 are `cos E` for the small
//! quasi-energies `E` of `W`. They are located by Sturm counting with a block
//! LDL^dag factorisation and bisection, refined to eigenvectors by inverse
//! iteration, and finally assigned a sign through a Rayleigh-Ritz projection
//! of `W` itself. The chain is cut open between the last and the first site;
//! states living near the cut are meant to be filtered by their weight.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fmath;
use crate::linalg::{hermitian_eigen, CMat, Mat2};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One eigenmode of a chain walk.
#[derive(Clone, Debug)]
pub struct ChainMode {
    /// Quasi-energy per step, eigenvalue `e^{-i E}`, `E` in `(-pi, pi]`.
    pub energy: f64,
    /// Probability inside the central region.
    pub weight: f64,
    /// Normalised eigenvector, site-major with two components per site.
    pub vector: Vec<Complex64>,
}

struct Chain {
    /// `b[p] = H[p, p + 1]`, `p = 0..L-1`.
    b: Vec<Mat2>,
}

const P_UP: Mat2 = Mat2::diag(Complex64::new(1.0, 0.0), ZERO);
const P_DN: Mat2 = Mat2::diag(ZERO, Complex64::new(1.0, 0.0));

impl Chain {
    fn new(m: &[Mat2]) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let b = (0..m.len() - 1).map(|p| (m[p] * P_UP).add(&(P_DN * m[p + 1].adjoint())).scale(half)).collect();
        Self { b }
    }

    fn len(&self) -> usize {
        self.b.len() + 1
    }

    /// Pivot blocks `D_p` of `H - mu`, each made exactly Hermitian and kept
    /// away from singularity.
    fn pivots(&self, mu: f64) -> Vec<Mat2> {
        let n = self.len();
        let mut d = Vec::with_capacity(n);
        let shift = Mat2::diag(Complex64::new(-mu, 0.0), Complex64::new(-mu, 0.0));
        d.push(guard(shift));
        for p in 1..n {
            let bp = self.b[p - 1];
            let inv = inverse(&d[p - 1]);
            let schur = bp.adjoint() * inv * bp;
            let next = shift.add(&schur.scale(Complex64::new(-1.0, 0.0)));
            d.push(guard(hermitize(next)));
        }
        d
    }

    /// Number of eigenvalues of `H` below `mu`.
    fn count_below(&self, mu: f64) -> usize {
        self.pivots(mu).iter().map(negatives).sum()
    }

    /// Solves `(H - mu) x = rhs`.
    fn solve(&self, mu: f64, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.len();
        let d = self.pivots(mu);
        let mut y: Vec<[Complex64; 2]> = (0..n).map(|p| [rhs[2 * p], rhs[2 * p + 1]]).collect();
        for p in 1..n {
            let l = self.b[p - 1].adjoint() * inverse(&d[p - 1]);
            let t = l.apply(y[p - 1]);
            y[p] = [y[p][0] - t[0], y[p][1] - t[1]];
        }
        let mut x = vec![[ZERO; 2]; n];
        x[n - 1] = inverse(&d[n - 1]).apply(y[n - 1]);
        for p in (0..n - 1).rev() {
            let t = self.b[p].apply(x[p + 1]);
            x[p] = inverse(&d[p]).apply([y[p][0] - t[0], y[p][1] - t[1]]);
        }
        x.into_iter().flatten().collect()
    }
}

fn hermitize(m: Mat2) -> Mat2 {
    let off = (m.at(0, 1) + m.at(1, 0).conj()) * 0.5;
    Mat2::new(Complex64::new(m.at(0, 0).re, 0.0), off, off.conj(), Complex64::new(m.at(1, 1).re, 0.0))
}

fn guard(m: Mat2) -> Mat2 {
    let det = m.det().re;
    let scale = m.at(0, 0).norm().max(m.at(1, 1).norm()).max(m.at(0, 1).norm()).max(1e-300);
    if fmath::abs(det) > 1e-28 * scale * scale {
        return m;
    }
    let eps = Complex64::new(1e-14 * scale.max(1e-14), 0.0);
    Mat2::new(m.at(0, 0) + eps, m.at(0, 1), m.at(1, 0), m.at(1, 1) + eps)
}

fn inverse(m: &Mat2) -> Mat2 {
    let det = m.det();
    let r = det.inv();
    Mat2::new(m.at(1, 1) * r, -m.at(0, 1) * r, -m.at(1, 0) * r, m.at(0, 0) * r)
}

fn negatives(m: &Mat2) -> usize {
    let det = m.det().re;
    let tr = m.at(0, 0).re + m.at(1, 1).re;
    if det < 0.0 {
        1
    } else if tr < 0.0 {
        2
    } else {
        0
    }
}

fn apply_walk(m: &[Mat2], v: &[Complex64]) -> Vec<Complex64> {
    let n = m.len();
    let mut out = vec![ZERO; 2 * n];
    for p in 0..n {
        let up = v[2 * ((p + 1) % n)];
        let dn = v[2 * ((p + n - 1) % n) + 1];
        let r = m[p].apply([up, dn]);
        out[2 * p] = r[0];
        out[2 * p + 1] = r[1];
    }
    out
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).fold(ZERO, |acc, (x, y)| acc + x.conj() * y)
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let n = fmath::sqrt(v.iter().map(|z| z.norm_sqr()).sum());
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

fn orthonormalize(vs: &mut [Vec<Complex64>]) {
    for i in 0..vs.len() {
        for _ in 0..2 {
            for j in 0..i {
                let (head, tail) = vs.split_at_mut(i);
                let c = dot(&head[j], &tail[0]);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= c * y;
                }
            }
        }
        normalize(&mut vs[i]);
    }
}

fn seed_vector(n: usize, r: usize) -> Vec<Complex64> {
    (0..n)
        .map(|i| {
            let x = (i as f64) * 0.618_033_988_749_895 + (r as f64 + 1.0) * 0.414_213_562;
            let ph = fmath::TAU * (x * x - fmath::floor(x * x));
            Complex64::new(fmath::cos(ph), fmath::sin(ph)) * (1.0 + 0.5 * fmath::sin(1.7 * x))
        })
        .collect()
}

/// All eigenmodes of the chain walk `W = M_p S` with `|E| <= window`.
///
/// `m` holds the per-site matrices `M_p` (everything applied after the
/// shift). `central_fraction` sets the region `|p - L/2| < fraction L / 2`
/// used for [`ChainMode::weight`]. Requires `0 < window < pi/2` and at least
/// three sites.
pub fn chain_modes(m: &[Mat2], window: f64, central_fraction: f64) -> Result<Vec<ChainMode>> {
    if m.len() < 3 {
        return Err(invalid("chain needs at least three sites"));
    }
    if !(window > 0.0 && window < fmath::FRAC_PI_2) {
        return Err(invalid("window must lie in (0, pi/2)"));
    }
    let chain = Chain::new(m);
    let n = chain.len();
    let dim = 2 * n;
    let lo = fmath::cos(window);
    let first = chain.count_below(lo);
    let mut eigs = Vec::with_capacity(dim - first);
    for k in first..dim {
        let (mut a, mut b) = (lo, 1.0 + 1e-9);
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if chain.count_below(mid) > k {
                b = mid;
            } else {
                a = mid;
            }
        }
        eigs.push(0.5 * (a + b));
    }

    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for &e in &eigs {
        match clusters.last_mut() {
            Some(c) if e - c[c.len() - 1] < 1e-9 => c.push(e),
            _ => clusters.push(vec![e]),
        }
    }

    let centre = n as f64 / 2.0;
    let radius = central_fraction * n as f64 / 2.0;
    let weight = |v: &[Complex64]| -> f64 {
        (0..n)
            .filter(|&p| fmath::abs(p as f64 - centre) < radius)
            .map(|p| v[2 * p].norm_sqr() + v[2 * p + 1].norm_sqr())
            .sum()
    };

    let mut modes = Vec::with_capacity(eigs.len());
    for (ci, cluster) in clusters.iter().enumerate() {
        let c = cluster.len();
        let mu = cluster.iter().sum::<f64>() / c as f64 + 1e-13;
        let mut vs: Vec<Vec<Complex64>> = (0..c).map(|r| seed_vector(dim, r + 7 * ci)).collect();
        orthonormalize(&mut vs);
        for _ in 0..4 {
            for v in vs.iter_mut() {
                *v = chain.solve(mu, v);
            }
            orthonormalize(&mut vs);
        }
        let wv: Vec<Vec<Complex64>> = vs.iter().map(|v| apply_walk(m, v)).collect();
        let proj = CMat::from_fn(c, c, |i, j| dot(&vs[i], &wv[j]));
        for (lambda, y) in normal_eigen(&proj) {
            let mut v = vec![ZERO; dim];
            for (vj, yj) in vs.iter().zip(y.iter()) {
                for (x, z) in v.iter_mut().zip(vj) {
                    *x += z * yj;
                }
            }
            normalize(&mut v);
            modes.push(ChainMode { energy: -lambda.arg(), weight: weight(&v), vector: v });
        }
    }
    Ok(modes)
}

/// Eigenpairs of a small (nearly) normal matrix, through the Hermitian
/// combination `Re M + g Im M` with an irrational weight `g`.
fn normal_eigen(m: &CMat) -> Vec<(Complex64, Vec<Complex64>)> {
    let c = m.nrows();
    if c == 1 {
        return vec![(m[(0, 0)], vec![Complex64::new(1.0, 0.0)])];
    }
    let adj = m.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let re = (m + &adj) * half;
    let im = (m - &adj) * Complex64::new(0.0, -0.5);
    let k = re + im * Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
    let (_, vecs) = hermitian_eigen(&k);
    (0..c)
        .map(|j| {
            let y: Vec<Complex64> = (0..c).map(|i| vecs[(i, j)]).collect();
            let my: Vec<Complex64> = (0..c).map(|r| (0..c).map(|s| m[(r, s)] * y[s]).sum()).collect();
            (dot(&y, &my), y)
        })
        .collect()
}
