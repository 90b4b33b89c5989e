//! Walks in curved spacetimes.
//!
//! (1+1)D: the coin `B(theta)` with a position-dependent angle; two steps
//! form the stroboscopic unit. (1+2)D: spatial metrics `G_ij` with
//! `G_00 = 1`, `G_0i = 0`, signature `(+, -, -)`, their symmetric triads,
//! the spin connection, a walk whose local speeds follow the triad, and the
//! linear gravitational-wave observables.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coin::{cis, curved_coin, shift_symbol, standard_coin};
use crate::error::{invalid, shape, Error, Result};
use crate::fmath::{self, pairwise_sum, TAU};
use crate::lattice::SpinorField;
use crate::linalg::Mat2;
use crate::walk::shift_coin;

/// Spatial metric `(G_XX, G_YY, G_XY)` on the nodes of a periodic 2D
/// lattice. Time is sampled on `slices` slices; derivatives use the node
/// spacings `[dt, dx, dy]`.
#[derive(Clone, Debug)]
pub struct MetricField2D {
    extents: [usize; 2],
    slices: usize,
    /// Node spacings `[dt, dx, dy]`.
    pub spacing: [f64; 3],
    g: Vec<[f64; 3]>,
}

fn check_metric(g: [f64; 3], node: usize) -> Result<()> {
    let det = g[0] * g[1] - g[2] * g[2];
    if !g.iter().all(|v| v.is_finite()) {
        return Err(Error::DegenerateMetric { node, reason: "non-finite component".into() });
    }
    if !(g[0] < 0.0) || !(det > 0.0) {
        return Err(Error::DegenerateMetric { node, reason: "spatial block is not negative definite".into() });
    }
    let sg = fmath::sqrt(det);
    if !(2.0 * sg - (g[0] + g[1]) > 0.0) {
        return Err(Error::DegenerateMetric { node, reason: "2 sqrt(G) - Sigma is not positive".into() });
    }
    Ok(())
}

impl MetricField2D {
    /// Builds from `f(slice, [x, y]) -> (G_XX, G_YY, G_XY)` with unit spacings.
    pub fn from_fn(extents: [usize; 2], slices: usize, f: impl Fn(usize, [usize; 2]) -> [f64; 3]) -> Result<Self> {
        if extents.contains(&0) || slices == 0 {
            return Err(shape("metric needs positive extents and at least one slice"));
        }
        let sites = extents[0] * extents[1];
        let mut g = Vec::with_capacity(sites * slices);
        for t in 0..slices {
            for s in 0..sites {
                let v = f(t, [s % extents[0], s / extents[0]]);
                check_metric(v, t * sites + s)?;
                g.push(v);
            }
        }
        Ok(Self { extents, slices, spacing: [1.0; 3], g })
    }

    /// Static flat metric `(-1, -1, 0)`.
    pub fn flat(extents: [usize; 2]) -> Result<Self> {
        Self::from_fn(extents, 1, |_, _| [-1.0, -1.0, 0.0])
    }

    /// Sets the node spacings.
    pub fn with_spacing(mut self, spacing: [f64; 3]) -> Result<Self> {
        if spacing.iter().any(|h| !(*h > 0.0)) {
            return Err(invalid("spacings must be positive"));
        }
        self.spacing = spacing;
        Ok(self)
    }

    /// Lattice extents.
    pub fn extents(&self) -> [usize; 2] {
        self.extents
    }

    /// Number of time slices.
    pub fn slices(&self) -> usize {
        self.slices
    }

    fn sites(&self) -> usize {
        self.extents[0] * self.extents[1]
    }

    /// `(G_XX, G_YY, G_XY)` at slice `j` (periodic) and site `s`.
    pub fn at(&self, j: usize, s: usize) -> [f64; 3] {
        self.g[(j % self.slices) * self.sites() + s]
    }

    /// `det G = G_XX G_YY - G_XY^2` per site on slice `j`.
    pub fn determinant(&self, j: usize) -> Vec<f64> {
        (0..self.sites()).map(|s| {
            let g = self.at(j, s);
            g[0] * g[1] - g[2] * g[2]
        }).collect()
    }
}

/// Symmetric triad `[[E1, B], [B, E2]]` per node.
#[derive(Clone, Debug)]
pub struct Triad {
    extents: [usize; 2],
    slices: usize,
    e: Vec<[f64; 3]>,
}

impl Triad {
    /// `(E1, E2, B)` at slice `j` (periodic) and site `s`.
    pub fn at(&self, j: usize, s: usize) -> [f64; 3] {
        self.e[(j % self.slices) * self.extents[0] * self.extents[1] + s]
    }

    /// A triad that is the same on every node.
    pub fn uniform(extents: [usize; 2], e1: f64, e2: f64, b: f64) -> Self {
        Self { extents, slices: 1, e: vec![[e1, e2, b]; extents[0] * extents[1]] }
    }

    /// Lattice extents.
    pub fn extents(&self) -> [usize; 2] {
        self.extents
    }

    /// Number of time slices.
    pub fn slices(&self) -> usize {
        self.slices
    }
}

/// Triad `(E1, E2, B)` of one spatial metric node.
pub fn triad_node(g: [f64; 3]) -> Result<[f64; 3]> {
    check_metric(g, 0)?;
    let det = g[0] * g[1] - g[2] * g[2];
    let sg = fmath::sqrt(det);
    let d = sg * fmath::sqrt(2.0 * sg - (g[0] + g[1]));
    Ok([(-g[1] + sg) / d, (-g[0] + sg) / d, g[2] / d])
}

/// Dreibein `[[e11, e12], [e12, e22]]` of one metric node, the inverse of
/// the triad matrix.
pub fn dreibein_node(g: [f64; 3]) -> Result<[[f64; 2]; 2]> {
    check_metric(g, 0)?;
    let det = g[0] * g[1] - g[2] * g[2];
    let sg = fmath::sqrt(det);
    let d = fmath::sqrt(2.0 * sg - (g[0] + g[1]));
    Ok([[(-g[0] + sg) / d, -g[2] / d], [-g[2] / d, (-g[1] + sg) / d]])
}

/// Triad of every node; degenerate nodes are reported by index.
pub fn triad_from_metric(metric: &MetricField2D) -> Result<Triad> {
    let mut e = Vec::with_capacity(metric.g.len());
    for (node, g) in metric.g.iter().enumerate() {
        check_metric(*g, node)?;
        e.push(triad_node(*g)?);
    }
    Ok(Triad { extents: metric.extents, slices: metric.slices, e })
}

/// Angle profile `theta(t, x)` of the (1+1)D walk.
#[derive(Clone, Debug)]
pub struct CurvedCoinProfile {
    extent: usize,
    slices: usize,
    theta: Vec<f64>,
}

impl CurvedCoinProfile {
    /// Builds from `f(slice, site)`, requiring `theta` in `[0, pi/2)`.
    pub fn from_fn(extent: usize, slices: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if extent == 0 || slices == 0 {
            return Err(shape("profile needs a positive extent and slice count"));
        }
        let mut theta = Vec::with_capacity(extent * slices);
        for t in 0..slices {
            for p in 0..extent {
                let v = f(t, p);
                if !(0.0..fmath::FRAC_PI_2).contains(&v) {
                    return Err(invalid("theta must lie in [0, pi/2)"));
                }
                theta.push(v);
            }
        }
        Ok(Self { extent, slices, theta })
    }

    /// Static Schwarzschild-like profile: `cos theta = |1 - r_s / r|`, the
    /// radial coordinate speed of light, with `r = p - (horizon - r_s)` in
    /// sites, clamped to `[1e-3, 1]`; `theta = 0` for `r <= 0`. The walk
    /// slows down to a halt at the horizon `p = horizon`.
    pub fn schwarzschild(extent: usize, horizon: usize, rs: f64) -> Result<Self> {
        if !(rs > 0.0) || horizon >= extent {
            return Err(invalid("Schwarzschild profile needs r_s > 0 and a horizon inside the lattice"));
        }
        let origin = horizon as f64 - rs;
        Self::from_fn(extent, 1, |_, p| {
            let r = p as f64 - origin;
            let c = if r <= 0.0 { 1.0 } else { fmath::abs(1.0 - rs / r).clamp(1e-3, 1.0) };
            fmath::acos(c)
        })
    }

    /// `theta` at slice `j` (periodic) and site `p`.
    pub fn theta(&self, j: usize, p: usize) -> f64 {
        self.theta[(j % self.slices) * self.extent + p]
    }

    /// Local speed `cos theta` on slice `j`, in sites per step of the
    /// two-step walk.
    pub fn speed(&self, j: usize) -> Vec<f64> {
        (0..self.extent).map(|p| fmath::cos(self.theta(j, p))).collect()
    }
}

/// One step of the (1+1)D walk with coin `B(theta(j, p))`.
pub fn curved_step_1p1(field: &SpinorField, profile: &CurvedCoinProfile, j: usize) -> Result<SpinorField> {
    if field.dims() != 1 || field.sites() != profile.extent {
        return Err(shape("profile does not match the lattice"));
    }
    shift_coin(field, 0, |p| curved_coin(profile.theta(j, p)))
}

/// Spacetime gamma matrices `gamma^0 = sigma_1`, `gamma^1 = i sigma_2`,
/// `gamma^2 = i sigma_3`.
pub fn gamma(a: usize) -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match a {
        0 => Mat2::new(z, o, o, z),
        1 => Mat2::new(z, o, -o, z),
        _ => Mat2::new(i, z, z, -i),
    }
}

/// `S^{ab} = [gamma^a, gamma^b] / 4`.
pub fn spin_generator(a: usize, b: usize) -> Mat2 {
    let (ga, gb) = (gamma(a), gamma(b));
    (ga * gb).add(&(gb * ga).scale(Complex64::new(-1.0, 0.0))).scale(Complex64::new(0.25, 0.0))
}

type M3 = [[f64; 3]; 3];

fn spacetime_metric(g: [f64; 3]) -> M3 {
    [[1.0, 0.0, 0.0], [0.0, g[0], g[2]], [0.0, g[2], g[1]]]
}

/// Tetrad `E_a^alpha`, row `a`, column `alpha`.
fn tetrad(g: [f64; 3]) -> Result<M3> {
    let t = triad_node(g)?;
    Ok([[1.0, 0.0, 0.0], [0.0, t[0], t[2]], [0.0, t[2], t[1]]])
}

fn inverse3(m: &M3) -> M3 {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, d) = ((i + 1) % 3, (i + 2) % 3);
            r[i][j] = (m[a][c] * m[b][d] - m[a][d] * m[b][c]) / det;
        }
    }
    r
}

impl MetricField2D {
    /// Centered derivative along spacetime axis `mu` of a node quantity,
    /// periodic in space. Time derivatives vanish for a single slice and
    /// need an interior slice otherwise.
    fn derivative<T: Copy>(
        &self,
        j: usize,
        s: usize,
        mu: usize,
        f: impl Fn(usize, usize) -> Result<T>,
        sub: impl Fn(T, T, f64) -> T,
        zero: T,
    ) -> Result<T> {
        let h = self.spacing[mu];
        match mu {
            0 if self.slices == 1 => Ok(zero),
            0 => {
                if j == 0 || j + 1 >= self.slices {
                    return Err(Error::Stencil("time derivative needs slices j - 1 and j + 1".into()));
                }
                Ok(sub(f(j + 1, s)?, f(j - 1, s)?, 2.0 * h))
            }
            _ => {
                let axis = mu - 1;
                let ext = [self.extents[0], self.extents[1]];
                let plus = crate::lattice::neighbor(&ext, s, axis, 1);
                let minus = crate::lattice::neighbor(&ext, s, axis, -1);
                Ok(sub(f(j, plus)?, f(j, minus)?, 2.0 * h))
            }
        }
    }
}

fn diff3(a: M3, b: M3, h: f64) -> M3 {
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for k in 0..3 {
            r[i][k] = (a[i][k] - b[i][k]) / h;
        }
    }
    r
}

/// Connection coefficients `omega_{a b mu}` at slice `j`, site `s`:
/// `g_{alpha beta} E_a^beta (d_mu E_b^alpha + Gamma^alpha_{mu nu} E_b^nu)`,
/// with Christoffel symbols and tetrad derivatives from centered
/// differences.
pub fn connection_coefficients(metric: &MetricField2D, j: usize, s: usize, mu: usize) -> Result<M3> {
    if mu > 2 || s >= metric.sites() {
        return Err(Error::Axis { axis: mu, dims: 3 });
    }
    let g = spacetime_metric(metric.at(j, s));
    let ginv = inverse3(&g);
    let e = tetrad(metric.at(j, s))?;
    let metric_at = |t: usize, q: usize| Ok(spacetime_metric(metric.at(t, q)));
    let mut dg = [[[0.0; 3]; 3]; 3];
    for (l, slot) in dg.iter_mut().enumerate() {
        *slot = metric.derivative(j, s, l, metric_at, diff3, [[0.0; 3]; 3])?;
    }
    let de = metric.derivative(j, s, mu, |t, q| tetrad(metric.at(t, q)), diff3, [[0.0; 3]; 3])?;
    // Gamma^alpha_{mu nu}
    let mut chris = [[0.0; 3]; 3];
    for (alpha, row) in chris.iter_mut().enumerate() {
        for (nu, c) in row.iter_mut().enumerate() {
            let mut acc = 0.0;
            for lam in 0..3 {
                acc += ginv[alpha][lam] * (dg[mu][lam][nu] + dg[nu][lam][mu] - dg[lam][mu][nu]);
            }
            *c = 0.5 * acc;
        }
    }
    let mut omega = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let mut acc = 0.0;
            for alpha in 0..3 {
                let mut cov = de[b][alpha];
                for nu in 0..3 {
                    cov += chris[alpha][nu] * e[b][nu];
                }
                for beta in 0..3 {
                    acc += g[alpha][beta] * e[a][beta] * cov;
                }
            }
            omega[a][b] = acc;
        }
    }
    Ok(omega)
}

/// Spin connection `Gamma_mu = omega_{a b mu} S^{ab} / 2` on every site of
/// slice `j`.
pub fn spin_connection(metric: &MetricField2D, j: usize, mu: usize) -> Result<Vec<Mat2>> {
    (0..metric.sites())
        .map(|s| {
            let w = connection_coefficients(metric, j, s, mu)?;
            Ok(contract(&w))
        })
        .collect()
}

/// `sum_{a,b} w_{ab} S^{ab} / 2`.
pub fn contract(w: &M3) -> Mat2 {
    let mut acc = Mat2::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for (a, row) in w.iter().enumerate() {
        for (b, v) in row.iter().enumerate() {
            acc = acc.add(&spin_generator(a, b).scale(Complex64::new(0.5 * v, 0.0)));
        }
    }
    acc
}

/// Coin angles of one spatial axis: `cos theta_a = n_a / c_max` and the
/// frame rotation `phi_a`.
fn axis_angles(t: [f64; 3], c_max: f64) -> Result<[(f64, f64); 2]> {
    let n1 = fmath::hypot(t[0], t[2]);
    let n2 = fmath::hypot(t[1], t[2]);
    if n1 > c_max * (1.0 + 1e-12) || n2 > c_max * (1.0 + 1e-12) {
        return Err(invalid("local speed exceeds c_max"));
    }
    let th = |n: f64| fmath::acos((n / c_max).min(1.0));
    Ok([(th(n1), 0.5 * fmath::atan2(t[2], t[0])), (th(n2), 0.5 * fmath::atan2(t[1], t[2]))])
}

/// Options of the (1+2)D curved walk.
#[derive(Clone, Copy, Debug)]
pub struct CurvedWalk2D {
    /// Largest local speed; `cos theta_a = n_a / c_max`.
    pub c_max: f64,
}

impl Default for CurvedWalk2D {
    fn default() -> Self {
        Self { c_max: 1.0 }
    }
}

/// Site-local matrices of one (1+2)D step, built once per triad slice.
///
/// Each axis block is `T = R^dag B(theta) S B(theta) S R` with
/// `R = C(theta / 2 + phi)`; the step is `W = M T_Y T_X` with `M = C(-mass)`.
#[derive(Clone, Debug)]
pub struct CurvedStep1p2 {
    extents: [usize; 2],
    frame: [Vec<Mat2>; 2],
    first: [Vec<Mat2>; 2],
    second: [Vec<Mat2>; 2],
    mass: Option<Mat2>,
}

impl CurvedStep1p2 {
    /// Precomputes the coins of slice `j` of `triad`.
    pub fn new(triad: &Triad, mass: f64, j: usize, opts: CurvedWalk2D) -> Result<Self> {
        if !(opts.c_max > 0.0) {
            return Err(invalid("c_max must be positive"));
        }
        let sites = triad.extents[0] * triad.extents[1];
        let mut frame = [Vec::with_capacity(sites), Vec::with_capacity(sites)];
        let mut first = [Vec::with_capacity(sites), Vec::with_capacity(sites)];
        let mut second = [Vec::with_capacity(sites), Vec::with_capacity(sites)];
        for s in 0..sites {
            for (a, (th, ph)) in axis_angles(triad.at(j, s), opts.c_max)?.into_iter().enumerate() {
                let r = standard_coin(0.5 * th + ph);
                let b = curved_coin(th);
                frame[a].push(r);
                first[a].push(b);
                second[a].push(r.adjoint() * b);
            }
        }
        let mass = if mass != 0.0 { Some(standard_coin(-mass)) } else { None };
        Ok(Self { extents: triad.extents, frame, first, second, mass })
    }

    /// Applies the step to a two-component field on the triad's lattice.
    pub fn apply(&self, field: &SpinorField) -> Result<SpinorField> {
        if field.dims() != 2 || field.extents() != self.extents || field.internal() != 2 {
            return Err(shape("triad does not match the lattice"));
        }
        let mut f = field.clone();
        for axis in 0..2 {
            for (site, r) in f.amplitudes_mut().chunks_mut(2).zip(&self.frame[axis]) {
                let v = r.apply([site[0], site[1]]);
                site.copy_from_slice(&v);
            }
            let first = &self.first[axis];
            let second = &self.second[axis];
            f = shift_coin(&f, axis, |s| first[s])?;
            f = shift_coin(&f, axis, |s| second[s])?;
        }
        if let Some(m) = &self.mass {
            for site in f.amplitudes_mut().chunks_mut(2) {
                let v = m.apply([site[0], site[1]]);
                site.copy_from_slice(&v);
            }
        }
        Ok(f)
    }
}

/// One step of the (1+2)D walk, `W = M T_Y T_X`, with `T_a` built from the
/// triad at slice `j` and `M = C(-mass)` (mass in units of the lattice step).
///
/// The norm of each triad row sets the local speed along its axis and the
/// frame rotation aligns the spin with the triad. For the flat triad and
/// `c_max = 1`, the walk reduces to the free walk of the Abelian module on
/// each of the four parity sublattices. Repeated steps with a static triad
/// are cheaper through [`CurvedStep1p2`].
pub fn curved_step_1p2_with(field: &SpinorField, triad: &Triad, mass: f64, j: usize, opts: CurvedWalk2D) -> Result<SpinorField> {
    if field.dims() != 2 || field.extents() != triad.extents || field.internal() != 2 {
        return Err(shape("triad does not match the lattice"));
    }
    CurvedStep1p2::new(triad, mass, j, opts)?.apply(field)
}

/// [`curved_step_1p2_with`] with `c_max = 1`.
pub fn curved_step_1p2(field: &SpinorField, triad: &Triad, mass: f64, j: usize) -> Result<SpinorField> {
    curved_step_1p2_with(field, triad, mass, j, CurvedWalk2D::default())
}

/// Fourier symbol of the homogeneous (1+2)D walk with triad `(E1, E2, B)`.
pub fn curved_symbol_1p2(t: [f64; 3], c_max: f64, k: [f64; 2]) -> Result<Mat2> {
    let a = axis_angles(t, c_max)?;
    let block = |(th, ph): (f64, f64), k: f64| {
        let r = standard_coin(0.5 * th + ph);
        let bs = curved_coin(th) * shift_symbol(k);
        r.adjoint() * bs * bs * r
    };
    Ok(block(a[1], k[1]) * block(a[0], k[0]))
}

/// `Phi = (det G)^{-1/4} Psi` on slice `j`.
pub fn reweight(field: &SpinorField, metric: &MetricField2D, j: usize) -> Result<SpinorField> {
    if field.extents() != metric.extents {
        return Err(shape("metric does not match the lattice"));
    }
    let det = metric.determinant(j);
    let mut out = field.clone();
    for (s, d) in det.iter().enumerate() {
        let w = libm::pow(*d, -0.25);
        for z in out.site_mut(s) {
            *z *= w;
        }
    }
    Ok(out)
}

/// Polarisation of a linear plane gravitational wave propagating
/// perpendicular to the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GwPolarization {
    /// Diagonal traceless: `G_XX = -(1 + xi h)`, `G_YY = -(1 - xi h)`.
    Plus,
    /// Off-diagonal: `G_XY = -xi h`.
    Cross,
}

/// Spatial metric of the wave at amplitude `xi h`.
pub fn gw_metric(pol: GwPolarization, xi_h: f64) -> [f64; 3] {
    match pol {
        GwPolarization::Plus => [-(1.0 + xi_h), -(1.0 - xi_h), 0.0],
        GwPolarization::Cross => [-1.0, -1.0, -xi_h],
    }
}

/// Default `c_max` of the gravitational-wave runs, leaving room for the
/// perturbed local speeds.
pub const GW_C_MAX: f64 = 1.1;

fn positive_mode(w: &Mat2) -> (f64, [Complex64; 2]) {
    let (lam, vecs) = w.eigen();
    let (e0, e1) = (-lam[0].arg(), -lam[1].arg());
    if e0 >= e1 { (e0, vecs[0]) } else { (e1, vecs[1]) }
}

/// Equal superposition of the positive-energy flat-walk modes at `(k, 0)`
/// and `(0, k)`. Their energies coincide by symmetry, so the density is
/// stationary under the flat walk.
pub fn gw_two_mode_state(k: f64, extents: [usize; 2], c_max: f64) -> Result<SpinorField> {
    for &l in &extents {
        let m = k * l as f64 / TAU;
        if (m - fmath::round(m)).abs() > 1e-9 {
            return Err(invalid("k is not a multiple of 2 pi / extent"));
        }
    }
    let flat = [1.0, 1.0, 0.0];
    let (ea, ua) = positive_mode(&curved_symbol_1p2(flat, c_max, [k, 0.0])?);
    let (eb, ub) = positive_mode(&curved_symbol_1p2(flat, c_max, [0.0, k])?);
    if (ea - eb).abs() > 1e-12 {
        return Err(invalid("mode energies do not match"));
    }
    let mut f = SpinorField::zeros(&extents, 2)?;
    for s in 0..f.sites() {
        let c = f.coords(s);
        let (px, py) = (cis(k * c[0] as f64), cis(k * c[1] as f64));
        let site = f.site_mut(s);
        site[0] = ua[0] * px + ub[0] * py;
        site[1] = ua[1] * px + ub[1] * py;
    }
    f.normalize()?;
    Ok(f)
}

/// Relative density change after one step under the wave: per node
/// `(rho_1 - rho_0) / mean(rho_0)` and its largest modulus. The mean is used
/// because the two-mode interference has exact density nodes.
pub fn gw_relative_density_change(
    state: &SpinorField,
    pol: GwPolarization,
    xi: f64,
    h: f64,
    c_max: f64,
) -> Result<(Vec<f64>, f64)> {
    if !(xi.abs() <= 0.05) {
        return Err(invalid("xi must satisfy |xi| <= 0.05"));
    }
    let ext = [state.extent(0), state.extent(1)];
    let t = triad_node(gw_metric(pol, xi * h))?;
    let triad = Triad::uniform(ext, t[0], t[1], t[2]);
    let next = curved_step_1p2_with(state, &triad, 0.0, 0, CurvedWalk2D { c_max })?;
    let r0 = state.density();
    let r1 = next.density();
    let mean = pairwise_sum(&r0) / r0.len() as f64;
    let change: Vec<f64> = r0.iter().zip(&r1).map(|(a, b)| (b - a) / mean).collect();
    let max = change.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((change, max))
}

/// Maximal relative density change for each wavelength `lambda` (sites),
/// on a `4 lambda x 4 lambda` lattice with `h = 1`.
pub fn gw_wavelength_scan(pol: GwPolarization, xi: f64, c_max: f64, lambdas: &[usize]) -> Result<Vec<(usize, f64)>> {
    lambdas
        .iter()
        .map(|&l| {
            if l < 2 {
                return Err(invalid("wavelength must be at least two sites"));
            }
            let ext = [4 * l, 4 * l];
            let state = gw_two_mode_state(TAU / l as f64, ext, c_max)?;
            Ok((l, gw_relative_density_change(&state, pol, xi, 1.0, c_max)?.1))
        })
        .collect()
}
