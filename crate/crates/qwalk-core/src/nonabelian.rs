//! 1D walks coupled to U(N) gauge fields.
//!
//! The gauge field is given by Hermitian `N x N` matrices `b_0`, `b_1` per
//! node, `b_mu = eps B_mu`. The links `U_pm = exp(i (b_0 +- b_1))` act on the
//! colour index of the upper and lower spin blocks after the shift, so
//! `U_+` at `(j, p)` carries amplitude from `(j, p + 1)` to `(j + 1, p)` and
//! `U_-` from `(j, p - 1)` to `(j + 1, p)`. For `N = 1` the walk is the
//! electric walk with `A_0 = b_0 / eps` and `A_1 = -b_1 / eps`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coin::standard_coin;
use crate::error::{invalid, shape, Error, Result};
use crate::lattice::{shift, SpinorField};
use crate::linalg::{check_unitary, expm_i_hermitian, hermitian_residual, max_abs, CMat};

/// Hermitian gauge data `b_0`, `b_1` on the nodes of a periodic 1D lattice.
/// Time is periodic with period `slices`.
#[derive(Clone, Debug)]
pub struct NonAbelianGaugeField {
    n: usize,
    extent: usize,
    slices: usize,
    /// Scale `eps_A` relating `b_mu` to the continuum `B_mu`.
    pub epsilon: f64,
    b0: Vec<CMat>,
    b1: Vec<CMat>,
}

fn check_hermitian(m: &CMat, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(shape("gauge matrix has the wrong size"));
    }
    let residual = hermitian_residual(m);
    if !(residual <= 1e-12 * max_abs(m).max(1.0)) {
        return Err(Error::NotHermitian { residual });
    }
    Ok(())
}

impl NonAbelianGaugeField {
    /// Builds a field from `f(slice, site) -> (b_0, b_1)`.
    pub fn from_fn(
        n: usize,
        extent: usize,
        slices: usize,
        epsilon: f64,
        f: impl Fn(usize, usize) -> (CMat, CMat),
    ) -> Result<Self> {
        if n == 0 || extent == 0 || slices == 0 {
            return Err(shape("gauge dimension, extent and slices must be positive"));
        }
        if !(epsilon > 0.0) {
            return Err(invalid("coupling scale must be positive"));
        }
        let mut b0 = Vec::with_capacity(extent * slices);
        let mut b1 = Vec::with_capacity(extent * slices);
        for t in 0..slices {
            for p in 0..extent {
                let (x, y) = f(t, p);
                check_hermitian(&x, n)?;
                check_hermitian(&y, n)?;
                b0.push(x);
                b1.push(y);
            }
        }
        Ok(Self { n, extent, slices, epsilon, b0, b1 })
    }

    /// Zero field.
    pub fn zeros(n: usize, extent: usize, slices: usize, epsilon: f64) -> Result<Self> {
        Self::from_fn(n, extent, slices, epsilon, |_, _| (CMat::zeros(n, n), CMat::zeros(n, n)))
    }

    /// Gauge dimension `N`.
    pub fn colors(&self) -> usize {
        self.n
    }

    /// Lattice extent.
    pub fn extent(&self) -> usize {
        self.extent
    }

    /// `(b_0, b_1)` at time `j` (periodic) and site `p`.
    pub fn at(&self, j: usize, p: usize) -> (&CMat, &CMat) {
        let i = (j % self.slices) * self.extent + p;
        (&self.b0[i], &self.b1[i])
    }
}

/// The pair of link matrices on one time slice.
#[derive(Clone, Debug)]
pub struct GroupLinkPair {
    /// `U_+` per site.
    pub plus: Vec<CMat>,
    /// `U_-` per site.
    pub minus: Vec<CMat>,
}

impl GroupLinkPair {
    /// Gauge dimension.
    pub fn colors(&self) -> usize {
        self.plus.first().map_or(0, |m| m.nrows())
    }

    /// Largest unitarity residual over all links.
    pub fn unitarity_residual(&self) -> f64 {
        self.plus.iter().chain(&self.minus).map(crate::linalg::unitarity_residual).fold(0.0, f64::max)
    }

    /// Largest entrywise difference to another pair.
    pub fn max_abs_diff(&self, o: &GroupLinkPair) -> f64 {
        self.plus
            .iter()
            .zip(&o.plus)
            .chain(self.minus.iter().zip(&o.minus))
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }
}

/// `U_pm = exp(i (b_0 +- b_1))` on time slice `j`, by Hermitian
/// eigendecomposition.
pub fn link_exponentials(gauge: &NonAbelianGaugeField, j: usize) -> Result<GroupLinkPair> {
    let mut plus = Vec::with_capacity(gauge.extent);
    let mut minus = Vec::with_capacity(gauge.extent);
    for p in 0..gauge.extent {
        let (b0, b1) = gauge.at(j, p);
        plus.push(expm_i_hermitian(&(b0 + b1))?);
        minus.push(expm_i_hermitian(&(b0 - b1))?);
    }
    Ok(GroupLinkPair { plus, minus })
}

/// One step `(C(Delta theta) x 1_N) blockdiag(U_+, U_-) (S x 1_N)`.
pub fn nonabelian_step(field: &SpinorField, links: &GroupLinkPair, delta_theta: f64) -> Result<SpinorField> {
    let n = field.colors();
    if field.dims() != 1 || links.plus.len() != field.sites() || links.minus.len() != field.sites() {
        return Err(shape("links do not match the lattice"));
    }
    if links.colors() != n {
        return Err(shape("link dimension does not match the field's colour count"));
    }
    let shifted = shift(field, 0)?;
    let c = standard_coin(delta_theta);
    let mut out = shifted.zeros_like();
    let mut up = alloc::vec![Complex64::new(0.0, 0.0); n];
    let mut dn = alloc::vec![Complex64::new(0.0, 0.0); n];
    for s in 0..field.sites() {
        let src = shifted.site(s);
        let (lp, lm) = (&links.plus[s], &links.minus[s]);
        for r in 0..n {
            let mut a = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for k in 0..n {
                a += lp[(r, k)] * src[k];
                b += lm[(r, k)] * src[n + k];
            }
            up[r] = a;
            dn[r] = b;
        }
        let dst = out.site_mut(s);
        for r in 0..n {
            let v = c.apply([up[r], dn[r]]);
            dst[r] = v[0];
            dst[n + r] = v[1];
        }
    }
    Ok(out)
}

/// A U(N) gauge transformation `G` per (time, site). Time is not periodic:
/// slice `j` must exist explicitly.
#[derive(Clone, Debug)]
pub struct GaugeGroupField {
    extent: usize,
    slices: usize,
    g: Vec<CMat>,
}

impl GaugeGroupField {
    /// Builds from `f(slice, site)`, checking unitarity within 1e-11.
    pub fn from_fn(extent: usize, slices: usize, f: impl Fn(usize, usize) -> CMat) -> Result<Self> {
        let mut g = Vec::with_capacity(extent * slices);
        let mut n = None;
        for t in 0..slices {
            for p in 0..extent {
                let m = f(t, p);
                if *n.get_or_insert(m.nrows()) != m.nrows() {
                    return Err(shape("gauge transformations have inconsistent sizes"));
                }
                check_unitary(&m, 1e-11)?;
                g.push(m);
            }
        }
        Ok(Self { extent, slices, g })
    }

    /// Number of time slices.
    pub fn slices(&self) -> usize {
        self.slices
    }

    /// `G` at slice `j`, site `p`.
    pub fn at(&self, j: usize, p: usize) -> Result<&CMat> {
        if j >= self.slices {
            return Err(Error::Stencil("gauge transformation missing the requested time slice".into()));
        }
        Ok(&self.g[j * self.extent + p])
    }
}

/// `U'_pm(j, p) = G(j + 1, p) U_pm(j, p) G(j, p +- 1)^{-1}`.
pub fn gauge_transform_links(links: &GroupLinkPair, g: &GaugeGroupField, j: usize) -> Result<GroupLinkPair> {
    let l = links.plus.len();
    if g.extent != l {
        return Err(shape("gauge transformation does not match the lattice"));
    }
    let mut plus = Vec::with_capacity(l);
    let mut minus = Vec::with_capacity(l);
    for p in 0..l {
        let next = g.at(j + 1, p)?;
        let right = g.at(j, (p + 1) % l)?.adjoint();
        let left = g.at(j, (p + l - 1) % l)?.adjoint();
        plus.push(next * &links.plus[p] * right);
        minus.push(next * &links.minus[p] * left);
    }
    Ok(GroupLinkPair { plus, minus })
}

/// `Psi' = (1_2 x G_j) Psi`.
pub fn gauge_transform_state(field: &SpinorField, g: &GaugeGroupField, j: usize) -> Result<SpinorField> {
    let n = field.colors();
    if g.extent != field.sites() || field.dims() != 1 {
        return Err(shape("gauge transformation does not match the lattice"));
    }
    let mut out = field.clone();
    for s in 0..field.sites() {
        let m = g.at(j, s)?;
        if m.nrows() != n {
            return Err(shape("gauge transformation size does not match the colour count"));
        }
        let src = field.site(s);
        let dst = out.site_mut(s);
        for block in 0..2 {
            for r in 0..n {
                dst[block * n + r] = (0..n).map(|k| m[(r, k)] * src[block * n + k]).sum();
            }
        }
    }
    Ok(out)
}

/// Covariant lattice field strength on slice `j`, from the links on slices
/// `j` and `j + 1`: the closed loop
/// `F(j, p) = U_-(j, p+1)^{-1} U_+(j+1, p)^{-1} U_-(j+1, p) U_+(j, p-1)`
/// based at `(j, p)`. Transforms as `G(j, p) F G(j, p)^{-1}`.
pub fn lattice_field_strength_covariant(now: &GroupLinkPair, next: &GroupLinkPair) -> Result<Vec<CMat>> {
    let l = now.plus.len();
    if next.plus.len() != l || now.minus.len() != l || next.minus.len() != l {
        return Err(Error::Stencil("link slices have different lengths".into()));
    }
    Ok((0..l)
        .map(|p| {
            now.minus[(p + 1) % l].adjoint()
                * next.plus[p].adjoint()
                * &next.minus[p]
                * &now.plus[(p + l - 1) % l]
        })
        .collect())
}

/// Continuum field strength `(F - 1) / (2 i eps^2)`, which tends to
/// `d_0 B_1 - d_1 B_0 - i [B_0, B_1]` at `(j + 1, p)` with
/// `B_0 = b_0 / eps`, `B_1 = -b_1 / eps`.
pub fn continuum_field_strength(f: &CMat, epsilon: f64) -> CMat {
    let n = f.nrows();
    (f - CMat::identity(n, n)) * Complex64::new(0.0, -0.5 / (epsilon * epsilon))
}

/// Right-hand side of the continuum equation the walk approximates to first
/// order, `d_t psi = sigma_3 d_x psi + i B_0 psi - i sigma_3 B_1 psi
/// - i m sigma_1 psi`, evaluated per site from the field, its spatial
/// derivative and the continuum potentials.
pub fn yang_mills_rhs(psi: &[Complex64], dpsi: &[Complex64], b0: &CMat, b1: &CMat, mass: f64) -> Vec<Complex64> {
    let n = b0.nrows();
    let i = Complex64::new(0.0, 1.0);
    let mut out = alloc::vec![Complex64::new(0.0, 0.0); 2 * n];
    for r in 0..n {
        let mut a0u = Complex64::new(0.0, 0.0);
        let mut a0d = Complex64::new(0.0, 0.0);
        let mut a1u = Complex64::new(0.0, 0.0);
        let mut a1d = Complex64::new(0.0, 0.0);
        for k in 0..n {
            a0u += b0[(r, k)] * psi[k];
            a0d += b0[(r, k)] * psi[n + k];
            a1u += b1[(r, k)] * psi[k];
            a1d += b1[(r, k)] * psi[n + k];
        }
        out[r] = dpsi[r] + i * a0u - i * a1u - i * mass * psi[n + r];
        out[n + r] = -dpsi[n + r] + i * a0d + i * a1d - i * mass * psi[r];
    }
    out
}
