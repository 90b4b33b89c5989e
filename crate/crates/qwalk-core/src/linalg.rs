//! Small complex matrices: a fixed 2x2 type for coins and `nalgebra` dense
//! matrices for the U(N) gauge sector.

use core::ops::Mul;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fmath;

/// Dense complex matrix.
pub type CMat = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2x2 complex matrix, row-major. Used for coins (`Unitary2`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Default for Mat2 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Mat2 {
    /// The identity.
    pub const IDENTITY: Mat2 = Mat2([[ONE, ZERO], [ZERO, ONE]]);

    /// Builds `[[a, b], [c, d]]`.
    #[inline]
    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mat2([[a, b], [c, d]])
    }

    /// Diagonal matrix.
    #[inline]
    pub const fn diag(a: Complex64, d: Complex64) -> Self {
        Mat2([[a, ZERO], [ZERO, d]])
    }

    /// Entry `(r, c)`.
    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    /// Matrix-vector product.
    #[inline]
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// Conjugate transpose.
    #[inline]
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    /// Determinant.
    #[inline]
    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// Trace.
    #[inline]
    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    /// Multiplies every entry by `s`.
    #[inline]
    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Entrywise sum.
    #[inline]
    pub fn add(&self, o: &Mat2) -> Self {
        let (a, b) = (&self.0, &o.0);
        Mat2([[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]])
    }

    /// Largest entrywise modulus of `self - o`.
    pub fn max_abs_diff(&self, o: &Mat2) -> f64 {
        let mut d: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                d = d.max((self.0[r][c] - o.0[r][c]).norm());
            }
        }
        d
    }

    /// Largest entrywise modulus of `U^dag U - 1`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.adjoint() * *self).max_abs_diff(&Mat2::IDENTITY)
    }

    /// The two eigenvalues, from the characteristic polynomial.
    pub fn eigenvalues(&self) -> [Complex64; 2] {
        let half_tr = self.trace() * 0.5;
        let disc = (half_tr * half_tr - self.det()).sqrt();
        [half_tr + disc, half_tr - disc]
    }

    /// Eigenvalues with unit-norm eigenvectors. Intended for normal matrices,
    /// where the returned vectors are orthonormal up to rounding.
    pub fn eigen(&self) -> ([Complex64; 2], [[Complex64; 2]; 2]) {
        let lam = self.eigenvalues();
        let m = &self.0;
        let scale = m.iter().flatten().fold(0.0f64, |a, z| a.max(z.norm())).max(1e-300);
        let mut vecs = [[ZERO; 2]; 2];
        for (i, &l) in lam.iter().enumerate() {
            let v1 = [m[0][1], l - m[0][0]];
            let v2 = [l - m[1][1], m[1][0]];
            let n1 = fmath::sqrt(v1[0].norm_sqr() + v1[1].norm_sqr());
            let n2 = fmath::sqrt(v2[0].norm_sqr() + v2[1].norm_sqr());
            let v = if n1.max(n2) <= 1e-13 * scale {
                if i == 0 {
                    [ONE, ZERO]
                } else {
                    [ZERO, ONE]
                }
            } else if n1 >= n2 {
                [v1[0] / n1, v1[1] / n1]
            } else {
                [v2[0] / n2, v2[1] / n2]
            };
            vecs[i] = v;
        }
        (lam, vecs)
    }

    /// Converts to a dense matrix.
    pub fn to_dense(&self) -> CMat {
        CMat::from_fn(2, 2, |r, c| self.0[r][c])
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    #[inline]
    fn mul(self, o: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0f64, |a, z| a.max(z.norm()))
}

/// Largest entrywise modulus of `U^dag U - 1`.
pub fn unitarity_residual(u: &CMat) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMat::identity(n, n)))
}

/// Largest entrywise modulus of `H - H^dag`.
pub fn hermitian_residual(h: &CMat) -> f64 {
    if !h.is_square() {
        return f64::INFINITY;
    }
    max_abs(&(h - h.adjoint()))
}

/// Fails unless `u` is unitary within `tol`.
pub fn check_unitary(u: &CMat, tol: f64) -> Result<()> {
    let residual = unitarity_residual(u);
    if residual.is_finite() && residual <= tol {
        Ok(())
    } else {
        Err(Error::NotUnitary { residual })
    }
}

/// `exp(i H)` for Hermitian `H`, through its eigendecomposition.
pub fn expm_i_hermitian(h: &CMat) -> Result<CMat> {
    let residual = hermitian_residual(h);
    let scale = max_abs(h).max(1.0);
    if !(residual <= 1e-12 * scale) {
        return Err(Error::NotHermitian { residual });
    }
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let n = h.nrows();
    let v = &eig.eigenvectors;
    let mut phases = CMat::zeros(n, n);
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        phases[(i, i)] = Complex64::new(fmath::cos(l), fmath::sin(l));
    }
    Ok(v * phases * v.adjoint())
}

/// Eigenvalues and eigenvectors (columns) of a Hermitian matrix, ascending.
pub fn hermitian_eigen(h: &CMat) -> (alloc::vec::Vec<f64>, CMat) {
    let sym = (h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let n = h.nrows();
    let mut order: alloc::vec::Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Eigenvalues of a general square matrix, from its complex Schur form.
pub fn eigenvalues(m: &CMat) -> alloc::vec::Vec<Complex64> {
    match m.clone().schur().eigenvalues() {
        Some(v) => v.iter().copied().collect(),
        None => alloc::vec::Vec::new(),
    }
}
