//! Coin operators: Euler-parametrised U(2) coins and the standard building
//! blocks derived from them, plus the U(N) = U(1) x SU(N) split.

use num_complex::Complex64;

use crate::error::Result;
use crate::fmath::{self, FRAC_PI_2, PI, TAU};
use crate::linalg::{check_unitary, CMat, Mat2};

/// The four Euler parameters of a U(2) coin.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct CoinAngles {
    /// Global phase.
    pub alpha: f64,
    /// Mixing angle.
    pub theta: f64,
    /// Diagonal phase.
    pub xi: f64,
    /// Off-diagonal phase.
    pub zeta: f64,
}

impl CoinAngles {
    /// Builds the angle set.
    pub const fn new(alpha: f64, theta: f64, xi: f64, zeta: f64) -> Self {
        Self { alpha, theta, xi, zeta }
    }

    /// Hadamard coin angles.
    pub const HADAMARD: CoinAngles = CoinAngles::new(FRAC_PI_2, core::f64::consts::FRAC_PI_4, 3.0 * FRAC_PI_2, 3.0 * FRAC_PI_2);
}

/// `e^{i a}` as a complex number.
#[inline]
pub fn cis(a: f64) -> Complex64 {
    let (s, c) = libm::sincos(a);
    Complex64::new(c, s)
}

/// `e^{i alpha} [[e^{i xi} cos, e^{i zeta} sin], [-e^{-i zeta} sin, e^{-i xi} cos]]`.
pub fn build_coin_euler(a: &CoinAngles) -> Mat2 {
    let (s, c) = libm::sincos(a.theta);
    let g = cis(a.alpha);
    Mat2::new(g * cis(a.xi) * c, g * cis(a.zeta) * s, -g * cis(-a.zeta) * s, g * cis(-a.xi) * c)
}

/// Reduces angles to the one-to-one set `[0, pi) x [0, pi/2] x [0, 2 pi)^2`
/// without changing the matrix.
///
/// The set is not one-to-one where a matrix entry vanishes. At `theta = 0`
/// the off-diagonal phase is meaningless and is set to 0, so the diagonal
/// phase carries everything; at `theta = pi/2` the diagonal phase is set to 0
/// instead.
pub fn canonicalize(a: &CoinAngles) -> CoinAngles {
    let u = build_coin_euler(a);
    extract_euler(&u)
}

/// Entries below this modulus are treated as exact zeros when reading
/// phases, so `theta = pi/2` in floating point still hits the degenerate
/// branch.
const DEGENERATE: f64 = 1e-14;

/// Reads canonical Euler angles off a U(2) matrix.
pub fn extract_euler(u: &Mat2) -> CoinAngles {
    let det = u.det();
    let alpha = fmath::wrap(0.5 * det.arg(), 0.0, PI);
    let m = u.scale(cis(-alpha));
    let (a, b) = (m.at(0, 0), m.at(0, 1));
    let theta = fmath::atan2(b.norm(), a.norm());
    let xi = if a.norm() <= DEGENERATE { 0.0 } else { fmath::wrap(a.arg(), 0.0, TAU) };
    let zeta = if b.norm() <= DEGENERATE { 0.0 } else { fmath::wrap(b.arg(), 0.0, TAU) };
    CoinAngles { alpha, theta, xi, zeta }
}

/// The standard coin `C(theta) = [[cos, i sin], [i sin, cos]] = exp(i theta sigma_1)`.
pub fn standard_coin(theta: f64) -> Mat2 {
    let (s, c) = libm::sincos(theta);
    let is = Complex64::new(0.0, s);
    Mat2::new(Complex64::new(c, 0.0), is, is, Complex64::new(c, 0.0))
}

/// The spin-dependent phase shift `F(w) = diag(e^{i w}, e^{-i w})`.
pub fn phase_shift(w: f64) -> Mat2 {
    Mat2::diag(cis(w), cis(-w))
}

/// The Fourier symbol of the shift, `diag(e^{i k}, e^{-i k})`.
pub fn shift_symbol(k: f64) -> Mat2 {
    phase_shift(k)
}

/// `U(theta, xi) = C(theta) F(xi)`, the coin family of the 2D walk.
pub fn rotation_coin(theta: f64, xi: f64) -> Mat2 {
    standard_coin(theta) * phase_shift(xi)
}

/// The curved-spacetime coin `B(theta) = [[-cos, i sin], [-i sin, cos]]`.
/// It squares to the identity for every `theta`.
pub fn curved_coin(theta: f64) -> Mat2 {
    let (s, c) = libm::sincos(theta);
    Mat2::new(Complex64::new(-c, 0.0), Complex64::new(0.0, s), Complex64::new(0.0, -s), Complex64::new(c, 0.0))
}

/// Result of splitting `U = delta * U_bar` with `det U_bar = 1`.
#[derive(Clone, Debug)]
pub struct UnitaryFactors {
    /// Phase `omega` of the determinant, in `[0, 2 pi)`.
    pub omega: f64,
    /// `delta = exp(i omega / N)`, the root with index 0.
    pub delta: Complex64,
    /// The SU(N) part.
    pub special: CMat,
}

/// Splits a unitary into its U(1) and SU(N) parts using the root
/// `delta = exp(i omega / N)` of `det U = e^{i omega}`.
pub fn factor_unitary(u: &CMat) -> Result<UnitaryFactors> {
    check_unitary(u, 1e-10)?;
    let n = u.nrows();
    let det = u.determinant();
    let omega = fmath::wrap(det.arg(), 0.0, TAU);
    let delta = cis(omega / n as f64);
    let special = u * delta.conj();
    Ok(UnitaryFactors { omega, delta, special })
}
