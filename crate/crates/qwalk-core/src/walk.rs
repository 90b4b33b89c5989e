//! Generic one-step evolution, its Fourier symbol, the dispersion relation and
//! the mapping onto the coin-then-shift convention.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::coin::{build_coin_euler, shift_symbol, CoinAngles};
use crate::error::{shape, Result};
use crate::fmath::{self, PI};
use crate::lattice::{shift_inverse, SpinorField};
use crate::linalg::Mat2;

/// Shift along `axis`, then apply the site-local coin returned by `coin(site)`.
/// Requires a two-component field.
pub fn shift_coin(field: &SpinorField, axis: usize, coin: impl Fn(usize) -> Mat2) -> Result<SpinorField> {
    field.check_axis(axis)?;
    if field.internal() != 2 {
        return Err(shape("shift_coin needs a two-component field"));
    }
    let mut out = field.zeros_like();
    let src = field.amplitudes();
    let dst = out.amplitudes_mut();
    let ext = field.extents();
    for s in 0..field.sites() {
        let up = src[2 * crate::lattice::neighbor(ext, s, axis, 1)];
        let dn = src[2 * crate::lattice::neighbor(ext, s, axis, -1) + 1];
        let v = coin(s).apply([up, dn]);
        dst[2 * s] = v[0];
        dst[2 * s + 1] = v[1];
    }
    Ok(out)
}

/// One step `U_j S` along axis 0 with a per-site coin.
pub fn step(field: &SpinorField, coins: &[Mat2]) -> Result<SpinorField> {
    step_axis(field, 0, coins)
}

/// One step `U_j S` along `axis` with a per-site coin.
pub fn step_axis(field: &SpinorField, axis: usize, coins: &[Mat2]) -> Result<SpinorField> {
    if coins.len() != field.sites() {
        return Err(shape("coin field length does not match the number of sites"));
    }
    shift_coin(field, axis, |s| coins[s])
}

/// One step with the same coin on every site.
pub fn step_uniform(field: &SpinorField, coin: &Mat2) -> Result<SpinorField> {
    shift_coin(field, 0, |_| *coin)
}

/// The one-step operator of a homogeneous walk in quasimomentum space,
/// `U(angles) diag(e^{i k}, e^{-i k})`.
pub fn walk_operator_fourier(k: f64, angles: &CoinAngles) -> Mat2 {
    build_coin_euler(angles) * shift_symbol(k)
}

/// Quasi-energies `(E_+, E_-)` of the homogeneous walk with `alpha = 0`,
/// in radians per step, with eigenvalues `e^{-i E}`.
///
/// `E_+ = 2 atan2(sqrt(1 - c^2), 1 + c)` with `c = cos(theta) cos(k + xi)`;
/// the removable pole at `c = -1` returns `pi`.
pub fn dispersion(theta: f64, xi: f64, k: f64) -> (f64, f64) {
    let c = (fmath::cos(theta) * fmath::cos(k + xi)).clamp(-1.0, 1.0);
    let e = if c <= -1.0 { PI } else { 2.0 * fmath::atan2(fmath::sqrt((1.0 - c * c).max(0.0)), 1.0 + c) };
    (e, -e)
}

/// Quasi-energies of a 2x2 unitary, `E = -arg(lambda)`, sorted descending.
pub fn quasi_energies(u: &Mat2) -> [f64; 2] {
    let l = u.eigenvalues();
    let mut e = [-l[0].arg(), -l[1].arg()];
    if e[0] < e[1] {
        e.swap(0, 1);
    }
    e
}

/// Per-step, per-site coins of an inhomogeneous 1D evolution in the
/// shift-then-coin convention.
#[derive(Clone, Debug, PartialEq)]
pub struct Evolution {
    /// `coins[j][p]` acts at time `j` on site `p`.
    pub coins: Vec<Vec<Mat2>>,
}

/// The same dynamics written in the coin-then-shift convention, with the
/// shift replaced by its inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct StandardEvolution {
    /// `coins[r][p]` acts at time `r` before the inverse shift.
    pub coins: Vec<Vec<Mat2>>,
}

impl Evolution {
    /// Applies every step to `field`.
    pub fn run(&self, field: &SpinorField) -> Result<SpinorField> {
        let mut f = field.clone();
        for c in &self.coins {
            f = step(&f, c)?;
        }
        Ok(f)
    }
}

impl StandardEvolution {
    /// Applies every step (coin, then inverse shift) to `field`.
    pub fn run(&self, field: &SpinorField) -> Result<SpinorField> {
        let mut f = field.clone();
        for c in &self.coins {
            if c.len() != f.sites() {
                return Err(shape("coin field length does not match the number of sites"));
            }
            let mut g = f.clone();
            for (s, u) in c.iter().enumerate() {
                let site = g.site_mut(s);
                let v = u.apply([site[0], site[1]]);
                site[0] = v[0];
                site[1] = v[1];
            }
            f = shift_inverse(&g, 0)?;
        }
        Ok(f)
    }
}

/// Maps an evolution onto the coin-then-shift convention by time reversal:
/// `U^s_r = (U_{j_max - 1 - r})^dag` and `S^s = S^{-1}`. Running the result
/// after the original returns the initial state.
pub fn convert_convention(ev: &Evolution) -> StandardEvolution {
    let coins = ev.coins.iter().rev().map(|c| c.iter().map(Mat2::adjoint).collect()).collect();
    StandardEvolution { coins }
}

/// Plane wave `u e^{i k p}` on a 1D lattice.
pub fn plane_wave(extent: usize, k: f64, u: [Complex64; 2]) -> Result<SpinorField> {
    let mut f = SpinorField::zeros(&[extent], 2)?;
    for p in 0..extent {
        let e = crate::coin::cis(k * p as f64);
        let s = f.site_mut(p);
        s[0] = u[0] * e;
        s[1] = u[1] * e;
    }
    Ok(f)
}
