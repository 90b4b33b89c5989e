//! Packet experiments in weak uniform fields: Bloch oscillations, the E x B
//! drift and the rational-versus-irrational magnetic flux comparison.
//!
//! All three run in lattice units, `eps_A = 1`, so one step is one unit of
//! time and a field `E` shifts the quasimomentum by `E` per step.

use alloc::vec;
use alloc::vec::Vec;

use crate::abelian::{electric_step_1d, em_step_2d, landau_gauge_field, two_d_angles, AbelianGaugeField, NodeField};
use crate::c64;
use crate::coin::{rotation_coin, standard_coin};
use crate::error::{invalid, Result};
use crate::fmath::{self, TAU};
use crate::lattice::SpinorField;
use crate::observe::{fit_slope, gaussian_1d, gaussian_2d, mean_position, oscillation_period, participation_ratio, project_band};
use crate::coin::shift_symbol;

/// Parameters of a Bloch-oscillation run.
#[derive(Clone, Debug)]
pub struct BlochParams {
    /// Lattice extent.
    pub extent: usize,
    /// Field strength; the expected period is `2 pi / field` steps.
    pub field: f64,
    /// Mass mixing angle `Delta theta`.
    pub delta_theta: f64,
    /// Packet width in sites.
    pub width: f64,
    /// Number of steps.
    pub steps: usize,
}

impl Default for BlochParams {
    fn default() -> Self {
        Self { extent: 256, field: TAU / 50.0, delta_theta: 0.5, width: 6.0, steps: 200 }
    }
}

/// Result of a Bloch run.
#[derive(Clone, Debug)]
pub struct BlochRun {
    /// Mean position after each step, index 0 is the initial state.
    pub mean: Vec<f64>,
    /// Measured period in steps, if at least two oscillations were seen.
    pub period: Option<f64>,
    /// `2 pi / field`.
    pub expected: f64,
}

/// Evolves a positive-energy Gaussian packet in the uniform field
/// `A_1 = -E j` (temporal gauge) and records its mean position.
pub fn bloch_oscillation(p: &BlochParams) -> Result<BlochRun> {
    if !(p.field > 0.0) || p.steps < 2 {
        return Err(invalid("Bloch run needs a positive field and at least two steps"));
    }
    let ext = [p.extent];
    let a0 = NodeField::zeros(&ext, p.steps)?;
    let a1 = NodeField::from_fn(&ext, p.steps, |j, _| -p.field * j as f64)?;
    let a = AbelianGaugeField::new(1.0, vec![a0, a1])?;
    let centre = (p.extent / 2) as f64;
    let packet = gaussian_1d(p.extent, centre, p.width, 0.0, [c64(1.0, 0.0), c64(0.0, 0.0)])?;
    let coin = standard_coin(p.delta_theta);
    let mut psi = project_band(&packet, |k| coin * shift_symbol(k[0]), true)?;
    let mut mean = vec![mean_position(&psi, 0, centre)];
    for j in 0..p.steps {
        psi = electric_step_1d(&psi, &a, p.delta_theta, j)?;
        let last = mean[mean.len() - 1];
        mean.push(mean_position(&psi, 0, last));
    }
    let period = oscillation_period(&mean);
    Ok(BlochRun { mean, period, expected: TAU / p.field })
}

/// Parameters of an E x B drift run.
#[derive(Clone, Debug)]
pub struct DriftParams {
    /// Extents `[L1, L2]`; the electric field points along axis 0.
    pub extents: [usize; 2],
    /// Electric field.
    pub e: f64,
    /// Magnetic field.
    pub b: f64,
    /// Packet width in sites.
    pub width: f64,
    /// Number of steps.
    pub steps: usize,
}

impl Default for DriftParams {
    fn default() -> Self {
        Self { extents: [128, 512], e: 0.01, b: 0.02, width: 6.0, steps: 400 }
    }
}

/// Result of a drift run.
#[derive(Clone, Debug)]
pub struct DriftRun {
    /// Mean position `(p1, p2)` after each step.
    pub mean: Vec<[f64; 2]>,
    /// Fitted drift velocity along axis 1 (sites per step).
    pub velocity: f64,
    /// Expected drift speed `E / B`.
    pub expected: f64,
}

/// Free 2D walk symbol with `Delta theta = 0`.
fn free_symbol_2d(k: &[f64]) -> crate::Mat2 {
    let (fp, fm) = two_d_angles(0.0);
    rotation_coin(fm, 0.0) * shift_symbol(k[1]) * rotation_coin(fp, 0.0) * shift_symbol(k[0])
}

/// Evolves a positive-energy packet in crossed uniform fields: Landau gauge
/// `A_2 = -B (p1 - L1/2)` and temporal gauge `A_1 = -E j`.
pub fn exb_drift(p: &DriftParams) -> Result<DriftRun> {
    if !(p.b > 0.0) || !(p.e.abs() < p.b) {
        return Err(invalid("drift run needs B > 0 and |E| < B"));
    }
    let a = landau_gauge_field(&p.extents, 1.0, p.b, p.e, p.steps)?;
    let c = [(p.extents[0] / 2) as f64, (p.extents[1] / 2) as f64];
    let packet = gaussian_2d(p.extents, c, p.width, [0.0, 0.0], [c64(1.0, 0.0), c64(0.0, 0.0)])?;
    let mut psi = project_band(&packet, free_symbol_2d, true)?;
    let mut mean = vec![[mean_position(&psi, 0, c[0]), mean_position(&psi, 1, c[1])]];
    for j in 0..p.steps {
        psi = em_step_2d(&psi, &a, 0.0, j)?;
        let last = mean[mean.len() - 1];
        mean.push([mean_position(&psi, 0, last[0]), mean_position(&psi, 1, last[1])]);
    }
    let y: Vec<f64> = mean.iter().map(|m| m[1]).collect();
    Ok(DriftRun { velocity: fit_slope(&y), expected: p.e / p.b, mean })
}

/// Participation ratio of a state started on one site after `steps` steps of
/// the 2D walk with `Delta xi^(2) = b (p1 - L1/2)`.
pub fn flux_participation(extents: [usize; 2], b: f64, steps: usize) -> Result<f64> {
    let half = (extents[0] / 2) as f64;
    let a0 = NodeField::zeros(&extents, 1)?;
    let a2 = NodeField::from_fn(&extents, 1, |_, c| -b * (c[0] as f64 - half))?;
    let a = AbelianGaugeField::new(1.0, vec![a0.clone(), a0, a2])?;
    let mut psi = SpinorField::zeros(&extents, 2)?;
    let s = psi.site_index(&[extents[0] / 2, extents[1] / 2]);
    let amp = fmath::sqrt(0.5);
    psi.site_mut(s).copy_from_slice(&[c64(amp, 0.0), c64(0.0, amp)]);
    for j in 0..steps {
        psi = em_step_2d(&psi, &a, 0.0, j)?;
    }
    Ok(participation_ratio(&psi))
}

/// Outcome of the rational-flux comparison.
#[derive(Clone, Debug)]
pub struct FluxComparison {
    /// Participation ratio at the rational flux.
    pub rational: f64,
    /// Participation ratio at the shifted flux.
    pub shifted: f64,
    /// Change caused by a relative perturbation of `1e-9`, the noise floor.
    pub noise: f64,
}

impl FluxComparison {
    /// Whether the rational and shifted runs differ by more than five times
    /// the noise floor.
    pub fn dichotomy(&self) -> bool {
        (self.rational - self.shifted).abs() > 5.0 * self.noise
    }
}

/// Compares spreading at flux `2 pi q` and `2 pi (q + delta)`.
pub fn rational_flux_comparison(extents: [usize; 2], q: f64, delta: f64, steps: usize) -> Result<FluxComparison> {
    let b = TAU * q;
    let rational = flux_participation(extents, b, steps)?;
    let shifted = flux_participation(extents, TAU * (q + delta), steps)?;
    let nearby = flux_participation(extents, b * (1.0 + 1e-9), steps)?;
    let noise = (rational - nearby).abs().max(1e-12 * rational);
    Ok(FluxComparison { rational, shifted, noise })
}
