//! Electric (1D) and electromagnetic (2D) walks, lattice gauge
//! transformations, discrete derivatives, the lattice field strength and the
//! conserved lattice current.
//!
//! Gauge components are covariant. The coin phases are
//! `Delta alpha = eps * A_0` and `Delta xi^(a) = -eps * A_a`, which makes the
//! walk invariant under `Psi -> e^{-i phi} Psi`, `A -> A - d phi`.

use alloc::vec;
use alloc::vec::Vec;

use crate::chain::{chain_modes, ChainMode};
use crate::coin::{cis, phase_shift, rotation_coin, standard_coin};
use crate::error::{invalid, shape, Error, Result};
use crate::fmath::{self, FRAC_PI_4};
use crate::lattice::{neighbor, SpinorField};
use crate::linalg::Mat2;
use crate::coin::shift_symbol;
use crate::fft::bin_wavenumber;
use crate::walk::{quasi_energies, shift_coin};

/// Sign `s` in `J^1 = s (|psi_down|^2 - |psi_up|^2)`. Fixed by the
/// calibration test `current_sign_calibration`.
pub const CURRENT_SIGN: f64 = 1.0;

/// A real scalar on the nodes `(time slice, site)` of a periodic lattice.
///
/// The time axis is periodic with period `slices`; reading slice `j` uses
/// `j mod slices`, so a static field needs a single slice.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeField {
    extents: Vec<usize>,
    slices: usize,
    values: Vec<f64>,
}

impl NodeField {
    /// All-zero field.
    pub fn zeros(extents: &[usize], slices: usize) -> Result<Self> {
        if extents.is_empty() || extents.len() > 2 || extents.contains(&0) || slices == 0 {
            return Err(shape("node field needs 1 or 2 positive extents and at least one slice"));
        }
        let sites: usize = extents.iter().product();
        Ok(Self { extents: extents.to_vec(), slices, values: vec![0.0; sites * slices] })
    }

    /// Field with `f(slice, coords)` at every node; `coords[1]` is 0 in 1D.
    pub fn from_fn(extents: &[usize], slices: usize, f: impl Fn(usize, [usize; 2]) -> f64) -> Result<Self> {
        let mut out = Self::zeros(extents, slices)?;
        let sites = out.sites();
        for t in 0..slices {
            for s in 0..sites {
                let c = out.coords(s);
                out.values[t * sites + s] = f(t, c);
            }
        }
        Ok(out)
    }

    /// Spatial extents.
    pub fn extents(&self) -> &[usize] {
        &self.extents
    }

    /// Number of stored time slices.
    pub fn slices(&self) -> usize {
        self.slices
    }

    /// Number of sites per slice.
    pub fn sites(&self) -> usize {
        self.extents.iter().product()
    }

    /// Raw values, slice-major.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn coords(&self, s: usize) -> [usize; 2] {
        if self.extents.len() == 1 {
            [s, 0]
        } else {
            [s % self.extents[0], s / self.extents[0]]
        }
    }

    /// Value at time `j` (periodic) and site `s`.
    #[inline]
    pub fn at(&self, j: usize, s: usize) -> f64 {
        self.values[(j % self.slices) * self.sites() + s]
    }

    /// Sets the value at slice `j` and site `s`.
    pub fn set(&mut self, j: usize, s: usize, v: f64) {
        let n = self.sites();
        self.values[(j % self.slices) * n + s] = v;
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, o: &NodeField) -> f64 {
        self.values.iter().zip(&o.values).fold(0.0f64, |a, (x, y)| a.max(fmath::abs(x - y)))
    }

    /// Largest modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, x| a.max(fmath::abs(*x)))
    }

    fn map2(&self, o: &NodeField, f: impl Fn(f64, f64) -> f64) -> NodeField {
        let values = self.values.iter().zip(&o.values).map(|(a, b)| f(*a, *b)).collect();
        NodeField { extents: self.extents.clone(), slices: self.slices, values }
    }

    fn same_shape(&self, o: &NodeField) -> bool {
        self.extents == o.extents && self.slices == o.slices
    }
}

/// A gauge phase `phi` on the nodes.
pub type GaugePhase = NodeField;

/// Gauge potential `A_mu`, `mu = 0..=dims`, with its coupling scale.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianGaugeField {
    /// Coupling scale `eps_A`.
    pub epsilon: f64,
    /// `components[mu]`.
    pub components: Vec<NodeField>,
}

impl AbelianGaugeField {
    /// Zero potential.
    pub fn zeros(extents: &[usize], slices: usize, epsilon: f64) -> Result<Self> {
        let z = NodeField::zeros(extents, slices)?;
        Self::new(epsilon, vec![z; extents.len() + 1])
    }

    /// Wraps components, checking shapes.
    pub fn new(epsilon: f64, components: Vec<NodeField>) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(invalid("coupling scale must be positive"));
        }
        let first = components.first().ok_or_else(|| shape("no components"))?;
        if components.len() != first.extents.len() + 1 || components.iter().any(|c| !c.same_shape(first)) {
            return Err(shape("gauge field needs dims + 1 components of equal shape"));
        }
        if components.iter().any(|c| c.values.iter().any(|v| !v.is_finite())) {
            return Err(invalid("gauge field contains non-finite values"));
        }
        Ok(Self { epsilon, components })
    }

    /// Spatial dimension.
    pub fn dims(&self) -> usize {
        self.components.len() - 1
    }

    /// Spatial extents.
    pub fn extents(&self) -> &[usize] {
        self.components[0].extents()
    }

    /// `Delta alpha = eps * A_0` at `(j, s)`.
    #[inline]
    pub fn delta_alpha(&self, j: usize, s: usize) -> f64 {
        self.epsilon * self.components[0].at(j, s)
    }

    /// `Delta xi^(a) = -eps * A_a` at `(j, s)`, `a` in `1..=dims`.
    #[inline]
    pub fn delta_xi(&self, a: usize, j: usize, s: usize) -> f64 {
        -self.epsilon * self.components[a].at(j, s)
    }

    /// Largest `eps * |A|` over all nodes; "weak" means below `2 pi / 20`.
    pub fn max_coupling(&self) -> f64 {
        self.epsilon * self.components.iter().map(NodeField::max_abs).fold(0.0, f64::max)
    }

    fn check_lattice(&self, field: &SpinorField) -> Result<()> {
        if field.extents() != self.extents() {
            return Err(shape("gauge field and spinor field have different extents"));
        }
        if field.internal() != 2 {
            return Err(shape("Abelian walks need a two-component field"));
        }
        Ok(())
    }
}

/// Mixing angle of the mass coupling, `Delta theta = -eps_m * m`.
pub fn mass_angle(mass: f64, epsilon_m: f64) -> f64 {
    -epsilon_m * mass
}

/// Coin of the 1D electric walk, `e^{i Delta alpha} C(Delta theta) F(Delta xi)`.
pub fn electric_coin(delta_alpha: f64, delta_theta: f64, delta_xi: f64) -> Mat2 {
    (standard_coin(delta_theta) * phase_shift(delta_xi)).scale(cis(delta_alpha))
}

/// One step of the 1D electric walk at time `j`.
pub fn electric_step_1d(field: &SpinorField, a: &AbelianGaugeField, delta_theta: f64, j: usize) -> Result<SpinorField> {
    if a.dims() != 1 {
        return Err(shape("electric_step_1d needs a 1D gauge field"));
    }
    a.check_lattice(field)?;
    shift_coin(field, 0, |s| electric_coin(a.delta_alpha(j, s), delta_theta, a.delta_xi(1, j, s)))
}

/// Mixing angles `f_pm = +-pi/4 + Delta theta / 2` of the 2D walk.
pub fn two_d_angles(delta_theta: f64) -> (f64, f64) {
    (FRAC_PI_4 + 0.5 * delta_theta, -FRAC_PI_4 + 0.5 * delta_theta)
}

/// One step of the 2D walk at time `j`, returning the state after the first
/// (axis 0) half step and after the full step.
pub fn em_step_2d_parts(
    field: &SpinorField,
    a: &AbelianGaugeField,
    delta_theta: f64,
    j: usize,
) -> Result<(SpinorField, SpinorField)> {
    if a.dims() != 2 {
        return Err(shape("em_step_2d needs a 2D gauge field"));
    }
    a.check_lattice(field)?;
    let (fp, fm) = two_d_angles(delta_theta);
    let half = shift_coin(field, 0, |s| rotation_coin(fp, a.delta_xi(1, j, s)))?;
    let full = shift_coin(&half, 1, |s| rotation_coin(fm, a.delta_xi(2, j, s)).scale(cis(a.delta_alpha(j, s))))?;
    Ok((half, full))
}

/// One step of the 2D walk,
/// `e^{i Delta alpha} [U(f_-, Delta xi^(2)) S_2] [U(f_+, Delta xi^(1)) S_1]`.
pub fn em_step_2d(field: &SpinorField, a: &AbelianGaugeField, delta_theta: f64, j: usize) -> Result<SpinorField> {
    Ok(em_step_2d_parts(field, a, delta_theta, j)?.1)
}

/// Centered half-sum `Sigma_a Q = (Q(p + e_a) + Q(p - e_a)) / 2` on one slice.
fn sigma(q: &NodeField, axis: usize) -> NodeField {
    along(q, axis, |plus, minus| 0.5 * (plus + minus))
}

/// Centered half-difference `Delta_a Q = (Q(p + e_a) - Q(p - e_a)) / 2`.
fn delta(q: &NodeField, axis: usize) -> NodeField {
    along(q, axis, |plus, minus| 0.5 * (plus - minus))
}

fn along(q: &NodeField, axis: usize, f: impl Fn(f64, f64) -> f64) -> NodeField {
    let sites = q.sites();
    let mut out = q.clone();
    for t in 0..q.slices {
        for s in 0..sites {
            let plus = q.values[t * sites + neighbor(&q.extents, s, axis, 1)];
            let minus = q.values[t * sites + neighbor(&q.extents, s, axis, -1)];
            out.values[t * sites + s] = f(plus, minus);
        }
    }
    out
}

fn next_slice(q: &NodeField) -> NodeField {
    let sites = q.sites();
    let mut out = q.clone();
    for t in 0..q.slices {
        let tn = (t + 1) % q.slices;
        out.values[t * sites..(t + 1) * sites].copy_from_slice(&q.values[tn * sites..(tn + 1) * sites]);
    }
    out
}

/// Discrete derivative `d_mu Q`.
///
/// 1D: `d_0 = (L - Sigma_1) / eps`, `d_1 = Delta_1 / eps`, with `L` the
/// next-slice operator. 2D: `d_0 = (L - Sigma_2 Sigma_1) / eps`,
/// `d_1 = Delta_1 / eps`, `d_2 = Delta_2 Sigma_1 / eps`. All are built from
/// commuting shifts, so they commute with each other.
///
/// The last slice reads slice 0 as its successor (periodic time).
pub fn lattice_derivative(q: &NodeField, mu: usize, epsilon: f64) -> Result<NodeField> {
    let dims = q.extents.len();
    if mu > dims {
        return Err(Error::Axis { axis: mu, dims: dims + 1 });
    }
    let inv = 1.0 / epsilon;
    let out = match (dims, mu) {
        (_, 0) => {
            let mut avg = sigma(q, 0);
            if dims == 2 {
                avg = sigma(&avg, 1);
            }
            next_slice(q).map2(&avg, |n, a| (n - a) * inv)
        }
        (_, 1) => scale(&delta(q, 0), inv),
        _ => scale(&delta(&sigma(q, 0), 1), inv),
    };
    Ok(out)
}

fn scale(q: &NodeField, s: f64) -> NodeField {
    let mut out = q.clone();
    for v in &mut out.values {
        *v *= s;
    }
    out
}

/// Gauge-transforms a potential, `A'_mu = A_mu - d_mu phi`. The phase must
/// have at least one more slice than the potential so that `d_0 phi` on the
/// last slice of `A` does not wrap.
pub fn gauge_transform_potential(a: &AbelianGaugeField, phi: &GaugePhase) -> Result<AbelianGaugeField> {
    if phi.extents() != a.extents() {
        return Err(shape("phase and potential have different extents"));
    }
    if phi.slices() < a.components[0].slices() + 1 && phi.slices() != 1 {
        return Err(Error::Stencil("gauge phase needs one slice more than the potential".into()));
    }
    let mut comps = Vec::with_capacity(a.components.len());
    for (mu, c) in a.components.iter().enumerate() {
        let d = lattice_derivative(phi, mu, a.epsilon)?;
        let mut out = c.clone();
        let sites = out.sites();
        for t in 0..out.slices {
            for s in 0..sites {
                out.values[t * sites + s] -= d.at(t, s);
            }
        }
        comps.push(out);
    }
    AbelianGaugeField::new(a.epsilon, comps)
}

/// `Psi' = e^{-i phi_j} Psi` for a state at time `j`.
pub fn gauge_transform_state(field: &SpinorField, phi: &GaugePhase, j: usize) -> Result<SpinorField> {
    if phi.extents() != field.extents() {
        return Err(shape("phase and spinor field have different extents"));
    }
    let mut out = field.clone();
    out.multiply_phase(|s| -phi.at(j, s));
    Ok(out)
}

/// The full gauge transformation of a state at time `j` and its potential.
pub fn gauge_transform(
    field: &SpinorField,
    a: &AbelianGaugeField,
    phi: &GaugePhase,
    j: usize,
) -> Result<(SpinorField, AbelianGaugeField)> {
    Ok((gauge_transform_state(field, phi, j)?, gauge_transform_potential(a, phi)?))
}

/// 1D form of [`gauge_transform`].
pub fn gauge_transform_1d(
    field: &SpinorField,
    a: &AbelianGaugeField,
    phi: &GaugePhase,
    j: usize,
) -> Result<(SpinorField, AbelianGaugeField)> {
    if a.dims() != 1 {
        return Err(shape("gauge_transform_1d needs a 1D potential"));
    }
    gauge_transform(field, a, phi, j)
}

/// Lattice field strength `F_{mu nu} = d_mu A_nu - d_nu A_mu`.
#[derive(Clone, Debug)]
pub struct FieldStrength {
    dims: usize,
    /// Upper-triangle components in order (0,1), (0,2), (1,2).
    parts: Vec<NodeField>,
}

impl FieldStrength {
    /// Component `F_{mu nu}`; antisymmetric, zero on the diagonal.
    pub fn component(&self, mu: usize, nu: usize) -> NodeField {
        if mu == nu {
            let z = &self.parts[0];
            return NodeField { extents: z.extents.clone(), slices: z.slices, values: vec![0.0; z.values.len()] };
        }
        let (a, b, sign) = if mu < nu { (mu, nu, 1.0) } else { (nu, mu, -1.0) };
        let idx = match (self.dims, a, b) {
            (1, 0, 1) => 0,
            (2, 0, 1) => 0,
            (2, 0, 2) => 1,
            (2, 1, 2) => 2,
            _ => panic!("field strength index out of range"),
        };
        scale(&self.parts[idx], sign)
    }

    /// Largest modulus over all components.
    pub fn max_abs(&self) -> f64 {
        self.parts.iter().map(NodeField::max_abs).fold(0.0, f64::max)
    }

    /// Largest difference to another field strength.
    pub fn max_abs_diff(&self, o: &FieldStrength) -> f64 {
        self.parts.iter().zip(&o.parts).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }
}

/// Computes the lattice field strength. The last slice uses slice 0 as its
/// successor; callers who need exact values there should supply one extra
/// slice.
pub fn lattice_field_strength(a: &AbelianGaugeField) -> Result<FieldStrength> {
    let dims = a.dims();
    let eps = a.epsilon;
    let mut parts = Vec::new();
    for mu in 0..=dims {
        for nu in (mu + 1)..=dims {
            let x = lattice_derivative(&a.components[nu], mu, eps)?;
            let y = lattice_derivative(&a.components[mu], nu, eps)?;
            parts.push(x.map2(&y, |p, q| p - q));
        }
    }
    Ok(FieldStrength { dims, parts })
}

/// Lattice charge current on one time slice.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeCurrent {
    /// `J^0`, the site density.
    pub j0: Vec<f64>,
    /// Spatial components `J^1` (and `J^2`).
    pub spatial: Vec<Vec<f64>>,
}

/// `J^0 = |up|^2 + |down|^2` and `J^1 = s (|down|^2 - |up|^2)` of a 1D state.
pub fn lattice_current(field: &SpinorField) -> LatticeCurrent {
    let (up, dn) = field.spin_densities();
    let j0 = up.iter().zip(&dn).map(|(u, d)| u + d).collect();
    let j1 = up.iter().zip(&dn).map(|(u, d)| CURRENT_SIGN * (d - u)).collect();
    LatticeCurrent { j0, spatial: vec![j1] }
}

/// Largest `|d_0 J^0 + d_1 J^1|` between a 1D state at time `j` and its
/// successor.
pub fn continuity_residual_1d(now: &SpinorField, next: &SpinorField, epsilon: f64) -> Result<f64> {
    now.check_same_shape(next)?;
    if now.dims() != 1 {
        return Err(shape("continuity_residual_1d needs 1D fields"));
    }
    let c = lattice_current(now);
    let n0 = next.density();
    let ext = now.extents();
    let mut worst: f64 = 0.0;
    for s in 0..now.sites() {
        let (pp, pm) = (neighbor(ext, s, 0, 1), neighbor(ext, s, 0, -1));
        let d0 = n0[s] - 0.5 * (c.j0[pp] + c.j0[pm]);
        let d1 = 0.5 * (c.spatial[0][pp] - c.spatial[0][pm]);
        worst = worst.max(fmath::abs(d0 + d1) / epsilon);
    }
    Ok(worst)
}

/// 2D lattice current of the step `now -> half -> next`:
/// `J^1 = s Sigma_2 (|down|^2 - |up|^2)` of `now` and
/// `J^2 = s (|down|^2 - |up|^2)` of the half-step state.
pub fn lattice_current_2d(now: &SpinorField, half: &SpinorField) -> LatticeCurrent {
    let (u0, d0) = now.spin_densities();
    let (uh, dh) = half.spin_densities();
    let ext = now.extents();
    let m: Vec<f64> = u0.iter().zip(&d0).map(|(u, d)| CURRENT_SIGN * (d - u)).collect();
    let j1 = (0..now.sites()).map(|s| 0.5 * (m[neighbor(ext, s, 1, 1)] + m[neighbor(ext, s, 1, -1)])).collect();
    let j2 = uh.iter().zip(&dh).map(|(u, d)| CURRENT_SIGN * (d - u)).collect();
    let j0 = u0.iter().zip(&d0).map(|(u, d)| u + d).collect();
    LatticeCurrent { j0, spatial: vec![j1, j2] }
}

/// Largest `|d_0 J^0 + d_1 J^1 + d_2 J^2|` over a 2D step, with
/// `d_0 = (L - Sigma_2 Sigma_1)/eps` and plain centered `d_1`, `d_2`.
pub fn continuity_residual_2d(now: &SpinorField, half: &SpinorField, next: &SpinorField, epsilon: f64) -> Result<f64> {
    now.check_same_shape(next)?;
    now.check_same_shape(half)?;
    if now.dims() != 2 {
        return Err(shape("continuity_residual_2d needs 2D fields"));
    }
    let c = lattice_current_2d(now, half);
    let n1 = next.density();
    let ext = now.extents();
    let mut worst: f64 = 0.0;
    for s in 0..now.sites() {
        let avg = |f: &[f64]| {
            let a = |q: usize| 0.5 * (f[neighbor(ext, q, 0, 1)] + f[neighbor(ext, q, 0, -1)]);
            0.5 * (a(neighbor(ext, s, 1, 1)) + a(neighbor(ext, s, 1, -1)))
        };
        let d0 = n1[s] - avg(&c.j0);
        let d1 = 0.5 * (c.spatial[0][neighbor(ext, s, 0, 1)] - c.spatial[0][neighbor(ext, s, 0, -1)]);
        let d2 = 0.5 * (c.spatial[1][neighbor(ext, s, 1, 1)] - c.spatial[1][neighbor(ext, s, 1, -1)]);
        worst = worst.max(fmath::abs(d0 + d1 + d2) / epsilon);
    }
    Ok(worst)
}

/// Landau-gauge potential for a uniform magnetic field `b`: `A_2 = -b x`
/// with `x = (p_1 - L_1/2) eps`, so `Delta xi^(2) = b eps^2 (p_1 - L_1/2)`.
/// Optionally adds a uniform electric field along axis 1 in temporal gauge,
/// `A_1 = -e t` with `t = j eps`.
pub fn landau_gauge_field(extents: &[usize], epsilon: f64, b: f64, e: f64, slices: usize) -> Result<AbelianGaugeField> {
    if extents.len() != 2 {
        return Err(shape("Landau gauge needs a 2D lattice"));
    }
    let half = (extents[0] / 2) as f64;
    let a0 = NodeField::zeros(extents, slices)?;
    let a1 = NodeField::from_fn(extents, slices, |t, _| -e * t as f64 * epsilon)?;
    let a2 = NodeField::from_fn(extents, slices, |_, c| -b * (c[0] as f64 - half) * epsilon)?;
    AbelianGaugeField::new(epsilon, vec![a0, a1, a2])
}

/// Options for [`landau_quasienergies`].
#[derive(Clone, Debug)]
pub struct LandauOptions {
    /// Lattice extent along axis 1; chosen from the magnetic length if `None`.
    pub extent: Option<usize>,
    /// Momentum along the translation-invariant axis.
    pub k2: f64,
    /// Central fraction of the lattice a bulk eigenstate must live in.
    pub central_fraction: f64,
    /// Minimum weight inside the central region.
    pub min_weight: f64,
}

impl Default for LandauOptions {
    fn default() -> Self {
        Self { extent: None, k2: 0.0, central_fraction: 0.5, min_weight: 0.99 }
    }
}

/// Extent used by [`landau_quasienergies`] when none is given: the next power
/// of two above sixteen magnetic lengths, at least 64 sites.
pub fn landau_default_extent(b: f64, epsilon: f64) -> usize {
    let lb_sites = 1.0 / (epsilon * fmath::sqrt(b));
    let want = (16.0 * lb_sites) as usize;
    want.next_power_of_two().max(64)
}

/// Positive quasi-energies of the free walk on a periodic chain of `extent`
/// sites at momentum `k2`, from the Fourier symbol.
fn free_levels(extent: usize, epsilon: f64, n_levels: usize, k2: f64, fp: f64, fm: f64) -> Result<Vec<f64>> {
    let mut levels: Vec<f64> = (0..extent)
        .flat_map(|m| {
            let k1 = bin_wavenumber(m, extent);
            let w = rotation_coin(fm, 0.0) * shift_symbol(k2) * rotation_coin(fp, 0.0) * shift_symbol(k1);
            quasi_energies(&w)
        })
        .filter(|e| *e >= 0.0)
        .map(|e| e / epsilon)
        .collect();
    levels.sort_by(f64::total_cmp);
    if levels.len() < n_levels {
        return Err(invalid("requested levels exceed the resolvable spectrum"));
    }
    levels.truncate(n_levels);
    Ok(levels)
}

/// Smallest positive quasi-energies of the 2D walk in a uniform field `b`
/// (Landau gauge, massless), divided by `eps`.
///
/// The walk is translation invariant along axis 2, so each momentum `k2`
/// gives a 1D chain; its spectrum near zero energy is found with
/// [`chain_modes`]. States living near the gauge discontinuity at the
/// lattice wrap are discarded by a localisation filter. The zero mode is
/// excluded by requiring `E > 0.5 eps sqrt(2 b)`. For `b = 0` the
/// non-negative part of the free periodic spectrum is returned instead.
pub fn landau_quasienergies(b: f64, epsilon: f64, n_levels: usize, opts: &LandauOptions) -> Result<Vec<f64>> {
    if !(epsilon > 0.0) || !(b >= 0.0) {
        return Err(invalid("landau_quasienergies needs eps > 0 and b >= 0"));
    }
    if n_levels == 0 {
        return Ok(Vec::new());
    }
    let extent = match (opts.extent, b > 0.0) {
        (Some(e), _) => e,
        (None, true) => landau_default_extent(b, epsilon),
        (None, false) => 256,
    };
    let (fp, fm) = two_d_angles(0.0);
    if b == 0.0 {
        return free_levels(extent, epsilon, n_levels, opts.k2, fp, fm);
    }
    let half = (extent / 2) as f64;
    let coins: Vec<Mat2> = (0..extent)
        .map(|p| {
            let dxi2 = b * epsilon * epsilon * (p as f64 - half);
            rotation_coin(fm, dxi2 + opts.k2) * rotation_coin(fp, 0.0)
        })
        .collect();
    let window = fmath::sqrt(2.0 * (n_levels as f64 + 1.5) * b) * epsilon;
    let threshold = 0.5 * fmath::sqrt(2.0 * b) * epsilon;
    if window >= 1.0 {
        return Err(invalid("requested levels exceed the resolvable spectrum (weak-field regime violated)"));
    }
    let modes = chain_modes(&coins, window, opts.central_fraction)?;
    let mut levels: Vec<f64> = modes
        .iter()
        .filter(|m: &&ChainMode| m.weight >= opts.min_weight && m.energy > threshold)
        .map(|m| m.energy / epsilon)
        .collect();
    levels.sort_by(f64::total_cmp);
    if levels.len() < n_levels {
        return Err(invalid("requested levels exceed the resolvable spectrum"));
    }
    levels.truncate(n_levels);
    Ok(levels)
}
