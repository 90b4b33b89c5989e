//! Continuum reference solutions of the 1D Dirac equation and convergence
//! order estimation for walks against them.
//!
//! Representation: in the continuum limit of the electric walk
//! (`Delta theta = -eps m`, `Delta alpha = eps A_0`,
//! `Delta xi = -eps A_1`) a mode `e^{i K x}` obeys `d_t psi = i h psi` with
//! `h = A_0 + (K - A_1) sigma_3 - m sigma_1`. The Hamiltonian is `H = -h`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::abelian::{electric_step_1d, AbelianGaugeField, NodeField};
use crate::error::{invalid, shape, Result};
use crate::fft::{bin_wavenumber, fft, ifft};
use crate::fmath::{self, pairwise_sum};
use crate::lattice::SpinorField;
use crate::linalg::Mat2;

/// A plane-wave solution `u e^{i (K x - E t)}` with constant potentials.
#[derive(Clone, Debug)]
pub struct PlaneWaveSolution {
    /// Mass.
    pub mass: f64,
    /// Momentum `K`.
    pub momentum: f64,
    /// Potentials `(A_0, A_1)`.
    pub potential: (f64, f64),
    /// Branch: `+1` for `E = -A_0 + sqrt((K - A_1)^2 + m^2)`, `-1` for the other.
    pub branch: i8,
}

impl PlaneWaveSolution {
    fn hamiltonian(&self) -> Mat2 {
        symbol(self.momentum, self.mass, self.potential.0, self.potential.1).scale(Complex64::new(-1.0, 0.0))
    }

    /// Energy `E`.
    pub fn energy(&self) -> f64 {
        let p = self.momentum - self.potential.1;
        let w = fmath::sqrt(p * p + self.mass * self.mass);
        -self.potential.0 + if self.branch >= 0 { w } else { -w }
    }

    /// Unit polarisation spinor `u`.
    pub fn spinor(&self) -> [Complex64; 2] {
        let h = self.hamiltonian();
        let (lam, vecs) = h.eigen();
        let e = self.energy();
        if (lam[0].re - e).abs() <= (lam[1].re - e).abs() {
            vecs[0]
        } else {
            vecs[1]
        }
    }

    /// Value at `(x, t)`.
    pub fn value(&self, x: f64, t: f64) -> [Complex64; 2] {
        let u = self.spinor();
        let ph = crate::coin::cis(self.momentum * x - self.energy() * t);
        [u[0] * ph, u[1] * ph]
    }

    /// `|i d_t psi - H psi|` after substituting the plane wave, which reduces
    /// to `|(E - H) u|`.
    pub fn residual(&self) -> f64 {
        let u = self.spinor();
        let hu = self.hamiltonian().apply(u);
        let e = self.energy();
        fmath::sqrt((u[0] * e - hu[0]).norm_sqr() + (u[1] * e - hu[1]).norm_sqr())
    }
}

/// Mode symbol `h(K) = A_0 + (K - A_1) sigma_3 - m sigma_1`.
pub fn symbol(k: f64, mass: f64, a0: f64, a1: f64) -> Mat2 {
    let c = |x: f64| Complex64::new(x, 0.0);
    Mat2::new(c(a0 + k - a1), c(-mass), c(-mass), c(a0 - k + a1))
}

/// `exp(i M)` for a Hermitian 2x2 `M`, in closed form.
pub fn exp_i_hermitian2(m: &Mat2) -> Mat2 {
    let a = 0.5 * (m.at(0, 0).re + m.at(1, 1).re);
    let z = 0.5 * (m.at(0, 0).re - m.at(1, 1).re);
    let off = m.at(0, 1);
    let r = fmath::sqrt(z * z + off.norm_sqr());
    let (s, c) = libm::sincos(r);
    let sinc = if r > 1e-300 { s / r } else { 1.0 };
    let i = Complex64::new(0.0, 1.0);
    let g = crate::coin::cis(a);
    Mat2::new(
        g * (c + i * sinc * z),
        g * i * sinc * off,
        g * i * sinc * off.conj(),
        g * (c - i * sinc * z),
    )
}

/// Uniform-in-space potential, optionally with a uniform electric field in
/// temporal gauge: `A_0 = a0`, `A_1(t) = a1 - e t`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct UniformPotential {
    /// Scalar potential.
    pub a0: f64,
    /// Vector potential at `t = 0`.
    pub a1: f64,
    /// Electric field.
    pub e: f64,
}

/// Spectral Dirac evolution of data sampled on a periodic grid of spacing
/// `dx` from time 0 to `t`. Constant potentials are integrated exactly per
/// mode; a nonzero field uses fourth-order Magnus steps, at least 64 per
/// unit time.
pub fn dirac_evolve_spectral(
    initial: &[[Complex64; 2]],
    dx: f64,
    mass: f64,
    pot: UniformPotential,
    t: f64,
) -> Result<Vec<[Complex64; 2]>> {
    let steps = if pot.e == 0.0 { 1 } else { libm::ceil(64.0 * t.abs()).max(1.0) as usize };
    dirac_evolve_steps(initial, dx, mass, pot, t, steps)
}

/// [`dirac_evolve_spectral`] with an explicit number of time steps; with a
/// field, the error falls as the fourth power of the step.
pub fn dirac_evolve_steps(
    initial: &[[Complex64; 2]],
    dx: f64,
    mass: f64,
    pot: UniformPotential,
    t: f64,
    steps: usize,
) -> Result<Vec<[Complex64; 2]>> {
    if steps == 0 {
        return Err(invalid("at least one time step is needed"));
    }
    if initial.is_empty() || !(dx > 0.0) || !t.is_finite() {
        return Err(invalid("spectral evolution needs data, dx > 0 and finite time"));
    }
    let n = initial.len();
    let mut up: Vec<Complex64> = initial.iter().map(|v| v[0]).collect();
    let mut dn: Vec<Complex64> = initial.iter().map(|v| v[1]).collect();
    fft(&mut up);
    fft(&mut dn);
    let h = t / steps as f64;
    let g = 0.5 - fmath::sqrt(3.0) / 6.0;
    for b in 0..n {
        let k = bin_wavenumber(b, n) / dx;
        let mut u = Mat2::IDENTITY;
        for s in 0..steps {
            let t0 = s as f64 * h;
            let step = if pot.e == 0.0 {
                exp_i_hermitian2(&symbol(k, mass, pot.a0, pot.a1).scale(Complex64::new(h, 0.0)))
            } else {
                let h1 = symbol(k, mass, pot.a0, pot.a1 - pot.e * (t0 + g * h));
                let h2 = symbol(k, mass, pot.a0, pot.a1 - pot.e * (t0 + (1.0 - g) * h));
                // Omega = i M with M = h/2 (h1 + h2) - i sqrt(3)/12 h^2 [h1, h2].
                let comm = (h1 * h2).add(&(h2 * h1).scale(Complex64::new(-1.0, 0.0)));
                let m = h1
                    .add(&h2)
                    .scale(Complex64::new(0.5 * h, 0.0))
                    .add(&comm.scale(Complex64::new(0.0, -fmath::sqrt(3.0) / 12.0 * h * h)));
                exp_i_hermitian2(&hermitian_part(&m))
            };
            u = step * u;
        }
        let v = u.apply([up[b], dn[b]]);
        up[b] = v[0];
        dn[b] = v[1];
    }
    ifft(&mut up);
    ifft(&mut dn);
    Ok(up.into_iter().zip(dn).map(|(a, b)| [a, b]).collect())
}

fn hermitian_part(m: &Mat2) -> Mat2 {
    m.add(&m.adjoint()).scale(Complex64::new(0.5, 0.0))
}

/// A 1D walk-versus-oracle problem on the periodic domain
/// `[-length/2, length/2)`.
#[derive(Clone, Copy, Debug)]
pub struct DiracProblem {
    /// Domain length in continuum units.
    pub length: f64,
    /// Mass.
    pub mass: f64,
    /// Potential.
    pub potential: UniformPotential,
    /// Final time.
    pub time: f64,
    /// Initial data.
    pub initial: fn(f64) -> [Complex64; 2],
}

/// The default smooth initial datum: a Gaussian of unit width with carrier
/// wavenumber 2 in both components, the lower one scaled by `0.5 e^{0.3 i}`.
pub fn default_initial(x: f64) -> [Complex64; 2] {
    let g = crate::coin::cis(2.0 * x) * fmath::exp(-0.5 * x * x);
    [g, g * crate::coin::cis(0.3) * 0.5]
}

impl DiracProblem {
    /// Default sweep problem: length 16, `T = 1`.
    pub fn new(mass: f64, potential: UniformPotential) -> Self {
        Self { length: 16.0, mass, potential, time: 1.0, initial: default_initial }
    }

    /// Number of sites at lattice step `eps`; `length / eps` must be an integer.
    pub fn sites(&self, eps: f64) -> Result<usize> {
        let n = self.length / eps;
        if (n - fmath::round(n)).abs() > 1e-9 || n < 4.0 {
            return Err(invalid("domain length must be an integer multiple of eps"));
        }
        Ok(fmath::round(n) as usize)
    }

    /// Initial data sampled at `x_p = -length/2 + p eps`.
    pub fn sample(&self, eps: f64) -> Result<Vec<[Complex64; 2]>> {
        let n = self.sites(eps)?;
        Ok((0..n).map(|p| (self.initial)(-0.5 * self.length + p as f64 * eps)).collect())
    }

    /// Runs the electric walk to the final time. The time must be an integer
    /// number of steps.
    pub fn walk(&self, eps: f64) -> Result<Vec<[Complex64; 2]>> {
        let n = self.sites(eps)?;
        let steps_f = self.time / eps;
        if (steps_f - fmath::round(steps_f)).abs() > 1e-9 {
            return Err(invalid("final time must be an integer number of steps"));
        }
        let steps = fmath::round(steps_f) as usize;
        let ext = [n];
        let slices = steps.max(1);
        let pot = self.potential;
        let a0 = NodeField::from_fn(&ext, slices, |_, _| pot.a0)?;
        let a1 = NodeField::from_fn(&ext, slices, |j, _| pot.a1 - pot.e * j as f64 * eps)?;
        let a = AbelianGaugeField::new(eps, vec![a0, a1])?;
        let amps: Vec<Complex64> = self.sample(eps)?.into_iter().flatten().collect();
        let mut psi = SpinorField::from_amplitudes(&ext, 2, amps)?;
        let dtheta = -eps * self.mass;
        for j in 0..steps {
            psi = electric_step_1d(&psi, &a, dtheta, j)?;
        }
        Ok(psi.amplitudes().chunks(2).map(|c| [c[0], c[1]]).collect())
    }

    /// Oracle solution at the final time on the lattice of step `eps`.
    pub fn oracle(&self, eps: f64) -> Result<Vec<[Complex64; 2]>> {
        dirac_evolve_spectral(&self.sample(eps)?, eps, self.mass, self.potential, self.time)
    }

    /// Relative L2 error of the walk against the oracle at step `eps`.
    pub fn error(&self, eps: f64) -> Result<f64> {
        relative_l2(&self.walk(eps)?, &self.oracle(eps)?)
    }
}

/// `|a - b| / |b|` over all components.
pub fn relative_l2(a: &[[Complex64; 2]], b: &[[Complex64; 2]]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(shape("length mismatch"));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x[0] - y[0]).norm_sqr() + (x[1] - y[1]).norm_sqr()).collect();
    let r: Vec<f64> = b.iter().map(|y| y[0].norm_sqr() + y[1].norm_sqr()).collect();
    Ok(fmath::sqrt(pairwise_sum(&d) / pairwise_sum(&r)))
}

/// Errors over an epsilon sweep and the fitted power law `err ~ eps^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport {
    /// Lattice steps, strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Errors, one per epsilon.
    pub errors: Vec<f64>,
    /// Fitted slope of `log err` against `log eps`.
    pub order: f64,
    /// Coefficient of determination of the log-log fit.
    pub r_squared: f64,
}

/// Fits a convergence order to `error(eps)` evaluated on `epsilons`.
pub fn convergence_order(epsilons: &[f64], mut error: impl FnMut(f64) -> Result<f64>) -> Result<ConvergenceReport> {
    if epsilons.len() < 3 {
        return Err(invalid("convergence fit needs at least three epsilons"));
    }
    if epsilons.windows(2).any(|w| !(w[1] < w[0])) || epsilons.iter().any(|e| !(*e > 0.0)) {
        return Err(invalid("epsilons must be positive and strictly decreasing"));
    }
    let mut errors = Vec::with_capacity(epsilons.len());
    for &e in epsilons {
        let v = error(e)?;
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid("errors must be positive and finite for a fit"));
        }
        errors.push(v);
    }
    let xs: Vec<f64> = epsilons.iter().map(|e| fmath::ln(*e)).collect();
    let ys: Vec<f64> = errors.iter().map(|e| fmath::ln(*e)).collect();
    let (order, r_squared) = linear_fit(&xs, &ys);
    Ok(ConvergenceReport { epsilons: epsilons.to_vec(), errors, order, r_squared })
}

/// Least-squares slope and R^2 of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, r2)
}
