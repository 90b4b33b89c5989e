//! Measured and re-initialised walks: at each step the spin is prepared in
//! `(c+, c-)`, shifted (up to the right, down to the left), rotated by the
//! coin `e^{i omega} [[alpha, beta], [-beta*, alpha*]]` and measured along
//! `+-`. Only the position ket survives.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::coin::cis;
use crate::error::{invalid, shape, Error, Result};
use crate::fmath::pairwise_sum;

/// Spin measurement outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// `+`.
    Plus,
    /// `-`.
    Minus,
}

/// Spin preparation and coin of one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AharonovConfig {
    /// Prepared spin amplitude along `+`.
    pub c_plus: Complex64,
    /// Prepared spin amplitude along `-`.
    pub c_minus: Complex64,
    /// Coin entry `alpha`.
    pub alpha: Complex64,
    /// Coin entry `beta`.
    pub beta: Complex64,
    /// Global coin phase `omega`.
    pub omega: f64,
}

impl AharonovConfig {
    /// Builds a configuration, checking both normalisations within 1e-12.
    pub fn new(c_plus: Complex64, c_minus: Complex64, alpha: Complex64, beta: Complex64, omega: f64) -> Result<Self> {
        let spin = c_plus.norm_sqr() + c_minus.norm_sqr();
        let coin = alpha.norm_sqr() + beta.norm_sqr();
        if (spin - 1.0).abs() > 1e-12 || (coin - 1.0).abs() > 1e-12 || !omega.is_finite() {
            return Err(invalid("spin preparation and coin must be normalised"));
        }
        Ok(Self { c_plus, c_minus, alpha, beta, omega })
    }

    /// Coinless configuration (`alpha = 1`, `beta = 0`).
    pub fn coinless(c_plus: Complex64, c_minus: Complex64) -> Result<Self> {
        Self::new(c_plus, c_minus, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), 0.0)
    }

    /// Probability `|c+|^2` of a right step in the averaged walk.
    pub fn pi_plus(&self) -> f64 {
        self.c_plus.norm_sqr()
    }

    /// Amplitudes multiplying `psi_{p-1}` and `psi_{p+1}` for an outcome.
    fn weights(&self, o: Outcome) -> (Complex64, Complex64) {
        let g = cis(self.omega);
        match o {
            Outcome::Plus => (g * self.alpha * self.c_plus, g * self.beta * self.c_minus),
            Outcome::Minus => (-g * self.beta.conj() * self.c_plus, g * self.alpha.conj() * self.c_minus),
        }
    }
}

fn apply_unnormalised(ket: &[Complex64], cfg: &AharonovConfig, o: Outcome) -> Vec<Complex64> {
    let n = ket.len();
    let (right, left) = cfg.weights(o);
    (0..n).map(|p| right * ket[(p + n - 1) % n] + left * ket[(p + 1) % n]).collect()
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    let d: Vec<f64> = v.iter().map(|z| z.norm_sqr()).collect();
    pairwise_sum(&d)
}

/// Probability of `outcome` for a normalised ket.
pub fn outcome_probability(ket: &[Complex64], cfg: &AharonovConfig, outcome: Outcome) -> f64 {
    norm_sqr(&apply_unnormalised(ket, cfg, outcome))
}

/// One step conditioned on `outcome`: returns the normalised ket and the
/// outcome probability.
pub fn aharonov_step(ket: &[Complex64], cfg: &AharonovConfig, outcome: Outcome) -> Result<(Vec<Complex64>, f64)> {
    if ket.is_empty() {
        return Err(shape("empty ket"));
    }
    let mut v = apply_unnormalised(ket, cfg, outcome);
    let p = norm_sqr(&v);
    if !(p >= 1e-15) {
        return Err(Error::ImpossibleOutcome(p));
    }
    let s = 1.0 / libm::sqrt(p);
    for z in v.iter_mut() {
        *z *= s;
    }
    Ok((v, p))
}

/// Largest number of steps accepted by the exhaustive enumeration.
pub const MAX_ENUMERATION_STEPS: usize = 16;

/// Average of `|psi_N|^2` over all `2^N` outcome sequences, weighted by
/// their probabilities, with a possibly different configuration per step.
/// Branches with probability below 1e-15 are dropped.
pub fn enumerate_averaged_schedule(initial: &[Complex64], schedule: &[AharonovConfig]) -> Result<Vec<f64>> {
    if schedule.len() > MAX_ENUMERATION_STEPS {
        return Err(invalid("enumeration is limited to 16 steps"));
    }
    if initial.is_empty() {
        return Err(shape("empty ket"));
    }
    let mut acc = vec![0.0; initial.len()];
    descend(initial, 1.0, schedule, &mut acc);
    Ok(acc)
}

fn descend(ket: &[Complex64], weight: f64, rest: &[AharonovConfig], acc: &mut [f64]) {
    match rest.split_first() {
        None => {
            for (a, z) in acc.iter_mut().zip(ket) {
                *a += weight * z.norm_sqr();
            }
        }
        Some((cfg, tail)) => {
            for o in [Outcome::Plus, Outcome::Minus] {
                if let Ok((next, p)) = aharonov_step(ket, cfg, o) {
                    descend(&next, weight * p, tail, acc);
                }
            }
        }
    }
}

/// [`enumerate_averaged_schedule`] with the same configuration at every step.
pub fn enumerate_averaged_distribution(initial: &[Complex64], cfg: &AharonovConfig, n: usize) -> Result<Vec<f64>> {
    if n > MAX_ENUMERATION_STEPS {
        return Err(invalid("enumeration is limited to 16 steps"));
    }
    enumerate_averaged_schedule(initial, &vec![*cfg; n])
}

/// Classical random walk `P_{j+1,p} = pi+_j P_{j,p-1} + (1 - pi+_j) P_{j,p+1}`
/// on a periodic lattice.
pub fn classical_rw_distribution(pi_plus: &[f64], initial: &[f64]) -> Result<Vec<f64>> {
    if pi_plus.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("step probabilities must lie in [0, 1]"));
    }
    let n = initial.len();
    let mut cur = initial.to_vec();
    for &pp in pi_plus {
        cur = (0..n).map(|p| pp * cur[(p + n - 1) % n] + (1.0 - pp) * cur[(p + 1) % n]).collect();
    }
    Ok(cur)
}

/// One sampled realisation of the scheme.
#[derive(Clone, Debug)]
pub struct SampledRun {
    /// Outcomes in order.
    pub outcomes: Vec<Outcome>,
    /// Final normalised ket.
    pub ket: Vec<Complex64>,
    /// Probability of the sampled sequence.
    pub probability: f64,
}

/// Draws outcomes with their Born probabilities for `n` steps.
pub fn sample_run<R: Rng + ?Sized>(initial: &[Complex64], cfg: &AharonovConfig, n: usize, rng: &mut R) -> Result<SampledRun> {
    let mut ket = initial.to_vec();
    let mut outcomes = Vec::with_capacity(n);
    let mut probability = 1.0;
    for _ in 0..n {
        let pp = outcome_probability(&ket, cfg, Outcome::Plus);
        let o = if rng.gen::<f64>() < pp { Outcome::Plus } else { Outcome::Minus };
        let (next, p) = aharonov_step(&ket, cfg, o)?;
        ket = next;
        probability *= p;
        outcomes.push(o);
    }
    Ok(SampledRun { outcomes, ket, probability })
}

/// Monte Carlo estimate of the averaged distribution from `runs` samples.
pub fn sampled_averaged_distribution<R: Rng + ?Sized>(
    initial: &[Complex64],
    cfg: &AharonovConfig,
    n: usize,
    runs: usize,
    rng: &mut R,
) -> Result<Vec<f64>> {
    if runs == 0 {
        return Err(invalid("at least one run is needed"));
    }
    let mut acc = vec![0.0; initial.len()];
    for _ in 0..runs {
        let r = sample_run(initial, cfg, n, rng)?;
        for (a, z) in acc.iter_mut().zip(&r.ket) {
            *a += z.norm_sqr();
        }
    }
    for a in acc.iter_mut() {
        *a /= runs as f64;
    }
    Ok(acc)
}

/// Mean and variance of a distribution over sites `0..n`, with positions
/// measured from `origin`.
pub fn moments(dist: &[f64], origin: usize) -> (f64, f64) {
    let total: f64 = dist.iter().sum();
    let mean = dist.iter().enumerate().map(|(p, w)| w * (p as f64 - origin as f64)).sum::<f64>() / total;
    let var = dist
        .iter()
        .enumerate()
        .map(|(p, w)| {
            let d = p as f64 - origin as f64 - mean;
            w * d * d
        })
        .sum::<f64>()
        / total;
    (mean, var)
}
