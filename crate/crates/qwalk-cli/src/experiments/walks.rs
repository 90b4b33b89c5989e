use std::f64::consts::{PI, TAU};

use qwalk_core::abelian::{electric_step_1d, em_step_2d, landau_gauge_field, mass_angle, AbelianGaugeField, NodeField};
use qwalk_core::coin::{build_coin_euler, CoinAngles};
use qwalk_core::curved::{curved_step_1p1, triad_node, CurvedCoinProfile, CurvedStep1p2, CurvedWalk2D, Triad};
use qwalk_core::observe::{mean_position, participation_ratio, position_variance};
use qwalk_core::walk::{dispersion, quasi_energies, step_uniform, walk_operator_fourier};
use qwalk_core::SpinorField;

use super::{packet, par_map, positive, Experiment, Output, PACKET_1D, PACKET_2D};
use crate::config::{key, Key, Params};
use crate::error::Result;

const EVOLVE1D_KEYS: &[Key] = &[
    key("lattice.sites", "256", "number of sites"),
    key("lattice.eps", "1", "lattice spacing"),
    key("run.steps", "100", "number of steps"),
    key("run.seed", "1", "seed for random initial states"),
    key("walk.kind", "coined", "coined (homogeneous coin), electric (gauge coupled) or curved (theta profile)"),
    key("coin.alpha", "0", "coin angle alpha"),
    key("coin.theta", "pi/4", "coin mixing angle theta"),
    key("coin.xi", "0", "coin angle xi"),
    key("coin.zeta", "0", "coin angle zeta"),
    key("field.mass", "0", "mass (electric walk)"),
    key("field.a0", "0", "scalar potential (electric walk)"),
    key("field.e", "0", "electric field, A_1 = -E t (electric walk)"),
    key("curved.profile", "uniform", "theta profile of the curved walk: uniform or schwarzschild"),
    key("curved.theta", "0.5", "theta of the uniform profile"),
    key("curved.horizon", "128", "horizon site of the schwarzschild profile"),
    key("curved.rs", "64", "Schwarzschild radius in sites"),
];

pub const EVOLVE1D: Experiment = Experiment {
    name: "evolve1d",
    about: "evolve a packet with the 1D coined, electric or curved walk",
    keys: &[EVOLVE1D_KEYS, PACKET_1D],
    run: evolve1d,
};

/// One step of a walk, given the state and the step index.
type Stepper = Box<dyn Fn(&SpinorField, usize) -> Result<SpinorField>>;

struct Tracker {
    reference: Vec<f64>,
}

impl Tracker {
    /// Appends `[norm, mean, var]` per axis, following the packet across the
    /// periodic boundary.
    fn observe(&mut self, f: &SpinorField, row: &mut Vec<f64>) {
        row.push(f.norm_sqr().sqrt());
        for axis in 0..f.dims() {
            let m = mean_position(f, axis, self.reference[axis]);
            self.reference[axis] = m;
            row.push(m);
        }
        for axis in 0..f.dims() {
            row.push(position_variance(f, axis, self.reference[axis]));
        }
        row.push(participation_ratio(f));
    }
}

fn evolve1d(p: &Params) -> Result<Output> {
    let n = p.usize_min("lattice.sites", 2)?;
    let eps = positive(p, "lattice.eps")?;
    let steps = p.usize("run.steps")?;
    let kind = p.choice("walk.kind", &["coined", "electric", "curved"])?;
    let (mut psi, c) = packet(p, &[n], p.u64("run.seed")?)?;
    let step: Stepper = if kind == "coined" {
        let angles = CoinAngles::new(p.f64("coin.alpha")?, p.f64("coin.theta")?, p.f64("coin.xi")?, p.f64("coin.zeta")?);
        let coin = build_coin_euler(&angles);
        Box::new(move |f, _| Ok(step_uniform(f, &coin)?))
    } else if kind == "curved" {
        let profile = match p.choice("curved.profile", &["uniform", "schwarzschild"])? {
            "uniform" => {
                let theta = p.f64("curved.theta")?;
                CurvedCoinProfile::from_fn(n, 1, |_, _| theta)?
            }
            _ => CurvedCoinProfile::schwarzschild(n, p.usize("curved.horizon")?, positive(p, "curved.rs")?)?,
        };
        Box::new(move |f, j| Ok(curved_step_1p1(f, &profile, j)?))
    } else {
        let (a0, e) = (p.f64("field.a0")?, p.f64("field.e")?);
        let slices = steps.max(1);
        let a = AbelianGaugeField::new(
            eps,
            vec![NodeField::from_fn(&[n], slices, |_, _| a0)?, NodeField::from_fn(&[n], slices, |j, _| -e * j as f64 * eps)?],
        )?;
        let dtheta = mass_angle(p.f64("field.mass")?, eps);
        Box::new(move |f, j| Ok(electric_step_1d(f, &a, dtheta, j)?))
    };
    let mut out = Output::new(&["step", "time", "norm", "mean_x", "var_x", "participation"]);
    let mut tracker = Tracker { reference: vec![c[0]] };
    for j in 0..=steps {
        if j > 0 {
            psi = step(&psi, j - 1)?;
        }
        let mut row = vec![j as f64, j as f64 * eps];
        tracker.observe(&psi, &mut row);
        out.row(row);
    }
    let drift = (psi.norm_sqr().sqrt() - 1.0).abs();
    out.note("norm_drift", drift);
    Ok(out)
}

const EVOLVE2D_KEYS: &[Key] = &[
    key("lattice.nx", "64", "sites along x"),
    key("lattice.ny", "64", "sites along y"),
    key("lattice.eps", "1", "lattice spacing"),
    key("run.steps", "100", "number of steps"),
    key("run.seed", "1", "seed for random initial states"),
    key("walk.kind", "em", "em (electromagnetic walk) or curved (uniform metric)"),
    key("field.mass", "0", "mass"),
    key("field.e", "0", "electric field along x (em walk)"),
    key("field.b", "0", "magnetic field, Landau gauge (em walk)"),
    key("metric.gxx", "-1", "spatial metric G_XX (curved walk)"),
    key("metric.gyy", "-1", "spatial metric G_YY (curved walk)"),
    key("metric.gxy", "0", "spatial metric G_XY (curved walk)"),
    key("curved.c_max", "1", "largest local speed (curved walk)"),
];

pub const EVOLVE2D: Experiment = Experiment {
    name: "evolve2d",
    about: "evolve a packet with the 2D electromagnetic or curved walk",
    keys: &[EVOLVE2D_KEYS, PACKET_2D],
    run: evolve2d,
};

fn evolve2d(p: &Params) -> Result<Output> {
    let ext = [p.usize_min("lattice.nx", 2)?, p.usize_min("lattice.ny", 2)?];
    let eps = positive(p, "lattice.eps")?;
    let steps = p.usize("run.steps")?;
    let mass = p.f64("field.mass")?;
    let kind = p.choice("walk.kind", &["em", "curved"])?;
    let (mut psi, c) = packet(p, &ext, p.u64("run.seed")?)?;
    let step: Stepper = if kind == "em" {
        let e = p.f64("field.e")?;
        let slices = if e != 0.0 { steps.max(1) } else { 1 };
        let a = landau_gauge_field(&ext, eps, p.f64("field.b")?, e, slices)?;
        let dtheta = mass_angle(mass, eps);
        Box::new(move |f, j| Ok(em_step_2d(f, &a, dtheta, j)?))
    } else {
        let t = triad_node([p.f64("metric.gxx")?, p.f64("metric.gyy")?, p.f64("metric.gxy")?])?;
        let triad = Triad::uniform(ext, t[0], t[1], t[2]);
        let walk = CurvedStep1p2::new(&triad, mass * eps, 0, CurvedWalk2D { c_max: positive(p, "curved.c_max")? })?;
        Box::new(move |f, _| Ok(walk.apply(f)?))
    };
    let mut out = Output::new(&["step", "time", "norm", "mean_x", "mean_y", "var_x", "var_y", "participation"]);
    let mut tracker = Tracker { reference: c.to_vec() };
    for j in 0..=steps {
        if j > 0 {
            psi = step(&psi, j - 1)?;
        }
        let mut row = vec![j as f64, j as f64 * eps];
        tracker.observe(&psi, &mut row);
        out.row(row);
    }
    out.note("norm_drift", (psi.norm_sqr().sqrt() - 1.0).abs());
    Ok(out)
}

const DISPERSION_KEYS: &[Key] = &[
    key("coin.theta", "pi/4", "coin mixing angle theta"),
    key("coin.xi", "0", "coin angle xi"),
    key("coin.zeta", "0", "coin angle zeta"),
    key("grid.points", "64", "number of wavenumbers in [-pi, pi)"),
    key("check.tolerance", "1e-12", "largest allowed deviation from the numerical eigenphases"),
];

pub const DISPERSION: Experiment = Experiment {
    name: "dispersion",
    about: "quasi-energy bands of the homogeneous walk",
    keys: &[DISPERSION_KEYS],
    run: dispersion_run,
};

fn wrapped(d: f64) -> f64 {
    (d + PI).rem_euclid(TAU) - PI
}

fn dispersion_run(p: &Params) -> Result<Output> {
    let theta = p.f64("coin.theta")?;
    let xi = p.f64("coin.xi")?;
    let zeta = p.f64("coin.zeta")?;
    let n = p.usize_min("grid.points", 1)?;
    let tol = p.f64("check.tolerance")?;
    let ks: Vec<f64> = (0..n).map(|i| -PI + TAU * i as f64 / n as f64).collect();
    let rows = par_map(&ks, |&k| {
        let (ep, em) = dispersion(theta, xi, k);
        let num = quasi_energies(&walk_operator_fourier(k, &CoinAngles::new(0.0, theta, xi, zeta)));
        let direct = wrapped(ep - num[0]).abs().max(wrapped(em - num[1]).abs());
        let swapped = wrapped(ep - num[1]).abs().max(wrapped(em - num[0]).abs());
        Ok((vec![k, ep, em], direct.min(swapped)))
    })?;
    let mut out = Output::new(&["k", "E_plus", "E_minus"]);
    let mut worst: f64 = 0.0;
    for (row, dev) in rows {
        worst = worst.max(dev);
        out.row(row);
    }
    out.check_below("max_deviation", worst, tol);
    Ok(out)
}
