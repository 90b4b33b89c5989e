use std::f64::consts::FRAC_1_SQRT_2;

use qwalk_core::curved::{curved_step_1p1, gw_wavelength_scan, CurvedCoinProfile, GwPolarization};
use qwalk_core::observe::{mean_position, position_variance};
use qwalk_core::{c64, SpinorField};

use super::{par_map, positive, Experiment, Output};
use crate::config::{key, Key, Params};
use crate::error::Result;

const SCHWARZSCHILD_KEYS: &[Key] = &[
    key("lattice.sites", "512", "number of sites"),
    key("curved.horizon", "256", "horizon site"),
    key("curved.rs", "128", "Schwarzschild radius in sites"),
    key("curved.start", "256", "site of the initial spin state"),
    key("check.window", "3", "half width of the horizon window in sites"),
    key("run.steps", "200", "number of steps"),
];

pub const SCHWARZSCHILD: Experiment = Experiment {
    name: "curved-schwarzschild",
    about: "1D walk in a static Schwarzschild-like speed profile",
    keys: &[SCHWARZSCHILD_KEYS],
    run: schwarzschild,
};

fn schwarzschild(p: &Params) -> Result<Output> {
    let n = p.usize_min("lattice.sites", 2)?;
    let h = p.usize("curved.horizon")?;
    let start = p.usize("curved.start")?;
    let window = p.usize("check.window")?;
    let steps = p.usize("run.steps")?;
    let profile = CurvedCoinProfile::schwarzschild(n, h, positive(p, "curved.rs")?)?;
    if start >= n {
        return Err(super::config_error("curved.start: must lie inside the lattice"));
    }
    let mut psi = SpinorField::zeros(&[n], 2)?;
    psi.site_mut(start).copy_from_slice(&[c64(FRAC_1_SQRT_2, 0.0), c64(0.0, FRAC_1_SQRT_2)]);
    let lo = h.saturating_sub(window);
    let hi = (h + window).min(n - 1);
    let mut out = Output::new(&["step", "horizon_weight", "mean_x", "var_x"]);
    let mut reference = start as f64;
    for j in 0..=steps {
        if j > 0 {
            psi = curved_step_1p1(&psi, &profile, j - 1)?;
        }
        let weight: f64 = psi.density()[lo..=hi].iter().sum();
        reference = mean_position(&psi, 0, reference);
        out.row(vec![j as f64, weight, reference, position_variance(&psi, 0, reference)]);
    }
    let last = out.rows.last().map(|r| r[1]).unwrap_or(0.0);
    out.note("final_horizon_weight", last);
    Ok(out)
}

const GW_KEYS: &[Key] = &[
    key("gw.polarization", "plus", "plus or cross"),
    key("gw.xi", "0.01", "wave amplitude, |xi| <= 0.05"),
    key("gw.c_max", "1.1", "largest local speed of the walk"),
    key("gw.lambda_min", "2", "smallest wavelength in sites"),
    key("gw.lambda_max", "32", "largest wavelength in sites"),
];

pub const GW_SCAN: Experiment = Experiment {
    name: "gw-scan",
    about: "one-step density response to a gravitational wave against wavelength",
    keys: &[GW_KEYS],
    run: gw_scan,
};

fn gw_scan(p: &Params) -> Result<Output> {
    let pol = match p.choice("gw.polarization", &["plus", "cross"])? {
        "plus" => GwPolarization::Plus,
        _ => GwPolarization::Cross,
    };
    let xi = p.f64("gw.xi")?;
    let c_max = positive(p, "gw.c_max")?;
    let lo = p.usize_min("gw.lambda_min", 2)?;
    let hi = p.usize_min("gw.lambda_max", lo)?;
    let lambdas: Vec<usize> = (lo..=hi).collect();
    let scan = par_map(&lambdas, |&l| Ok(gw_wavelength_scan(pol, xi, c_max, &[l])?[0]))?;
    let mut out = Output::new(&["lambda", "max_change"]);
    for (l, v) in &scan {
        out.row(vec![*l as f64, *v]);
    }
    let best = scan.iter().max_by(|a, b| a.1.total_cmp(&b.1)).map(|x| x.0);
    out.note("argmax_lambda", best);
    Ok(out)
}
