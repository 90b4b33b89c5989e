use rand::Rng;

use qwalk_core::abelian::{
    continuity_residual_1d, continuity_residual_2d, electric_step_1d, em_step_2d, em_step_2d_parts, gauge_transform,
    gauge_transform_state, lattice_field_strength, AbelianGaugeField, FieldStrength, NodeField,
};
use qwalk_core::abelian::{landau_quasienergies, LandauOptions};
use qwalk_core::weakfield::{bloch_oscillation, exb_drift, rational_flux_comparison, BlochParams, DriftParams};
use qwalk_core::SpinorField;

use super::{par_map, positive, random_field, stream_rng, Experiment, Output};
use crate::config::{key, Key, Params};
use crate::error::Result;

fn lattice(p: &Params) -> Result<Vec<usize>> {
    let n = p.usize_min("lattice.sites", 2)?;
    Ok(match p.choice("check.dims", &["1", "2"])? {
        "1" => vec![n],
        _ => vec![n, n],
    })
}

fn random_node_field(r: &mut impl Rng, ext: &[usize], slices: usize, scale: f64) -> Result<NodeField> {
    let sites: usize = ext.iter().product();
    let vals: Vec<f64> = (0..slices * sites).map(|_| r.gen_range(-scale..scale)).collect();
    Ok(NodeField::from_fn(ext, slices, |t, c| vals[t * sites + c[0] + ext[0] * c[1]])?)
}

fn random_potential(r: &mut impl Rng, ext: &[usize], slices: usize, eps: f64, scale: f64) -> Result<AbelianGaugeField> {
    let comps = (0..=ext.len()).map(|_| random_node_field(r, ext, slices, scale)).collect::<Result<Vec<_>>>()?;
    Ok(AbelianGaugeField::new(eps, comps)?)
}

fn step(f: &SpinorField, a: &AbelianGaugeField, dtheta: f64, j: usize) -> Result<SpinorField> {
    Ok(if a.dims() == 1 { electric_step_1d(f, a, dtheta, j)? } else { em_step_2d(f, a, dtheta, j)? })
}

/// Largest difference of `F` before and after the transformation, skipping
/// the last slice whose time derivative wraps around.
fn interior_diff(f: &FieldStrength, g: &FieldStrength, dims: usize, slices: usize, sites: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..=dims {
        for nu in (mu + 1)..=dims {
            let (x, y) = (f.component(mu, nu), g.component(mu, nu));
            for j in 0..slices.saturating_sub(1) {
                for s in 0..sites {
                    worst = worst.max((x.at(j, s) - y.at(j, s)).abs());
                }
            }
        }
    }
    worst
}

const GAUGE_CHECK_KEYS: &[Key] = &[
    key("check.dims", "1", "spatial dimensions, 1 or 2"),
    key("check.pairs", "1", "number of random (potential, gauge function) pairs"),
    key("check.tolerance", "1e-12", "largest allowed residual"),
    key("lattice.sites", "24", "sites per axis"),
    key("run.steps", "20", "number of steps"),
    key("run.seed", "1", "random seed"),
];

pub const GAUGE_CHECK: Experiment = Experiment {
    name: "gauge-check",
    about: "gauge covariance of the walk and invariance of the field strength",
    keys: &[GAUGE_CHECK_KEYS],
    run: gauge_check,
};

fn gauge_check(p: &Params) -> Result<Output> {
    let ext = lattice(p)?;
    let pairs = p.usize_min("check.pairs", 1)?;
    let steps = p.usize_min("run.steps", 1)?;
    let seed = p.u64("run.seed")?;
    let tol = p.f64("check.tolerance")?;
    let sites: usize = ext.iter().product();
    let ids: Vec<usize> = (0..pairs).collect();
    let rows = par_map(&ids, |&i| {
        let mut r = stream_rng(seed, i as u64);
        let eps = r.gen_range(0.05..0.5);
        let a = random_potential(&mut r, &ext, steps, eps, 2.0)?;
        let phi = random_node_field(&mut r, &ext, steps + 1, 3.0)?;
        let dtheta = r.gen_range(-1.0..1.0);
        let psi = random_field(&mut r, &ext, 2)?;
        let (psi_t, a_t) = gauge_transform(&psi, &a, &phi, 0)?;
        let (mut plain, mut moved) = (psi, psi_t);
        let mut worst: f64 = 0.0;
        for j in 0..steps {
            plain = step(&plain, &a, dtheta, j)?;
            moved = step(&moved, &a_t, dtheta, j)?;
            worst = worst.max(gauge_transform_state(&plain, &phi, j + 1)?.max_abs_diff(&moved));
        }
        let f = lattice_field_strength(&a)?;
        let g = lattice_field_strength(&a_t)?;
        Ok(vec![i as f64, eps, worst, interior_diff(&f, &g, ext.len(), steps, sites)])
    })?;
    let mut out = Output::new(&["pair", "eps", "residual", "field_strength_residual"]);
    let (mut r1, mut r2): (f64, f64) = (0.0, 0.0);
    for row in rows {
        r1 = r1.max(row[2]);
        r2 = r2.max(row[3]);
        out.row(row);
    }
    out.check_below("max_residual", r1, tol);
    out.check_below("max_field_strength_residual", r2, tol);
    Ok(out)
}

const CURRENT_CHECK_KEYS: &[Key] = &[
    key("check.dims", "1", "spatial dimensions, 1 or 2"),
    key("check.tolerance", "1e-12", "largest allowed continuity residual"),
    key("lattice.sites", "32", "sites per axis"),
    key("lattice.eps", "0.2", "lattice spacing"),
    key("field.scale", "2", "amplitude of the random potential"),
    key("field.mass", "1", "mass"),
    key("run.steps", "20", "number of steps"),
    key("run.seed", "1", "random seed"),
];

pub const CURRENT_CHECK: Experiment = Experiment {
    name: "current-check",
    about: "lattice continuity equation in a random potential",
    keys: &[CURRENT_CHECK_KEYS],
    run: current_check,
};

fn current_check(p: &Params) -> Result<Output> {
    let ext = lattice(p)?;
    let eps = positive(p, "lattice.eps")?;
    let steps = p.usize_min("run.steps", 1)?;
    let tol = p.f64("check.tolerance")?;
    let dtheta = -eps * p.f64("field.mass")?;
    let mut r = stream_rng(p.u64("run.seed")?, 0);
    let a = random_potential(&mut r, &ext, steps, eps, p.f64("field.scale")?)?;
    let mut psi = random_field(&mut r, &ext, 2)?;
    let mut out = Output::new(&["step", "norm", "residual"]);
    let mut worst: f64 = 0.0;
    for j in 0..steps {
        let (next, res) = if ext.len() == 1 {
            let next = electric_step_1d(&psi, &a, dtheta, j)?;
            let res = continuity_residual_1d(&psi, &next, eps)?;
            (next, res)
        } else {
            let (half, next) = em_step_2d_parts(&psi, &a, dtheta, j)?;
            let res = continuity_residual_2d(&psi, &half, &next, eps)?;
            (next, res)
        };
        worst = worst.max(res);
        out.row(vec![j as f64, next.norm_sqr().sqrt(), res]);
        psi = next;
    }
    out.check_below("max_residual", worst, tol);
    Ok(out)
}

const LANDAU_KEYS: &[Key] = &[
    key("field.b", "0.02", "magnetic field"),
    key("landau.eps", "1/64", "comma-separated lattice spacings"),
    key("landau.levels", "4", "number of levels per spacing"),
    key("landau.k2", "0", "momentum along the translation-invariant axis"),
    key("landau.extent", "0", "chain length; 0 picks one from the magnetic length"),
];

pub const LANDAU: Experiment = Experiment {
    name: "landau",
    about: "Landau levels of the 2D walk against E_n = sqrt(2 B n)",
    keys: &[LANDAU_KEYS],
    run: landau,
};

fn landau(p: &Params) -> Result<Output> {
    let b = p.f64_where("field.b", "must be non-negative", |v| v >= 0.0)?;
    let eps = p.f64_list("landau.eps")?;
    let n = p.usize_min("landau.levels", 1)?;
    let extent = match p.usize("landau.extent")? {
        0 => None,
        e => Some(e),
    };
    let opts = LandauOptions { extent, k2: p.f64("landau.k2")?, ..LandauOptions::default() };
    let spectra = par_map(&eps, |&e| Ok(landau_quasienergies(b, e, n, &opts)?))?;
    let mut out = Output::new(&["eps", "n", "energy", "sqrt_law", "difference"]);
    for (e, levels) in eps.iter().zip(&spectra) {
        for (i, en) in levels.iter().enumerate() {
            let law = (2.0 * b * (i + 1) as f64).sqrt();
            out.row(vec![*e, (i + 1) as f64, *en, law, en - law]);
        }
    }
    // Fit E = c sqrt(n) at the finest spacing.
    let finest = eps.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i).unwrap_or(0);
    let levels = &spectra[finest];
    let x: Vec<f64> = (1..=levels.len()).map(|k| (k as f64).sqrt()).collect();
    let c = x.iter().zip(levels).map(|(a, y)| a * y).sum::<f64>() / x.iter().map(|a| a * a).sum::<f64>();
    let mean = levels.iter().sum::<f64>() / levels.len() as f64;
    let ss_res: f64 = x.iter().zip(levels).map(|(a, y)| (y - c * a).powi(2)).sum();
    let ss_tot: f64 = levels.iter().map(|y| (y - mean).powi(2)).sum();
    out.note("fit_eps", eps[finest]);
    out.note("fit_c", c);
    out.note("sqrt_2b", (2.0 * b).sqrt());
    out.note("r_squared", 1.0 - ss_res / ss_tot);
    Ok(out)
}

const BLOCH_KEYS: &[Key] = &[
    key("lattice.sites", "256", "number of sites"),
    key("field.e", "2*pi/50", "electric field in lattice units"),
    key("field.delta_theta", "0.5", "coin mixing angle, opens the gap"),
    key("packet.width", "6", "density standard deviation in sites"),
    key("run.steps", "200", "number of steps"),
];

pub const BLOCH: Experiment = Experiment {
    name: "bloch",
    about: "Bloch oscillation of a packet in a uniform electric field",
    keys: &[BLOCH_KEYS],
    run: bloch,
};

fn bloch(p: &Params) -> Result<Output> {
    let params = BlochParams {
        extent: p.usize_min("lattice.sites", 2)?,
        field: positive(p, "field.e")?,
        delta_theta: p.f64("field.delta_theta")?,
        width: positive(p, "packet.width")?,
        steps: p.usize("run.steps")?,
    };
    let run = bloch_oscillation(&params)?;
    let mut out = Output::new(&["step", "mean_x"]);
    for (j, m) in run.mean.iter().enumerate() {
        out.row(vec![j as f64, *m]);
    }
    out.note("expected_period", run.expected);
    out.note("period", run.period);
    out.note("relative_error", run.period.map(|t| t / run.expected - 1.0));
    Ok(out)
}

const EXB_KEYS: &[Key] = &[
    key("lattice.nx", "128", "sites along x"),
    key("lattice.ny", "512", "sites along y"),
    key("field.e", "0.01", "electric field along x"),
    key("field.b", "0.02", "magnetic field"),
    key("packet.width", "6", "density standard deviation in sites"),
    key("run.steps", "400", "number of steps"),
];

pub const EXB: Experiment = Experiment {
    name: "exb",
    about: "E x B drift of a packet in crossed uniform fields",
    keys: &[EXB_KEYS],
    run: exb,
};

fn exb(p: &Params) -> Result<Output> {
    let params = DriftParams {
        extents: [p.usize_min("lattice.nx", 2)?, p.usize_min("lattice.ny", 2)?],
        e: p.f64("field.e")?,
        b: positive(p, "field.b")?,
        width: positive(p, "packet.width")?,
        steps: p.usize_min("run.steps", 2)?,
    };
    let run = exb_drift(&params)?;
    let mut out = Output::new(&["step", "mean_x", "mean_y"]);
    for (j, m) in run.mean.iter().enumerate() {
        out.row(vec![j as f64, m[0], m[1]]);
    }
    out.note("velocity", run.velocity);
    out.note("expected", run.expected);
    out.note("relative_error", run.velocity.abs() / run.expected.abs() - 1.0);
    Ok(out)
}

const RATIONAL_KEYS: &[Key] = &[
    key("lattice.nx", "64", "sites along x"),
    key("lattice.ny", "64", "sites along y"),
    key("field.q", "0.25", "flux per plaquette in units of 2 pi"),
    key("field.delta", "1e-3", "shift of the flux for the comparison run"),
    key("run.steps", "100", "number of steps"),
];

pub const RATIONAL_FIELD: Experiment = Experiment {
    name: "rational-field",
    about: "spreading at a rational flux against a slightly shifted flux",
    keys: &[RATIONAL_KEYS],
    run: rational_field,
};

fn rational_field(p: &Params) -> Result<Output> {
    let ext = [p.usize_min("lattice.nx", 2)?, p.usize_min("lattice.ny", 2)?];
    let q = p.f64("field.q")?;
    let delta = p.f64("field.delta")?;
    let cmp = rational_flux_comparison(ext, q, delta, p.usize("run.steps")?)?;
    let mut out = Output::new(&["q", "participation"]);
    out.row(vec![q, cmp.rational]);
    out.row(vec![q + delta, cmp.shifted]);
    out.note("noise", cmp.noise);
    out.note("dichotomy", cmp.dichotomy());
    Ok(out)
}
