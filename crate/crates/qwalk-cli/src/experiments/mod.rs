//! The experiments runnable from the command line. Each one declares its
//! configuration keys with defaults and produces an [`Output`].

mod curved;
mod dirac;
mod gauge;
mod measured;
mod nonabelian;
mod walks;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{Map, Value};

use qwalk_core::observe::{gaussian_1d, gaussian_2d};
use qwalk_core::{c64, Complex64, SpinorField};

use crate::config::{key, Key, Params};
use crate::error::{CliError, Result};

/// An experiment: name, one-line description, groups of configuration keys
/// and runner.
pub struct Experiment {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [&'static [Key]],
    pub run: fn(&Params) -> Result<Output>,
}

impl Experiment {
    /// All configuration keys.
    pub fn schema(&self) -> Vec<Key> {
        self.keys.iter().flat_map(|g| g.iter().copied()).collect()
    }
}

/// All experiments, in the order listed by `--help`.
pub const EXPERIMENTS: &[Experiment] = &[
    walks::EVOLVE1D,
    walks::EVOLVE2D,
    walks::DISPERSION,
    gauge::GAUGE_CHECK,
    gauge::CURRENT_CHECK,
    gauge::LANDAU,
    gauge::BLOCH,
    gauge::EXB,
    gauge::RATIONAL_FIELD,
    nonabelian::NONABELIAN_CHECK,
    curved::SCHWARZSCHILD,
    curved::GW_SCAN,
    measured::AHARONOV,
    dirac::CONVERGENCE,
];

/// Looks up an experiment by name.
pub fn find(name: &str) -> Option<&'static Experiment> {
    EXPERIMENTS.iter().find(|e| e.name == name)
}

/// Rows, summary values and failed property checks of one run.
#[derive(Clone, Debug, Default)]
pub struct Output {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub summary: Map<String, Value>,
    pub failures: Vec<String>,
}

impl Output {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), ..Default::default() }
    }

    pub fn row(&mut self, r: Vec<f64>) {
        self.rows.push(r);
    }

    pub fn note(&mut self, k: &str, v: impl Into<Value>) {
        self.summary.insert(k.to_string(), v.into());
    }

    /// Records `value` under `k` and a failure if it exceeds `tol`.
    pub fn check_below(&mut self, k: &str, value: f64, tol: f64) {
        self.note(k, value);
        if !(value <= tol) {
            self.failures.push(format!("{k} = {value:e} exceeds {tol:e}"));
        }
    }

    pub fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

/// Maps `f` over `items` on the rayon pool, keeping the input order.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> Result<R> + Sync + Send) -> Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

/// Independent generator for task `stream` of a seeded run.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

pub(crate) fn random_complex(r: &mut impl Rng) -> Complex64 {
    c64(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

pub(crate) fn random_field(r: &mut impl Rng, extents: &[usize], internal: usize) -> Result<SpinorField> {
    let n = extents.iter().product::<usize>() * internal;
    let mut f = SpinorField::from_amplitudes(extents, internal, (0..n).map(|_| random_complex(r)).collect())?;
    f.normalize()?;
    Ok(f)
}

pub(crate) const PACKET_1D: &[Key] = &[
    key("packet.kind", "gaussian", "gaussian, delta or random"),
    key("packet.center", "0.5", "centre as a fraction of the lattice"),
    key("packet.width", "8", "density standard deviation in sites"),
    key("packet.k0", "0", "carrier wavenumber"),
    key("packet.spin", "up", "up, down or balanced"),
];

pub(crate) const PACKET_2D: &[Key] = &[
    key("packet.kind", "gaussian", "gaussian, delta or random"),
    key("packet.center_x", "0.5", "centre along x as a fraction of the lattice"),
    key("packet.center_y", "0.5", "centre along y as a fraction of the lattice"),
    key("packet.width", "6", "density standard deviation in sites"),
    key("packet.k0_x", "0", "carrier wavenumber along x"),
    key("packet.k0_y", "0", "carrier wavenumber along y"),
    key("packet.spin", "up", "up, down or balanced"),
];

fn spin(p: &Params) -> Result<[Complex64; 2]> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    Ok(match p.choice("packet.spin", &["up", "down", "balanced"])? {
        "up" => [c64(1.0, 0.0), c64(0.0, 0.0)],
        "down" => [c64(0.0, 0.0), c64(1.0, 0.0)],
        _ => [c64(h, 0.0), c64(0.0, h)],
    })
}

fn fraction(p: &Params, k: &str) -> Result<f64> {
    p.f64_where(k, "must lie in [0, 1)", |v| (0.0..1.0).contains(&v))
}

/// Initial state on `extents` from the `packet.*` keys; returns the state
/// and its nominal centre.
pub(crate) fn packet(p: &Params, extents: &[usize], seed: u64) -> Result<(SpinorField, [f64; 2])> {
    let kind = p.choice("packet.kind", &["gaussian", "delta", "random"])?;
    let two = extents.len() == 2;
    let centre = if two {
        [fraction(p, "packet.center_x")?, fraction(p, "packet.center_y")?]
    } else {
        [fraction(p, "packet.center")?, 0.0]
    };
    let c = [(centre[0] * extents[0] as f64).floor(), if two { (centre[1] * extents[1] as f64).floor() } else { 0.0 }];
    let s = spin(p)?;
    let field = match kind {
        "random" => random_field(&mut stream_rng(seed, 0), extents, 2)?,
        "delta" => {
            let mut f = SpinorField::zeros(extents, 2)?;
            let idx = f.site_index(&[c[0] as usize, c[1] as usize][..extents.len()]);
            f.site_mut(idx).copy_from_slice(&s);
            f
        }
        _ => {
            let w = p.f64_where("packet.width", "must be positive", |v| v > 0.0)?;
            if two {
                let k0 = [p.f64("packet.k0_x")?, p.f64("packet.k0_y")?];
                gaussian_2d([extents[0], extents[1]], c, w, k0, s)?
            } else {
                gaussian_1d(extents[0], c[0], w, p.f64("packet.k0")?, s)?
            }
        }
    };
    Ok((field, c))
}

/// Positive real number check shared by several experiments.
pub(crate) fn positive(p: &Params, k: &str) -> Result<f64> {
    p.f64_where(k, "must be positive", |v| v > 0.0)
}

pub(crate) fn config_error(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
