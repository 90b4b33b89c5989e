use qwalk_core::coin::{build_coin_euler, CoinAngles};
use qwalk_core::measured::{
    classical_rw_distribution, enumerate_averaged_distribution, moments, sample_run, AharonovConfig, MAX_ENUMERATION_STEPS,
};
use qwalk_core::{c64, Complex64};

use super::{par_map, random_complex, stream_rng, Experiment, Output};
use crate::config::{key, Key, Params};
use crate::error::Result;

const KEYS: &[Key] = &[
    key("lattice.sites", "64", "number of sites"),
    key("run.steps", "8", "number of measured steps"),
    key("run.seed", "1", "random seed"),
    key("aharonov.pi_plus", "0.5", "preparation probability |c+|^2"),
    key("aharonov.phase", "0", "relative phase of c-"),
    key("aharonov.coinless", "false", "use the identity coin"),
    key("aharonov.mode", "enumerate", "enumerate all outcome sequences or sample them"),
    key("aharonov.runs", "1000", "number of sampled runs"),
    key("aharonov.initial", "delta", "delta (centre site) or random"),
    key("coin.theta", "pi/4", "coin mixing angle theta"),
    key("coin.xi", "0", "coin angle xi"),
    key("coin.zeta", "0", "coin angle zeta"),
    key("coin.omega", "0", "global coin phase"),
    key("check.tolerance", "1e-10", "largest allowed deviation when enumerating"),
];

pub const AHARONOV: Experiment = Experiment {
    name: "aharonov",
    about: "measured walk averaged over outcomes against the classical random walk",
    keys: &[KEYS],
    run,
};

fn run(p: &Params) -> Result<Output> {
    let n = p.usize_min("lattice.sites", 2)?;
    let steps = p.usize("run.steps")?;
    let seed = p.u64("run.seed")?;
    let pp = p.f64_where("aharonov.pi_plus", "must lie in [0, 1]", |v| (0.0..=1.0).contains(&v))?;
    let phase = p.f64("aharonov.phase")?;
    let (cp, cm) = (c64(pp.sqrt(), 0.0), Complex64::from_polar((1.0 - pp).sqrt(), phase));
    let cfg = if p.bool("aharonov.coinless")? {
        AharonovConfig::coinless(cp, cm)?
    } else {
        let u = build_coin_euler(&CoinAngles::new(0.0, p.f64("coin.theta")?, p.f64("coin.xi")?, p.f64("coin.zeta")?));
        AharonovConfig::new(cp, cm, u.at(0, 0), u.at(0, 1), p.f64("coin.omega")?)?
    };
    let origin = n / 2;
    let initial: Vec<Complex64> = match p.choice("aharonov.initial", &["delta", "random"])? {
        "delta" => (0..n).map(|s| c64(if s == origin { 1.0 } else { 0.0 }, 0.0)).collect(),
        _ => {
            let mut r = stream_rng(seed, u64::MAX);
            let amps: Vec<Complex64> = (0..n).map(|_| random_complex(&mut r)).collect();
            let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            amps.into_iter().map(|z| z / norm).collect()
        }
    };
    let rho: Vec<f64> = initial.iter().map(|z| z.norm_sqr()).collect();
    let classical = classical_rw_distribution(&vec![cfg.pi_plus(); steps], &rho)?;
    let enumerate = p.choice("aharonov.mode", &["enumerate", "sample"])? == "enumerate";
    let quantum = if enumerate {
        if steps > MAX_ENUMERATION_STEPS {
            return Err(super::config_error(format!("run.steps: enumeration is limited to {MAX_ENUMERATION_STEPS} steps")));
        }
        enumerate_averaged_distribution(&initial, &cfg, steps)?
    } else {
        let runs = p.usize_min("aharonov.runs", 1)?;
        let ids: Vec<u64> = (0..runs as u64).collect();
        let kets = par_map(&ids, |&i| Ok(sample_run(&initial, &cfg, steps, &mut stream_rng(seed, i))?.ket))?;
        let mut acc = vec![0.0; n];
        for ket in kets {
            for (a, z) in acc.iter_mut().zip(&ket) {
                *a += z.norm_sqr();
            }
        }
        acc.iter().map(|a| a / runs as f64).collect()
    };
    let mut out = Output::new(&["site", "quantum", "classical"]);
    for (s, (q, c)) in quantum.iter().zip(&classical).enumerate() {
        out.row(vec![s as f64, *q, *c]);
    }
    let dev = quantum.iter().zip(&classical).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let (qm, qv) = moments(&quantum, origin);
    let (_, cv) = moments(&classical, origin);
    out.note("quantum_mean", qm);
    out.note("quantum_variance", qv);
    out.note("classical_variance", cv);
    if enumerate {
        out.check_below("max_deviation", dev, p.f64("check.tolerance")?);
    } else {
        out.note("max_deviation", dev);
    }
    Ok(out)
}
