use qwalk_core::dirac::{convergence_order, DiracProblem, UniformPotential};

use super::{par_map, positive, Experiment, Output};
use crate::config::{key, Key, Params};
use crate::error::Result;

const KEYS: &[Key] = &[
    key("field.mass", "1", "mass"),
    key("field.a0", "0", "scalar potential"),
    key("field.a1", "0", "vector potential at t = 0"),
    key("field.e", "0", "electric field"),
    key("convergence.eps", "1/32,1/64,1/128,1/256", "comma-separated lattice spacings"),
    key("convergence.time", "1", "final time"),
    key("convergence.length", "16", "periodic domain length"),
    key("check.min_order", "0.9", "smallest accepted convergence order"),
];

pub const CONVERGENCE: Experiment = Experiment {
    name: "convergence",
    about: "error of the electric walk against the Dirac equation as eps shrinks",
    keys: &[KEYS],
    run,
};

fn run(p: &Params) -> Result<Output> {
    let pot = UniformPotential { a0: p.f64("field.a0")?, a1: p.f64("field.a1")?, e: p.f64("field.e")? };
    let mut problem = DiracProblem::new(p.f64("field.mass")?, pot);
    problem.time = positive(p, "convergence.time")?;
    problem.length = positive(p, "convergence.length")?;
    let eps = p.f64_list("convergence.eps")?;
    let errors = par_map(&eps, |&e| Ok(problem.error(e)?))?;
    let report = convergence_order(&eps, |e| {
        let i = eps.iter().position(|x| *x == e).expect("spacing from the list");
        Ok(errors[i])
    })?;
    let mut out = Output::new(&["eps", "error"]);
    for (e, err) in eps.iter().zip(&errors) {
        out.row(vec![*e, *err]);
    }
    let min = p.f64("check.min_order")?;
    out.note("order", report.order);
    out.note("r_squared", report.r_squared);
    if !(report.order >= min) {
        out.fail(format!("convergence order {:.3} is below {min}", report.order));
    }
    Ok(out)
}
