use rand::Rng;

use qwalk_core::abelian::{electric_step_1d, AbelianGaugeField, NodeField};
use qwalk_core::linalg::{max_abs, CMat};
use qwalk_core::nonabelian::{
    gauge_transform_links, gauge_transform_state, lattice_field_strength_covariant, link_exponentials, nonabelian_step,
    GaugeGroupField, NonAbelianGaugeField,
};
use qwalk_core::c64;

use super::{par_map, positive, random_complex, random_field, stream_rng, Experiment, Output};
use crate::config::{key, Key, Params};
use crate::error::Result;

const KEYS: &[Key] = &[
    key("gauge.colors", "1,2,3", "comma-separated gauge dimensions N"),
    key("gauge.scale", "1", "scale of the random Hermitian potentials"),
    key("check.tolerance", "1e-11", "largest allowed residual"),
    key("lattice.sites", "16", "number of sites"),
    key("run.steps", "30", "number of steps"),
    key("run.seed", "1", "random seed"),
];

pub const NONABELIAN_CHECK: Experiment = Experiment {
    name: "nonabelian-check",
    about: "U(N) gauge covariance, field-strength covariance and the N = 1 reduction",
    keys: &[KEYS],
    run,
};

fn random_hermitian(r: &mut impl Rng, n: usize, scale: f64) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| random_complex(r));
    (&m + m.adjoint()) * c64(0.5 * scale, 0.0)
}

/// Unitary from the QR factorisation of a random matrix, with the phases of
/// `R`'s diagonal moved into `Q`.
fn random_unitary(r: &mut impl Rng, n: usize) -> CMat {
    let qr = CMat::from_fn(n, n, |_, _| random_complex(r)).qr();
    let (q, rr) = (qr.q(), qr.r());
    let mut d = CMat::identity(n, n);
    for i in 0..n {
        let v = rr[(i, i)];
        d[(i, i)] = if v.norm() > 0.0 { v / v.norm() } else { c64(1.0, 0.0) };
    }
    q * d
}

fn random_gauge(r: &mut impl Rng, n: usize, extent: usize, slices: usize, scale: f64) -> Result<NonAbelianGaugeField> {
    let data: Vec<(CMat, CMat)> =
        (0..extent * slices).map(|_| (random_hermitian(r, n, scale), random_hermitian(r, n, scale))).collect();
    Ok(NonAbelianGaugeField::from_fn(n, extent, slices, 0.1, |t, p| data[t * extent + p].clone())?)
}

fn random_group(r: &mut impl Rng, n: usize, extent: usize, slices: usize) -> Result<GaugeGroupField> {
    let data: Vec<CMat> = (0..extent * slices).map(|_| random_unitary(r, n)).collect();
    Ok(GaugeGroupField::from_fn(extent, slices, |t, p| data[t * extent + p].clone())?)
}

/// Largest difference between `G_j Psi_j` and the walk of `G_0 Psi_0` with
/// transformed links.
fn covariance(r: &mut impl Rng, n: usize, ext: usize, steps: usize, scale: f64) -> Result<f64> {
    let g = random_gauge(r, n, ext, steps, scale)?;
    let gg = random_group(r, n, ext, steps + 1)?;
    let dtheta = r.gen_range(-1.0..1.0);
    let mut psi = random_field(r, &[ext], 2 * n)?;
    let mut moved = gauge_transform_state(&psi, &gg, 0)?;
    let mut worst: f64 = 0.0;
    for j in 0..steps {
        let links = link_exponentials(&g, j)?;
        psi = nonabelian_step(&psi, &links, dtheta)?;
        moved = nonabelian_step(&moved, &gauge_transform_links(&links, &gg, j)?, dtheta)?;
        worst = worst.max(gauge_transform_state(&psi, &gg, j + 1)?.max_abs_diff(&moved));
    }
    Ok(worst)
}

/// Largest deviation of `F' = G F G^dag`.
fn curvature(r: &mut impl Rng, n: usize, ext: usize, scale: f64) -> Result<f64> {
    let g = random_gauge(r, n, ext, 2, scale)?;
    let gg = random_group(r, n, ext, 3)?;
    let (l0, l1) = (link_exponentials(&g, 0)?, link_exponentials(&g, 1)?);
    let f = lattice_field_strength_covariant(&l0, &l1)?;
    let ft = lattice_field_strength_covariant(&gauge_transform_links(&l0, &gg, 0)?, &gauge_transform_links(&l1, &gg, 1)?)?;
    let mut worst: f64 = 0.0;
    for p in 0..ext {
        let gp = gg.at(0, p)?;
        worst = worst.max(max_abs(&(&ft[p] - gp * &f[p] * gp.adjoint())));
    }
    Ok(worst)
}

/// Difference between the `N = 1` walk with `b0 = eps A0`, `b1 = -eps A1`
/// and the electric walk.
fn reduction(r: &mut impl Rng, ext: usize, steps: usize) -> Result<f64> {
    let eps = 0.2;
    let a0: Vec<f64> = (0..ext * steps).map(|_| r.gen_range(-2.0..2.0)).collect();
    let a1: Vec<f64> = (0..ext * steps).map(|_| r.gen_range(-2.0..2.0)).collect();
    let one = |v: f64| CMat::from_element(1, 1, c64(v, 0.0));
    let g = NonAbelianGaugeField::from_fn(1, ext, steps, eps, |t, p| (one(eps * a0[t * ext + p]), one(-eps * a1[t * ext + p])))?;
    let a = AbelianGaugeField::new(
        eps,
        vec![NodeField::from_fn(&[ext], steps, |t, c| a0[t * ext + c[0]])?, NodeField::from_fn(&[ext], steps, |t, c| a1[t * ext + c[0]])?],
    )?;
    let dtheta = r.gen_range(-1.0..1.0);
    let mut psi = random_field(r, &[ext], 2)?;
    let mut phi = psi.clone();
    let mut worst: f64 = 0.0;
    for j in 0..steps {
        psi = nonabelian_step(&psi, &link_exponentials(&g, j)?, dtheta)?;
        phi = electric_step_1d(&phi, &a, dtheta, j)?;
        worst = worst.max(psi.max_abs_diff(&phi));
    }
    Ok(worst)
}

fn run(p: &Params) -> Result<Output> {
    let colors = p.usize_list("gauge.colors")?;
    if colors.is_empty() || colors.contains(&0) {
        return Err(super::config_error("gauge.colors: gauge dimensions must be positive"));
    }
    let scale = positive(p, "gauge.scale")?;
    let tol = p.f64("check.tolerance")?;
    let ext = p.usize_min("lattice.sites", 2)?;
    let steps = p.usize_min("run.steps", 1)?;
    let seed = p.u64("run.seed")?;
    let rows = par_map(&colors, |&n| {
        let mut r = stream_rng(seed, n as u64);
        Ok(vec![n as f64, covariance(&mut r, n, ext, steps, scale)?, curvature(&mut r, n, ext, scale)?])
    })?;
    let mut out = Output::new(&["colors", "covariance_residual", "curvature_residual"]);
    let (mut c1, mut c2): (f64, f64) = (0.0, 0.0);
    for row in rows {
        c1 = c1.max(row[1]);
        c2 = c2.max(row[2]);
        out.row(row);
    }
    out.check_below("max_covariance_residual", c1, tol);
    out.check_below("max_curvature_residual", c2, tol);
    let red = reduction(&mut stream_rng(seed, u64::MAX), ext, steps)?;
    out.check_below("abelian_reduction_residual", red, tol);
    Ok(out)
}
