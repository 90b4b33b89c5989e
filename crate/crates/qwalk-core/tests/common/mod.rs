#![allow(dead_code)]

use qwalk_core::abelian::{electric_step_1d, em_step_2d, gauge_transform, gauge_transform_state, AbelianGaugeField, FieldStrength, NodeField};
use qwalk_core::coin::{build_coin_euler, CoinAngles};
use qwalk_core::curved::{dreibein_node, triad_node};
use qwalk_core::nonabelian::{
    gauge_transform_links, gauge_transform_state as transform_colours, lattice_field_strength_covariant, link_exponentials,
    nonabelian_step, GaugeGroupField, NonAbelianGaugeField,
};
use qwalk_core::linalg::CMat;
use qwalk_core::{c64, Complex64, Mat2, SpinorField};
use std::f64::consts::{FRAC_PI_2, TAU};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(r: &mut impl Rng) -> Complex64 {
    c64(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

/// Normalised field with independent uniform amplitudes.
pub fn random_field(r: &mut impl Rng, extents: &[usize], internal: usize) -> SpinorField {
    let n: usize = extents.iter().product::<usize>() * internal;
    let amps = (0..n).map(|_| random_complex(r)).collect();
    let mut f = SpinorField::from_amplitudes(extents, internal, amps).unwrap();
    f.normalize().unwrap();
    f
}

pub fn random_hermitian(r: &mut impl Rng, n: usize, scale: f64) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| random_complex(r));
    (&m + m.adjoint()) * c64(0.5 * scale, 0.0)
}

/// Haar-like unitary from the QR factorisation of a complex Gaussian-ish matrix,
/// with the phases of R's diagonal moved into Q.
pub fn random_unitary(r: &mut impl Rng, n: usize) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| random_complex(r));
    let qr = m.qr();
    let q = qr.q();
    let rr = qr.r();
    let mut d = CMat::identity(n, n);
    for i in 0..n {
        let v = rr[(i, i)];
        d[(i, i)] = if v.norm() > 0.0 { v / v.norm() } else { c64(1.0, 0.0) };
    }
    q * d
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Dense matrix of a linear map on a field, built column by column.
pub fn dense_operator(template: &SpinorField, map: impl Fn(&SpinorField) -> SpinorField) -> CMat {
    let dim = template.amplitudes().len();
    let mut out = CMat::zeros(dim, dim);
    for c in 0..dim {
        let mut e = template.zeros_like();
        e.amplitudes_mut()[c] = c64(1.0, 0.0);
        let col = map(&e);
        for (r, z) in col.amplitudes().iter().enumerate() {
            out[(r, c)] = *z;
        }
    }
    out
}

pub fn binomial(n: u64, k: u64) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

pub fn random_node_field(r: &mut impl Rng, ext: &[usize], slices: usize, scale: f64) -> NodeField {
    let vals: Vec<f64> = (0..slices * ext.iter().product::<usize>()).map(|_| r.gen_range(-scale..scale)).collect();
    let sites: usize = ext.iter().product();
    NodeField::from_fn(ext, slices, |t, c| vals[t * sites + c[0] + ext[0] * c[1]]).unwrap()
}

pub fn random_potential(r: &mut impl Rng, ext: &[usize], slices: usize, eps: f64) -> AbelianGaugeField {
    let comps = (0..=ext.len()).map(|_| random_node_field(r, ext, slices, 2.0)).collect();
    AbelianGaugeField::new(eps, comps).unwrap()
}

pub fn evolve(f: &SpinorField, a: &AbelianGaugeField, dtheta: f64, steps: usize) -> Vec<SpinorField> {
    let mut out = vec![f.clone()];
    for j in 0..steps {
        let last = out.last().unwrap();
        let next = if a.dims() == 1 { electric_step_1d(last, a, dtheta, j) } else { em_step_2d(last, a, dtheta, j) };
        out.push(next.unwrap());
    }
    out
}

/// Largest gauge-commutation residual over the run: evolve-then-transform
/// against transform-then-evolve with the transformed potential.
pub fn commutation_residual(r: &mut impl Rng, ext: &[usize], steps: usize) -> f64 {
    let eps = r.gen_range(0.05..0.5);
    let a = random_potential(r, ext, steps, eps);
    let phi = random_node_field(r, ext, steps + 1, 3.0);
    let dtheta = r.gen_range(-1.0..1.0);
    let psi = random_field(r, ext, 2);
    let (psi_t, a_t) = gauge_transform(&psi, &a, &phi, 0).unwrap();
    let plain = evolve(&psi, &a, dtheta, steps);
    let moved = evolve(&psi_t, &a_t, dtheta, steps);
    plain
        .iter()
        .zip(&moved)
        .enumerate()
        .map(|(j, (p, m))| gauge_transform_state(p, &phi, j).unwrap().max_abs_diff(m))
        .fold(0.0, f64::max)
}

pub fn interior_diff(f: &FieldStrength, g: &FieldStrength, dims: usize, slices: usize, sites: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..=dims {
        for nu in 0..=dims {
            let (x, y) = (f.component(mu, nu), g.component(mu, nu));
            for j in 0..slices - 1 {
                for s in 0..sites {
                    worst = worst.max((x.at(j, s) - y.at(j, s)).abs());
                }
            }
        }
    }
    worst
}

/// Least-squares fit of `y = a + b x + c x^2` by normal equations.
pub fn quadratic_fit(x: &[f64], y: &[f64]) -> [f64; 3] {
    let mut m = [[0.0; 3]; 3];
    let mut v = [0.0; 3];
    for (xi, yi) in x.iter().zip(y) {
        let p = [1.0, *xi, xi * xi];
        for i in 0..3 {
            v[i] += p[i] * yi;
            for k in 0..3 {
                m[i][k] += p[i] * p[k];
            }
        }
    }
    let mm = nalgebra::Matrix3::from_fn(|i, k| m[i][k]);
    let sol = mm.lu().solve(&nalgebra::Vector3::from(v)).unwrap();
    [sol[0], sol[1], sol[2]]
}

pub fn random_coin(r: &mut impl Rng) -> Mat2 {
    build_coin_euler(&CoinAngles::new(
        r.gen_range(0.0..TAU),
        r.gen_range(0.0..FRAC_PI_2),
        r.gen_range(0.0..TAU),
        r.gen_range(0.0..TAU),
    ))
}

pub fn random_gauge(r: &mut impl Rng, n: usize, extent: usize, slices: usize, scale: f64) -> NonAbelianGaugeField {
    let data: Vec<(CMat, CMat)> =
        (0..extent * slices).map(|_| (random_hermitian(r, n, scale), random_hermitian(r, n, scale))).collect();
    NonAbelianGaugeField::from_fn(n, extent, slices, 0.1, |t, p| data[t * extent + p].clone()).unwrap()
}

pub fn random_group(r: &mut impl Rng, n: usize, extent: usize, slices: usize) -> GaugeGroupField {
    let data: Vec<CMat> = (0..extent * slices).map(|_| random_unitary(r, n)).collect();
    GaugeGroupField::from_fn(extent, slices, |t, p| data[t * extent + p].clone()).unwrap()
}

/// Largest difference between `G_j Psi_j` and the walk of `G_0 Psi_0` with
/// transformed links, over `steps` steps.
pub fn covariance_residual(r: &mut impl Rng, n: usize, ext: usize, steps: usize) -> f64 {
    let g = random_gauge(r, n, ext, steps, 1.0);
    let gg = random_group(r, n, ext, steps + 1);
    let dtheta = r.gen_range(-1.0..1.0);
    let mut psi = random_field(r, &[ext], 2 * n);
    let mut moved = transform_colours(&psi, &gg, 0).unwrap();
    let mut worst: f64 = 0.0;
    for j in 0..steps {
        let links = link_exponentials(&g, j).unwrap();
        psi = nonabelian_step(&psi, &links, dtheta).unwrap();
        moved = nonabelian_step(&moved, &gauge_transform_links(&links, &gg, j).unwrap(), dtheta).unwrap();
        worst = worst.max(transform_colours(&psi, &gg, j + 1).unwrap().max_abs_diff(&moved));
    }
    worst
}

pub fn field_strength_covariance(r: &mut impl Rng, n: usize, ext: usize) -> f64 {
    let g = random_gauge(r, n, ext, 2, 1.0);
    let gg = random_group(r, n, ext, 3);
    let (l0, l1) = (link_exponentials(&g, 0).unwrap(), link_exponentials(&g, 1).unwrap());
    let f = lattice_field_strength_covariant(&l0, &l1).unwrap();
    let t0 = gauge_transform_links(&l0, &gg, 0).unwrap();
    let t1 = gauge_transform_links(&l1, &gg, 1).unwrap();
    let ft = lattice_field_strength_covariant(&t0, &t1).unwrap();
    (0..ext)
        .map(|p| {
            let gp = gg.at(0, p).unwrap();
            max_abs(&(&ft[p] - gp * &f[p] * gp.adjoint()))
        })
        .fold(0.0, f64::max)
}

pub fn random_metric(r: &mut impl Rng) -> [f64; 3] {
    let gxx: f64 = -r.gen_range(0.3..3.0);
    let gyy = -r.gen_range(0.3..3.0);
    let bound = (gxx * gyy).sqrt() * 0.95;
    [gxx, gyy, r.gen_range(-bound..bound)]
}

pub fn reconstruction_residual(g: [f64; 3]) -> f64 {
    let t = triad_node(g).unwrap();
    let e = dreibein_node(g).unwrap();
    let tm = [[t[0], t[2]], [t[2], t[1]]];
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for k in 0..2 {
            let v = e[i][0] * tm[0][k] + e[i][1] * tm[1][k];
            worst = worst.max((v - if i == k { 1.0 } else { 0.0 }).abs());
        }
    }
    worst
}

pub fn sublattice(f: &SpinorField, px: usize, py: usize) -> SpinorField {
    let (nx, ny) = (f.extent(0) / 2, f.extent(1) / 2);
    let mut out = SpinorField::zeros(&[nx, ny], 2).unwrap();
    for y in 0..ny {
        for x in 0..nx {
            let s = f.site_index(&[2 * x + px, 2 * y + py]);
            let v = [f.site(s)[0], f.site(s)[1]];
            out.site_mut(x + nx * y).copy_from_slice(&v);
        }
    }
    out
}
