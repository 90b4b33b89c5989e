mod common;

use common::{covariance_residual, field_strength_covariance, max_abs, random_field, random_gauge, random_hermitian, random_unitary, rng};
use proptest::prelude::*;
use qwalk_core::abelian::{electric_step_1d, AbelianGaugeField, NodeField};
use qwalk_core::coin::{cis, factor_unitary};
use qwalk_core::linalg::CMat;
use qwalk_core::nonabelian::*;
use qwalk_core::{c64, Complex64, SpinorField};
use rand::Rng;

fn scalar(z: Complex64) -> CMat {
    CMat::from_element(1, 1, z)
}

fn taylor_exp_i(m: &CMat, terms: usize) -> CMat {
    let n = m.nrows();
    let im = m * c64(0.0, 1.0);
    let mut term = CMat::identity(n, n);
    let mut acc = term.clone();
    for k in 1..terms {
        term = &term * &im * c64(1.0 / k as f64, 0.0);
        acc += &term;
    }
    acc
}

#[test]
fn zero_gauge_gives_identity_links() {
    let g = NonAbelianGaugeField::zeros(3, 8, 1, 0.1).unwrap();
    let l = link_exponentials(&g, 0).unwrap();
    for m in l.plus.iter().chain(&l.minus) {
        assert!(max_abs(&(m - CMat::identity(3, 3))) < 1e-15);
    }
}

#[test]
fn scalar_links_match_abelian_phases() {
    let (a0, a1) = (0.37, -0.81);
    let g = NonAbelianGaugeField::from_fn(1, 4, 1, 0.1, |_, _| (scalar(c64(a0, 0.0)), scalar(c64(a1, 0.0)))).unwrap();
    let l = link_exponentials(&g, 0).unwrap();
    assert!((l.plus[0][(0, 0)] - cis(a0 + a1)).norm() < 1e-15);
    assert!((l.minus[0][(0, 0)] - cis(a0 - a1)).norm() < 1e-15);
}

#[test]
fn links_match_taylor_series() {
    let mut r = rng(1);
    for _ in 0..10 {
        let g = random_gauge(&mut r, 3, 4, 1, 0.6);
        let l = link_exponentials(&g, 0).unwrap();
        for p in 0..4 {
            let (b0, b1) = g.at(0, p);
            assert!(max_abs(&(&l.plus[p] - taylor_exp_i(&(b0 + b1), 30))) < 1e-10);
            assert!(max_abs(&(&l.minus[p] - taylor_exp_i(&(b0 - b1), 30))) < 1e-10);
        }
        assert!(l.unitarity_residual() < 1e-12);
    }
}

#[test]
fn non_hermitian_input_is_rejected() {
    let bad = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
    let res = NonAbelianGaugeField::from_fn(2, 2, 1, 0.1, |_, _| (bad.clone(), CMat::zeros(2, 2)));
    assert!(matches!(res, Err(qwalk_core::Error::NotHermitian { .. })));
}

#[test]
fn single_colour_reduces_to_the_electric_walk() {
    let mut r = rng(2);
    let (n, eps, steps) = (32, 0.2, 10);
    let a0: Vec<f64> = (0..n * steps).map(|_| r.gen_range(-2.0..2.0)).collect();
    let a1: Vec<f64> = (0..n * steps).map(|_| r.gen_range(-2.0..2.0)).collect();
    let g = NonAbelianGaugeField::from_fn(1, n, steps, eps, |t, p| {
        (scalar(c64(eps * a0[t * n + p], 0.0)), scalar(c64(-eps * a1[t * n + p], 0.0)))
    })
    .unwrap();
    let a = AbelianGaugeField::new(
        eps,
        vec![
            NodeField::from_fn(&[n], steps, |t, c| a0[t * n + c[0]]).unwrap(),
            NodeField::from_fn(&[n], steps, |t, c| a1[t * n + c[0]]).unwrap(),
        ],
    )
    .unwrap();
    let dtheta = -0.3;
    let mut psi = random_field(&mut r, &[n], 2);
    let mut phi = psi.clone();
    for j in 0..steps {
        psi = nonabelian_step(&psi, &link_exponentials(&g, j).unwrap(), dtheta).unwrap();
        phi = electric_step_1d(&phi, &a, dtheta, j).unwrap();
        assert!(psi.max_abs_diff(&phi) < 1e-13);
    }
}

#[test]
fn identity_multiples_decouple_the_colours() {
    let mut r = rng(3);
    let (n, ext) = (3, 16);
    let (c0, c1) = (0.4, -0.25);
    let g = NonAbelianGaugeField::from_fn(n, ext, 1, 0.1, |_, _| {
        (CMat::identity(n, n) * c64(c0, 0.0), CMat::identity(n, n) * c64(c1, 0.0))
    })
    .unwrap();
    let links = link_exponentials(&g, 0).unwrap();
    let single = NonAbelianGaugeField::from_fn(1, ext, 1, 0.1, |_, _| (scalar(c64(c0, 0.0)), scalar(c64(c1, 0.0)))).unwrap();
    let l1 = link_exponentials(&single, 0).unwrap();
    let psi = random_field(&mut r, &[ext], 2 * n);
    let out = nonabelian_step(&psi, &links, 0.7).unwrap();
    for colour in 0..n {
        let amps: Vec<Complex64> = (0..ext).flat_map(|s| [psi.site(s)[colour], psi.site(s)[n + colour]]).collect();
        let copy = SpinorField::from_amplitudes(&[ext], 2, amps).unwrap();
        let stepped = nonabelian_step(&copy, &l1, 0.7).unwrap();
        for s in 0..ext {
            assert!((stepped.site(s)[0] - out.site(s)[colour]).norm() < 1e-14);
            assert!((stepped.site(s)[1] - out.site(s)[n + colour]).norm() < 1e-14);
        }
    }
}

#[test]
fn su2_walk_conserves_probability() {
    let mut r = rng(4);
    let ext = 64;
    let data: Vec<(CMat, CMat)> = (0..ext * 4)
        .map(|_| {
            let mut h0 = random_hermitian(&mut r, 2, 1.0);
            let mut h1 = random_hermitian(&mut r, 2, 1.0);
            for h in [&mut h0, &mut h1] {
                let tr = h.trace() * c64(0.5, 0.0);
                *h -= CMat::identity(2, 2) * tr;
            }
            (h0, h1)
        })
        .collect();
    let g = NonAbelianGaugeField::from_fn(2, ext, 4, 0.1, |t, p| data[t * ext + p].clone()).unwrap();
    let mut psi = random_field(&mut r, &[ext], 4);
    for j in 0..100 {
        psi = nonabelian_step(&psi, &link_exponentials(&g, j).unwrap(), 0.3).unwrap();
    }
    assert!((psi.norm_sqr() - 1.0).abs() < 1e-11);
}

#[test]
fn step_rejects_mismatched_colours() {
    let g = NonAbelianGaugeField::zeros(2, 8, 1, 0.1).unwrap();
    let psi = SpinorField::zeros(&[8], 6).unwrap();
    assert!(nonabelian_step(&psi, &link_exponentials(&g, 0).unwrap(), 0.0).is_err());
}

#[test]
fn identity_transformation_leaves_links() {
    let mut r = rng(5);
    let g = random_gauge(&mut r, 2, 8, 1, 1.0);
    let l = link_exponentials(&g, 0).unwrap();
    let id = GaugeGroupField::from_fn(8, 2, |_, _| CMat::identity(2, 2)).unwrap();
    assert!(gauge_transform_links(&l, &id, 0).unwrap().max_abs_diff(&l) < 1e-15);
}

#[test]
fn missing_slice_is_reported() {
    let g = NonAbelianGaugeField::zeros(2, 8, 1, 0.1).unwrap();
    let l = link_exponentials(&g, 0).unwrap();
    let id = GaugeGroupField::from_fn(8, 1, |_, _| CMat::identity(2, 2)).unwrap();
    assert!(matches!(gauge_transform_links(&l, &id, 0), Err(qwalk_core::Error::Stencil(_))));
}

#[test]
fn single_colour_transformation_shifts_the_phases() {
    let mut r = rng(6);
    let ext = 8;
    let phi: Vec<f64> = (0..2 * ext).map(|_| r.gen_range(-3.0..3.0)).collect();
    let g = GaugeGroupField::from_fn(ext, 2, |t, p| scalar(cis(-phi[t * ext + p]))).unwrap();
    let a: Vec<(f64, f64)> = (0..ext).map(|_| (r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))).collect();
    let field = NonAbelianGaugeField::from_fn(1, ext, 1, 0.1, |_, p| (scalar(c64(a[p].0, 0.0)), scalar(c64(a[p].1, 0.0)))).unwrap();
    let l = gauge_transform_links(&link_exponentials(&field, 0).unwrap(), &g, 0).unwrap();
    for p in 0..ext {
        let (pp, pm) = ((p + 1) % ext, (p + ext - 1) % ext);
        let plus = a[p].0 + a[p].1 - phi[ext + p] + phi[pp];
        let minus = a[p].0 - a[p].1 - phi[ext + p] + phi[pm];
        assert!((l.plus[p][(0, 0)] - cis(plus)).norm() < 1e-14);
        assert!((l.minus[p][(0, 0)] - cis(minus)).norm() < 1e-14);
    }
}

#[test]
fn gauge_covariance_over_thirty_steps() {
    let mut r = rng(7);
    for n in 1..=3 {
        let res = covariance_residual(&mut r, n, 16, 30);
        assert!(res < 1e-11, "N = {n}: {res}");
    }
}

#[test]
fn field_strength_is_covariant() {
    let mut r = rng(8);
    for n in 1..=3 {
        let res = field_strength_covariance(&mut r, n, 12);
        assert!(res < 1e-11, "N = {n}: {res}");
    }
}

#[test]
fn zero_field_has_trivial_curvature() {
    let g = NonAbelianGaugeField::zeros(2, 8, 2, 0.1).unwrap();
    let f = lattice_field_strength_covariant(&link_exponentials(&g, 0).unwrap(), &link_exponentials(&g, 1).unwrap()).unwrap();
    assert!(f.iter().all(|m| max_abs(&(m - CMat::identity(2, 2))) < 1e-15));
}

#[test]
fn constant_electric_field_is_recovered() {
    let e = 0.8;
    let mut prev = f64::INFINITY;
    for eps in [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0] {
        let g = NonAbelianGaugeField::from_fn(1, 16, 4, eps, |t, _| {
            let a1 = -e * t as f64 * eps;
            (scalar(c64(0.0, 0.0)), scalar(c64(-eps * a1, 0.0)))
        })
        .unwrap();
        let f = lattice_field_strength_covariant(&link_exponentials(&g, 1).unwrap(), &link_exponentials(&g, 2).unwrap()).unwrap();
        let v = continuum_field_strength(&f[5], eps)[(0, 0)];
        let rel = (v.re + e).abs() / e;
        assert!(rel <= prev + 1e-15);
        prev = rel;
        if eps == 1.0 / 128.0 {
            assert!(rel < 0.05, "relative error {rel}");
        }
    }
}

#[test]
fn continuum_field_strength_has_the_commutator() {
    let s1 = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
    let s2 = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)]);
    let s3 = CMat::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]);
    let b0 = |t: f64, x: f64| &s1 * c64(x.cos(), 0.0) + &s3 * c64(0.3 * t + 0.5, 0.0);
    let b1 = |t: f64, x: f64| &s2 * c64((x + t).sin() + 0.7, 0.0) + &s1 * c64(0.2, 0.0);
    let d0b1 = |t: f64, x: f64| &s2 * c64((x + t).cos(), 0.0);
    let d1b0 = |_t: f64, x: f64| &s1 * c64(-x.sin(), 0.0);
    let mut errs = Vec::new();
    for k in [16usize, 32, 64] {
        let eps = std::f64::consts::TAU / (k as f64 * 6.0);
        let ext = k * 6;
        let g = NonAbelianGaugeField::from_fn(2, ext, 3, eps, |t, p| {
            let (tt, x) = (t as f64 * eps, p as f64 * eps);
            (b0(tt, x) * c64(eps, 0.0), b1(tt, x) * c64(-eps, 0.0))
        })
        .unwrap();
        let f = lattice_field_strength_covariant(&link_exponentials(&g, 0).unwrap(), &link_exponentials(&g, 1).unwrap()).unwrap();
        let p = ext / 3;
        let (t, x) = (eps, p as f64 * eps);
        let (c0, c1) = (b0(t, x), b1(t, x));
        let expect = d0b1(t, x) - d1b0(t, x) - (&c0 * &c1 - &c1 * &c0) * c64(0.0, 1.0);
        errs.push(max_abs(&(continuum_field_strength(&f[p], eps) - expect)));
    }
    assert!(errs[2] < errs[1] && errs[1] < errs[0], "{errs:?}");
    let order = (errs[0] / errs[2]).log2() / 2.0;
    assert!(order >= 0.9, "order {order}");
}

/// Smooth periodic two-colour spinor and its derivative.
fn smooth_state(x: f64) -> ([Complex64; 4], [Complex64; 4]) {
    let v = [c64(x.cos(), 0.0), c64(0.0, (2.0 * x).sin()), c64(0.3, 0.1 * x.sin()), cis(x) * 0.5];
    let d = [c64(-x.sin(), 0.0), c64(0.0, 2.0 * (2.0 * x).cos()), c64(0.0, 0.1 * x.cos()), cis(x) * c64(0.0, 0.5)];
    (v, d)
}

#[test]
fn one_step_matches_the_first_order_continuum_equation() {
    let s1 = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(0.0, 0.0)]);
    let s2 = CMat::from_row_slice(2, 2, &[c64(0.0, 0.0), c64(0.0, -1.0), c64(0.0, 1.0), c64(0.0, 0.0)]);
    let big0 = |x: f64| &s1 * c64(x.cos(), 0.0) + &s2 * c64(0.4, 0.0);
    let big1 = |x: f64| &s2 * c64(x.sin(), 0.0) + CMat::identity(2, 2) * c64(0.3, 0.0);
    let mass = 0.7;
    let mut res = Vec::new();
    for n in [64usize, 128, 256] {
        let eps = std::f64::consts::TAU / n as f64;
        let g = NonAbelianGaugeField::from_fn(2, n, 1, eps, |_, p| {
            let x = p as f64 * eps;
            (big0(x) * c64(eps, 0.0), big1(x) * c64(-eps, 0.0))
        })
        .unwrap();
        let amps: Vec<Complex64> = (0..n).flat_map(|p| smooth_state(p as f64 * eps).0).collect();
        let psi = SpinorField::from_amplitudes(&[n], 4, amps).unwrap();
        let next = nonabelian_step(&psi, &link_exponentials(&g, 0).unwrap(), -eps * mass).unwrap();
        let mut worst: f64 = 0.0;
        for p in 0..n {
            let x = p as f64 * eps;
            let (v, d) = smooth_state(x);
            let rhs = yang_mills_rhs(&v, &d, &big0(x), &big1(x), mass);
            for c in 0..4 {
                worst = worst.max((next.site(p)[c] - v[c] - rhs[c] * eps).norm());
            }
        }
        res.push(worst);
    }
    assert!(res[0] / res[1] >= 3.5 && res[1] / res[2] >= 3.5, "{res:?}");
}

#[test]
fn special_unitary_part_is_covariant_under_su_n() {
    let mut r = rng(9);
    let (n, ext) = (3, 8);
    let g = random_gauge(&mut r, n, ext, 1, 1.0);
    let special = |m: &CMat| factor_unitary(m).unwrap().special;
    let su: Vec<CMat> = (0..2 * ext).map(|_| special(&random_unitary(&mut r, n))).collect();
    let gg = GaugeGroupField::from_fn(ext, 2, |t, p| su[t * ext + p].clone()).unwrap();
    let l = link_exponentials(&g, 0).unwrap();
    let split = GroupLinkPair { plus: l.plus.iter().map(special).collect(), minus: l.minus.iter().map(special).collect() };
    let a = gauge_transform_links(&split, &gg, 0).unwrap();
    let t = gauge_transform_links(&l, &gg, 0).unwrap();
    let b = GroupLinkPair { plus: t.plus.iter().map(special).collect(), minus: t.minus.iter().map(special).collect() };
    assert!(a.max_abs_diff(&b) < 1e-11);
    for m in a.plus.iter().chain(&a.minus) {
        assert!((m.determinant() - c64(1.0, 0.0)).norm() < 1e-10);
    }
    for (u, s) in l.plus.iter().zip(&split.plus) {
        let f = factor_unitary(u).unwrap();
        assert!(max_abs(&(s * f.delta - u)) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn covariance_holds_for_random_fields(seed in any::<u64>(), n in 1usize..=3) {
        let mut r = rng(seed);
        prop_assert!(covariance_residual(&mut r, n, 8, 5) < 1e-11);
        prop_assert!(field_strength_covariance(&mut r, n, 8) < 1e-11);
    }
}
