use proptest::prelude::*;
use qwalk_core::dirac::*;
use qwalk_core::{c64, Complex64};
use std::f64::consts::TAU;

fn grid(n: usize, dx: f64, f: impl Fn(f64) -> [Complex64; 2]) -> Vec<[Complex64; 2]> {
    (0..n).map(|p| f(p as f64 * dx)).collect()
}

fn max_diff(a: &[[Complex64; 2]], b: &[[Complex64; 2]]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x[0] - y[0]).norm().max((x[1] - y[1]).norm())).fold(0.0, f64::max)
}

fn norm(a: &[[Complex64; 2]]) -> f64 {
    a.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).sum()
}

/// Classical RK4 for one mode `d_t u = i h(t) u`.
fn rk4_mode(u: [Complex64; 2], k: f64, mass: f64, pot: UniformPotential, t: f64, steps: usize) -> [Complex64; 2] {
    let i = c64(0.0, 1.0);
    let rhs = |s: f64, v: [Complex64; 2]| {
        let h = symbol(k, mass, pot.a0, pot.a1 - pot.e * s);
        let hv = h.apply(v);
        [i * hv[0], i * hv[1]]
    };
    let dt = t / steps as f64;
    let mut v = u;
    for n in 0..steps {
        let s = n as f64 * dt;
        let add = |a: [Complex64; 2], b: [Complex64; 2], f: f64| [a[0] + b[0] * f, a[1] + b[1] * f];
        let k1 = rhs(s, v);
        let k2 = rhs(s + 0.5 * dt, add(v, k1, 0.5 * dt));
        let k3 = rhs(s + 0.5 * dt, add(v, k2, 0.5 * dt));
        let k4 = rhs(s + dt, add(v, k3, dt));
        for c in 0..2 {
            v[c] += (k1[c] + k2[c] * 2.0 + k3[c] * 2.0 + k4[c]) * (dt / 6.0);
        }
    }
    v
}

#[test]
fn plane_wave_solves_the_equation() {
    for (m, k, a0, a1) in [(0.0, 1.0, 0.0, 0.0), (1.0, 0.5, 0.2, -0.3), (2.5, -3.0, -1.0, 0.7)] {
        for branch in [1, -1] {
            let pw = PlaneWaveSolution { mass: m, momentum: k, potential: (a0, a1), branch };
            assert!(pw.residual() < 1e-12);
            let w = ((k - a1) * (k - a1) + m * m).sqrt();
            assert!((pw.energy() - (-a0 + branch as f64 * w)).abs() < 1e-14);
        }
    }
}

#[test]
fn plane_wave_rotates_at_its_energy() {
    let n = 64;
    let dx = TAU / n as f64;
    for branch in [1, -1] {
        let pw = PlaneWaveSolution { mass: 0.8, momentum: 3.0, potential: (0.0, 0.0), branch };
        let t = 1.7;
        let out = dirac_evolve_spectral(&grid(n, dx, |x| pw.value(x, 0.0)), dx, 0.8, UniformPotential::default(), t).unwrap();
        assert!(max_diff(&out, &grid(n, dx, |x| pw.value(x, t))) < 1e-12);
        assert!((pw.energy().abs() - (9.0f64 + 0.64).sqrt()).abs() < 1e-14);
    }
}

#[test]
fn massless_components_translate_rigidly() {
    let n = 128;
    let dx = 0.1;
    let shift = 7;
    let data = grid(n, dx, |x| {
        let g = (-(x - 6.4) * (x - 6.4)).exp();
        [c64(g, 0.3 * g), c64(0.0, g * (2.0 * x).sin())]
    });
    let out = dirac_evolve_spectral(&data, dx, 0.0, UniformPotential::default(), shift as f64 * dx).unwrap();
    for p in 0..n {
        assert!((out[p][0] - data[(p + shift) % n][0]).norm() < 1e-12);
        assert!((out[p][1] - data[(p + n - shift) % n][1]).norm() < 1e-12);
    }
}

#[test]
fn spectral_evolution_conserves_norm() {
    let n = 64;
    let dx = 0.25;
    let data = grid(n, dx, |x| default_initial(x - 8.0));
    let n0 = norm(&data);
    for pot in [UniformPotential { a0: 0.3, a1: 0.1, e: 0.0 }, UniformPotential { a0: 0.0, a1: 0.0, e: 0.5 }] {
        let out = dirac_evolve_spectral(&data, dx, 1.0, pot, 100.0).unwrap();
        assert!((norm(&out) / n0 - 1.0).abs() < 1e-13);
    }
}

#[test]
fn forward_then_backward_is_the_identity() {
    let n = 64;
    let dx = 0.25;
    let data = grid(n, dx, |x| default_initial(x - 8.0));
    let pot = UniformPotential { a0: 0.4, a1: -0.2, e: 0.0 };
    let fwd = dirac_evolve_spectral(&data, dx, 1.3, pot, 3.0).unwrap();
    let back = dirac_evolve_spectral(&fwd, dx, 1.3, pot, -3.0).unwrap();
    assert!(max_diff(&back, &data) < 1e-12);
}

#[test]
fn field_evolution_matches_a_runge_kutta_oracle() {
    let n = 32;
    let dx = TAU / n as f64;
    let pot = UniformPotential { a0: 0.2, a1: 0.4, e: 1.0 };
    let (m, t, k) = (0.7, 2.0, 2.0);
    let u = [c64(0.6, 0.1), c64(-0.2, 0.5)];
    let data = grid(n, dx, |x| {
        let ph = c64(0.0, k * x).exp();
        [u[0] * ph, u[1] * ph]
    });
    let out = dirac_evolve_spectral(&data, dx, m, pot, t).unwrap();
    let v = rk4_mode(u, k, m, pot, t, 20000);
    let expect = grid(n, dx, |x| {
        let ph = c64(0.0, k * x).exp();
        [v[0] * ph, v[1] * ph]
    });
    assert!(max_diff(&out, &expect) < 1e-9);
}

#[test]
fn magnus_steps_converge_at_fourth_order() {
    let n = 32;
    let dx = 0.5;
    let data = grid(n, dx, |x| default_initial(x - 8.0));
    let pot = UniformPotential { a0: 0.0, a1: 0.0, e: 1.5 };
    let reference = dirac_evolve_steps(&data, dx, 1.0, pot, 2.0, 4096).unwrap();
    let errs: Vec<f64> = [8, 16, 32]
        .iter()
        .map(|&s| max_diff(&dirac_evolve_steps(&data, dx, 1.0, pot, 2.0, s).unwrap(), &reference))
        .collect();
    for w in errs.windows(2) {
        assert!(w[0] / w[1] > 12.0, "{errs:?}");
    }
    assert!(dirac_evolve_steps(&data, dx, 1.0, pot, 2.0, 0).is_err());
}

#[test]
fn massless_walk_is_exact() {
    let p = DiracProblem::new(0.0, UniformPotential::default());
    for eps in [1.0 / 8.0, 1.0 / 32.0] {
        assert!(p.error(eps).unwrap() < 1e-12);
    }
}

#[test]
fn massive_walk_converges_at_first_order() {
    let eps = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let p = DiracProblem::new(1.0, UniformPotential::default());
    let r = convergence_order(&eps, |e| p.error(e)).unwrap();
    assert!(r.order >= 0.9 && r.r_squared > 0.99, "{r:?}");
    assert!(r.errors.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn walk_in_an_electric_field_converges_at_first_order() {
    let eps = [1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0];
    let p = DiracProblem::new(1.0, UniformPotential { a0: 0.0, a1: 0.0, e: 1.0 });
    let r = convergence_order(&eps, |e| p.error(e)).unwrap();
    assert!(r.order >= 0.9, "{r:?}");
    assert!(r.errors.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn convergence_fit_input_is_validated() {
    assert!(convergence_order(&[0.1, 0.05], |e| Ok(e)).is_err());
    assert!(convergence_order(&[0.1, 0.2, 0.05], |e| Ok(e)).is_err());
    let r = convergence_order(&[0.4, 0.2, 0.1, 0.05], |e| Ok(3.0 * e * e)).unwrap();
    assert!((r.order - 2.0).abs() < 1e-12 && (r.r_squared - 1.0).abs() < 1e-12);
}

#[test]
fn problem_grid_is_validated() {
    let p = DiracProblem::new(1.0, UniformPotential::default());
    assert!(p.sites(0.3).is_err());
    assert_eq!(p.sites(0.125).unwrap(), 128);
    let mut q = p;
    q.time = 1.05;
    assert!(q.walk(0.125).is_err());
    assert!(relative_l2(&[[c64(1.0, 0.0); 2]], &[]).is_err());
}

#[test]
fn hermitian_exponential_is_unitary_and_exact() {
    let m = symbol(0.7, 1.2, 0.3, -0.1);
    let u = exp_i_hermitian2(&m);
    assert!(u.unitarity_residual() < 1e-14);
    let ev = m.eigenvalues();
    let uev = u.eigenvalues();
    let mut got = [uev[0].arg(), uev[1].arg()];
    let mut want = [ev[0].re.sin().atan2(ev[0].re.cos()), ev[1].re.sin().atan2(ev[1].re.cos())];
    got.sort_by(f64::total_cmp);
    want.sort_by(f64::total_cmp);
    assert!((got[0] - want[0]).abs() < 1e-12 && (got[1] - want[1]).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plane_wave_residual_is_small(m in 0.0f64..5.0, k in -5.0f64..5.0, a0 in -2.0f64..2.0, a1 in -2.0f64..2.0, up in any::<bool>()) {
        let pw = PlaneWaveSolution { mass: m, momentum: k, potential: (a0, a1), branch: if up { 1 } else { -1 } };
        prop_assert!(pw.residual() < 1e-12);
    }
}
