use katolab::kato::*;
use katolab::probes::{perturbed_taylor_green, random_solenoidal, rng, taylor_green};
use katolab::spaces::{space_norm, SpaceTag};
use katolab::spectral::{leray_project, nonlinearity, Grid, SpectralField};
use katolab::time::{trajectory_norm, TimeGrid, Trajectory};
use katolab::Error;
use proptest::prelude::*;

fn small_config(nodes: usize, tau: f64) -> KatoConfig {
    let mut cfg = KatoConfig::new(ExponentConfig::lebesgue(2, 6.0, f64::INFINITY, tau));
    cfg.nodes = nodes;
    cfg.tol = 1e-10;
    cfg
}

fn rel(a: &SpectralField, b: &SpectralField) -> f64 {
    a.sub(b).unwrap().l2_norm() / b.l2_norm().max(1e-300)
}

#[test]
fn zero_data_gives_zero_solution() {
    let g = Grid::new(2, 16).unwrap();
    let cfg = small_config(32, 0.5);
    let s = picard_solve(&SpectralField::zero_vector(g), None, &cfg).unwrap();
    assert!(s.diagnostics.iterations <= 1);
    assert!(s.x.fields.iter().all(|f| f.l2_norm() == 0.0));
}

#[test]
fn free_evolution_of_single_mode_decays_exactly() {
    let g = Grid::new(2, 16).unwrap();
    let times = TimeGrid::graded(1.0, 32, 2.0).unwrap();
    // (sin 2y, 0): |k|² = 4
    let u0 = SpectralField::from_fn(g, 2, |x| vec![(2.0 * x[1]).sin(), 0.0]);
    let y = free_evolution(&u0, &times).unwrap();
    for (t, f) in times.nodes().iter().zip(&y.fields) {
        let expect = u0.scale((-4.0 * t).exp());
        assert!(f.sub(&expect).unwrap().l2_norm() < 1e-13);
    }
    let norms: Vec<f64> = y.fields.iter().map(|f| f.l2_norm()).collect();
    assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
}

#[test]
fn free_evolution_rejects_compressible_data() {
    let g = Grid::new(2, 16).unwrap();
    let times = TimeGrid::graded(1.0, 16, 2.0).unwrap();
    let u0 = SpectralField::from_fn(g, 2, |x| vec![x[0].sin(), 0.0]);
    assert!(matches!(free_evolution(&u0, &times), Err(Error::Input(_))));
}

#[test]
fn duhamel_of_constant_forcing_matches_exponential_integral() {
    let g = Grid::new(2, 32).unwrap();
    let times = TimeGrid::graded(0.5, 64, 2.0).unwrap();
    let f = perturbed_taylor_green(g, 1.0);
    let u = Trajectory::constant(times.clone(), &f);
    let d = duhamel_bilinear(&u, &u).unwrap();
    let nl = nonlinearity(&f, &f).unwrap();
    assert!(nl.l2_norm() > 0.1);
    for (t, out) in times.nodes().iter().zip(&d.fields) {
        let expect = SpectralField::from_spectrum(g, 2, |k| {
            let k2 = k.iter().map(|&a| (a * a) as f64).sum::<f64>();
            let w = if k2 == 0.0 { *t } else { -(-t * k2).exp_m1() / k2 };
            (0..2).map(|c| nl.coefficient(c, k) * w).collect()
        });
        let err = out.sub(&expect).unwrap().max_abs_coefficient();
        assert!(err < 1e-8 * nl.max_abs_coefficient(), "t = {t}: {err:e}");
        assert!(out.is_divergence_free(1e-12));
    }
}

#[test]
fn duhamel_rejects_mismatched_grids() {
    let g = Grid::new(2, 16).unwrap();
    let a = Trajectory::zeros(TimeGrid::graded(1.0, 16, 2.0).unwrap(), g, 2);
    let b = Trajectory::zeros(TimeGrid::graded(1.0, 32, 2.0).unwrap(), g, 2);
    assert!(matches!(duhamel_bilinear(&a, &b), Err(Error::Grid(_))));
}

#[test]
fn small_taylor_green_run_contracts_and_matches_reference() {
    let g = Grid::new(2, 64).unwrap();
    let mut cfg = KatoConfig::new(ExponentConfig::lebesgue(2, 6.0, f64::INFINITY, 0.5));
    cfg.tol = 1e-8;
    let times = cfg.time_grid().unwrap();
    let j = times.nearest(0.25);
    for u0 in [taylor_green(g, 1e-3), perturbed_taylor_green(g, 1e-3)] {
        let s = picard_solve(&u0, None, &cfg).unwrap();
        let d = &s.diagnostics;
        assert!(d.converged && d.iterations <= 8);
        assert!(d.max_contraction() < 0.5);
        assert!(*d.e_norms.last().unwrap() <= 2.0 * d.y_norm);
        assert!(d.residual <= 10.0 * cfg.tol);
        assert!(s.x.fields.iter().all(|f| f.is_divergence_free(1e-12) && f.is_mean_zero(1e-14)));
        let r = reference_solve_at(&u0, None, &[times.nodes()[j]], ReferenceOptions::new(1e-3)).unwrap();
        assert!(rel(&s.x.fields[j], &r[0]) <= 1e-5);
        let l0 = u0.l2_norm();
        assert!(s.x.fields.iter().all(|f| f.l2_norm() <= l0 * (1.0 + 1e-12)));
    }
}

#[test]
fn reconstruction_solves_the_mild_equation_node_wise() {
    let g = Grid::new(2, 32).unwrap();
    let mut cfg = small_config(64, 0.5);
    cfg.tol = 1e-9;
    let u0 = perturbed_taylor_green(g, 0.5);
    let s = picard_solve(&u0, None, &cfg).unwrap();
    let prop = Propagator::new(g, &cfg.time_grid().unwrap(), 0.0);
    let again = s.y.axpy(1.0, &prop.bilinear(&s.x, &s.x).unwrap()).unwrap();
    let z = SpaceTag::Lq { q: 6.0 };
    for (a, b) in again.fields.iter().zip(&s.x.fields) {
        assert!(space_norm(&a.sub(b).unwrap(), &z).unwrap() <= 10.0 * cfg.tol);
    }
}

#[test]
fn zero_and_free_initial_iterates_agree() {
    let g = Grid::new(2, 32).unwrap();
    let cfg = small_config(64, 0.5);
    let u0 = perturbed_taylor_green(g, 1.0);
    let a = picard_solve_from(&u0, None, &cfg, InitialIterate::Free).unwrap();
    let b = picard_solve_from(&u0, None, &cfg, InitialIterate::Zero).unwrap();
    let e = cfg.exponents.e_norm();
    assert!(trajectory_norm(&a.z.axpy(-1.0, &b.z).unwrap(), &e).unwrap() <= 10.0 * cfg.tol);
}

#[test]
fn smallness_verdict_is_reported() {
    let g = Grid::new(2, 16).unwrap();
    let mut cfg = small_config(32, 0.5);
    cfg.eta_bilinear = Some(0.3);
    let s = picard_solve(&perturbed_taylor_green(g, 0.1), None, &cfg).unwrap();
    let v = s.diagnostics.smallness.unwrap();
    assert_eq!(v.bound, 1.0 / 1.2);
    assert_eq!(v.satisfied, v.y_norm < v.bound);
}

#[test]
fn large_data_diverges_with_diagnostics() {
    let g = Grid::new(2, 32).unwrap();
    let cfg = small_config(64, 0.5);
    let u0 = perturbed_taylor_green(g, 1.0);
    let xn = space_norm(&u0, &cfg.exponents.data_space()).unwrap();
    match picard_solve(&u0.scale(40.0 / xn), None, &cfg) {
        Err(Error::Divergence { diagnostics, .. }) => assert!(!diagnostics.increments.is_empty()),
        other => panic!("expected divergence, got {:?}", other.map(|s| s.diagnostics)),
    }
}

fn shear(g: Grid, a: f64) -> SpectralField {
    SpectralField::from_fn(g, 2, |x| vec![a * x[1].sin(), 0.0])
}

#[test]
fn body_force_and_stress_drive_the_shear_mode() {
    let g = Grid::new(2, 16).unwrap();
    let cfg = small_config(64, 1.0);
    let times = cfg.time_grid().unwrap();
    let u0 = SpectralField::zero_vector(g);
    // f = (sin y, 0), constant in time: u = (1 − e^{−t}) f
    let body = Forcing {
        body: Some(Trajectory::constant(times.clone(), &shear(g, 1.0))),
        stress: None,
    };
    // F₁₂ = −cos y gives ∇·F = (sin y, 0) as well
    let tensor = SpectralField::from_fn(g, 4, |x| vec![0.0, -x[1].cos(), 0.0, 0.0]);
    let stress = Forcing {
        body: None,
        stress: Some(Trajectory::constant(times.clone(), &tensor)),
    };
    for forcing in [body, stress] {
        let s = picard_solve(&u0, Some(&forcing), &cfg).unwrap();
        for (t, f) in times.nodes().iter().zip(&s.x.fields) {
            let expect = shear(g, -(-t).exp_m1());
            assert!(f.sub(&expect).unwrap().l2_norm() < 1e-12, "t = {t}");
        }
        let r = reference_solve(&u0, Some(&forcing), &times, ReferenceOptions::new(1e-2)).unwrap();
        assert!(rel(r.fields.last().unwrap(), s.x.fields.last().unwrap()) < 1e-8);
    }
}

#[test]
fn reference_without_nonlinearity_matches_free_evolution() {
    let g = Grid::new(2, 32).unwrap();
    let times = TimeGrid::graded(0.5, 32, 2.0).unwrap();
    let u0 = random_solenoidal(g, 8, 1.0, &mut rng(3));
    let mut opts = ReferenceOptions::new(1e-2);
    opts.nonlinear = false;
    let r = reference_solve(&u0, None, &times, opts).unwrap();
    let y = free_evolution(&u0, &times).unwrap();
    for (a, b) in r.fields.iter().zip(&y.fields) {
        assert!(a.sub(b).unwrap().l2_norm() <= 1e-10 * u0.l2_norm());
    }
    let zero = reference_solve(&SpectralField::zero_vector(g), None, &times, ReferenceOptions::new(1e-2)).unwrap();
    assert!(zero.fields.iter().all(|f| f.l2_norm() == 0.0));
}

#[test]
fn reference_integrator_is_fourth_order() {
    let g = Grid::new(2, 16).unwrap();
    let u0 = perturbed_taylor_green(g, 2.0);
    let at = |dt: f64| reference_solve_at(&u0, None, &[0.2], ReferenceOptions::new(dt)).unwrap().remove(0);
    let (a, b, c) = (at(0.02), at(0.01), at(0.005));
    let d1 = a.sub(&b).unwrap().l2_norm();
    let d2 = b.sub(&c).unwrap().l2_norm();
    let order = (d1 / d2).log2();
    assert!(order >= 3.5, "order {order}");
}

#[test]
fn reference_flags_blow_up() {
    let g = Grid::new(2, 16).unwrap();
    let u0 = perturbed_taylor_green(g, 200.0);
    let r = reference_solve_at(&u0, None, &[0.5], ReferenceOptions::new(0.05));
    assert!(matches!(r, Err(Error::Oracle(_))));
}

#[test]
fn zero_direction_has_infinite_threshold() {
    let g = Grid::new(2, 16).unwrap();
    let r = smallness_threshold(&SpectralField::zero_vector(g), &small_config(32, 0.5)).unwrap();
    assert!(r.threshold.is_infinite());
}

#[test]
fn threshold_is_monotone_and_shrinks_with_horizon() {
    let g = Grid::new(2, 16).unwrap();
    let dir = perturbed_taylor_green(g, 1.0);
    let mut short = small_config(64, 0.5);
    short.tol = 1e-8;
    let mut long = short.clone();
    long.exponents.tau = 2.0;
    let a = smallness_threshold(&dir, &short).unwrap();
    let b = smallness_threshold(&dir, &long).unwrap();
    assert!(a.monotone && b.monotone);
    assert!(a.samples.len() >= 10);
    assert!((a.upper - a.threshold) / a.threshold <= 0.05);
    assert!(b.threshold <= a.threshold * 1.05, "{} vs {}", b.threshold, a.threshold);
}

#[test]
fn contraction_weights_integrate_linear_data_exactly() {
    // ∫_0^h e^{−μ(h−s)} (a + b s/h) ds
    for &(mu, h) in &[(0.0, 0.1), (1e-6, 0.3), (2.0, 0.01), (50.0, 0.2), (4000.0, 1e-3)] {
        let (l, r) = exponential_hat_weights(mu, h);
        let z: f64 = mu * h;
        let total = if mu == 0.0 { h } else { -(-z).exp_m1() / mu };
        assert!((l + r - total).abs() <= 1e-14 * total.max(1e-300));
        // ∫_0^h e^{−μ(h−s)} s ds = h² Σ (−z)^m / (m+2)!, summed directly when z is small
        let first = if z < 1.0 {
            let (mut term, mut sum) = (0.5, 0.5);
            for m in 1..30 {
                term *= -z / (m as f64 + 2.0);
                sum += term;
            }
            h * h * sum
        } else {
            (z - 1.0 + (-z).exp()) / (mu * mu)
        };
        assert!((r * h - first).abs() <= 1e-12 * first);
    }
}

#[test]
fn leray_projected_forcing_ignores_gradients() {
    let g = Grid::new(2, 16).unwrap();
    let times = TimeGrid::graded(0.5, 16, 2.0).unwrap();
    let grad = SpectralField::from_fn(g, 2, |x| vec![x[0].cos(), 0.0]);
    assert!(leray_project(&grad).l2_norm() < 1e-13);
    let f = Forcing {
        body: Some(Trajectory::constant(times.clone(), &grad)),
        stress: None,
    };
    let s = picard_solve(&SpectralField::zero_vector(g), Some(&f), &small_config(16, 0.5)).unwrap();
    assert!(s.x.fields.iter().all(|f| f.l2_norm() < 1e-13));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn converged_iterates_stay_in_the_double_ball(seed in 0u64..1000, amp in 0.05f64..1.0) {
        let g = Grid::new(2, 16).unwrap();
        let cfg = small_config(32, 0.5);
        let u0 = random_solenoidal(g, 3, 1.0, &mut rng(seed));
        let xn = space_norm(&u0, &cfg.exponents.data_space()).unwrap();
        if let Ok(s) = picard_solve(&u0.scale(amp / xn), None, &cfg) {
            let d = s.diagnostics;
            prop_assert!(*d.e_norms.last().unwrap() <= 2.0 * d.y_norm);
            prop_assert!(d.residual <= 10.0 * cfg.tol);
        }
    }

    #[test]
    fn free_energy_never_grows(seed in 0u64..1000) {
        let g = Grid::new(2, 16).unwrap();
        let times = TimeGrid::graded(1.0, 16, 2.0).unwrap();
        let u0 = random_solenoidal(g, 7, 0.5, &mut rng(seed));
        let y = free_evolution(&u0, &times).unwrap();
        let n: Vec<f64> = y.fields.iter().map(|f| f.l2_norm()).collect();
        prop_assert!(n.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
    }
}
