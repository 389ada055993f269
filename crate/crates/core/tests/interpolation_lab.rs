use katolab::estimates::{gaussian_vectors, DiagonalModel};
use katolab::interp::*;
use katolab::probes::rng;
use proptest::prelude::*;
use rand::Rng;

const INF: f64 = f64::INFINITY;

fn coordinate_norm(w0: &[f64], w1: &[f64], x: &[f64], theta: f64) -> f64 {
    w0.iter()
        .zip(w1)
        .zip(x)
        .map(|((a, b), v)| (a.powf(1.0 - theta) * b.powf(theta) * v).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn random_couple(seed: u64, d: usize) -> WeightedCouple {
    let mut r = rng(seed);
    let w0 = (0..d).map(|_| 10f64.powf(r.gen_range(-2.0..2.0))).collect();
    let w1 = (0..d).map(|_| 10f64.powf(r.gen_range(-2.0..2.0))).collect();
    WeightedCouple::new(w0, w1).unwrap()
}

#[test]
fn k_functional_limits() {
    let c = WeightedCouple::new(vec![2.0, 0.5, 3.0], vec![1.0, 4.0, 0.1]).unwrap();
    let x = [1.0, -2.0, 0.5];
    let w0 = coordinate_norm(c.w0(), c.w1(), &x, 0.0);
    assert!((k_functional(&c, &x, 1e9).unwrap() - w0).abs() < 1e-12);
    let mut last = 0.0;
    for t in [0.01, 0.1, 1.0, 10.0, 100.0] {
        let k = k_functional(&c, &x, t).unwrap();
        assert!(k >= last);
        last = k;
    }
    assert!(k_functional(&c, &x, 0.0).is_err());
}

#[test]
fn single_coordinate_closed_form() {
    let c = random_couple(3, 8);
    for i in [0, 3, 7] {
        let mut x = vec![0.0; 8];
        x[i] = -1.5;
        for (theta, p) in [(0.2, 1.0), (0.5, 2.0), (0.75, 6.0), (0.4, INF)] {
            let v = real_interp_norm(&c, &x, theta, p).unwrap();
            let e = interp_constant(theta, p) * c.w0()[i].powf(1.0 - theta) * c.w1()[i].powf(theta) * 1.5;
            assert!((v - e).abs() < 1e-6 * e, "{v} vs {e}");
        }
    }
}

#[test]
fn resolvent_and_semigroup_closed_forms() {
    for lambda in [1e-2, 1.0, 37.0] {
        let model = DiagonalModel::from_spectrum(vec![lambda]).unwrap();
        for (theta, p, m) in [(0.25, 1.0, 1), (0.5, 3.0, 1), (0.6, 2.0, 2), (0.3, INF, 1)] {
            let scale = lambda.powf(theta * m as f64);
            let r = resolvent_interp_norm(&model, &[1.0], theta, p, m).unwrap();
            let e = scale * resolvent_constant(theta, p, m);
            assert!((r - e).abs() < 1e-6 * e, "resolvent λ = {lambda}: {r} vs {e}");
            let s = semigroup_interp_norm(&model, &[1.0], theta, p, m).unwrap();
            let e = scale * semigroup_constant(theta, p, m);
            assert!((s - e).abs() < 1e-6 * e, "semigroup λ = {lambda}: {s} vs {e}");
        }
    }
}

#[test]
fn doubling_the_operator_rescales_the_resolvent_norm() {
    let model = DiagonalModel::random_log_uniform(32, 1e-2, 1e2, &mut rng(5)).unwrap();
    let doubled = DiagonalModel::from_spectrum(model.spectrum.iter().map(|l| 2.0 * l).collect()).unwrap();
    let x = &gaussian_vectors(32, 1, 6)[0];
    for (theta, p, m) in [(0.3, 1.0, 1), (0.5, 2.0, 2), (0.8, 4.0, 1)] {
        let a = resolvent_interp_norm(&model, x, theta, p, m).unwrap();
        let b = resolvent_interp_norm(&doubled, x, theta, p, m).unwrap();
        let factor = 2f64.powf(theta * m as f64);
        assert!((b / (a * factor) - 1.0).abs() < 1e-6, "{}", b / (a * factor));
    }
}

#[test]
fn p_two_forms_coincide_with_coordinate_norm() {
    // for p = 2 all three forms are diagonal in the coordinates
    let model = DiagonalModel::random_log_uniform(48, 1e-3, 1e3, &mut rng(8)).unwrap();
    let couple = WeightedCouple::homogeneous(&model.spectrum, 0, 1).unwrap();
    for x in gaussian_vectors(48, 5, 9) {
        let c = coordinate_norm(couple.w0(), couple.w1(), &x, 0.4);
        let r = normalized_resolvent_norm(&model, &x, 0.4, 2.0, 1).unwrap();
        let s = normalized_semigroup_norm(&model, &x, 0.4, 2.0, 1).unwrap();
        assert!((r / c - 1.0).abs() < 1e-6 && (s / c - 1.0).abs() < 1e-6, "{r} {s} {c}");
        let k = normalized_interp_norm(&couple, &x, 0.4, 2.0).unwrap();
        assert!(k / c <= 1.0 + 1e-9 && k / c >= 0.5, "{}", k / c);
    }
}

/// `[min, max]` of `a/b` over a family of models and probes.
fn interval(pairs: &[(f64, f64)]) -> (f64, f64) {
    pairs
        .iter()
        .map(|(a, b)| a / b)
        .fold((INF, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
}

#[test]
fn three_forms_are_equivalent_on_random_models() {
    for (theta, p) in [(0.3, 1.0), (0.7, INF)] {
        let mut kr = Vec::new();
        let mut ks = Vec::new();
        for seed in 0..10 {
            let model = DiagonalModel::random_log_uniform(64, 1e-3, 1e3, &mut rng(seed)).unwrap();
            let couple = WeightedCouple::homogeneous(&model.spectrum, 0, 1).unwrap();
            for x in gaussian_vectors(64, 2, 100 + seed) {
                let k = normalized_interp_norm(&couple, &x, theta, p).unwrap();
                kr.push((k, normalized_resolvent_norm(&model, &x, theta, p, 1).unwrap()));
                ks.push((k, normalized_semigroup_norm(&model, &x, theta, p, 1).unwrap()));
            }
        }
        for (lo, hi) in [interval(&kr), interval(&ks)] {
            assert!(lo > 0.25 && hi < 4.0, "θ = {theta}, p = {p}: [{lo}, {hi}]");
        }
    }
}

#[test]
fn m_one_and_m_two_norms_are_comparable() {
    // (X, Ẋ_2)_{θ/2,p} and (X, Ẋ_1)_{θ,p} name the same space
    let mut pairs = Vec::new();
    for seed in 0..6 {
        let model = DiagonalModel::random_log_uniform(64, 1e-3, 1e3, &mut rng(seed)).unwrap();
        for x in gaussian_vectors(64, 2, 50 + seed) {
            let one = normalized_resolvent_norm(&model, &x, 0.4, 1.0, 1).unwrap();
            let two = normalized_resolvent_norm(&model, &x, 0.2, 1.0, 2).unwrap();
            pairs.push((one, two));
        }
    }
    let (lo, hi) = interval(&pairs);
    assert!(lo > 0.5 && hi < 2.0, "[{lo}, {hi}]");
}

#[test]
fn degenerate_theta_approaches_endpoint_norms() {
    let couple = random_couple(12, 16);
    let x = &gaussian_vectors(16, 1, 13)[0];
    let w0 = coordinate_norm(couple.w0(), couple.w1(), x, 0.0);
    let w1 = coordinate_norm(couple.w0(), couple.w1(), x, 1.0);
    let err = |theta: f64, target: f64| (normalized_interp_norm(&couple, x, theta, 2.0).unwrap() / target - 1.0).abs();
    // the error is first order in θ and 1 − θ
    let (e2, e3) = (err(0.01, w0), err(0.001, w0));
    assert!(e2 < 0.1 && e3 < 0.2 * e2, "{e2} {e3}");
    let (e2, e3) = (err(0.99, w1), err(0.999, w1));
    assert!(e2 < 0.1 && e3 < 0.2 * e2, "{e2} {e3}");
}

#[test]
fn embedding_chain_examples() {
    let spectrum = [0.5, 3.0, 40.0];
    let r = check_embedding_chain(&spectrum, 0, 1, 2, &[vec![0.0, 2.0, 0.0]]).unwrap();
    assert!(r.passed);
    assert!((r.outer_ratio - 1.0).abs() < 1e-9 && (r.inner_ratio - 1.0).abs() < 1e-9, "{r:?}");
    let zero = check_embedding_chain(&spectrum, 0, 1, 2, &[vec![0.0; 3]]).unwrap();
    assert!(zero.passed && zero.outer_ratio == 0.0);
    assert!(check_embedding_chain(&spectrum, 1, 1, 2, &[]).is_err());
}

#[test]
fn embedding_chain_on_random_models() {
    for seed in 0..4 {
        let model = DiagonalModel::random_log_uniform(256, 1e-3, 1e3, &mut rng(seed)).unwrap();
        let probes = gaussian_vectors(256, 25, 200 + seed);
        for (k, j, m) in [(-2, 0, 2), (-1, 0, 1), (0, 1, 2), (-2, -1, 1)] {
            let r = check_embedding_chain(&model.spectrum, k, j, m, &probes).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}

#[test]
fn reiteration_examples() {
    // one coordinate: both sides are |x|
    let r = check_reiteration(&[5.0], 0.5, 1.0, 2.0, &[vec![-3.0]]).unwrap();
    assert!((r.min_ratio - 1.0).abs() < 1e-10 && (r.max_ratio - 1.0).abs() < 1e-10);
    let spectrum: Vec<f64> = (0..12).map(|i| 4f64.powi(i)).collect();
    let aligned = check_reiteration(&spectrum, 0.5, 1.0, 2.0, &[{
        let mut e = vec![0.0; 12];
        e[5] = 1.0;
        e
    }])
    .unwrap();
    assert!((aligned.max_ratio - 1.0).abs() < 1e-10);
    let r = check_reiteration(&spectrum, 0.5, 1.0, 2.0, &gaussian_vectors(12, 40, 4)).unwrap();
    assert!(r.min_ratio > 0.5 && r.max_ratio < 2.0, "{r:?}");
}

#[test]
fn reiteration_is_stable_under_dimension_doubling() {
    let run = |d: usize| {
        let model = DiagonalModel::random_log_uniform(d, 1e-3, 1e3, &mut rng(d as u64)).unwrap();
        check_reiteration(&model.spectrum, 0.5, 1.0, 2.0, &gaussian_vectors(d, 6, 1)).unwrap()
    };
    let (a, b) = (run(32), run(64));
    assert!(b.max_ratio / a.max_ratio < 2.0 && a.min_ratio / b.min_ratio < 2.0, "{a:?} {b:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn k_functional_is_concave(seed in 0u64..1000, t1 in 0.01f64..100.0, t2 in 0.01f64..100.0) {
        let c = random_couple(seed, 12);
        let x = &gaussian_vectors(12, 1, seed)[0];
        let mid = k_functional(&c, x, 0.5 * (t1 + t2)).unwrap();
        let avg = 0.5 * (k_functional(&c, x, t1).unwrap() + k_functional(&c, x, t2).unwrap());
        // concave up to the √2 equivalence with the exact K-functional
        prop_assert!(mid * 2f64.sqrt() >= avg * (1.0 - 1e-12));
    }

    #[test]
    fn normalized_norm_increases_in_theta(seed in 0u64..1000, a in 0.05f64..0.9, da in 0.01f64..0.09) {
        let d = 10;
        let mut r = rng(seed);
        let w0: Vec<f64> = (0..d).map(|_| 10f64.powf(r.gen_range(-2.0..2.0))).collect();
        let w1: Vec<f64> = w0.iter().map(|w| w * 10f64.powf(r.gen_range(0.0..3.0))).collect();
        let c = WeightedCouple::new(w0, w1).unwrap();
        let x = &gaussian_vectors(d, 1, seed)[0];
        for p in [1.0, 2.0, INF] {
            let lo = normalized_interp_norm(&c, x, a, p).unwrap();
            let hi = normalized_interp_norm(&c, x, a + da, p).unwrap();
            prop_assert!(hi >= lo * (1.0 - 1e-9), "p = {}: {} < {}", p, hi, lo);
        }
    }

    #[test]
    fn normalized_norm_decreases_in_p(seed in 0u64..1000, theta in 0.1f64..0.9) {
        let c = random_couple(seed, 10);
        let x = &gaussian_vectors(10, 1, seed)[0];
        let mut last = INF;
        for p in [1.0, 1.5, 2.0, 4.0, 8.0, INF] {
            let v = normalized_interp_norm(&c, x, theta, p).unwrap();
            prop_assert!(v <= last * (1.0 + 1e-9), "p = {}: {} > {}", p, v, last);
            last = v;
        }
    }
}
