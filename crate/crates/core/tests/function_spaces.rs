use katolab::probes::{random_field, rng};
use katolab::spaces::*;
use katolab::spectral::{fractional_laplacian, Grid, SpectralField};
use katolab::Error;
use proptest::prelude::*;
use rustfft::num_complex::Complex64;
use std::f64::consts::PI;

fn constant(g: Grid, c: f64) -> SpectralField {
    SpectralField::from_fn(g, 1, |_| vec![c])
}

fn mode(g: Grid, k: &[i64]) -> SpectralField {
    let mut f = SpectralField::zeros(g, 1);
    let neg: Vec<i64> = k.iter().map(|v| -v).collect();
    f.set_coefficient(0, k, Complex64::new(0.5, 0.0));
    f.set_coefficient(0, &neg, Complex64::new(0.5, 0.0));
    f
}

/// Zero-mean smooth probe at a fixed physical scale: `∂₁` of a periodised Gaussian.
fn gaussian_derivative(g: Grid, width: f64) -> SpectralField {
    SpectralField::from_spectrum(g, 1, |k| {
        let k2 = k.iter().map(|&a| (a * a) as f64).sum::<f64>();
        vec![Complex64::new(0.0, k[0] as f64) * (-0.5 * width * width * k2).exp()]
    })
}

fn drift(values: &[f64]) -> f64 {
    let hi = values.iter().cloned().fold(f64::MIN, f64::max);
    let lo = values.iter().cloned().fold(f64::MAX, f64::min);
    hi / lo
}

#[test]
fn lebesgue_examples() {
    let g = Grid::new(2, 32).unwrap();
    let c = constant(g, -3.0);
    for q in [1.0, 2.0, 6.0] {
        let expect = 3.0 * (2.0 * PI).powf(2.0 / q);
        assert!((lebesgue_norm(&c, q).unwrap() - expect).abs() < 1e-12 * expect);
        assert!((weak_lebesgue_norm(&c, q).unwrap() - expect).abs() < 1e-12 * expect);
    }
    assert!((lebesgue_norm(&c, f64::INFINITY).unwrap() - 3.0).abs() < 1e-12);
    let s = SpectralField::from_fn(g, 1, |x| vec![x[0].sin()]);
    assert!((lebesgue_norm(&s, 2.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
    let a = lebesgue_norm(&s.scale(-2.5), 3.0).unwrap();
    assert!((a - 2.5 * lebesgue_norm(&s, 3.0).unwrap()).abs() < 1e-12 * a);
    assert!(matches!(lebesgue_norm(&s, 0.5), Err(Error::Domain(_))));
}

#[test]
fn weak_norm_of_critical_power_stays_bounded_while_strong_norm_grows() {
    let (n, q) = (2usize, 4.0);
    let mut weak = Vec::new();
    let mut strong = Vec::new();
    for modes in [32usize, 64, 128, 256] {
        let g = Grid::new(n, modes).unwrap();
        let h = g.spacing();
        // singularity at a cell centre so no sample hits it
        let f = SpectralField::from_fn(g, 1, |x| {
            let r2: f64 = x
                .iter()
                .map(|&xi| {
                    let d = (xi - PI - 0.5 * h).rem_euclid(2.0 * PI);
                    let d = d.min(2.0 * PI - d);
                    d * d
                })
                .sum();
            vec![r2.powf(-(n as f64) / (2.0 * q))]
        });
        weak.push(weak_lebesgue_norm(&f, q).unwrap());
        strong.push(lebesgue_norm(&f, q).unwrap());
    }
    assert!(drift(&weak) < 1.1, "{weak:?}");
    assert!(strong.windows(2).all(|w| w[1] > w[0] * 1.01), "{strong:?}");
}

#[test]
fn littlewood_paley_splits_single_modes() {
    let g = Grid::new(2, 32).unwrap();
    let weight = |f: &SpectralField, k: &[i64]| -> Vec<(i32, f64)> {
        littlewood_paley(f)
            .blocks
            .iter()
            .map(|(j, b)| (*j, b.coefficient(0, k).re / 0.5))
            .filter(|(_, w)| *w != 0.0)
            .collect()
    };
    assert_eq!(weight(&mode(g, &[3, 0]), &[3, 0]), vec![(1, 0.5), (2, 0.5)]);
    let w4 = weight(&mode(g, &[4, 0]), &[4, 0]);
    assert_eq!(w4, vec![(2, 1.0)]);
    let split = (-4.0f64 / 3.0).exp() / ((-4.0f64 / 3.0).exp() + (-4.0f64).exp());
    let w5 = weight(&mode(g, &[3, 4]), &[3, 4]);
    assert_eq!(w5.len(), 2);
    assert!((w5[0].1 - split).abs() < 1e-15 && w5[0].0 == 2);
    assert!((w5[1].1 - (1.0 - split)).abs() < 1e-15 && w5[1].0 == 3);
}

#[test]
fn annulus_support_touches_at_most_two_blocks() {
    let g = Grid::new(2, 64).unwrap();
    let f = SpectralField::from_spectrum(g, 1, |k| {
        let r = (k.iter().map(|&a| (a * a) as f64).sum::<f64>()).sqrt();
        vec![Complex64::new(if r > 8.0 && r < 16.0 { 1.0 } else { 0.0 }, 0.0)]
    });
    let live: Vec<i32> = littlewood_paley(&f)
        .blocks
        .iter()
        .filter(|(_, b)| b.l2_norm() > 0.0)
        .map(|(j, _)| *j)
        .collect();
    assert_eq!(live, vec![3, 4]);
}

#[test]
fn blocks_reconstruct_mean_zero_fields() {
    for (n, modes) in [(2usize, 32usize), (3, 16)] {
        let g = Grid::new(n, modes).unwrap();
        let f = random_field(g, n, 100, 0.0, &mut rng(7));
        let r = littlewood_paley(&f).reconstruct().unwrap();
        assert!(r.sub(&f).unwrap().l2_norm() <= 1e-10 * f.l2_norm());
        let r = littlewood_paley_inhomogeneous(&f.add(&constant_vector(g, 1.0)).unwrap()).reconstruct().unwrap();
        assert!(r.sub(&f.add(&constant_vector(g, 1.0)).unwrap()).unwrap().l2_norm() <= 1e-10 * f.l2_norm());
    }
}

fn constant_vector(g: Grid, c: f64) -> SpectralField {
    SpectralField::from_fn(g, g.n, |_| vec![c; g.n])
}

#[test]
fn besov_of_a_single_block() {
    let g = Grid::new(2, 32).unwrap();
    let f = mode(g, &[4, 0]);
    for (s, q, p) in [(0.5, 2.0, 1.0), (-1.0, 4.0, f64::INFINITY), (0.25, f64::INFINITY, 2.0)] {
        let b = besov_norm(&f, s, InnerNorm::Lebesgue(q), p, true).unwrap();
        let expect = 4f64.powf(s) * lebesgue_norm(&f, q).unwrap();
        assert!((b - expect).abs() < 1e-12 * expect);
    }
    let mut with_mean = f.clone();
    with_mean.set_coefficient(0, &[0, 0], Complex64::new(1.0, 0.0));
    assert!(matches!(
        besov_norm(&with_mean, 0.0, InnerNorm::Lebesgue(2.0), 2.0, true),
        Err(Error::ZeroMode(_))
    ));
}

#[test]
fn plancherel_besov_constant() {
    // Σ_j ψ_j² lies in [1/2, 1] pointwise, so B^0_{2,2} / L² lies in [1/√2, 1]
    for seed in 0..20 {
        let g = Grid::new(2, 32).unwrap();
        let f = random_field(g, 2, 15, 0.0, &mut rng(seed));
        let r = besov_norm(&f, 0.0, InnerNorm::Lebesgue(2.0), 2.0, true).unwrap() / lebesgue_norm(&f, 2.0).unwrap();
        assert!(r >= 0.5f64.sqrt() - 1e-12 && r <= 1.0 + 1e-12, "{r}");
    }
}

#[test]
fn lifting_shifts_smoothness_within_the_overlap_factor() {
    let g = Grid::new(2, 32).unwrap();
    let f = random_field(g, 1, 15, 0.0, &mut rng(11));
    for sigma in [-1.0, 0.5, 2.0] {
        let lifted = fractional_laplacian(&f, sigma / 2.0).unwrap();
        let a = besov_norm(&lifted, 0.3, InnerNorm::Lebesgue(3.0), 2.0, true).unwrap();
        let b = besov_norm(&f, 0.3 + sigma, InnerNorm::Lebesgue(3.0), 2.0, true).unwrap();
        let bound = 2f64.powf(sigma.abs());
        assert!(a / b <= bound && b / a <= bound, "σ = {sigma}: {}", a / b);
    }
}

#[test]
fn hoelder_norm_of_low_mode() {
    let g = Grid::new(2, 32).unwrap();
    let f = SpectralField::from_fn(g, 1, |x| vec![x[0].cos()]);
    // |k| = 1 sits entirely in S_0
    assert!((hoelder_norm(&f, 0.5).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn morrey_constants_and_monotonicity() {
    let g = Grid::new(2, 32).unwrap();
    let c = constant(g, 2.0);
    for (q, lambda) in [(2.0, 0.5), (4.0, 0.5), (3.0, 2.0 / 3.0)] {
        let m = morrey_norm(&c, q, lambda).unwrap();
        assert!((m - 2.0 * (2.0 * PI).powf(lambda)).abs() < 1e-10 * m);
    }
    let mut cell = vec![0.0; g.len()];
    cell[g.len() / 3] = 1.0;
    let values: Vec<f64> = [0.1, 0.3, 0.6, 1.0]
        .iter()
        .map(|&l| morrey_norm_of_samples(g, &cell, 2.0, l).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    assert!(matches!(morrey_norm(&c, 2.0, 1.5), Err(Error::Domain(_))));
}

#[test]
fn morrey_at_the_top_exponent_dominates_lebesgue() {
    // the largest ball covers the torus, so the ratio is at least 1; the
    // upper end is calibrated on this corpus
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let g = Grid::new(2, 32).unwrap();
        let f = random_field(g, 1, 10, 1.0, &mut rng(seed));
        ratios.push(morrey_norm(&f, 4.0, 0.5).unwrap() / lebesgue_norm(&f, 4.0).unwrap());
    }
    let g = Grid::new(2, 64).unwrap();
    ratios.push(morrey_norm(&gaussian_derivative(g, 0.3), 4.0, 0.5).unwrap() / lebesgue_norm(&gaussian_derivative(g, 0.3), 4.0).unwrap());
    assert!(ratios.iter().all(|&r| (1.0 - 1e-12..=1.6).contains(&r)), "{ratios:?}");
}

#[test]
fn weak_besov_embedding_constant_is_stable_under_refinement() {
    // B^{−1−n/q}_{(q,∞),∞} against ‖(−Δ)^{−1/2} f‖ in weak L^{q/2}
    let (n, q) = (2usize, 4.0);
    for width in [0.2, 0.4] {
        let ratios: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&m| {
                let f = gaussian_derivative(Grid::new(n, m).unwrap(), width);
                let b = besov_norm(&f, -1.0 - n as f64 / q, InnerNorm::Weak(q), f64::INFINITY, true).unwrap();
                b / hom_sobolev_norm(&f, -1.0, q / 2.0, true).unwrap()
            })
            .collect();
        assert!(drift(&ratios) < 2.0, "{ratios:?}");
    }
}

#[test]
fn weak_lebesgue_sits_between_weak_besov_norms() {
    let q = 3.0;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for m in [32usize, 64, 128] {
        let f = gaussian_derivative(Grid::new(2, m).unwrap(), 0.25);
        let w = weak_lebesgue_norm(&f, q).unwrap();
        let b_inf = besov_norm(&f, 0.0, InnerNorm::Weak(q), f64::INFINITY, true).unwrap();
        let b_one = besov_norm(&f, 0.0, InnerNorm::Weak(q), 1.0, true).unwrap();
        lower.push(w / b_inf);
        upper.push(b_one / w);
    }
    assert!(lower.iter().chain(&upper).all(|&r| r > 0.2), "{lower:?} {upper:?}");
    assert!(drift(&lower) < 2.0 && drift(&upper) < 2.0);
}

#[test]
fn riesz_potential_is_bounded_between_morrey_spaces() {
    // 1/r = 1/p − s/(νp), target exponent νp/r
    let (p, nu, s) = (2.0, 0.8, 0.5);
    let r = 1.0 / (1.0 / p - s / (nu * p));
    for width in [0.2, 0.35] {
        let ratios: Vec<f64> = [32usize, 64, 128]
            .iter()
            .map(|&m| {
                let f = gaussian_derivative(Grid::new(2, m).unwrap(), width);
                let lifted = fractional_laplacian(&f, -s / 2.0).unwrap();
                morrey_norm(&lifted, r, nu * p / r).unwrap() / morrey_norm(&f, p, nu).unwrap()
            })
            .collect();
        assert!(drift(&ratios) < 2.0, "{ratios:?}");
    }
}

#[test]
fn tags_dispatch_and_report() {
    let g = Grid::new(2, 32).unwrap();
    let f = random_field(g, 2, 10, 1.0, &mut rng(5));
    let tag = SpaceTag::Morrey { q: 4.0, lambda: 0.5 };
    let rep = norm_report(&f, &tag).unwrap();
    assert_eq!(rep.value, morrey_norm(&f, 4.0, 0.5).unwrap());
    let tag = SpaceTag::HomSobolev { s: -1.0, q: 2.0, weak: false };
    assert_eq!(space_norm(&f, &tag).unwrap(), hom_sobolev_norm(&f, -1.0, 2.0, false).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn weak_never_exceeds_strong(seed in 0u64..10_000, q in 1.0f64..8.0) {
        let f = random_field(Grid::new(2, 16).unwrap(), 2, 7, 0.0, &mut rng(seed));
        prop_assert!(weak_lebesgue_norm(&f, q).unwrap() <= lebesgue_norm(&f, q).unwrap() * (1.0 + 1e-14));
    }

    #[test]
    fn besov_summation_is_monotone(seed in 0u64..10_000, s in -1.0f64..1.0, p1 in 1.0f64..4.0, dp in 0.0f64..4.0) {
        let f = random_field(Grid::new(2, 16).unwrap(), 1, 7, 0.0, &mut rng(seed));
        let a = besov_norm(&f, s, InnerNorm::Lebesgue(2.0), p1, true).unwrap();
        let b = besov_norm(&f, s, InnerNorm::Lebesgue(2.0), p1 + dp, true).unwrap();
        let c = besov_norm(&f, s, InnerNorm::Lebesgue(2.0), f64::INFINITY, true).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-14) && c <= b * (1.0 + 1e-14));
    }

    #[test]
    fn norms_are_homogeneous(seed in 0u64..10_000, c in -5.0f64..5.0) {
        let f = random_field(Grid::new(2, 16).unwrap(), 2, 7, 0.0, &mut rng(seed));
        for tag in [
            SpaceTag::Lq { q: 3.0 },
            SpaceTag::WeakLq { q: 3.0 },
            SpaceTag::HomBesov { s: -0.5, q: 4.0, p: 2.0 },
            SpaceTag::Morrey { q: 2.0, lambda: 0.5 },
        ] {
            let a = space_norm(&f.scale(c), &tag).unwrap();
            let b = c.abs() * space_norm(&f, &tag).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }
    }
}
