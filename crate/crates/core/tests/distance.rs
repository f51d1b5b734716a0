use distmfa::{
    decompose_distance, distributional_variance, frechet_mean, histogram_from_samples, wasserstein_sq_closed,
    wasserstein_sq_integral, EquiDepthHistogram, Histogram, QuantileFunction,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

fn random_bounds(rng: &mut ChaCha8Rng, s: usize) -> Vec<f64> {
    let mut b = vec![rng.random_range(-10.0..10.0)];
    for _ in 0..s {
        let step = if rng.random_bool(0.1) { 0.0 } else { rng.random_range(0.0..3.0) };
        b.push(b[b.len() - 1] + step);
    }
    b
}

/// Piecewise linear quantile function through `(l/s, bounds[l])`.
fn equi_depth_qf(bounds: &[f64], t: f64) -> f64 {
    let s = (bounds.len() - 1) as f64;
    let l = ((t * s).floor() as usize).min(bounds.len() - 2);
    let frac = t * s - l as f64;
    bounds[l] + frac * (bounds[l + 1] - bounds[l])
}

/// Simpson's rule on every `[l/s, (l+1)/s]`; exact for the quadratic integrand.
fn simpson_distance(a: &[f64], b: &[f64]) -> f64 {
    let s = a.len() - 1;
    let h = 1.0 / s as f64;
    (0..s)
        .map(|l| {
            let t0 = l as f64 * h;
            let eps = 1e-15;
            let d0 = equi_depth_qf(a, t0 + eps) - equi_depth_qf(b, t0 + eps);
            let dm = equi_depth_qf(a, t0 + h / 2.0) - equi_depth_qf(b, t0 + h / 2.0);
            let d1 = a[l + 1] - b[l + 1];
            h / 6.0 * (d0 * d0 + 4.0 * dm * dm + d1 * d1)
        })
        .sum()
}

fn knots(bounds: &[f64]) -> QuantileFunction<f64> {
    let s = bounds.len() - 1;
    QuantileFunction::from_knots((0..=s).map(|l| l as f64 / s as f64).collect(), bounds).unwrap()
}

#[test]
fn closed_form_matches_integral_and_simpson_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let s = rng.random_range(2..=50);
        let (ba, bb) = (random_bounds(&mut rng, s), random_bounds(&mut rng, s));
        let (a, b) = (
            EquiDepthHistogram::from_bounds(&ba).unwrap(),
            EquiDepthHistogram::from_bounds(&bb).unwrap(),
        );
        let closed = wasserstein_sq_closed(&a, &b).unwrap();
        let integral = wasserstein_sq_integral(&a.quantile_function(), &b.quantile_function());
        let oracle = simpson_distance(&ba, &bb);
        assert!((closed - integral).abs() <= 1e-10 * closed.max(1e-300), "{closed} vs {integral}");
        assert!((closed - oracle).abs() <= 1e-9 * oracle.max(1.0), "{closed} vs oracle {oracle}");
    }
}

#[test]
fn integral_of_unequal_histograms_matches_fine_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let hist = |rng: &mut ChaCha8Rng| {
            let s = rng.random_range(1..8);
            let bounds = random_bounds(rng, s);
            let mut weights: Vec<f64> = (0..s).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            Histogram::from_bounds(&bounds, &weights).unwrap()
        };
        let (f, g) = (hist(&mut rng).quantile_function(), hist(&mut rng).quantile_function());
        let n = 200_000;
        let numeric: f64 = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                (f.eval(t) - g.eval(t)).powi(2)
            })
            .sum::<f64>()
            / n as f64;
        let exact = wasserstein_sq_integral(&f, &g);
        assert!((exact - numeric).abs() < 1e-6 * exact.max(1.0), "{exact} vs {numeric}");
    }
}

#[test]
fn gaussian_pair_decomposes_into_location_and_scale() {
    let n = 1000;
    let levels: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let std_normal = Normal::new(0.0, 1.0).unwrap();
    let z: Vec<f64> = levels
        .iter()
        .map(|&t| std_normal.inverse_cdf(t.clamp(0.5 / n as f64, 1.0 - 0.5 / n as f64)))
        .collect();
    let f = QuantileFunction::from_knots(levels.clone(), &z).unwrap();
    let shifted: Vec<f64> = z.iter().map(|&v| 2.0 + 2.0 * v).collect();
    let g = QuantileFunction::from_knots(levels, &shifted).unwrap();
    let d = decompose_distance(&f, &g);
    // Analytic: (0 - 2)^2, (1 - 2)^2 and no shape term since rho = 1.
    assert!((3.9..=4.1).contains(&d.location), "{d:?}");
    assert!((0.95..=1.05).contains(&d.scale), "{d:?}");
    assert!(d.shape <= 0.02, "{d:?}");
    assert!((d.total() - wasserstein_sq_integral(&f, &g)).abs() < 1e-9);
}

#[test]
fn barycenter_beats_random_perturbations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let s = rng.random_range(2..12);
        let n = rng.random_range(2..9);
        let data: Vec<EquiDepthHistogram<f64>> = (0..n)
            .map(|_| EquiDepthHistogram::from_bounds(&random_bounds(&mut rng, s)).unwrap())
            .collect();
        let mean = frechet_mean(&data).unwrap();
        let cost = |c: &EquiDepthHistogram<f64>| -> f64 {
            data.iter().map(|h| wasserstein_sq_closed(h, c).unwrap()).sum()
        };
        let best = cost(&mean);
        assert!((best / n as f64 - distributional_variance(&data).unwrap()).abs() < 1e-12 * best.max(1.0));
        for _ in 0..100 {
            let centers: Vec<f64> = mean.centers().iter().map(|c| c + rng.random_range(-0.1..0.1)).collect();
            let radii: Vec<f64> = mean.radii().iter().map(|r| (r + rng.random_range(-0.05..0.05)).max(0.0)).collect();
            let Ok(tweak) = EquiDepthHistogram::new(centers, radii) else { continue };
            assert!(cost(&tweak) >= best - 1e-12, "perturbation lowered the cost");
        }
    }
}

#[test]
fn samples_histogram_brackets_the_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let values: Vec<f64> = (0..1000).map(|_| rng.random_range(-3.0..7.0)).collect();
    let h = histogram_from_samples(&values, 20).unwrap();
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert_eq!((h.lower(0), h.upper(19)), (lo, hi));
}

fn bounds_strategy(s: usize) -> impl Strategy<Value = Vec<f64>> {
    (-50.0..50.0f64, prop::collection::vec(0.0..5.0f64, s)).prop_map(|(start, steps)| {
        let mut b = vec![start];
        for st in steps {
            b.push(b[b.len() - 1] + st);
        }
        b
    })
}

fn triple() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Vec<f64>)> {
    (1usize..20).prop_flat_map(|s| (bounds_strategy(s), bounds_strategy(s), bounds_strategy(s)))
}

proptest! {
    #[test]
    fn distance_is_a_metric((a, b, c) in triple()) {
        let (a, b, c) = (knots(&a), knots(&b), knots(&c));
        let d = |x: &QuantileFunction<f64>, y: &QuantileFunction<f64>| wasserstein_sq_integral(x, y).sqrt();
        prop_assert!(d(&a, &a) <= 1e-12);
        prop_assert!((d(&a, &b) - d(&b, &a)).abs() <= 1e-9 * d(&a, &b).max(1.0));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-9);
    }

    #[test]
    fn closed_equals_integral((a, b, _c) in triple()) {
        let (ha, hb) = (EquiDepthHistogram::from_bounds(&a).unwrap(), EquiDepthHistogram::from_bounds(&b).unwrap());
        let closed = wasserstein_sq_closed(&ha, &hb).unwrap();
        let integral = wasserstein_sq_integral(&knots(&a), &knots(&b));
        prop_assert!((closed - integral).abs() <= 1e-10 * closed.max(1e-9));
    }

    #[test]
    fn decomposition_sums_to_distance((a, b, _c) in triple()) {
        let (f, g) = (knots(&a), knots(&b));
        let d = decompose_distance(&f, &g);
        let total = wasserstein_sq_integral(&f, &g);
        prop_assert!((d.total() - total).abs() <= 1e-9 * total.max(1.0), "{:?} vs {}", d, total);
        prop_assert!(d.location >= 0.0 && d.scale >= 0.0 && d.shape >= 0.0);
        prop_assert!((-1.0..=1.0).contains(&d.correlation));
    }

    #[test]
    fn translation_moves_only_location((a, b, _c) in triple(), shift in -20.0..20.0f64) {
        let ha = EquiDepthHistogram::from_bounds(&a).unwrap();
        let hb = EquiDepthHistogram::from_bounds(&b).unwrap();
        let before = wasserstein_sq_closed(&ha, &hb).unwrap();
        let after = wasserstein_sq_closed(&ha.translate(shift), &hb.translate(shift)).unwrap();
        prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
        let d = decompose_distance(&ha.quantile_function(), &ha.translate(shift).quantile_function());
        prop_assert!((d.location - shift * shift).abs() <= 1e-9 * (shift * shift).max(1.0));
        prop_assert!(d.scale <= 1e-9 && d.shape <= 1e-8 * (1.0 + a[a.len() - 1].abs()));
    }
}
