//! Ensemble behaviour of the counting-and-fitting pipeline: estimator
//! bias, χ² calibration, and the 1/√duration error law.

use triphoton_core::experiment::{fit_fringe, simulate_counts};
use triphoton_core::schemes::{phase_grid, FringeMeta, FringeSeries, SchemeKind};

fn reference_curve(points: usize, v3: f64, v1: f64) -> FringeSeries {
    let phases = phase_grid(0.0, std::f64::consts::TAU, points);
    let values: Vec<f64> = phases
        .iter()
        .map(|&phi| 1.0 + v3 * (3.0 * phi).cos() + v1 * phi.cos())
        .collect();
    FringeSeries::new(
        phases,
        values,
        FringeMeta {
            scheme: SchemeKind::AsymmetricSplitter,
            normalization: "unit-mean model".to_string(),
            photon_number: 3,
        },
    )
    .unwrap()
}

/// Mean and standard error of a sample.
fn mean_se(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn ensemble_recovers_injected_visibility_without_bias() {
    // Bench-scale statistics: 25 points, 100 s each, mean level 184
    // counts, background 1.2/s.
    let injected_v3 = 0.85;
    let curve = reference_curve(25, injected_v3, 0.05);
    let runs = 500;
    let mut v3_estimates = Vec::with_capacity(runs);
    let mut chi2_over_dof = Vec::with_capacity(runs);
    for seed in 0..runs as u64 {
        let records = simulate_counts(&curve, 1.84, 100.0, 1.2, seed).unwrap();
        let fit = fit_fringe(&records, &[1, 3]).unwrap();
        v3_estimates.push(fit.v3);
        chi2_over_dof.push(fit.chi2 / fit.dof as f64);
    }
    let (v3_mean, v3_se) = mean_se(&v3_estimates);
    assert!(
        (v3_mean - injected_v3).abs() < 2.0 * v3_se,
        "bias {:.5} exceeds 2·SE {:.5}",
        v3_mean - injected_v3,
        v3_se
    );
    let (chi2_mean, _) = mean_se(&chi2_over_dof);
    assert!(
        (chi2_mean - 1.0).abs() < 0.10,
        "mean χ²/dof {chi2_mean} strays from 1"
    );
}

#[test]
fn error_shrinks_with_the_square_root_of_duration() {
    let curve = reference_curve(25, 0.85, 0.05);
    let rms_error = |duration: f64| {
        let runs = 120;
        let mut total = 0.0;
        for seed in 1000..1000 + runs as u64 {
            let records = simulate_counts(&curve, 1.84, duration, 1.2, seed).unwrap();
            let fit = fit_fringe(&records, &[1, 3]).unwrap();
            total += (fit.v3 - 0.85) * (fit.v3 - 0.85);
        }
        (total / runs as f64).sqrt()
    };
    let short = rms_error(100.0);
    let long = rms_error(10_000.0);
    let shrink = short / long;
    // 100× the duration should shrink the error by about 10×.
    assert!(
        (5.0..20.0).contains(&shrink),
        "error shrink factor {shrink} is far from √100"
    );
    // And the estimates converge to the injected value.
    assert!(long < 0.005, "long-duration RMS error {long} too large");
}

#[test]
fn fitted_uncertainty_matches_ensemble_scatter() {
    let curve = reference_curve(25, 0.85, 0.05);
    let runs = 200;
    let mut estimates = Vec::with_capacity(runs);
    let mut predicted = Vec::with_capacity(runs);
    for seed in 500..500 + runs as u64 {
        let records = simulate_counts(&curve, 1.84, 100.0, 1.2, seed).unwrap();
        let fit = fit_fringe(&records, &[1, 3]).unwrap();
        estimates.push(fit.v3);
        predicted.push(fit.v3_sigma().unwrap());
    }
    let (_, se) = mean_se(&estimates);
    let scatter = se * (runs as f64).sqrt();
    let (sigma_mean, _) = mean_se(&predicted);
    let ratio = sigma_mean / scatter;
    assert!(
        (0.7..1.4).contains(&ratio),
        "covariance-predicted σ {sigma_mean} vs ensemble scatter {scatter}"
    );
}
