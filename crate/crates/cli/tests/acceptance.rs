//! Acceptance suite: one test per headline criterion, each printing a
//! PASS/FAIL line (run with `--nocapture` to see them all).

use std::time::Instant;

use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triphoton_core::experiment::{fit_fringe, simulate_counts};
use triphoton_core::schemes::{
    asym_fringe, harmonic_magnitude, heralded_input, noon_fringe, noon_projection_prob,
    noon_projection_via_circuit, phase_grid, FringeMeta,
};
use triphoton_core::spectral::{
    overlap_integrals, p4_asym, p4_noon, permutation_overlap_p4, rate_ratio, visibilities,
    GaussHermite, GridSpec, OverlapIntegrals, SchemeCoefficients, SpectralModel,
};
use triphoton_core::{
    BsConvention, FockVector, FringeSeries, ModeLabel, ModeTransform, PureState, SchemeKind,
};

fn criterion(number: u32, description: &str, body: impl FnOnce() + std::panic::UnwindSafe) {
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("ACCEPTANCE {number} [PASS] {description}"),
        Err(panic) => {
            println!("ACCEPTANCE {number} [FAIL] {description}");
            std::panic::resume_unwind(panic);
        }
    }
}

const TAU: f64 = std::f64::consts::TAU;

#[test]
fn acceptance_1_splitter_amplitudes() {
    criterion(
        1,
        "asymmetric-splitter amplitudes on |2,1> within 1e-12, < 1 ms",
        || {
            let a = ModeLabel::h("a");
            let b = ModeLabel::h("b");
            let bs = ModeTransform::beamsplitter(
                a.clone(),
                b.clone(),
                1.0 / 3.0,
                BsConvention::NegativeReflection,
            )
            .unwrap();
            let input = PureState::ket([(a.clone(), 2), (b.clone(), 1)]);
            let _warmup = bs.apply(&input).unwrap();
            let start = Instant::now();
            let out = bs.apply(&input).unwrap();
            let elapsed = start.elapsed();
            let pattern = |na: u32, nb: u32| FockVector::new([(a.clone(), na), (b.clone(), nb)]);
            let expected = [
                (pattern(3, 0), 2.0_f64.sqrt() / 3.0),
                (pattern(0, 3), 2.0 / 3.0),
                (pattern(2, 1), -(3.0_f64.sqrt()) / 3.0),
                (pattern(1, 2), 0.0),
            ];
            for (pattern, reference) in expected {
                let amp = out.amplitude(&pattern);
                assert!(
                    (amp.re - reference).abs() < 1e-12 && amp.im.abs() < 1e-12,
                    "pattern {pattern}: {amp} vs {reference}"
                );
            }
            assert!(
                elapsed.as_micros() < 1000,
                "apply took {elapsed:?}, budget 1 ms"
            );
        },
    );
}

#[test]
fn acceptance_2_asym_fringe_law() {
    criterion(
        2,
        "25-point fringe equals (32/81)(1+cos3phi); only DC and 3phi harmonics",
        || {
            let grid = phase_grid(0.0, TAU, 25);
            let series = asym_fringe(&grid).unwrap();
            for (&phi, &value) in series.phases().iter().zip(series.values()) {
                let law = 32.0 / 81.0 * (1.0 + (3.0 * phi).cos());
                assert!((value - law).abs() < 1e-10, "phi {phi}: {value} vs {law}");
            }
            for k in 0..=12u32 {
                let magnitude = harmonic_magnitude(series.phases(), series.values(), k);
                if k == 0 || k == 3 {
                    assert!(magnitude > 1e-10, "harmonic {k} should be present");
                } else {
                    assert!(magnitude < 1e-10, "harmonic {k} leaks {magnitude}");
                }
            }
        },
    );
}

#[test]
fn acceptance_3_noon_projection() {
    criterion(
        3,
        "NOON projection: orthogonal |2,1>, circuit equivalence, extrema {0, 1/24}",
        || {
            // (a) exact zero for the unrotated input.
            assert_eq!(noon_projection_prob(&heralded_input()).unwrap(), 0.0);

            // (b) circuit versus overlap projection over 50 random states.
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
            let mut gaussian = move || {
                let u1 = ((rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64).max(1e-300);
                let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
                (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos()
            };
            let h = ModeLabel::h("s");
            let v = ModeLabel::v("s");
            for round in 0..50 {
                let terms: Vec<(FockVector, Complex64)> = (0..4)
                    .map(|k| {
                        (
                            FockVector::new(vec![(h.clone(), 3 - k), (v.clone(), k)]),
                            Complex64::new(gaussian(), gaussian()),
                        )
                    })
                    .collect();
                let state = PureState::superposition(terms).unwrap();
                let projected = noon_projection_prob(&state).unwrap();
                let circuit = noon_projection_via_circuit(&state).unwrap();
                assert!(
                    (projected - circuit).abs() < 1e-10,
                    "round {round}: {projected} vs {circuit}"
                );
            }

            // (c) fringe extrema of the rotated state.
            let peak = noon_fringe(&[0.0]).unwrap().values()[0];
            let zero = noon_fringe(&[std::f64::consts::FRAC_PI_3])
                .unwrap()
                .values()[0];
            assert!((peak - 1.0 / 24.0).abs() < 1e-10, "peak {peak}");
            assert!(zero.abs() < 1e-10, "zero {zero}");
            let dense = phase_grid(0.0, TAU, 240);
            let series = noon_fringe(&dense).unwrap();
            for &value in series.values() {
                assert!((-1e-10..=1.0 / 24.0 + 1e-10).contains(&value));
            }
        },
    );
}

#[test]
fn acceptance_4_visibility_formulas() {
    criterion(
        4,
        "visibilities at E/A=0.86, v1=0.96 and at the E=A ideal",
        || {
            let ov = OverlapIntegrals::from_ratio(0.86, 0.96).unwrap();
            let asym = visibilities(&ov, SchemeKind::AsymmetricSplitter);
            let noon = visibilities(&ov, SchemeKind::NoonProjection);
            assert!((asym.v3 - 0.836).abs() <= 0.010, "V3 asym {}", asym.v3);
            assert!((asym.v1 - 0.052).abs() <= 0.005, "V1 asym {}", asym.v1);
            assert!((noon.v3 - 0.841).abs() <= 0.010, "V3 noon {}", noon.v3);
            let ideal = OverlapIntegrals::ideal();
            for kind in [SchemeKind::AsymmetricSplitter, SchemeKind::NoonProjection] {
                let vis = visibilities(&ideal, kind);
                assert!((vis.v3 - 1.0).abs() < 1e-12);
                assert!(vis.v1.abs() < 1e-12);
            }
        },
    );
}

#[test]
fn acceptance_5_rate_ratio() {
    criterion(
        5,
        "phase-averaged rate ratio equals 1152/243, consistent with 4.8",
        || {
            let ov = OverlapIntegrals::ideal();
            let ratio = rate_ratio(&ov);
            assert!((ratio - 1152.0 / 243.0).abs() < 1e-9, "ratio {ratio}");
            assert!((ratio - 4.8).abs() <= 0.1, "ratio {ratio} vs rounded 4.8");
            // Cross-check against numeric curve averages.
            let n = 720;
            let mut asym_mean = 0.0;
            let mut noon_mean = 0.0;
            for i in 0..n {
                let phi = TAU * i as f64 / n as f64;
                asym_mean += p4_asym(phi, &ov);
                noon_mean += p4_noon(phi, &ov);
            }
            let numeric = asym_mean / noon_mean;
            assert!((numeric - ratio).abs() < 1e-9, "numeric {numeric}");
        },
    );
}

/// Direct quadrature of `∫ |Σ_p w_p Π_p(ω)|² d⁴ω` over the three pairing
/// products — no overlap-integral reduction anywhere.
fn p4_by_quadrature(model: &SpectralModel, coeffs: &SchemeCoefficients, n: usize) -> f64 {
    let rule = GaussHermite::new(n);
    let p = 0.25 / (model.pump_bandwidth() * model.pump_bandwidth())
        + 0.25 / (model.filter_bandwidth() * model.filter_bandwidth());
    let (nodes, weights) = rule.scaled(1.0 / (2.0 * p).sqrt());
    let table: Vec<Complex64> = nodes
        .iter()
        .flat_map(|&x| nodes.iter().map(move |&y| (x, y)))
        .map(|(x, y)| model.phi(x, y))
        .collect();
    let [w1, w2, w3] = coeffs.pairing_weights();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let wij = weights[i] * weights[j];
            for k in 0..n {
                let wijk = wij * weights[k];
                for l in 0..n {
                    let weight = wijk * weights[l];
                    let p1 = table[i * n + j] * table[k * n + l];
                    let p2 = table[i * n + k] * table[j * n + l];
                    let p3 = table[k * n + j] * table[i * n + l];
                    let amp = w1 * p1 + w2 * p2 + w3 * p3;
                    total += weight * amp.norm_sqr();
                }
            }
        }
    }
    total
}

#[test]
fn acceptance_6_engine_vs_quadrature() {
    criterion(
        6,
        "pairing engine matches direct 4-D quadrature at three spectral settings",
        || {
            let settings = [(1.0, 1.0), (2.0, 1.0), (0.7, 1.0)];
            for (sigma_p, sigma_f) in settings {
                let start = Instant::now();
                let model = SpectralModel::new(sigma_p, sigma_f).unwrap();
                let ov = overlap_integrals(&model, &GridSpec::default())
                    .unwrap()
                    .integrals;
                for kind in [SchemeKind::AsymmetricSplitter, SchemeKind::NoonProjection] {
                    for phase in [0.0, 0.7] {
                        let coeffs = SchemeCoefficients::at(kind, phase);
                        let engine = permutation_overlap_p4(&coeffs, &ov);
                        let oracle = p4_by_quadrature(&model, &coeffs, 48);
                        let scale = engine.abs().max(ov.a());
                        assert!(
                            (engine - oracle).abs() / scale < 1e-6,
                            "σp={sigma_p}, σf={sigma_f}, {kind:?}, phase {phase}: \
                         engine {engine} vs quadrature {oracle}"
                        );
                    }
                }
                let elapsed = start.elapsed();
                assert!(
                    elapsed.as_secs() < 60,
                    "setting (σp={sigma_p}, σf={sigma_f}) took {elapsed:?}, budget 60 s"
                );
            }
        },
    );
}

#[test]
fn acceptance_7_noon_harmonic_cancellation() {
    criterion(
        7,
        "NOON curves carry no cos(phi) or cos(2phi) for 25 random overlaps",
        || {
            let grid = phase_grid(0.0, TAU, 24);
            let mut rng = ChaCha8Rng::seed_from_u64(0x7A55);
            let mut uniform = move || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            for round in 0..25 {
                let a = 0.2 + uniform() * 2.0;
                let e = a * uniform();
                let ov = OverlapIntegrals::new(a, e, 1.0).unwrap();
                let values: Vec<f64> = grid
                    .iter()
                    .map(|&phi| {
                        let coeffs = SchemeCoefficients::at(SchemeKind::NoonProjection, phi);
                        permutation_overlap_p4(&coeffs, &ov)
                    })
                    .collect();
                for k in [1, 2] {
                    let magnitude = harmonic_magnitude(&grid, &values, k);
                    assert!(
                        magnitude < 1e-10,
                        "round {round} (A={a}, E={e}): harmonic {k} leaks {magnitude}"
                    );
                }
            }
        },
    );
}

#[test]
fn acceptance_8_counting_pipeline() {
    criterion(
        8,
        "500-seed ensemble: unbiased V3 recovery, chi2 near dof, < 30 s",
        || {
            let start = Instant::now();
            let injected = 0.85;
            let phases = phase_grid(0.0, TAU, 25);
            let values: Vec<f64> = phases
                .iter()
                .map(|&phi| 1.0 + injected * (3.0 * phi).cos() + 0.05 * phi.cos())
                .collect();
            let curve = FringeSeries::new(
                phases,
                values,
                FringeMeta {
                    scheme: SchemeKind::AsymmetricSplitter,
                    normalization: "unit-mean model".to_string(),
                    photon_number: 3,
                },
            )
            .unwrap();
            let runs = 500;
            let mut v3 = Vec::with_capacity(runs);
            let mut chi2 = Vec::with_capacity(runs);
            for seed in 0..runs as u64 {
                let records = simulate_counts(&curve, 1.84, 100.0, 1.2, seed).unwrap();
                let fit = fit_fringe(&records, &[1, 3]).unwrap();
                v3.push(fit.v3);
                chi2.push(fit.chi2);
            }
            let n = runs as f64;
            let mean = v3.iter().sum::<f64>() / n;
            let var = v3.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            assert!(
                (mean - injected).abs() < 2.0 * se,
                "bias {:+.5} exceeds 2·SE {:.5}",
                mean - injected,
                2.0 * se
            );
            let chi2_mean = chi2.iter().sum::<f64>() / n;
            let dof = 20.0;
            assert!(
                (chi2_mean - dof).abs() / dof <= 0.10,
                "mean chi2 {chi2_mean} strays more than 10% from dof {dof}"
            );
            let elapsed = start.elapsed();
            assert!(
                elapsed.as_secs() < 30,
                "ensemble took {elapsed:?}, budget 30 s"
            );
        },
    );
}

#[test]
fn acceptance_9_seed_determinism() {
    criterion(
        9,
        "identical seeds reproduce byte-identical count files",
        || {
            let dir =
                std::env::temp_dir().join(format!("triphoton-acceptance-{}", std::process::id()));
            let _ = std::fs::remove_dir_all(&dir);
            std::fs::create_dir_all(&dir).unwrap();
            let run = |name: &str| {
                let path = dir.join(name);
                let output = std::process::Command::new(env!("CARGO_BIN_EXE_triphoton"))
                    .args(["counts", "--seed", "11", "-o", path.to_str().unwrap()])
                    .output()
                    .expect("binary runs");
                assert!(output.status.success());
                std::fs::read(&path).unwrap()
            };
            let first = run("a.csv");
            let second = run("b.csv");
            assert_eq!(first, second, "same seed must write identical bytes");
        },
    );
}
