//! The four subcommand implementations.

use std::path::{Path, PathBuf};

use triphoton_core::experiment::{
    fit_points, fit_values, simulate_counts, FitResult, RNG_ALGORITHM,
};
use triphoton_core::schemes::{
    self, asym_fringe, harmonic_magnitude, noon_fringe, noon_projection_prob, phase_grid,
};
use triphoton_core::spectral::{
    overlap_integrals, p4_asym, p4_noon, permutation_overlap_p4, rate_ratio, visibilities,
    GridSpec, OverlapIntegrals, SchemeCoefficients, SpectralError, SpectralModel,
};
use triphoton_core::{
    BsConvention, FockVector, FringeMeta, FringeSeries, ModeLabel, ModeTransform, PureState,
    SchemeKind,
};

use crate::config::{output_path, ModelKind, OverlapSource, ScenarioConfig};
use crate::files::{parse_input, read_text, write_text, CountsFile, FringeFile, ParsedInput};
use crate::report::{table, FitReport};
use crate::CliError;

fn spectral_to_cli(err: SpectralError) -> CliError {
    match err {
        SpectralError::QuadratureNotConverged { .. } => CliError::numerical(err.to_string()),
        other => CliError::validation(other.to_string()),
    }
}

/// Resolve the overlap integrals of a multimode scenario.
fn resolve_overlaps(config: &ScenarioConfig) -> Result<OverlapIntegrals, CliError> {
    let source = config
        .overlaps
        .as_ref()
        .expect("multimode scenarios carry an overlap source");
    let integrals = match source {
        OverlapSource::Direct { e_over_a } => {
            OverlapIntegrals::from_ratio(*e_over_a, config.v1).map_err(spectral_to_cli)?
        }
        OverlapSource::Spectral {
            sigma_p,
            sigma_f,
            delta_t_h,
            delta_t_v,
            symmetrized,
            nodes,
        } => {
            let model = SpectralModel::new(*sigma_p, *sigma_f)
                .map_err(spectral_to_cli)?
                .with_delays(*delta_t_h, *delta_t_v)
                .with_symmetrized(*symmetrized);
            let grid = GridSpec {
                nodes_per_axis: *nodes,
            };
            let outcome = overlap_integrals(&model, &grid).map_err(spectral_to_cli)?;
            outcome
                .integrals
                .with_v1(config.v1)
                .map_err(spectral_to_cli)?
        }
    };
    Ok(integrals)
}

/// Compute the scenario's fringe curve: exact circuit for the ideal
/// model, closed-form rate laws for the multimode one.
pub fn build_curve(config: &ScenarioConfig) -> Result<FringeSeries, CliError> {
    let grid = config.grid();
    match config.model {
        ModelKind::Ideal => match config.scheme {
            SchemeKind::AsymmetricSplitter => {
                asym_fringe(&grid).map_err(|err| CliError::validation(err.to_string()))
            }
            SchemeKind::NoonProjection => {
                noon_fringe(&grid).map_err(|err| CliError::validation(err.to_string()))
            }
        },
        ModelKind::Multimode => {
            let overlaps = resolve_overlaps(config)?;
            let law = match config.scheme {
                SchemeKind::AsymmetricSplitter => p4_asym,
                SchemeKind::NoonProjection => p4_noon,
            };
            let values: Vec<f64> = grid.iter().map(|&phi| law(phi, &overlaps)).collect();
            FringeSeries::new(
                grid,
                values,
                FringeMeta {
                    scheme: config.scheme,
                    normalization: "relative four-fold rate".to_string(),
                    photon_number: 3,
                },
            )
            .map_err(|err| CliError::numerical(err.to_string()))
        }
    }
}

/// `fringe`: write the scan as CSV; returns the output path.
pub fn cmd_fringe(config: &ScenarioConfig) -> Result<PathBuf, CliError> {
    let curve = build_curve(config)?;
    let mut comments = vec!["triphoton fringe v1".to_string()];
    comments.extend(config.echo_lines());
    comments.push(format!("normalization={}", curve.meta().normalization));
    let file = FringeFile::from_series(&curve, comments);
    let path = output_path(&config.output, "fringe.csv");
    write_text(&path, &file.to_csv())?;
    Ok(path)
}

/// `counts`: simulate seeded detector records over the scan.
pub fn cmd_counts(config: &ScenarioConfig) -> Result<PathBuf, CliError> {
    let curve = build_curve(config)?;
    let records = simulate_counts(
        &curve,
        config.rate_scale,
        config.duration,
        config.bg_rate,
        config.seed,
    )
    .map_err(|err| CliError::validation(err.to_string()))?;
    let mut comments = vec!["triphoton counts v1".to_string()];
    comments.extend(config.echo_lines());
    comments.push(format!("rng={RNG_ALGORITHM}"));
    let file = CountsFile { comments, records };
    let path = output_path(&config.output, "counts.csv");
    write_text(&path, &file.to_csv())?;
    Ok(path)
}

/// `fit`: harmonic least squares on a fringe or counts CSV. Prints the
/// table, writes the JSON report, and returns (fit, report path).
pub fn cmd_fit(
    input: &Path,
    harmonics: &[u32],
    output: &Option<PathBuf>,
) -> Result<(FitResult, PathBuf), CliError> {
    let text = read_text(input)?;
    let fit = match parse_input(&text)? {
        ParsedInput::Counts(file) => {
            let corrected = triphoton_core::experiment::subtract_background(&file.records);
            fit_points(&corrected, harmonics)
        }
        ParsedInput::Fringe(file) => fit_values(&file.phases, &file.values, harmonics),
    }
    .map_err(|err| match err {
        triphoton_core::ExperimentError::SingularDesign => CliError::numerical(err.to_string()),
        other => CliError::validation(other.to_string()),
    })?;
    print!("{}", table(&fit));
    let report = FitReport::from_fit(&fit);
    let path = output_path(output, "fit.json");
    write_text(&path, &report.to_json())?;
    Ok((fit, path))
}

/// One line of the reproduction report.
pub struct Check {
    pub name: String,
    pub found: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn within(name: &str, found: f64, expected: f64, tolerance: f64) -> Check {
        Check {
            name: name.to_string(),
            found,
            expected,
            tolerance,
            pass: (found - expected).abs() <= tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {:<44} {:>14.9} (expected {:.9} ± {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.found,
            self.expected,
            self.tolerance
        )
    }
}

/// `reproduce`: re-derive the headline numbers and report PASS/FAIL per
/// tolerance. Returns the checks; the command exits zero only if all
/// pass.
pub fn cmd_reproduce() -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let fock = |err: triphoton_core::FockError| CliError::numerical(err.to_string());

    // Asymmetric splitter output amplitudes on |2,1⟩ at R = 2T = 2/3.
    {
        let a = ModeLabel::h("a");
        let b = ModeLabel::h("b");
        let bs = ModeTransform::beamsplitter(
            a.clone(),
            b.clone(),
            1.0 / 3.0,
            BsConvention::NegativeReflection,
        )
        .map_err(fock)?;
        let out = bs
            .apply(&PureState::ket([(a.clone(), 2), (b.clone(), 1)]))
            .map_err(fock)?;
        let pattern = |na: u32, nb: u32| FockVector::new([(a.clone(), na), (b.clone(), nb)]);
        let expectations = [
            (
                "splitter amplitude |3,0>",
                pattern(3, 0),
                2.0_f64.sqrt() / 3.0,
            ),
            ("splitter amplitude |0,3>", pattern(0, 3), 2.0 / 3.0),
            (
                "splitter amplitude |2,1>",
                pattern(2, 1),
                -(3.0_f64.sqrt()) / 3.0,
            ),
            ("splitter amplitude |1,2>", pattern(1, 2), 0.0),
        ];
        for (name, pattern, expected) in expectations {
            let amp = out.amplitude(&pattern);
            checks.push(Check::within(name, amp.re, expected, 1e-12));
            checks.push(Check::within(
                &format!("{name} (imaginary part)"),
                amp.im,
                0.0,
                1e-12,
            ));
        }
    }

    // Ideal fringe extrema and harmonic purity.
    {
        let grid = phase_grid(0.0, std::f64::consts::TAU, 25);
        let series = asym_fringe(&grid).map_err(fock)?;
        let mut worst = 0.0_f64;
        for (&phi, &value) in series.phases().iter().zip(series.values()) {
            let law = 32.0 / 81.0 * (1.0 + (3.0 * phi).cos());
            worst = worst.max((value - law).abs());
        }
        checks.push(Check::within(
            "asym fringe law, max deviation",
            worst,
            0.0,
            1e-10,
        ));
        let mut leak = 0.0_f64;
        for k in [1, 2, 4, 5] {
            leak = leak.max(harmonic_magnitude(series.phases(), series.values(), k));
        }
        checks.push(Check::within(
            "asym fringe harmonic leakage",
            leak,
            0.0,
            1e-10,
        ));
        checks.push(Check::within(
            "asym fringe peak",
            series.values()[0],
            64.0 / 81.0,
            1e-12,
        ));
    }

    // NOON projection: orthogonal input, fringe extrema.
    {
        checks.push(Check::within(
            "NOON projection of |2,1>",
            noon_projection_prob(&schemes::heralded_input()).map_err(fock)?,
            0.0,
            1e-15,
        ));
        let peak = noon_fringe(&[0.0]).map_err(fock)?.values()[0];
        let zero = noon_fringe(&[std::f64::consts::FRAC_PI_3])
            .map_err(fock)?
            .values()[0];
        checks.push(Check::within("NOON fringe peak", peak, 1.0 / 24.0, 1e-10));
        checks.push(Check::within("NOON fringe zero", zero, 0.0, 1e-10));
    }

    // Visibilities at the reference mismatch point.
    {
        let ov = OverlapIntegrals::from_ratio(0.86, 0.96).map_err(spectral_to_cli)?;
        let asym = visibilities(&ov, SchemeKind::AsymmetricSplitter);
        let noon = visibilities(&ov, SchemeKind::NoonProjection);
        checks.push(Check::within(
            "V3 asym at E/A=0.86, v1=0.96",
            asym.v3,
            0.836,
            0.010,
        ));
        checks.push(Check::within(
            "V1 asym at E/A=0.86, v1=0.96",
            asym.v1,
            0.052,
            0.005,
        ));
        checks.push(Check::within(
            "V3 noon at E/A=0.86, v1=0.96",
            noon.v3,
            0.841,
            0.010,
        ));
        let ideal = visibilities(&OverlapIntegrals::ideal(), SchemeKind::AsymmetricSplitter);
        checks.push(Check::within("V3 asym at E=A", ideal.v3, 1.0, 1e-12));
        checks.push(Check::within("V1 asym at E=A", ideal.v1, 0.0, 1e-12));
    }

    // Rate ratio between the two schemes.
    {
        let ratio = rate_ratio(&OverlapIntegrals::ideal());
        checks.push(Check::within(
            "rate ratio at E=A",
            ratio,
            1152.0 / 243.0,
            1e-9,
        ));
        checks.push(Check::within("rate ratio vs rounded 4.8", ratio, 4.8, 0.1));
    }

    // NOON-scheme low-harmonic cancellation through the pairing engine.
    {
        let grid = phase_grid(0.0, std::f64::consts::TAU, 24);
        let mut worst = 0.0_f64;
        for e in [0.0, 0.31, 0.67, 1.0] {
            let ov = OverlapIntegrals::from_ratio(e, 1.0).map_err(spectral_to_cli)?;
            let values: Vec<f64> = grid
                .iter()
                .map(|&phi| {
                    let coeffs = SchemeCoefficients::at(SchemeKind::NoonProjection, phi);
                    permutation_overlap_p4(&coeffs, &ov)
                })
                .collect();
            for k in [1, 2] {
                worst = worst.max(harmonic_magnitude(&grid, &values, k));
            }
        }
        checks.push(Check::within(
            "NOON low-harmonic leakage",
            worst,
            0.0,
            1e-10,
        ));
    }

    Ok(checks)
}
