//! Monte-Carlo photon counting and fringe-parameter extraction.
//!
//! A fringe curve becomes synthetic detector data by drawing, for each
//! scan point, Poisson counts with mean
//! `(rate_scale · value + background_rate) · duration`; the flat
//! background estimate is subtracted (negative corrected values are
//! kept, clipping would bias the fit) and a weighted harmonic least
//! squares recovers `P₄₀`, the visibilities, the phase offset, and a χ²
//! computed against raw-count Poisson variances.

mod fit;
mod sampling;

pub use fit::{fit_points, fit_values, FitResult};
pub use sampling::{point_rng, sample_poisson, RNG_ALGORITHM};

use alloc::vec::Vec;
use core::fmt;

use crate::schemes::FringeSeries;

/// Errors from counting simulation and fitting.
#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentError {
    /// A rate, duration, or curve value was negative or non-finite.
    NegativeRate { value: f64 },
    /// Fewer points than fit parameters.
    InsufficientData { needed: usize, got: usize },
    /// The grid spans less than one period of the slowest harmonic.
    GridTooNarrow { span: f64, needed: f64 },
    /// Degenerate grid: the normal equations cannot be solved.
    SingularDesign,
    /// Harmonic orders must be ≥ 1.
    InvalidHarmonic { value: u32 },
}

impl fmt::Display for ExperimentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExperimentError::NegativeRate { value } => {
                write!(f, "rates and durations must be ≥ 0 and finite, got {value}")
            }
            ExperimentError::InsufficientData { needed, got } => {
                write!(f, "need at least {needed} points, got {got}")
            }
            ExperimentError::GridTooNarrow { span, needed } => write!(
                f,
                "phase grid spans {span:.4} rad but one period needs {needed:.4} rad"
            ),
            ExperimentError::SingularDesign => {
                write!(f, "singular design matrix (degenerate phase grid)")
            }
            ExperimentError::InvalidHarmonic { value } => {
                write!(f, "harmonic order must be ≥ 1, got {value}")
            }
        }
    }
}

impl core::error::Error for ExperimentError {}

/// One simulated scan point.
#[derive(Debug, Clone, PartialEq)]
pub struct CountRecord {
    pub phase: f64,
    /// Integration time in seconds.
    pub duration: f64,
    pub raw_counts: u64,
    /// Expected background counts over `duration`, known from the
    /// configured flat rate.
    pub background_estimate: f64,
}

/// A background-corrected point with its Poisson variance estimate
/// (raw counts, floored at one for empty bins).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedPoint {
    pub phase: f64,
    pub value: f64,
    pub variance: f64,
}

/// Draw seeded Poisson counts for every point of a fringe curve.
///
/// Point `i` samples from its own stream derived from `(seed, i)`, so
/// records do not depend on evaluation order. Identical inputs and seed
/// reproduce identical records on every platform.
pub fn simulate_counts(
    curve: &FringeSeries,
    rate_scale: f64,
    duration: f64,
    background_rate: f64,
    seed: u64,
) -> Result<Vec<CountRecord>, ExperimentError> {
    for value in [rate_scale, duration, background_rate] {
        if !(value.is_finite() && value >= 0.0) {
            return Err(ExperimentError::NegativeRate { value });
        }
    }
    let mut records = Vec::with_capacity(curve.len());
    for (index, (&phase, &value)) in curve.phases().iter().zip(curve.values()).enumerate() {
        let mean = (rate_scale * value + background_rate) * duration;
        let mut rng = point_rng(seed, index as u64);
        records.push(CountRecord {
            phase,
            duration,
            raw_counts: sample_poisson(&mut rng, mean),
            background_estimate: background_rate * duration,
        });
    }
    Ok(records)
}

/// Subtract the known flat background from each record. Corrected values
/// may be negative; they are kept as-is for unbiased fitting.
pub fn subtract_background(records: &[CountRecord]) -> Vec<CorrectedPoint> {
    records
        .iter()
        .map(|record| CorrectedPoint {
            phase: record.phase,
            value: record.raw_counts as f64 - record.background_estimate,
            variance: (record.raw_counts as f64).max(1.0),
        })
        .collect()
}

/// Background-subtract and fit a harmonic model to count records.
pub fn fit_fringe(
    records: &[CountRecord],
    harmonics: &[u32],
) -> Result<FitResult, ExperimentError> {
    fit_points(&subtract_background(records), harmonics)
}
