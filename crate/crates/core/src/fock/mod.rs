//! Exact engine for multi-photon states in passive linear-optical networks.
//!
//! States are sparse superpositions over occupation-number (Fock) vectors
//! with a fixed total photon number; transforms are unitary matrices over
//! labelled modes acting on creation operators; detection is modelled as
//! projective photon counting with optional balanced fan-outs in front of
//! non-number-resolving detectors.

mod detect;
mod mode;
mod state;
mod transform;

pub use detect::{Detector, DetectorWiring};
pub use mode::{ModeLabel, Polarization};
pub use state::{FockVector, PureState};
pub(crate) use transform::symmetric_splitter;
pub use transform::{BsConvention, ModeTransform, UNITARITY_TOLERANCE};

use alloc::string::String;
use core::fmt;

/// Errors raised by state construction, transforms, and detection.
#[derive(Debug, Clone, PartialEq)]
pub enum FockError {
    /// A matrix failed the unitarity check `M·M† = I`.
    NonUnitary { max_deviation: f64 },
    /// A mode label was not found in the relevant mode set.
    UnknownMode { mode: String },
    /// Matrix dimensions do not match the mode list.
    DimensionMismatch { expected: usize, found: usize },
    /// Beam-splitter transmissivity outside `[0, 1]`.
    InvalidTransmissivity { value: f64 },
    /// A phase shift was requested on an empty target set.
    EmptyTargets,
    /// A state had zero (or non-finite) norm after construction.
    ZeroNorm,
    /// Superposition terms with differing total photon number.
    MixedPhotonNumber { expected: u32, found: u32 },
    /// Two states with differing total photon number were combined.
    PhotonNumberMismatch { left: u32, right: u32 },
    /// Two states defined over different mode sets were combined.
    ModeSetMismatch,
    /// A pattern's total photon count differs from the state's.
    PatternTotalMismatch { pattern: u32, state: u32 },
    /// A mode carrying amplitude is neither detected nor discarded.
    UncoveredMode { mode: String },
    /// Splitting ratios tapping one mode do not sum to one.
    SplitRatioNotUnit { mode: String, total: f64 },
    /// A splitting ratio outside `(0, 1]`.
    InvalidSplitRatio { mode: String, ratio: f64 },
    /// Detector requirements do not add up to the photon number.
    OverconstrainedPattern { required: u32, total: u32 },
    /// A non-number-resolving detector cannot require more than one count.
    NonResolvingCount { detector: String, required: u32 },
    /// The same mode appears twice in one mode list.
    DuplicateMode { mode: String },
}

impl fmt::Display for FockError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FockError::NonUnitary { max_deviation } => write!(
                f,
                "matrix is not unitary: max |M·M† − I| element is {max_deviation:.3e} \
                 (tolerance {UNITARITY_TOLERANCE:.0e})"
            ),
            FockError::UnknownMode { mode } => write!(f, "unknown mode label {mode}"),
            FockError::DimensionMismatch { expected, found } => {
                write!(f, "matrix has {found} entries, expected {expected}")
            }
            FockError::InvalidTransmissivity { value } => {
                write!(f, "transmissivity {value} outside [0, 1]")
            }
            FockError::EmptyTargets => write!(f, "phase shift needs at least one target mode"),
            FockError::ZeroNorm => write!(f, "state has zero or non-finite norm"),
            FockError::MixedPhotonNumber { expected, found } => write!(
                f,
                "superposition mixes photon numbers ({expected} and {found})"
            ),
            FockError::PhotonNumberMismatch { left, right } => {
                write!(
                    f,
                    "states carry different photon numbers ({left} vs {right})"
                )
            }
            FockError::ModeSetMismatch => write!(f, "states are defined over different mode sets"),
            FockError::PatternTotalMismatch { pattern, state } => write!(
                f,
                "pattern holds {pattern} photons but the state holds {state}"
            ),
            FockError::UncoveredMode { mode } => write!(
                f,
                "mode {mode} carries amplitude but is neither detected nor discarded"
            ),
            FockError::SplitRatioNotUnit { mode, total } => write!(
                f,
                "splitting ratios tapping mode {mode} sum to {total}, expected 1"
            ),
            FockError::InvalidSplitRatio { mode, ratio } => {
                write!(f, "splitting ratio {ratio} on mode {mode} outside (0, 1]")
            }
            FockError::OverconstrainedPattern { required, total } => write!(
                f,
                "detectors require {required} photons in total but the state holds {total}"
            ),
            FockError::NonResolvingCount { detector, required } => write!(
                f,
                "detector {detector} is not number-resolving and cannot require {required} counts"
            ),
            FockError::DuplicateMode { mode } => write!(f, "mode {mode} listed twice"),
        }
    }
}

impl core::error::Error for FockError {}
