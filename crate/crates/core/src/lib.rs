//! Simulation toolkit for three-photon interference by projection measurement.
//!
//! The crate is organised in four layers:
//!
//! * [`fock`] — an exact engine for few-photon states in passive linear
//!   optics: occupation-number states, unitary mode transforms, and
//!   photon-counting coincidence rates.
//! * [`schemes`] — the two measurement arrangements built from those
//!   elements (an asymmetric-splitter interferometer and a three-fold
//!   NOON-state projection) together with their ideal fringe scans.
//! * [`spectral`] — a multimode model of the two-crystal down-conversion
//!   source: joint spectral amplitudes, the pair-overlap integrals `A`
//!   and `E`, and the reduced-visibility rate laws they imply.
//! * [`experiment`] — seeded Monte-Carlo photon counting and the harmonic
//!   least-squares fit used to extract fringe parameters from counts.
//!
//! Every value is immutable after construction and every operation is a
//! pure function, so states, transforms and models can be shared freely
//! across threads. Quadrature and sampling loops use fixed iteration
//! orders, making all results reproducible bit for bit.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod experiment;
pub mod fock;
mod math;
pub mod schemes;
pub mod spectral;

pub use experiment::{CorrectedPoint, CountRecord, ExperimentError, FitResult};
pub use fock::{
    BsConvention, Detector, DetectorWiring, FockError, FockVector, ModeLabel, ModeTransform,
    Polarization, PureState,
};
pub use schemes::{FringeMeta, FringeSeries, SchemeCircuit, SchemeConfig, SchemeKind};
pub use spectral::{
    GridSpec, OverlapIntegrals, OverlapOutcome, SchemeCoefficients, SpectralError, SpectralModel,
    Visibilities,
};
