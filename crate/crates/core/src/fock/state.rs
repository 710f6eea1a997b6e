use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::math;

use super::{FockError, ModeLabel};

/// An occupation-number basis vector over labelled modes.
///
/// Zero counts are dropped, so `|1_a, 0_b⟩` and `|1_a⟩` compare equal;
/// the mode universe of a state is tracked by [`PureState`] instead.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct FockVector {
    occupations: BTreeMap<ModeLabel, u32>,
}

impl FockVector {
    pub fn new<I>(occupations: I) -> Self
    where
        I: IntoIterator<Item = (ModeLabel, u32)>,
    {
        FockVector {
            occupations: occupations.into_iter().filter(|(_, n)| *n > 0).collect(),
        }
    }

    /// Photon count in `mode` (zero when absent).
    pub fn occupation(&self, mode: &ModeLabel) -> u32 {
        self.occupations.get(mode).copied().unwrap_or(0)
    }

    /// Total photon number.
    pub fn total(&self) -> u32 {
        self.occupations.values().sum()
    }

    /// Occupied modes with their counts, in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&ModeLabel, u32)> {
        self.occupations.iter().map(|(m, n)| (m, *n))
    }

    pub fn modes(&self) -> impl Iterator<Item = &ModeLabel> {
        self.occupations.keys()
    }

    /// Normally ordered counting weight `∏_m n_m!`.
    pub fn multiplicity(&self) -> f64 {
        self.occupations
            .values()
            .map(|&n| math::factorial(n))
            .product()
    }

    /// `∏_m √(n_m!)`, the bosonic normalization of the corresponding
    /// creation-operator monomial.
    pub(crate) fn normalization(&self) -> f64 {
        math::sqrt(self.multiplicity())
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, (mode, n)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}_{mode}")?;
        }
        write!(f, "⟩")
    }
}

/// A normalized superposition of Fock vectors with one total photon number.
///
/// The state also records its mode universe (which may include modes that
/// currently hold no photons) and the normalization drift absorbed by the
/// most recent renormalization.
#[derive(Debug, Clone)]
pub struct PureState {
    amplitudes: BTreeMap<FockVector, Complex64>,
    modes: BTreeSet<ModeLabel>,
    total: u32,
    norm_drift: f64,
}

impl PureState {
    /// A single basis ket. Modes listed with a zero count still join the
    /// state's mode universe, so `ket([(h, 3), (v, 0)])` is a state over
    /// both modes.
    pub fn ket<I>(occupations: I) -> Self
    where
        I: IntoIterator<Item = (ModeLabel, u32)>,
    {
        let pairs: Vec<(ModeLabel, u32)> = occupations.into_iter().collect();
        let modes: BTreeSet<ModeLabel> = pairs.iter().map(|(m, _)| m.clone()).collect();
        let fock = FockVector::new(pairs);
        let total = fock.total();
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(fock, Complex64::new(1.0, 0.0));
        PureState {
            amplitudes,
            modes,
            total,
            norm_drift: 0.0,
        }
    }

    /// Build and normalize a superposition. All terms must share one total
    /// photon number and the combined weight must be nonzero.
    pub fn superposition<I>(terms: I) -> Result<Self, FockError>
    where
        I: IntoIterator<Item = (FockVector, Complex64)>,
    {
        let mut amplitudes: BTreeMap<FockVector, Complex64> = BTreeMap::new();
        let mut modes = BTreeSet::new();
        let mut total: Option<u32> = None;
        for (fock, amp) in terms {
            match total {
                None => total = Some(fock.total()),
                Some(expected) if fock.total() != expected => {
                    return Err(FockError::MixedPhotonNumber {
                        expected,
                        found: fock.total(),
                    })
                }
                _ => {}
            }
            modes.extend(fock.modes().cloned());
            *amplitudes.entry(fock).or_insert(Complex64::ZERO) += amp;
        }
        let mut state = PureState {
            amplitudes,
            modes,
            total: total.unwrap_or(0),
            norm_drift: 0.0,
        };
        state.renormalize()?;
        Ok(state)
    }

    pub(crate) fn from_raw(
        amplitudes: BTreeMap<FockVector, Complex64>,
        modes: BTreeSet<ModeLabel>,
        total: u32,
    ) -> Result<Self, FockError> {
        let mut state = PureState {
            amplitudes,
            modes,
            total,
            norm_drift: 0.0,
        };
        state.renormalize()?;
        Ok(state)
    }

    fn renormalize(&mut self) -> Result<(), FockError> {
        let norm_sqr = self.norm_sqr();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(FockError::ZeroNorm);
        }
        self.norm_drift = math::abs(norm_sqr - 1.0);
        let inv = 1.0 / math::sqrt(norm_sqr);
        for amp in self.amplitudes.values_mut() {
            *amp *= inv;
        }
        Ok(())
    }

    /// Sum of squared amplitude magnitudes (1 after construction).
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// `|1 − Σ|amplitude|²|` found before the last renormalization.
    pub fn norm_drift(&self) -> f64 {
        self.norm_drift
    }

    pub fn total_photons(&self) -> u32 {
        self.total
    }

    pub fn modes(&self) -> &BTreeSet<ModeLabel> {
        &self.modes
    }

    /// Amplitude of a basis vector (zero when absent).
    pub fn amplitude(&self, pattern: &FockVector) -> Complex64 {
        self.amplitudes
            .get(pattern)
            .copied()
            .unwrap_or(Complex64::ZERO)
    }

    /// Basis vectors with their amplitudes, in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (&FockVector, Complex64)> {
        self.amplitudes.iter().map(|(k, a)| (k, *a))
    }

    /// Conjugate-bilinear inner product `⟨self|other⟩`.
    pub fn inner_product(&self, other: &PureState) -> Result<Complex64, FockError> {
        if self.total != other.total {
            return Err(FockError::PhotonNumberMismatch {
                left: self.total,
                right: other.total,
            });
        }
        if self.modes != other.modes {
            return Err(FockError::ModeSetMismatch);
        }
        let mut acc = Complex64::ZERO;
        for (fock, amp) in self.iter() {
            acc += amp.conj() * other.amplitude(fock);
        }
        Ok(acc)
    }

    /// `|⟨pattern|state⟩|²` for a single occupation pattern.
    ///
    /// Values lie in `[0, 1]` and sum to one over all patterns.
    pub fn pattern_probability(&self, pattern: &FockVector) -> Result<f64, FockError> {
        if pattern.total() != self.total {
            return Err(FockError::PatternTotalMismatch {
                pattern: pattern.total(),
                state: self.total,
            });
        }
        Ok(self.amplitude(pattern).norm_sqr())
    }
}
