use alloc::string::String;
use core::fmt;

/// Polarization component of an optical mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarization {
    H,
    V,
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => write!(f, "H"),
            Polarization::V => write!(f, "V"),
        }
    }
}

/// A single bosonic mode: a spatial path plus a polarization.
///
/// Labels order lexicographically by path, then `H` before `V`. That
/// ordering fixes the basis enumeration everywhere in the crate, so any
/// two runs enumerate amplitudes identically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    pub path: String,
    pub pol: Polarization,
}

impl ModeLabel {
    pub fn new(path: &str, pol: Polarization) -> Self {
        ModeLabel {
            path: String::from(path),
            pol,
        }
    }

    /// Horizontal polarization on `path`. Also used for plain spatial
    /// modes where polarization plays no role.
    pub fn h(path: &str) -> Self {
        Self::new(path, Polarization::H)
    }

    /// Vertical polarization on `path`.
    pub fn v(path: &str) -> Self {
        Self::new(path, Polarization::V)
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.path, self.pol)
    }
}
