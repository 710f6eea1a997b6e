//! The two projection-measurement schemes and their ideal fringe scans.
//!
//! Scheme 1 realizes a pair of asymmetric beam splitters with wave-plate
//! rotations of `α = arccos(1/√3)` around a phase shifter: a heralded
//! `|2_H,1_V⟩` input produces a `(1,2)` coincidence rate of
//! `(32/81)(1 + cos 3φ)`, oscillating three times faster than a
//! single-photon fringe.
//!
//! Scheme 2 projects onto the three-photon NOON state
//! `(|3,0⟩ − |0,3⟩)/√2` by splitting the field into three equal arms,
//! stepping the arm phases by `2π/3`, and counting one photon behind a
//! 135° polarizer in each arm. The triple-coincidence probability equals
//! `(1/18)|⟨NOON₃|ψ⟩|²` for any three-photon input.
//!
//! Fringe scans are reported with their maximum at zero phase; a measured
//! scan may sit at any fixed offset, which the fitting layer absorbs into
//! `φ₀`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fock::{
    symmetric_splitter, DetectorWiring, FockError, FockVector, ModeLabel, ModeTransform,
    Polarization, PureState,
};
use crate::math;

/// Which measurement arrangement a fringe or rate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    AsymmetricSplitter,
    NoonProjection,
}

impl SchemeKind {
    pub fn label(&self) -> &'static str {
        match self {
            SchemeKind::AsymmetricSplitter => "asym",
            SchemeKind::NoonProjection => "noon",
        }
    }
}

/// Wave-plate rotation equivalent to a splitter of transmissivity 1/3.
pub fn asym_rotation() -> f64 {
    math::acos(1.0 / math::sqrt(3.0))
}

/// Pre-rotation preparing the NOON component from `|2_H,1_V⟩`.
pub const NOON_PREROTATION: f64 = core::f64::consts::FRAC_PI_4;

/// Scheme selection plus the two angles that define a scan point.
#[derive(Debug, Clone, Copy)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub phase: f64,
    pub rotation: f64,
}

impl SchemeConfig {
    /// Defaults: `arccos(1/√3)` for the splitter scheme, `π/4` for the
    /// NOON pre-rotation.
    pub fn new(kind: SchemeKind, phase: f64) -> Self {
        let rotation = match kind {
            SchemeKind::AsymmetricSplitter => asym_rotation(),
            SchemeKind::NoonProjection => NOON_PREROTATION,
        };
        SchemeConfig {
            kind,
            phase,
            rotation,
        }
    }

    pub fn with_rotation(mut self, rotation: f64) -> Self {
        self.rotation = rotation;
        self
    }
}

/// A built interferometer: ordered elements, detector wiring, and the
/// heralded input state.
#[derive(Debug, Clone)]
pub struct SchemeCircuit {
    pub elements: Vec<ModeTransform>,
    pub wiring: DetectorWiring,
    pub input: PureState,
}

impl SchemeCircuit {
    /// The chain folded into a single transform over the circuit's
    /// full mode universe.
    pub fn composed(&self) -> Result<ModeTransform, FockError> {
        let mut universe: BTreeSet<ModeLabel> = BTreeSet::new();
        for element in &self.elements {
            universe.extend(element.modes().iter().cloned());
        }
        universe.extend(self.input.modes().iter().cloned());
        let mut composed = ModeTransform::identity(universe.iter().cloned().collect())?;
        for element in &self.elements {
            composed = element.embed(&universe)?.compose(&composed)?;
        }
        Ok(composed)
    }

    /// Input state propagated through every element in order.
    pub fn output(&self) -> Result<PureState, FockError> {
        let mut state = self.input.clone();
        for element in &self.elements {
            state = element.apply(&state)?;
        }
        Ok(state)
    }

    /// Coincidence rate of the wiring's pattern on the output state.
    pub fn coincidence_rate(&self) -> Result<f64, FockError> {
        self.wiring.coincidence_rate(&self.output()?)
    }
}

/// Metadata carried by a fringe scan.
///
/// Phases are radians throughout; the path-difference reading of a phase
/// is available through [`path_difference`] as a conversion only.
#[derive(Debug, Clone)]
pub struct FringeMeta {
    pub scheme: SchemeKind,
    pub normalization: String,
    pub photon_number: u32,
}

/// A phase scan: equally meaningful for ideal curves, multimode rate
/// laws, and background-corrected data.
#[derive(Debug, Clone)]
pub struct FringeSeries {
    phases: Vec<f64>,
    values: Vec<f64>,
    meta: FringeMeta,
}

impl FringeSeries {
    pub fn new(phases: Vec<f64>, values: Vec<f64>, meta: FringeMeta) -> Result<Self, FockError> {
        if phases.len() != values.len() {
            return Err(FockError::DimensionMismatch {
                expected: phases.len(),
                found: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(FockError::ZeroNorm);
        }
        Ok(FringeSeries {
            phases,
            values,
            meta,
        })
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &FringeMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }
}

/// Path difference `Δ = φ·λ / 2π` equivalent to a phase, for labelling.
pub fn path_difference(phase: f64, wavelength: f64) -> f64 {
    phase * wavelength / core::f64::consts::TAU
}

/// A uniform grid of `points` phases covering `[start, stop)`.
pub fn phase_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let step = (stop - start) / points as f64;
    (0..points).map(|i| start + step * i as f64).collect()
}

const SOURCE: &str = "s";
const OUT_H: &str = "e";
const OUT_V: &str = "f";

/// The heralded three-photon input `|2_H, 1_V⟩`.
pub fn heralded_input() -> PureState {
    PureState::ket([(ModeLabel::h(SOURCE), 2), (ModeLabel::v(SOURCE), 1)])
}

/// The three-photon NOON state `(|3_H,0_V⟩ − |0_H,3_V⟩)/√2` on `path`.
pub fn noon_state_on(path: &str) -> PureState {
    let h = ModeLabel::h(path);
    let v = ModeLabel::v(path);
    PureState::superposition([
        (
            FockVector::new([(h.clone(), 3), (v.clone(), 0)]),
            Complex64::ONE,
        ),
        (FockVector::new([(h, 0), (v, 3)]), -Complex64::ONE),
    ])
    .expect("NOON state is normalizable")
}

/// [`noon_state_on`] over the default source path.
pub fn noon_state() -> PureState {
    noon_state_on(SOURCE)
}

/// Build the asymmetric-splitter interferometer at phase `phi`:
/// rotation `α` → phase on V → rotation `α` → polarizing splitter, with
/// detector A on the H output and B, C on a balanced fan-out of the
/// V output.
pub fn build_asym_scheme(config: &SchemeConfig) -> Result<SchemeCircuit, FockError> {
    let h = ModeLabel::h(SOURCE);
    let v = ModeLabel::v(SOURCE);
    let rotation = ModeTransform::polarization_rotation(SOURCE, config.rotation)?;
    let phase = ModeTransform::phase_shift(vec![h, v.clone()], &[v], config.phase)?;
    let pbs = ModeTransform::polarizing_splitter(SOURCE, OUT_H, OUT_V)?;
    let wiring = DetectorWiring::new()
        .detector("A", &[(ModeLabel::h(OUT_H), 1.0)], false, 1)?
        .detector("B", &[(ModeLabel::v(OUT_V), 0.5)], false, 1)?
        .detector("C", &[(ModeLabel::v(OUT_V), 0.5)], false, 1)?;
    Ok(SchemeCircuit {
        elements: vec![rotation.clone(), phase, rotation, pbs],
        wiring,
        input: heralded_input(),
    })
}

/// Normally ordered `(1_e, 2_f)` coincidence rate of the circuit at one
/// phase. Equals `(32/81)(1 + cos 3φ)` at the default rotation.
fn asym_rate(phi: f64, rotation: f64) -> Result<f64, FockError> {
    let config = SchemeConfig::new(SchemeKind::AsymmetricSplitter, phi).with_rotation(rotation);
    let circuit = build_asym_scheme(&config)?;
    let pattern = DetectorWiring::new()
        .detector("A", &[(ModeLabel::h(OUT_H), 1.0)], true, 1)?
        .detector("F", &[(ModeLabel::v(OUT_V), 1.0)], true, 2)?;
    pattern.coincidence_rate(&circuit.output()?)
}

/// Ideal scheme-1 fringe over a phase grid.
pub fn asym_fringe(phases: &[f64]) -> Result<FringeSeries, FockError> {
    asym_fringe_with_rotation(phases, asym_rotation())
}

/// Scheme-1 fringe with a non-default wave-plate angle. Any angle other
/// than `arccos(1/√3)` leaves an uncancelled single-photon harmonic.
pub fn asym_fringe_with_rotation(phases: &[f64], rotation: f64) -> Result<FringeSeries, FockError> {
    if phases.is_empty() {
        return Err(FockError::EmptyTargets);
    }
    let values = phases
        .iter()
        .map(|&phi| asym_rate(phi, rotation))
        .collect::<Result<Vec<f64>, _>>()?;
    FringeSeries::new(
        phases.to_vec(),
        values,
        FringeMeta {
            scheme: SchemeKind::AsymmetricSplitter,
            normalization: String::from("normally-ordered (1,2) coincidence rate"),
            photon_number: 3,
        },
    )
}

fn single_path_of(state: &PureState) -> Result<String, FockError> {
    let modes: Vec<&ModeLabel> = state.modes().iter().collect();
    if modes.len() == 2
        && modes[0].path == modes[1].path
        && modes[0].pol == Polarization::H
        && modes[1].pol == Polarization::V
    {
        Ok(modes[0].path.clone())
    } else {
        Err(FockError::ModeSetMismatch)
    }
}

/// Probability that the NOON-projection measurement fires on `state`:
/// `(1/18)|⟨NOON₃|state⟩|²`.
///
/// Requires a three-photon state over the `(H, V)` pair of one path. The
/// explicit arrangement in [`noon_projection_via_circuit`] computes the
/// same number through the full mode expansion.
pub fn noon_projection_prob(state: &PureState) -> Result<f64, FockError> {
    let path = single_path_of(state)?;
    if state.total_photons() != 3 {
        return Err(FockError::PhotonNumberMismatch {
            left: state.total_photons(),
            right: 3,
        });
    }
    let overlap = noon_state_on(&path).inner_product(state)?;
    Ok(overlap.norm_sqr() / 18.0)
}

fn arm_paths(path: &str) -> [String; 3] {
    [String::from(path), format!("{path}.2"), format!("{path}.3")]
}

/// The projection stage alone: 1→3 split, arm phases `0, 2π/3, 4π/3` on
/// V, a 135° polarizer per arm (rotation + polarizing split + discard),
/// and a single count required in each arm.
fn projection_stage(path: &str) -> Result<(Vec<ModeTransform>, DetectorWiring), FockError> {
    let arms = arm_paths(path);
    let arm_refs: Vec<&str> = arms.iter().map(|s| s.as_str()).collect();
    let splitter = symmetric_splitter(&arm_refs, &[Polarization::H, Polarization::V])?;
    let universe: Vec<ModeLabel> = splitter.modes().to_vec();
    let universe_set: BTreeSet<ModeLabel> = universe.iter().cloned().collect();
    let mut elements = vec![splitter];
    for (index, arm) in arms.iter().enumerate().skip(1) {
        let theta = 2.0 * core::f64::consts::PI * index as f64 / 3.0;
        elements.push(ModeTransform::phase_shift(
            universe.clone(),
            &[ModeLabel::v(arm)],
            theta,
        )?);
    }
    for arm in &arms {
        let rotation = ModeTransform::polarization_rotation(arm, core::f64::consts::FRAC_PI_4)?;
        elements.push(rotation.embed(&universe_set)?);
    }
    let mut wiring = DetectorWiring::new();
    for (name, arm) in ["A", "B", "C"].iter().zip(&arms) {
        wiring = wiring
            .detector(name, &[(ModeLabel::h(arm), 1.0)], false, 1)?
            .discard(ModeLabel::v(arm));
    }
    Ok((elements, wiring))
}

/// Triple-coincidence probability of the explicit projection circuit.
pub fn noon_projection_via_circuit(state: &PureState) -> Result<f64, FockError> {
    let path = single_path_of(state)?;
    let (elements, wiring) = projection_stage(&path)?;
    let circuit = SchemeCircuit {
        elements,
        wiring,
        input: state.clone(),
    };
    circuit.coincidence_rate()
}

/// Build the full NOON-projection interferometer at phase `phi`:
/// pre-rotation → phase on V → projection stage.
pub fn build_noon_scheme(config: &SchemeConfig) -> Result<SchemeCircuit, FockError> {
    let h = ModeLabel::h(SOURCE);
    let v = ModeLabel::v(SOURCE);
    let prep_rotation = ModeTransform::polarization_rotation(SOURCE, config.rotation)?;
    let phase = ModeTransform::phase_shift(vec![h, v.clone()], &[v], config.phase)?;
    let (stage, wiring) = projection_stage(SOURCE)?;
    let mut elements = vec![prep_rotation, phase];
    elements.extend(stage);
    Ok(SchemeCircuit {
        elements,
        wiring,
        input: heralded_input(),
    })
}

/// Ideal NOON-projection fringe, `(1 + cos 3φ)/48` at the default
/// pre-rotation: period `2π/3`, extrema `0` and `1/24`.
pub fn noon_fringe(phases: &[f64]) -> Result<FringeSeries, FockError> {
    noon_fringe_with_rotation(phases, NOON_PREROTATION)
}

/// NOON fringe with a non-default pre-rotation; zero rotation leaves the
/// bare `|2_H,1_V⟩`, which the projection rejects identically.
pub fn noon_fringe_with_rotation(phases: &[f64], rotation: f64) -> Result<FringeSeries, FockError> {
    if phases.is_empty() {
        return Err(FockError::EmptyTargets);
    }
    let values = phases
        .iter()
        .map(|&phi| {
            let config = SchemeConfig::new(SchemeKind::NoonProjection, phi).with_rotation(rotation);
            build_noon_scheme(&config)?.coincidence_rate()
        })
        .collect::<Result<Vec<f64>, _>>()?;
    FringeSeries::new(
        phases.to_vec(),
        values,
        FringeMeta {
            scheme: SchemeKind::NoonProjection,
            normalization: String::from("triple-coincidence probability"),
            photon_number: 3,
        },
    )
}

/// Cosine and sine coefficients of harmonic `k` on a uniform full-period
/// scan: `a_k = (2/n) Σ v cos kφ`, `b_k = (2/n) Σ v sin kφ` (the DC term
/// uses `1/n`).
pub fn harmonic_component(phases: &[f64], values: &[f64], k: u32) -> (f64, f64) {
    let n = phases.len() as f64;
    let scale = if k == 0 { 1.0 / n } else { 2.0 / n };
    let mut a = 0.0;
    let mut b = 0.0;
    for (&phi, &value) in phases.iter().zip(values) {
        a += value * math::cos(k as f64 * phi);
        b += value * math::sin(k as f64 * phi);
    }
    (a * scale, b * scale)
}

/// Magnitude `√(a_k² + b_k²)` of harmonic `k`.
pub fn harmonic_magnitude(phases: &[f64], values: &[f64], k: u32) -> f64 {
    let (a, b) = harmonic_component(phases, values, k);
    math::hypot(a, b)
}
