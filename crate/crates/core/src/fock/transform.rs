use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;

use super::{FockError, FockVector, ModeLabel, Polarization, PureState};

/// Elementwise tolerance on `M·M† = I`.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// Beam-splitter phase conventions.
///
/// Both produce `|transmission|² = T`; they differ in where the phase of
/// the reflected amplitude is placed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BsConvention {
    /// Real matrix `[[√T, √R], [−√R, √T]]`: the reflection feeding the
    /// second output carries a minus sign. This is the convention whose
    /// three-photon output amplitudes on a `|2,1⟩` input read
    /// `(√(3T²R), √T(T−2R), √R(R−2T), √(3TR²))`.
    #[default]
    NegativeReflection,
    /// Symmetric matrix `[[√T, i√R], [i√R, √T]]` with the reflection phase
    /// split evenly between the outputs.
    SymmetricImaginary,
}

/// A unitary acting on the creation operators of a fixed mode list.
///
/// With matrix entries `M[i][j]` (row = outgoing mode, column = incoming
/// mode), applying the transform substitutes each incoming creation
/// operator as `a†_j → Σ_i M[i][j] a†_i` and re-expands the resulting
/// operator polynomial over the Fock basis.
#[derive(Debug, Clone)]
pub struct ModeTransform {
    modes: Vec<ModeLabel>,
    matrix: Vec<Complex64>,
    description: String,
}

impl ModeTransform {
    /// Wrap a row-major square matrix over `modes`, rejecting duplicate
    /// labels, dimension mismatches and non-unitary matrices.
    pub fn new(
        modes: Vec<ModeLabel>,
        matrix: Vec<Complex64>,
        description: &str,
    ) -> Result<Self, FockError> {
        let n = modes.len();
        let mut seen = BTreeSet::new();
        for mode in &modes {
            if !seen.insert(mode.clone()) {
                return Err(FockError::DuplicateMode {
                    mode: alloc::format!("{mode}"),
                });
            }
        }
        if matrix.len() != n * n {
            return Err(FockError::DimensionMismatch {
                expected: n * n,
                found: matrix.len(),
            });
        }
        let t = ModeTransform {
            modes,
            matrix,
            description: String::from(description),
        };
        let deviation = t.unitarity_deviation();
        // Negated form so NaN deviations are rejected as well.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(deviation <= UNITARITY_TOLERANCE) {
            return Err(FockError::NonUnitary {
                max_deviation: deviation,
            });
        }
        Ok(t)
    }

    pub fn identity(modes: Vec<ModeLabel>) -> Result<Self, FockError> {
        let n = modes.len();
        let mut matrix = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            matrix[i * n + i] = Complex64::ONE;
        }
        Self::new(modes, matrix, "identity")
    }

    /// Two-mode beam splitter with transmissivity `T` (so `R = 1 − T`),
    /// coupling `input` into `partner`.
    pub fn beamsplitter(
        input: ModeLabel,
        partner: ModeLabel,
        transmissivity: f64,
        convention: BsConvention,
    ) -> Result<Self, FockError> {
        if !(0.0..=1.0).contains(&transmissivity) || !transmissivity.is_finite() {
            return Err(FockError::InvalidTransmissivity {
                value: transmissivity,
            });
        }
        let t = math::sqrt(transmissivity);
        let r = math::sqrt(1.0 - transmissivity);
        let matrix = match convention {
            BsConvention::NegativeReflection => vec![
                Complex64::new(t, 0.0),
                Complex64::new(r, 0.0),
                Complex64::new(-r, 0.0),
                Complex64::new(t, 0.0),
            ],
            BsConvention::SymmetricImaginary => vec![
                Complex64::new(t, 0.0),
                Complex64::new(0.0, r),
                Complex64::new(0.0, r),
                Complex64::new(t, 0.0),
            ],
        };
        Self::new(vec![input, partner], matrix, "beam splitter")
    }

    /// Polarization rotation by `alpha` on the `(H, V)` pair of one
    /// spatial path:
    ///
    /// ```text
    /// H† → cos α · H† + sin α · V†
    /// V† → −sin α · H† + cos α · V†
    /// ```
    ///
    /// A wave-plate rotation with `cos α = √T` acts like a beam splitter
    /// with transmissivity `T` between the two polarizations.
    pub fn polarization_rotation(path: &str, alpha: f64) -> Result<Self, FockError> {
        let c = math::cos(alpha);
        let s = math::sin(alpha);
        let matrix = vec![
            Complex64::new(c, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(c, 0.0),
        ];
        Self::new(
            vec![ModeLabel::h(path), ModeLabel::v(path)],
            matrix,
            "polarization rotation",
        )
    }

    /// Diagonal phase shift: every mode in `targets` is multiplied by
    /// `e^{iφ}` per photon; the remaining `modes` are untouched.
    pub fn phase_shift(
        modes: Vec<ModeLabel>,
        targets: &[ModeLabel],
        phi: f64,
    ) -> Result<Self, FockError> {
        if targets.is_empty() {
            return Err(FockError::EmptyTargets);
        }
        for target in targets {
            if !modes.contains(target) {
                return Err(FockError::UnknownMode {
                    mode: alloc::format!("{target}"),
                });
            }
        }
        let n = modes.len();
        let phase = Complex64::from_polar(1.0, phi);
        let mut matrix = vec![Complex64::ZERO; n * n];
        for (i, mode) in modes.iter().enumerate() {
            matrix[i * n + i] = if targets.contains(mode) {
                phase
            } else {
                Complex64::ONE
            };
        }
        Self::new(modes, matrix, "phase shift")
    }

    /// Polarizing splitter as a mode permutation: `H` of `input` swaps
    /// with `H` of `h_out`, `V` of `input` with `V` of `v_out`.
    pub fn polarizing_splitter(input: &str, h_out: &str, v_out: &str) -> Result<Self, FockError> {
        let modes = vec![
            ModeLabel::h(input),
            ModeLabel::v(input),
            ModeLabel::h(h_out),
            ModeLabel::v(v_out),
        ];
        let n = modes.len();
        let mut matrix = vec![Complex64::ZERO; n * n];
        let mut set = |row: usize, col: usize| matrix[row * n + col] = Complex64::ONE;
        set(2, 0);
        set(0, 2);
        set(3, 1);
        set(1, 3);
        Self::new(modes, matrix, "polarizing splitter")
    }

    pub fn modes(&self) -> &[ModeLabel] {
        &self.modes
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Matrix entry taking `input` into `output`; zero for labels the
    /// transform does not index.
    pub fn entry(&self, output: &ModeLabel, input: &ModeLabel) -> Complex64 {
        match (self.index_of(output), self.index_of(input)) {
            (Some(i), Some(j)) => self.matrix[i * self.modes.len() + j],
            _ => Complex64::ZERO,
        }
    }

    fn index_of(&self, mode: &ModeLabel) -> Option<usize> {
        self.modes.iter().position(|m| m == mode)
    }

    /// Largest element of `|M·M† − I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.modes.len();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += self.matrix[i * n + k] * self.matrix[j * n + k].conj();
                }
                if i == j {
                    acc -= Complex64::ONE;
                }
                let dev = acc.norm();
                if !dev.is_finite() {
                    return f64::INFINITY;
                }
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Lift the transform into a larger mode universe, acting as the
    /// identity on the added modes. The result's mode order is the sorted
    /// universe.
    pub fn embed(&self, universe: &BTreeSet<ModeLabel>) -> Result<Self, FockError> {
        for mode in &self.modes {
            if !universe.contains(mode) {
                return Err(FockError::UnknownMode {
                    mode: alloc::format!("{mode}"),
                });
            }
        }
        let modes: Vec<ModeLabel> = universe.iter().cloned().collect();
        let n = modes.len();
        let mut matrix = vec![Complex64::ZERO; n * n];
        for (i, out) in modes.iter().enumerate() {
            for (j, inp) in modes.iter().enumerate() {
                matrix[i * n + j] = match (self.index_of(out), self.index_of(inp)) {
                    (Some(a), Some(b)) => self.matrix[a * self.modes.len() + b],
                    (None, None) if i == j => Complex64::ONE,
                    _ => Complex64::ZERO,
                };
            }
        }
        Self::new(modes, matrix, &self.description)
    }

    /// Matrix product `self · earlier`: the transform equal to applying
    /// `earlier` first, then `self`. Both must share one mode list.
    pub fn compose(&self, earlier: &Self) -> Result<Self, FockError> {
        if self.modes != earlier.modes {
            return Err(FockError::ModeSetMismatch);
        }
        let n = self.modes.len();
        let mut matrix = vec![Complex64::ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += self.matrix[i * n + k] * earlier.matrix[k * n + j];
                }
                matrix[i * n + j] = acc;
            }
        }
        let description = alloc::format!("{} ∘ {}", self.description, earlier.description);
        Self::new(self.modes.clone(), matrix, &description)
    }

    /// Apply the transform to a state.
    ///
    /// Each basis ket is rewritten as a creation-operator monomial, every
    /// operator is substituted by its image column, and the product is
    /// re-expanded over occupation vectors with the bosonic `√n!`
    /// normalization. Photon number is conserved; the output is
    /// renormalized with the drift recorded on the result.
    pub fn apply(&self, state: &PureState) -> Result<PureState, FockError> {
        for mode in state.modes() {
            if self.index_of(mode).is_none() {
                return Err(FockError::UnknownMode {
                    mode: alloc::format!("{mode}"),
                });
            }
        }
        let n = self.modes.len();
        let mut out: BTreeMap<FockVector, Complex64> = BTreeMap::new();
        for (ket, amp) in state.iter() {
            // Operator coefficient of this ket, then one multinomial
            // expansion per occupied input mode, convolved together.
            let mut terms: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
            terms.insert(vec![0u32; n], amp / ket.normalization());
            for (mode, count) in ket.iter() {
                let j = self.index_of(mode).expect("mode checked above");
                let column: Vec<Complex64> = (0..n).map(|i| self.matrix[i * n + j]).collect();
                let expanded = expand_power(&column, count);
                let mut next: BTreeMap<Vec<u32>, Complex64> = BTreeMap::new();
                for (exps, coeff) in &terms {
                    for (add, factor) in &expanded {
                        let mut combined = exps.clone();
                        for (slot, extra) in combined.iter_mut().zip(add) {
                            *slot += extra;
                        }
                        *next.entry(combined).or_insert(Complex64::ZERO) += coeff * factor;
                    }
                }
                terms = next;
            }
            for (exps, coeff) in terms {
                let fock = FockVector::new(
                    exps.iter()
                        .enumerate()
                        .map(|(i, &count)| (self.modes[i].clone(), count)),
                );
                let amplitude = coeff * fock.normalization();
                *out.entry(fock).or_insert(Complex64::ZERO) += amplitude;
            }
        }
        let modes: BTreeSet<ModeLabel> = self.modes.iter().cloned().collect();
        PureState::from_raw(out, modes, state.total_photons())
    }
}

/// Expand `(Σ_i column[i]·x_i)^count` over monomials in the `x_i`,
/// returning exponent vectors with their multinomial coefficients.
fn expand_power(column: &[Complex64], count: u32) -> Vec<(Vec<u32>, Complex64)> {
    let n = column.len();
    let mut results = Vec::new();
    let mut exps = vec![0u32; n];
    fn recurse(
        column: &[Complex64],
        slot: usize,
        remaining: u32,
        exps: &mut Vec<u32>,
        results: &mut Vec<(Vec<u32>, Complex64)>,
        total: u32,
    ) {
        if slot + 1 == column.len() {
            exps[slot] = remaining;
            let mut coeff = Complex64::new(math::factorial(total), 0.0);
            for (i, &k) in exps.iter().enumerate() {
                if k > 0 {
                    coeff *= pow_u32(column[i], k) / math::factorial(k);
                }
            }
            if coeff != Complex64::ZERO {
                results.push((exps.clone(), coeff));
            }
            exps[slot] = 0;
            return;
        }
        for k in 0..=remaining {
            if k > 0 && column[slot] == Complex64::ZERO {
                break;
            }
            exps[slot] = k;
            recurse(column, slot + 1, remaining - k, exps, results, total);
        }
        exps[slot] = 0;
    }
    recurse(column, 0, count, &mut exps, &mut results, count);
    results
}

fn pow_u32(base: Complex64, exp: u32) -> Complex64 {
    let mut acc = Complex64::ONE;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// The mode transform of a symmetric 1→`n` splitter over spatial paths,
/// tensored with the identity on polarization.
///
/// Column 0 (the fed port) is `1/√n` into every output; the vacuum-port
/// columns are completed from the standard basis by Gram–Schmidt, which
/// is deterministic and real.
pub(crate) fn symmetric_splitter(
    paths: &[&str],
    pols: &[Polarization],
) -> Result<ModeTransform, FockError> {
    let n = paths.len();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    let root = 1.0 / math::sqrt(n as f64);
    columns.push(vec![root; n]);
    for k in 1..n {
        let mut v = vec![0.0; n];
        v[k] = 1.0;
        for prev in &columns {
            let dot: f64 = v.iter().zip(prev).map(|(a, b)| a * b).sum();
            for (slot, p) in v.iter_mut().zip(prev) {
                *slot -= dot * p;
            }
        }
        let norm = math::sqrt(v.iter().map(|x| x * x).sum());
        for slot in v.iter_mut() {
            *slot /= norm;
        }
        columns.push(v);
    }
    let mut modes = Vec::new();
    for path in paths {
        for pol in pols {
            modes.push(ModeLabel::new(path, *pol));
        }
    }
    let p = pols.len();
    let dim = n * p;
    let mut matrix = vec![Complex64::ZERO; dim * dim];
    for (i, out) in modes.iter().enumerate() {
        for (j, inp) in modes.iter().enumerate() {
            if out.pol == inp.pol {
                let row = paths.iter().position(|s| *s == out.path).unwrap();
                let col = paths.iter().position(|s| *s == inp.path).unwrap();
                matrix[i * dim + j] = Complex64::new(columns[col][row], 0.0);
            }
        }
    }
    ModeTransform::new(modes, matrix, "symmetric splitter")
}
