//! Multimode model of the two-crystal down-conversion source.
//!
//! Each crystal emits a photon pair with joint spectral amplitude
//! `Φ(ω₁, ω₂)`; interference between the two pairs is governed by two
//! quartic functionals of `Φ`:
//!
//! ```text
//! A = ∫ |Φ(ω₁,ω₂) Φ(ω₁′,ω₂′)|²                       (pair norm)
//! E = ∫ Φ*(ω₁,ω₂) Φ*(ω₁′,ω₂′) Φ(ω₁′,ω₂) Φ(ω₁,ω₂′)   (pair exchange)
//! ```
//!
//! `E/A ∈ [0, 1]` measures the indistinguishability of the two pairs;
//! `E = A` is the single-mode ideal. Four-fold coincidence rates reduce
//! to combinations of `A` and `E` weighted by per-permutation scheme
//! coefficients; the closed-form rate laws, their visibilities (with the
//! phenomenological spatial-mismatch factor `v₁`), and the generic
//! permutation-pairing engine all live here.
//!
//! `Φ` is fixed to a Gaussian family in detuning coordinates — pump
//! envelope `exp(−(ω₁+ω₂)²/4σ_p²)`, filter envelopes `exp(−ω²/4σ_f²)`,
//! and delay phases — which admits closed-form cross-checks.

pub mod quad;

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::schemes::SchemeKind;

pub use quad::GaussHermite;

/// Errors from model construction and quadrature.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralError {
    /// A bandwidth was zero, negative, or non-finite.
    InvalidBandwidth { value: f64 },
    /// Overlap integrals violating `A > 0`, `|E| ≤ A`, or `v₁ ∈ [0, 1]`.
    InvalidOverlap { a: f64, e: f64, v1: f64 },
    /// Doubling the quadrature grid moved the result by more than the
    /// convergence budget.
    QuadratureNotConverged { rel_delta: f64 },
    /// The two-parameter visibility solve found no admissible root.
    NoSolution,
    /// Grid too small to be meaningful.
    GridTooSmall { nodes: usize },
}

impl core::fmt::Display for SpectralError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SpectralError::InvalidBandwidth { value } => {
                write!(f, "bandwidth must be positive and finite, got {value}")
            }
            SpectralError::InvalidOverlap { a, e, v1 } => write!(
                f,
                "invalid overlap integrals: A={a}, E={e}, v1={v1} \
                 (need A > 0, |E| ≤ A, 0 ≤ v1 ≤ 1)"
            ),
            SpectralError::QuadratureNotConverged { rel_delta } => write!(
                f,
                "quadrature not converged: doubling the grid changed the result by {rel_delta:.3e} \
                 (budget 1e-6)"
            ),
            SpectralError::NoSolution => write!(f, "no admissible (E/A, v1) solution"),
            SpectralError::GridTooSmall { nodes } => {
                write!(f, "grid of {nodes} nodes per axis is too small")
            }
        }
    }
}

impl core::error::Error for SpectralError {}

/// Parameters of the Gaussian joint spectral amplitude.
///
/// Frequencies are detunings from the common centre; an overall centre
/// offset shifts the peak. `delay_h`/`delay_v` enter the amplitude as
/// linear phases `e^{i(ω₁ ΔT_H + ω₂ ΔT_V)}`; in the exchange integral
/// they act as the relative delay between the two pairs (see
/// [`overlap_integrals`]), which is what degrades `E/A`. With
/// `symmetrized` (the default) the amplitude is symmetrized over its two
/// arguments.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    pump_bandwidth: f64,
    filter_bandwidth: f64,
    center_offset: f64,
    delay_h: f64,
    delay_v: f64,
    symmetrized: bool,
    pump_scale: Complex64,
}

impl SpectralModel {
    pub fn new(pump_bandwidth: f64, filter_bandwidth: f64) -> Result<Self, SpectralError> {
        for value in [pump_bandwidth, filter_bandwidth] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(SpectralError::InvalidBandwidth { value });
            }
        }
        Ok(SpectralModel {
            pump_bandwidth,
            filter_bandwidth,
            center_offset: 0.0,
            delay_h: 0.0,
            delay_v: 0.0,
            symmetrized: true,
            pump_scale: Complex64::ONE,
        })
    }

    pub fn with_delays(mut self, delay_h: f64, delay_v: f64) -> Self {
        self.delay_h = delay_h;
        self.delay_v = delay_v;
        self
    }

    pub fn with_center_offset(mut self, offset: f64) -> Self {
        self.center_offset = offset;
        self
    }

    pub fn with_symmetrized(mut self, symmetrized: bool) -> Self {
        self.symmetrized = symmetrized;
        self
    }

    /// Overall pump scale; rates are reported relative, so this only
    /// matters when comparing absolute numbers between models.
    pub fn with_pump_scale(mut self, scale: Complex64) -> Self {
        self.pump_scale = scale;
        self
    }

    pub fn pump_bandwidth(&self) -> f64 {
        self.pump_bandwidth
    }

    pub fn filter_bandwidth(&self) -> f64 {
        self.filter_bandwidth
    }

    pub fn delays(&self) -> (f64, f64) {
        (self.delay_h, self.delay_v)
    }

    pub fn symmetrized(&self) -> bool {
        self.symmetrized
    }

    pub fn pump_scale(&self) -> Complex64 {
        self.pump_scale
    }

    fn raw_phi(&self, w1: f64, w2: f64) -> Complex64 {
        let sp2 = self.pump_bandwidth * self.pump_bandwidth;
        let sf2 = self.filter_bandwidth * self.filter_bandwidth;
        let sum = w1 + w2;
        let envelope = math::exp(-sum * sum / (4.0 * sp2) - (w1 * w1 + w2 * w2) / (4.0 * sf2));
        envelope * Complex64::from_polar(1.0, w1 * self.delay_h + w2 * self.delay_v)
    }

    /// Joint spectral amplitude at detunings `(w1, w2)`; peak value 1.
    pub fn phi(&self, w1: f64, w2: f64) -> Complex64 {
        let n1 = w1 - self.center_offset;
        let n2 = w2 - self.center_offset;
        if self.symmetrized {
            0.5 * (self.raw_phi(n1, n2) + self.raw_phi(n2, n1))
        } else {
            self.raw_phi(n1, n2)
        }
    }

    /// Axis scale matching the narrower of the pump/filter widths, used
    /// to place quadrature nodes.
    fn quadrature_scale(&self) -> f64 {
        let p = 0.25 / (self.pump_bandwidth * self.pump_bandwidth)
            + 0.25 / (self.filter_bandwidth * self.filter_bandwidth);
        1.0 / math::sqrt(2.0 * p)
    }
}

/// The overlap pair `(A, E)` with the spatial-mismatch factor `v₁`.
///
/// Construction enforces `A > 0`, `|E| ≤ A` (Schwartz, with a small
/// numerical allowance), and `v₁ ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapIntegrals {
    a: f64,
    e: f64,
    v1: f64,
}

impl OverlapIntegrals {
    pub fn new(a: f64, e: f64, v1: f64) -> Result<Self, SpectralError> {
        let valid = a.is_finite()
            && e.is_finite()
            && v1.is_finite()
            && a > 0.0
            && math::abs(e) <= a * (1.0 + 1e-9)
            && (0.0..=1.0).contains(&v1);
        if !valid {
            return Err(SpectralError::InvalidOverlap { a, e, v1 });
        }
        Ok(OverlapIntegrals { a, e, v1 })
    }

    /// Unit-normalized overlaps from a ratio `E/A ∈ [−1, 1]`.
    pub fn from_ratio(e_over_a: f64, v1: f64) -> Result<Self, SpectralError> {
        Self::new(1.0, e_over_a, v1)
    }

    /// The single-mode ideal: `E = A`, no spatial mismatch.
    pub fn ideal() -> Self {
        OverlapIntegrals {
            a: 1.0,
            e: 1.0,
            v1: 1.0,
        }
    }

    pub fn with_v1(self, v1: f64) -> Result<Self, SpectralError> {
        Self::new(self.a, self.e, v1)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn ratio(&self) -> f64 {
        self.e / self.a
    }
}

/// Tensor-product quadrature resolution (nodes per axis).
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub nodes_per_axis: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { nodes_per_axis: 48 }
    }
}

/// Converged overlap integrals plus quadrature diagnostics.
#[derive(Debug, Clone)]
pub struct OverlapOutcome {
    pub integrals: OverlapIntegrals,
    /// Imaginary residue of the exchange integral, kept as a sanity
    /// record; it is pure roundoff for this Gaussian family.
    pub e_imag_residue: f64,
    /// Relative change of `A` under grid doubling.
    pub rel_delta_a: f64,
    /// Change of `E` under grid doubling, relative to `A`.
    pub rel_delta_e: f64,
    /// Nodes per axis of the accepted (finer) grid.
    pub nodes_used: usize,
}

struct RawOverlaps {
    a: f64,
    e: Complex64,
}

/// One evaluation of `A` and `E` on an `n`-node scaled grid.
///
/// `A` factorizes into the square of a two-dimensional integral. For `E`
/// the delay phases carried by `Φ` itself cancel identically in the
/// exchange quartic; what survives physically is the *relative* delay
/// between the exchanged photons of the two pairs, entering as
/// difference phases `e^{i(ω₁′−ω₁)ΔT_H} e^{i(ω₂′−ω₂)ΔT_V}`. Folding the
/// `ΔT_H` phase into the kernel
///
/// ```text
/// K(x, y) = ∫ Φ*(ω, x) Φ(ω, y) e^{−iω ΔT_H} dω
/// ```
///
/// gives `E = ∫∫ |K(x, y)|² e^{i(y−x) ΔT_V} dx dy`, so the
/// four-dimensional sum is never formed. Summation order is fixed,
/// keeping results reproducible bit for bit.
fn raw_overlaps(model: &SpectralModel, n: usize) -> RawOverlaps {
    let rule = GaussHermite::new(n);
    let (nodes, weights) = rule.scaled(model.quadrature_scale());
    let offset = model.center_offset;
    let (delay_h, delay_v) = (model.delay_h, model.delay_v);
    let mut table = Vec::with_capacity(n * n);
    for &x in &nodes {
        for &y in &nodes {
            table.push(model.phi(x + offset, y + offset));
        }
    }
    let mut trace = 0.0;
    for i in 0..n {
        for j in 0..n {
            trace += weights[i] * weights[j] * table[i * n + j].norm_sqr();
        }
    }
    let a = trace * trace;
    let mut kernel = alloc::vec![Complex64::ZERO; n * n];
    for j in 0..n {
        for l in 0..n {
            let mut acc = Complex64::ZERO;
            for i in 0..n {
                let phase = Complex64::from_polar(1.0, -nodes[i] * delay_h);
                acc += weights[i] * phase * table[i * n + j].conj() * table[i * n + l];
            }
            kernel[j * n + l] = acc;
        }
    }
    let mut e = Complex64::ZERO;
    for j in 0..n {
        for l in 0..n {
            let exchange = Complex64::from_polar(1.0, (nodes[l] - nodes[j]) * delay_v);
            e += weights[j] * weights[l] * exchange * kernel[j * n + l] * kernel[j * n + l].conj();
        }
    }
    RawOverlaps { a, e }
}

const CONVERGENCE_BUDGET: f64 = 1e-6;

/// Evaluate the overlap integrals of a model by scaled Gauss–Hermite
/// quadrature, policing convergence by grid doubling.
///
/// The finer grid's values are returned with `v₁ = 1`; attach a mismatch
/// factor with [`OverlapIntegrals::with_v1`]. Fails if doubling moves
/// `A` or `E` by more than `1e-6` relative.
pub fn overlap_integrals(
    model: &SpectralModel,
    grid: &GridSpec,
) -> Result<OverlapOutcome, SpectralError> {
    let n = grid.nodes_per_axis;
    if n < 4 {
        return Err(SpectralError::GridTooSmall { nodes: n });
    }
    let coarse = raw_overlaps(model, n);
    let fine = raw_overlaps(model, 2 * n);
    let rel_delta_a = math::abs(fine.a - coarse.a) / fine.a;
    let rel_delta_e = math::abs(fine.e.re - coarse.e.re) / fine.a;
    let rel_delta = rel_delta_a.max(rel_delta_e);
    // Negated form so NaN deltas are rejected as well.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(rel_delta <= CONVERGENCE_BUDGET) {
        return Err(SpectralError::QuadratureNotConverged { rel_delta });
    }
    let integrals = OverlapIntegrals::new(fine.a, fine.e.re.min(fine.a), 1.0)?;
    Ok(OverlapOutcome {
        integrals,
        e_imag_residue: math::abs(fine.e.im),
        rel_delta_a,
        rel_delta_e,
        nodes_used: 2 * n,
    })
}

/// Per-permutation coefficients of a scheme at one phase.
///
/// The asymmetric scheme groups its detector amplitudes into
/// `τ₁ = (1 − 2e^{iφ})/3`, `τ₂ = (e^{iφ} − 2)/3`,
/// `ρ₁ = −ρ₂ = √2(1 + e^{iφ})/3`; the NOON projection into
/// `a₁, a₂, a₃`, sums of stepped phase factors obeying
/// `1 + e^{i2π/3} + e^{i4π/3} = 0`.
#[derive(Debug, Clone, Copy)]
pub enum SchemeCoefficients {
    Asymmetric {
        tau1: Complex64,
        rho1: Complex64,
        tau2: Complex64,
        rho2: Complex64,
    },
    NoonProjection {
        a1: Complex64,
        a2: Complex64,
        a3: Complex64,
    },
}

impl SchemeCoefficients {
    pub fn at(kind: SchemeKind, phase: f64) -> Self {
        let z = Complex64::from_polar(1.0, phase);
        match kind {
            SchemeKind::AsymmetricSplitter => {
                let tau1 = (Complex64::ONE - 2.0 * z) / 3.0;
                let tau2 = (z - 2.0 * Complex64::ONE) / 3.0;
                let rho1 = math::sqrt(2.0) * (Complex64::ONE + z) / 3.0;
                SchemeCoefficients::Asymmetric {
                    tau1,
                    rho1,
                    tau2,
                    rho2: -rho1,
                }
            }
            SchemeKind::NoonProjection => {
                let w = Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI / 3.0);
                let w2 = w * w;
                let z2 = z * z;
                let z3 = z2 * z;
                let one = Complex64::ONE;
                SchemeCoefficients::NoonProjection {
                    a1: one + z3 + 2.0 * z2 * w + 2.0 * z * w2,
                    a2: one + z3 + 2.0 * z2 * w2 + 2.0 * z * w,
                    a3: one + z3 + 2.0 * z2 + 2.0 * z,
                }
            }
        }
    }

    /// Complex weight per spectral pairing class, amplitude prefactors
    /// included. There are three ways to pair the two emitted pairs
    /// across the four detection times; equal pairings overlap as `A`,
    /// crossed pairings as `E`.
    pub fn pairing_weights(&self) -> [Complex64; 3] {
        match *self {
            SchemeCoefficients::Asymmetric {
                tau1,
                rho1,
                tau2,
                rho2,
            } => {
                let ttr = tau1 * tau2 * rho2;
                let rrr = rho1 * rho2 * rho2;
                [ttr, 0.5 * (ttr + rrr), 0.5 * (ttr + rrr)]
            }
            SchemeCoefficients::NoonProjection { a1, a2, a3 } => {
                let scale = 1.0 / math::sqrt(1728.0);
                [scale * (a1 + a3), scale * (a1 + a2), scale * (a2 + a3)]
            }
        }
    }
}

/// Generic four-fold rate from pairing weights and overlaps:
/// `P₄ = A·Σ|w_p|² + E·(|Σ w_p|² − Σ|w_p|²)`.
///
/// Reproduces [`p4_asym`] and [`p4_noon`] exactly at `v₁ = 1`; the
/// spatial-mismatch factor belongs to the closed-form visibilities and
/// has no pairing-level meaning.
pub fn permutation_overlap_p4(coeffs: &SchemeCoefficients, ov: &OverlapIntegrals) -> f64 {
    let weights = coeffs.pairing_weights();
    let mut sum_sq = 0.0;
    let mut total = Complex64::ZERO;
    for w in weights {
        sum_sq += w.norm_sqr();
        total += w;
    }
    ov.a() * sum_sq + ov.e() * (total.norm_sqr() - sum_sq)
}

/// Fringe visibilities of a scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visibilities {
    pub v3: f64,
    pub v1: f64,
}

/// Visibilities from the overlaps, spatial mismatch included:
///
/// * asymmetric scheme — `V₃ = v₁³·8(A+2E)/(17A+7E)`,
///   `V₁ = v₁·9(A−E)/(17A+7E)`;
/// * NOON projection — `V₃ = v₁³·(A+2E)/(2A+E)`, `V₁ = 0` identically.
pub fn visibilities(ov: &OverlapIntegrals, kind: SchemeKind) -> Visibilities {
    let a = ov.a();
    let e = ov.e();
    let v1 = ov.v1();
    match kind {
        SchemeKind::AsymmetricSplitter => {
            let denom = 17.0 * a + 7.0 * e;
            Visibilities {
                v3: math::powi(v1, 3) * 8.0 * (a + 2.0 * e) / denom,
                v1: v1 * 9.0 * (a - e) / denom,
            }
        }
        SchemeKind::NoonProjection => Visibilities {
            v3: math::powi(v1, 3) * (a + 2.0 * e) / (2.0 * a + e),
            v1: 0.0,
        },
    }
}

/// Asymmetric-scheme four-fold rate law
/// `2(17A+7E)/243 · [1 + V₃ cos 3φ + V₁ cos φ]`.
pub fn p4_asym(phase: f64, ov: &OverlapIntegrals) -> f64 {
    let vis = visibilities(ov, SchemeKind::AsymmetricSplitter);
    let dc = 2.0 * (17.0 * ov.a() + 7.0 * ov.e()) / 243.0;
    dc * (1.0 + vis.v3 * math::cos(3.0 * phase) + vis.v1 * math::cos(phase))
}

/// NOON-projection four-fold rate law `(2A+E)/72 · [1 + V₃ cos 3φ]`;
/// no `cos φ` or `cos 2φ` harmonic exists for any overlaps.
pub fn p4_noon(phase: f64, ov: &OverlapIntegrals) -> f64 {
    let vis = visibilities(ov, SchemeKind::NoonProjection);
    let dc = (2.0 * ov.a() + ov.e()) / 72.0;
    dc * (1.0 + vis.v3 * math::cos(3.0 * phase))
}

/// Ratio of phase-averaged rates, asymmetric over NOON. The cosine
/// harmonics average to zero over a period, leaving the DC prefactors:
/// `[2(17A+7E)/243] / [(2A+E)/72]`, which is `1152/243 ≈ 4.74` at
/// `E = A`. Independent of `v₁` and of any common scale on `(A, E)`.
pub fn rate_ratio(ov: &OverlapIntegrals) -> f64 {
    let asym_dc = 2.0 * (17.0 * ov.a() + 7.0 * ov.e()) / 243.0;
    let noon_dc = (2.0 * ov.a() + ov.e()) / 72.0;
    asym_dc / noon_dc
}

/// Solve the asymmetric-scheme visibility relations for `(E/A, v₁)`
/// given observed `(V₃, V₁)`.
///
/// Eliminates `v₁` through the `V₁` relation and bisects the remaining
/// one-dimensional residual in `E/A` over `[0, 1)`. One admissible
/// inversion choice among several; rounded mismatch pairs quoted
/// alongside measured visibilities need not satisfy the relations
/// exactly.
pub fn solve_mismatch(v3_obs: f64, v1_obs: f64) -> Result<(f64, f64), SpectralError> {
    if !(v3_obs > 0.0 && v3_obs <= 1.0 && (0.0..1.0).contains(&v1_obs)) {
        return Err(SpectralError::NoSolution);
    }
    let v1_of = |x: f64| v1_obs * (17.0 + 7.0 * x) / (9.0 * (1.0 - x));
    let residual = |x: f64| {
        let u = v1_of(x);
        math::powi(u, 3) * 8.0 * (1.0 + 2.0 * x) / (17.0 + 7.0 * x) - v3_obs
    };
    // Scan for a sign change with v₁ still admissible, then bisect.
    let steps = 2000;
    let mut bracket = None;
    let mut prev = (0.0, residual(0.0));
    for i in 1..=steps {
        let x = i as f64 / steps as f64 * 0.9995;
        if v1_of(x) > 1.0 {
            break;
        }
        let r = residual(x);
        if prev.1 == 0.0 || prev.1 * r < 0.0 {
            bracket = Some((prev.0, x));
            break;
        }
        prev = (x, r);
    }
    let (mut lo, mut hi) = bracket.ok_or(SpectralError::NoSolution)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(lo) * residual(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let u = v1_of(x);
    if !(0.0..=1.0).contains(&u) {
        return Err(SpectralError::NoSolution);
    }
    Ok((x, u))
}
