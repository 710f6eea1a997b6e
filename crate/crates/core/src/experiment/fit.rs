//! Harmonic least squares.
//!
//! The scan model is `y(φ) = a₀ + Σ_k (a_k cos kφ + b_k sin kφ)` over a
//! chosen harmonic set (the fringe analyses use `{1, 3}` or `{3}`).
//! Parameters come from plain linear least squares — weighting by the
//! observed counts would correlate the weights with the noise and bias
//! the visibilities low. The per-point Poisson variances (raw counts,
//! floored at one for empty bins) enter the χ² and the sandwich
//! parameter covariance `(XᵀX)⁻¹ XᵀVX (XᵀX)⁻¹`. Reported quantities are
//! `P₄₀ = a₀`, `V_k = √(a_k²+b_k²)/a₀`, and `φ₀` from the
//! third-harmonic pair so the fit reads `P₄₀(1 + V₃ cos 3(φ + φ₀) + …)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

use super::{CorrectedPoint, ExperimentError};

/// Harmonic fit output. `coefficients` is `[a₀, a_k, b_k, …]` with
/// harmonics ascending; `covariance` is the matching inverse
/// normal-equations matrix.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub p40: f64,
    pub v3: f64,
    pub v1: f64,
    pub phi0: f64,
    pub chi2: f64,
    pub dof: usize,
    pub harmonics: Vec<u32>,
    pub coefficients: Vec<f64>,
    pub covariance: Vec<Vec<f64>>,
}

impl FitResult {
    fn amplitude_pair(&self, harmonic: u32) -> Option<(usize, usize)> {
        self.harmonics
            .iter()
            .position(|&k| k == harmonic)
            .map(|slot| (1 + 2 * slot, 2 + 2 * slot))
    }

    /// Delta-method standard error of a visibility `√(a²+b²)/a₀`.
    fn visibility_sigma(&self, harmonic: u32) -> Option<f64> {
        let (ia, ib) = self.amplitude_pair(harmonic)?;
        let a = self.coefficients[ia];
        let b = self.coefficients[ib];
        let a0 = self.coefficients[0];
        let r = math::hypot(a, b);
        if r == 0.0 || a0 == 0.0 {
            return None;
        }
        let grad = [-r / (a0 * a0), a / (r * a0), b / (r * a0)];
        let idx = [0, ia, ib];
        let mut var = 0.0;
        for (gi, &i) in grad.iter().zip(&idx) {
            for (gj, &j) in grad.iter().zip(&idx) {
                var += gi * gj * self.covariance[i][j];
            }
        }
        Some(math::sqrt(var.max(0.0)))
    }

    pub fn v3_sigma(&self) -> Option<f64> {
        self.visibility_sigma(3)
    }

    pub fn v1_sigma(&self) -> Option<f64> {
        self.visibility_sigma(1)
    }
}

fn solve_symmetric(matrix: &[Vec<f64>], rhs: &[f64]) -> Result<Vec<f64>, ExperimentError> {
    let n = rhs.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut b = rhs.to_vec();
    let scale: f64 = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0, |acc, x| acc.max(math::abs(*x)));
    for col in 0..n {
        let mut pivot = col;
        for row in col + 1..n {
            if math::abs(a[row][col]) > math::abs(a[pivot][col]) {
                pivot = row;
            }
        }
        if math::abs(a[pivot][col]) <= 1e-12 * scale.max(1.0) {
            return Err(ExperimentError::SingularDesign);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let pivot_row = a[col].clone();
        for row in col + 1..n {
            let factor = a[row][col] / pivot_row[col];
            for (slot, &p) in a[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *slot -= factor * p;
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for col in (0..n).rev() {
        let mut acc = b[col];
        for k in col + 1..n {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}

fn invert_symmetric(matrix: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, ExperimentError> {
    let n = matrix.len();
    let mut inverse = Vec::with_capacity(n);
    for col in 0..n {
        let mut unit = vec![0.0; n];
        unit[col] = 1.0;
        inverse.push(solve_symmetric(matrix, &unit)?);
    }
    // Columns of the inverse, transposed back to rows; the matrix is
    // symmetric so this also symmetrizes roundoff.
    let mut rows = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = 0.5 * (inverse[j][i] + inverse[i][j]);
        }
    }
    Ok(rows)
}

fn validate_harmonics(harmonics: &[u32]) -> Result<Vec<u32>, ExperimentError> {
    let mut set: Vec<u32> = harmonics.to_vec();
    set.sort_unstable();
    set.dedup();
    if set.first() == Some(&0) {
        return Err(ExperimentError::InvalidHarmonic { value: 0 });
    }
    Ok(set)
}

/// Linear least squares of the harmonic model on corrected points.
///
/// Needs at least `2·|harmonics| + 1` points spanning one period of the
/// slowest requested harmonic; a degenerate grid surfaces as a singular
/// design matrix.
pub fn fit_points(
    points: &[CorrectedPoint],
    harmonics: &[u32],
) -> Result<FitResult, ExperimentError> {
    let harmonics = validate_harmonics(harmonics)?;
    let params = 1 + 2 * harmonics.len();
    if points.len() < params {
        return Err(ExperimentError::InsufficientData {
            needed: params,
            got: points.len(),
        });
    }
    if let Some(&slowest) = harmonics.first() {
        let period = core::f64::consts::TAU / slowest as f64;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = lo.min(p.phase);
            hi = hi.max(p.phase);
        }
        let span = hi - lo;
        let needed = period * (1.0 - 1.0 / points.len() as f64);
        if span + 1e-12 < needed {
            return Err(ExperimentError::GridTooNarrow { span, needed });
        }
    }
    let basis = |phase: f64| {
        let mut row = Vec::with_capacity(params);
        row.push(1.0);
        for &k in &harmonics {
            row.push(math::cos(k as f64 * phase));
            row.push(math::sin(k as f64 * phase));
        }
        row
    };
    let mut normal = vec![vec![0.0; params]; params];
    let mut rhs = vec![0.0; params];
    for point in points {
        let row = basis(point.phase);
        for i in 0..params {
            rhs[i] += row[i] * point.value;
            for j in 0..params {
                normal[i][j] += row[i] * row[j];
            }
        }
    }
    let coefficients = solve_symmetric(&normal, &rhs)?;
    // Sandwich covariance: (XᵀX)⁻¹ XᵀVX (XᵀX)⁻¹ with V the per-point
    // Poisson variances.
    let inverse = invert_symmetric(&normal)?;
    let mut middle = vec![vec![0.0; params]; params];
    for point in points {
        let row = basis(point.phase);
        for i in 0..params {
            for j in 0..params {
                middle[i][j] += row[i] * row[j] * point.variance;
            }
        }
    }
    let mut covariance = vec![vec![0.0; params]; params];
    for i in 0..params {
        for j in 0..params {
            let mut acc = 0.0;
            for k in 0..params {
                for l in 0..params {
                    acc += inverse[i][k] * middle[k][l] * inverse[l][j];
                }
            }
            covariance[i][j] = acc;
        }
    }
    let mut chi2 = 0.0;
    for point in points {
        let row = basis(point.phase);
        let model: f64 = row.iter().zip(&coefficients).map(|(x, c)| x * c).sum();
        let residual = point.value - model;
        chi2 += residual * residual / point.variance;
    }
    let a0 = coefficients[0];
    let visibility = |harmonic: u32| {
        harmonics
            .iter()
            .position(|&k| k == harmonic)
            .map(|slot| math::hypot(coefficients[1 + 2 * slot], coefficients[2 + 2 * slot]) / a0)
            .unwrap_or(0.0)
    };
    let phi0 = harmonics
        .iter()
        .position(|&k| k == 3)
        .map(|slot| {
            let a = coefficients[1 + 2 * slot];
            let b = coefficients[2 + 2 * slot];
            if a == 0.0 && b == 0.0 {
                0.0
            } else {
                math::atan2(-b, a) / 3.0
            }
        })
        .unwrap_or(0.0);
    Ok(FitResult {
        p40: a0,
        v3: visibility(3),
        v1: visibility(1),
        phi0,
        chi2,
        dof: points.len() - params,
        harmonics,
        coefficients,
        covariance,
    })
}

/// Fit a plain `(phase, value)` series with unit weights.
pub fn fit_values(
    phases: &[f64],
    values: &[f64],
    harmonics: &[u32],
) -> Result<FitResult, ExperimentError> {
    if phases.len() != values.len() {
        return Err(ExperimentError::InsufficientData {
            needed: phases.len(),
            got: values.len(),
        });
    }
    let points: Vec<CorrectedPoint> = phases
        .iter()
        .zip(values)
        .map(|(&phase, &value)| CorrectedPoint {
            phase,
            value,
            variance: 1.0,
        })
        .collect();
    fit_points(&points, harmonics)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(points: usize, p40: f64, v3: f64, v1: f64) -> Vec<CorrectedPoint> {
        (0..points)
            .map(|i| {
                let phase = core::f64::consts::TAU * i as f64 / points as f64;
                let value = p40 * (1.0 + v3 * math::cos(3.0 * phase) + v1 * math::cos(phase));
                CorrectedPoint {
                    phase,
                    value,
                    variance: value.abs().max(1.0),
                }
            })
            .collect()
    }

    #[test]
    fn noiseless_fit_is_exact() {
        let points = synthetic(25, 184.0, 0.85, 0.05);
        let fit = fit_points(&points, &[1, 3]).unwrap();
        assert!((fit.p40 - 184.0).abs() < 1e-9);
        assert!((fit.v3 - 0.85).abs() < 1e-9);
        assert!((fit.v1 - 0.05).abs() < 1e-9);
        assert!(fit.phi0.abs() < 1e-9);
        assert!(fit.chi2 < 1e-12);
        assert_eq!(fit.dof, 20);
    }

    #[test]
    fn pure_fringe_fit_recovers_unit_visibility() {
        let values: Vec<f64> = (0..25)
            .map(|i| {
                let phase = core::f64::consts::TAU * i as f64 / 25.0;
                32.0 / 81.0 * (1.0 + math::cos(3.0 * phase))
            })
            .collect();
        let phases: Vec<f64> = (0..25)
            .map(|i| core::f64::consts::TAU * i as f64 / 25.0)
            .collect();
        let fit = fit_values(&phases, &values, &[1, 3]).unwrap();
        assert!((fit.v3 - 1.0).abs() < 1e-9);
        assert!(fit.v1.abs() < 1e-9);
    }

    #[test]
    fn constant_data_has_zero_visibilities() {
        let points: Vec<CorrectedPoint> = (0..12)
            .map(|i| CorrectedPoint {
                phase: core::f64::consts::TAU * i as f64 / 12.0,
                value: 40.0,
                variance: 40.0,
            })
            .collect();
        let fit = fit_points(&points, &[1, 3]).unwrap();
        assert!(fit.v3.abs() < 1e-12);
        assert!(fit.v1.abs() < 1e-12);
        assert!((fit.p40 - 40.0).abs() < 1e-12);
    }

    #[test]
    fn phase_offset_is_recovered() {
        let injected = 0.21;
        let points: Vec<CorrectedPoint> = (0..25)
            .map(|i| {
                let phase = core::f64::consts::TAU * i as f64 / 25.0;
                let value = 100.0 * (1.0 + 0.8 * math::cos(3.0 * (phase + injected)));
                CorrectedPoint {
                    phase,
                    value,
                    variance: value.max(1.0),
                }
            })
            .collect();
        let fit = fit_points(&points, &[3]).unwrap();
        // φ₀ is defined modulo the 2π/3 fringe period.
        let period = core::f64::consts::TAU / 3.0;
        let wrapped = (fit.phi0 - injected).rem_euclid(period);
        let distance = wrapped.min(period - wrapped);
        assert!(distance < 1e-9, "phi0 {} vs {}", fit.phi0, injected);
    }

    #[test]
    fn degenerate_grid_is_singular() {
        let points: Vec<CorrectedPoint> = (0..9)
            .map(|_| CorrectedPoint {
                phase: 0.3,
                value: 10.0,
                variance: 10.0,
            })
            .collect();
        // All phases equal: the span check fires first, and a forced fit
        // on a repeated-phase grid is singular.
        assert!(matches!(
            fit_points(&points, &[3]).unwrap_err(),
            ExperimentError::GridTooNarrow { .. }
        ));
    }

    #[test]
    fn too_few_points_are_rejected() {
        let points = synthetic(4, 10.0, 0.5, 0.0);
        assert!(matches!(
            fit_points(&points, &[1, 3]).unwrap_err(),
            ExperimentError::InsufficientData { needed: 5, got: 4 }
        ));
    }

    #[test]
    fn residuals_are_orthogonal_to_the_basis() {
        // Deterministic pseudo-noise on top of the fringe model.
        let mut state = 0x9E3779B97F4A7C15u64;
        let mut noise = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 20.0
        };
        let points: Vec<CorrectedPoint> = (0..25)
            .map(|i| {
                let phase = core::f64::consts::TAU * i as f64 / 25.0;
                let value = 184.0 * (1.0 + 0.85 * math::cos(3.0 * phase)) + noise();
                CorrectedPoint {
                    phase,
                    value,
                    variance: value.abs().max(1.0),
                }
            })
            .collect();
        let fit = fit_points(&points, &[1, 3]).unwrap();
        for (slot, &k) in [0u32, 1, 1, 3, 3].iter().enumerate() {
            let mut inner = 0.0;
            let mut res_norm = 0.0;
            let mut basis_norm = 0.0;
            for point in &points {
                let row = [
                    1.0,
                    math::cos(point.phase),
                    math::sin(point.phase),
                    math::cos(3.0 * point.phase),
                    math::sin(3.0 * point.phase),
                ];
                let model: f64 = row.iter().zip(&fit.coefficients).map(|(x, c)| x * c).sum();
                let residual = point.value - model;
                inner += residual * row[slot];
                res_norm += residual * residual;
                basis_norm += row[slot] * row[slot];
            }
            let normalized = inner.abs() / (res_norm.sqrt() * basis_norm.sqrt()).max(1e-30);
            assert!(normalized < 1e-8, "harmonic {k} slot {slot}: {normalized}");
        }
    }

    #[test]
    fn covariance_is_symmetric_positive() {
        let points = synthetic(25, 184.0, 0.85, 0.05);
        let fit = fit_points(&points, &[1, 3]).unwrap();
        for i in 0..5 {
            assert!(fit.covariance[i][i] > 0.0);
            for j in 0..5 {
                assert!((fit.covariance[i][j] - fit.covariance[j][i]).abs() < 1e-12);
            }
        }
        assert!(fit.v3_sigma().unwrap() > 0.0);
    }
}
