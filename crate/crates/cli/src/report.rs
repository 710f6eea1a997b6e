//! Fit reports: fixed-key JSON plus a human-readable table.

use serde::Serialize;

use triphoton_core::experiment::FitResult;

/// JSON report with fixed keys. `covariance` rows follow the
/// coefficient order `[a0, a_k, b_k, …]` with harmonics ascending.
#[derive(Debug, Serialize)]
pub struct FitReport {
    #[serde(rename = "P40")]
    pub p40: f64,
    #[serde(rename = "V3")]
    pub v3: f64,
    #[serde(rename = "V1")]
    pub v1: f64,
    pub phi0: f64,
    pub chi2: f64,
    pub dof: usize,
    pub covariance: Vec<Vec<f64>>,
}

impl FitReport {
    pub fn from_fit(fit: &FitResult) -> FitReport {
        FitReport {
            p40: fit.p40,
            v3: fit.v3,
            v1: fit.v1,
            phi0: fit.phi0,
            chi2: fit.chi2,
            dof: fit.dof,
            covariance: fit.covariance.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Aligned table for the terminal.
pub fn table(fit: &FitResult) -> String {
    let mut out = String::new();
    out.push_str(&format!("{:<12} {:>14}\n", "quantity", "value"));
    out.push_str(&format!("{:<12} {:>14.6}\n", "P40", fit.p40));
    out.push_str(&format!("{:<12} {:>14.6}\n", "V3", fit.v3));
    if let Some(sigma) = fit.v3_sigma() {
        out.push_str(&format!("{:<12} {:>14.6}\n", "V3 sigma", sigma));
    }
    out.push_str(&format!("{:<12} {:>14.6}\n", "V1", fit.v1));
    if let Some(sigma) = fit.v1_sigma() {
        out.push_str(&format!("{:<12} {:>14.6}\n", "V1 sigma", sigma));
    }
    out.push_str(&format!("{:<12} {:>14.6}\n", "phi0 (rad)", fit.phi0));
    out.push_str(&format!("{:<12} {:>14.3}\n", "chi2", fit.chi2));
    out.push_str(&format!("{:<12} {:>14}\n", "dof", fit.dof));
    out
}
