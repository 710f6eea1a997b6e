//! Validates the pairing-overlap reduction against a direct
//! four-dimensional quadrature of the squared four-photon spectral
//! amplitude, with no reduction to `A` and `E` anywhere in the oracle.

use num_complex::Complex64;

use triphoton_core::spectral::{
    overlap_integrals, permutation_overlap_p4, GaussHermite, GridSpec, SchemeCoefficients,
    SpectralModel,
};
use triphoton_core::SchemeKind;

/// Direct quadrature of `∫ |Σ_p w_p Π_p(ω)|² d⁴ω`, where the `Π_p` are
/// the three pairing products of the joint amplitude over the four
/// frequency arguments.
fn p4_by_quadrature(model: &SpectralModel, coeffs: &SchemeCoefficients, n: usize) -> f64 {
    let rule = GaussHermite::new(n);
    let p = 0.25 / (model.pump_bandwidth() * model.pump_bandwidth())
        + 0.25 / (model.filter_bandwidth() * model.filter_bandwidth());
    let (nodes, weights) = rule.scaled(1.0 / (2.0 * p).sqrt());
    let table: Vec<Complex64> = nodes
        .iter()
        .flat_map(|&x| nodes.iter().map(move |&y| (x, y)))
        .map(|(x, y)| model.phi(x, y))
        .collect();
    let [w1, w2, w3] = coeffs.pairing_weights();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let wij = weights[i] * weights[j];
            for k in 0..n {
                let wijk = wij * weights[k];
                for l in 0..n {
                    let weight = wijk * weights[l];
                    let p1 = table[i * n + j] * table[k * n + l];
                    let p2 = table[i * n + k] * table[j * n + l];
                    let p3 = table[k * n + j] * table[i * n + l];
                    let amp = w1 * p1 + w2 * p2 + w3 * p3;
                    total += weight * amp.norm_sqr();
                }
            }
        }
    }
    total
}

#[test]
fn engine_agrees_with_direct_quadrature() {
    let model = SpectralModel::new(1.0, 1.0).unwrap();
    let outcome = overlap_integrals(&model, &GridSpec::default()).unwrap();
    let ov = outcome.integrals;
    for kind in [SchemeKind::AsymmetricSplitter, SchemeKind::NoonProjection] {
        for phase in [0.0, 0.7, std::f64::consts::FRAC_PI_3] {
            let coeffs = SchemeCoefficients::at(kind, phase);
            let engine = permutation_overlap_p4(&coeffs, &ov);
            let oracle = p4_by_quadrature(&model, &coeffs, 48);
            let scale = ov.a().max(engine.abs());
            assert!(
                (engine - oracle).abs() / scale < 1e-6,
                "{kind:?} at phase {phase}: engine {engine} vs quadrature {oracle}"
            );
        }
    }
}
