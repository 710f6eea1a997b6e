//! Gauss–Hermite nodes and weights.
//!
//! Nodes are the roots of the physicists' Hermite polynomial `H_n`,
//! found by Newton iteration on the orthonormal recurrence with the
//! classic per-root starting guesses; weights come from the derivative
//! at each root. The rule integrates `∫ e^{−x²} f(x) dx` exactly for
//! polynomials up to degree `2n − 1`.

use alloc::vec::Vec;

use crate::math;

const NEWTON_EPS: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 100;

/// Nodes and weights for `∫ e^{−x²} f(x) dx ≈ Σ w_i f(x_i)`, in
/// ascending node order.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least two quadrature nodes");
        let mut nodes = alloc::vec![0.0; n];
        let mut weights = alloc::vec![0.0; n];
        let half = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..half {
            z = match i {
                0 => {
                    let m = 2.0 * nf + 1.0;
                    math::sqrt(m) - 1.85575 / math::exp(math::ln(m) / 6.0)
                }
                1 => z - 1.14 * math::exp(0.426 * math::ln(nf)) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                // Orthonormal Hermite recurrence.
                let mut p1 = 0.7511255444649425; // π^{-1/4}
                let mut p2 = 0.0;
                for j in 0..n {
                    let p3 = p2;
                    p2 = p1;
                    let jf = (j + 1) as f64;
                    p1 = z * math::sqrt(2.0 / jf) * p2 - math::sqrt(j as f64 / jf) * p3;
                }
                pp = math::sqrt(2.0 * nf) * p2;
                let z1 = z;
                z = z1 - p1 / pp;
                if math::abs(z - z1) <= NEWTON_EPS * math::abs(z).max(1.0) {
                    break;
                }
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (pp * pp);
            weights[n - 1 - i] = weights[i];
        }
        nodes.reverse();
        weights.reverse();
        GaussHermite { nodes, weights }
    }

    /// Nodes scaled by `s` together with plain integration weights
    /// `s·w_i·e^{x_i²}`, so `∫ f(ν) dν ≈ Σ W_i f(ν_i)` for integrands
    /// that decay at least like the scaled Gaussian.
    pub fn scaled(&self, s: f64) -> (Vec<f64>, Vec<f64>) {
        let nodes = self.nodes.iter().map(|x| s * x).collect();
        let weights = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| s * w * math::exp(x * x))
            .collect();
        (nodes, weights)
    }
}
