//! Gauss-Hermite quadrature for tilted-moment evaluation.
//!
//! Rules are built at runtime by the Golub-Welsch algorithm (eigenvalues of
//! the symmetric tridiagonal Jacobi matrix for the weight `exp(-t^2)`) and
//! cached per node count. [`tilted_moments_gh`] is the generic fallback for
//! channels without closed-form moments and the cross-check used in tests:
//! it centers and scales the rule by the tilt `(kappa, 1/tilt_precision)` and
//! normalizes in log space, so the returned discrete posterior always has a
//! finite mean and nonnegative variance.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;

/// Default node count for the fixed-node fallback path.
pub const DEFAULT_GH_NODES: usize = 64;

/// A Gauss-Hermite rule: `integral f(t) exp(-t^2) dt ~ sum w_i f(t_i)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    log_weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-point rule by Golub-Welsch.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature rule needs at least one node");
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            let b = (i as f64 / 2.0).sqrt();
            jacobi[(i, i - 1)] = b;
            jacobi[(i - 1, i)] = b;
        }
        let eig = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|j| {
                let first = eig.eigenvectors[(0, j)];
                (eig.eigenvalues[j], PI.sqrt() * first * first)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));

        // Symmetrize: the rule is odd in the nodes and even in the weights,
        // which makes downstream symmetric-channel identities exact.
        let mut nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let mut weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let t = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -t;
            nodes[j] = t;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussHermite {
            nodes,
            log_weights: weights.iter().map(|w| w.ln()).collect(),
        }
    }

    /// Shared, cached rule for a given node count.
    pub fn cached(n: usize) -> &'static GaussHermite {
        static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussHermite>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut map = cache.lock().unwrap();
        map.entry(n)
            .or_insert_with(|| Box::leak(Box::new(GaussHermite::new(n))))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> Vec<f64> {
        self.log_weights.iter().map(|lw| lw.exp()).collect()
    }
}

/// Mean and variance of `q(x) propto f(x) exp(-tilt/2 (x - kappa)^2)` where
/// `log_f` evaluates `ln f`. The rule is centered at `kappa` with scale
/// `sqrt(2/tilt)`.
pub fn tilted_moments_gh<F: Fn(f64) -> f64>(
    log_f: F,
    kappa: f64,
    tilt_precision: f64,
    rule: &GaussHermite,
) -> (f64, f64) {
    debug_assert!(tilt_precision > 0.0);
    let scale = (2.0 / tilt_precision).sqrt();
    let n = rule.len();
    let mut logm = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n);
    let mut max_lm = f64::NEG_INFINITY;
    for i in 0..n {
        let x = kappa + scale * rule.nodes[i];
        let lm = rule.log_weights[i] + log_f(x);
        if lm > max_lm {
            max_lm = lm;
        }
        xs.push(x);
        logm.push(lm);
    }
    let mut z = 0.0;
    let mut mean = 0.0;
    for i in 0..n {
        let w = (logm[i] - max_lm).exp();
        z += w;
        mean += w * xs[i];
    }
    mean /= z;
    let mut var = 0.0;
    for i in 0..n {
        let w = (logm[i] - max_lm).exp();
        let d = xs[i] - mean;
        var += w * d * d;
    }
    var /= z;
    (mean, var)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_weight_function() {
        let rule = GaussHermite::cached(DEFAULT_GH_NODES);
        let w = rule.weights();
        let s0: f64 = w.iter().sum();
        let s2: f64 = w.iter().zip(rule.nodes()).map(|(w, t)| w * t * t).sum();
        let s4: f64 = w.iter().zip(rule.nodes()).map(|(w, t)| w * t.powi(4)).sum();
        assert!((s0 - PI.sqrt()).abs() < 1e-12);
        assert!((s2 - PI.sqrt() / 2.0).abs() < 1e-12);
        assert!((s4 - 0.75 * PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn nodes_are_antisymmetric() {
        for n in [7, 16, 64] {
            let rule = GaussHermite::new(n);
            for i in 0..n {
                let j = n - 1 - i;
                assert_eq!(rule.nodes()[i], -rule.nodes()[j]);
            }
        }
    }

    #[test]
    fn gaussian_target_is_exact() {
        // f = N(x; 0.7, 2.0): the tilted density is Gaussian, so the rule
        // (exact for polynomial-times-Gaussian) must reproduce conjugacy.
        let rule = GaussHermite::cached(DEFAULT_GH_NODES);
        let (m0, v0) = (0.7, 2.0);
        let (kappa, tilt) = (-1.3, 0.4);
        let log_f = |x: f64| -0.5 * (x - m0) * (x - m0) / v0;
        let (mean, var) = tilted_moments_gh(log_f, kappa, tilt, rule);
        let post_prec = 1.0 / v0 + tilt;
        let want_mean = (m0 / v0 + tilt * kappa) / post_prec;
        let want_var = 1.0 / post_prec;
        assert!((mean - want_mean).abs() < 1e-12, "mean {mean} want {want_mean}");
        assert!((var - want_var).abs() < 1e-12, "var {var} want {want_var}");
    }

    #[test]
    fn extreme_tilt_concentrates() {
        let rule = GaussHermite::cached(DEFAULT_GH_NODES);
        let (mean, var) = tilted_moments_gh(|x| -x.abs(), 0.3, 1e6, rule);
        assert!((mean - 0.3).abs() < 1e-3);
        assert!(var > 0.0 && var < 2e-6);
    }
}
