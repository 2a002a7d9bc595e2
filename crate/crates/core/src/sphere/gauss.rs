//! Gauss–Jacobi and Gauss–Legendre rules via Golub–Welsch.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

/// Nodes and weights on `[-1, 1]` for the weight `(1-x)^alpha (1+x)^beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl GaussRule {
    /// Gauss–Jacobi rule of `order` points. Panics unless `alpha, beta > -1`.
    pub fn jacobi(order: usize, alpha: f64, beta: f64) -> Self {
        assert!(alpha > -1.0 && beta > -1.0, "Jacobi exponents must exceed -1");
        assert!(order >= 1);
        let ab = alpha + beta;
        let mut m = DMatrix::<f64>::zeros(order, order);
        for k in 0..order {
            let kf = k as f64;
            let diag = if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let s = 2.0 * kf + ab;
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            };
            m[(k, k)] = diag;
            if k + 1 < order {
                let j = kf + 1.0;
                let s = 2.0 * j + ab;
                let b = if k == 0 {
                    // The generic formula has a removable 0/0 at j = 1 when alpha + beta = -1.
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    4.0 * j * (j + alpha) * (j + beta) * (j + ab) / (s * s * (s + 1.0) * (s - 1.0))
                };
                m[(k, k + 1)] = b.sqrt();
                m[(k + 1, k)] = b.sqrt();
            }
        }
        let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0)
            + ln_gamma(beta + 1.0)
            - ln_gamma(ab + 2.0);
        let mu0 = ln_mu0.exp();
        let eig = SymmetricEigen::new(m);
        let mut pairs: Vec<(f64, f64)> = (0..order)
            .map(|i| {
                let v0 = eig.eigenvectors[(0, i)];
                (eig.eigenvalues[i], mu0 * v0 * v0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
            alpha,
            beta,
        }
    }

    pub fn legendre(order: usize) -> Self {
        let mut rule = Self::jacobi(order, 0.0, 0.0);
        // Symmetrize exactly.
        let n = order;
        for i in 0..n / 2 {
            let x = 0.5 * (rule.nodes[n - 1 - i] - rule.nodes[i]);
            let w = 0.5 * (rule.weights[i] + rule.weights[n - 1 - i]);
            rule.nodes[i] = -x;
            rule.nodes[n - 1 - i] = x;
            rule.weights[i] = w;
            rule.weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            rule.nodes[n / 2] = 0.0;
        }
        rule
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The rule for `∫_0^1 (1-t)^alpha t^beta g(t) dt` as `(t_k, w_k)`.
    pub fn on_unit_interval(&self) -> Vec<(f64, f64)> {
        let scale = 0.5f64.powf(self.alpha + self.beta + 1.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| (0.5 * (1.0 + x), w * scale))
            .collect()
    }
}

type RuleKey = (usize, u64, u64);

/// Shared, lazily built rules keyed by `(order, alpha, beta)`.
pub fn cached_jacobi(order: usize, alpha: f64, beta: f64) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<GaussRule>>>> = OnceLock::new();
    let key = (order, alpha.to_bits(), beta.to_bits());
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(if alpha == 0.0 && beta == 0.0 {
        GaussRule::legendre(order)
    } else {
        GaussRule::jacobi(order, alpha, beta)
    });
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert(rule)
        .clone()
}

pub fn cached_legendre(order: usize) -> Arc<GaussRule> {
    cached_jacobi(order, 0.0, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;

    #[test]
    fn legendre_integrates_polynomials() {
        let rule = GaussRule::legendre(10);
        for k in 0..20 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let q: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(k))
                .sum();
            assert!((q - exact).abs() < 1e-13, "k = {k}: {q} vs {exact}");
        }
    }

    #[test]
    fn jacobi_moments_on_unit_interval() {
        // ∫_0^1 t^beta (1-t)^alpha t^k dt = B(beta + k + 1, alpha + 1).
        for &(alpha, b) in &[(0.0, -0.5), (-0.5, 0.3), (-0.5, -0.5), (0.0, 2.0), (-0.5, -0.99)] {
            let rule = GaussRule::jacobi(32, alpha, b).on_unit_interval();
            for k in 0..10 {
                let q: f64 = rule.iter().map(|(t, w)| w * t.powi(k)).sum();
                let exact = beta(b + k as f64 + 1.0, alpha + 1.0);
                assert!(
                    ((q - exact) / exact).abs() < 1e-12,
                    "alpha={alpha} beta={b} k={k}: {q} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn cache_returns_same_rule() {
        let a = cached_jacobi(16, -0.5, 0.25);
        let b = cached_jacobi(16, -0.5, 0.25);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
