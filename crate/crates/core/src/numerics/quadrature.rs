//! Gauss-Legendre rules and an adaptive integrator built on them.

use crate::error::{Error, Result};

/// n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on P_n from the Chebyshev-like initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
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

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p, d)
}

/// Adaptive bisection driven by the difference between a panel estimate and
/// the sum of its two halves.
pub struct Adaptive {
    pub rule: GaussLegendre,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
    /// initial panels, so oscillatory integrands are not accepted too early
    pub panels: usize,
}

impl Default for Adaptive {
    fn default() -> Self {
        Self {
            rule: GaussLegendre::new(20),
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_depth: 40,
            panels: 16,
        }
    }
}

impl Adaptive {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, lo: f64, hi: f64) -> Result<f64> {
        let step = (hi - lo) / self.panels as f64;
        let estimates: Vec<f64> = (0..self.panels)
            .map(|i| self.rule.integrate(&f, lo + i as f64 * step, lo + (i + 1) as f64 * step))
            .collect();
        let scale = estimates.iter().map(|v| v.abs()).sum::<f64>();
        let tol = self.abs_tol.max(self.rel_tol * scale) / self.panels as f64;
        let mut total = 0.0;
        for (i, whole) in estimates.into_iter().enumerate() {
            let a = lo + i as f64 * step;
            let b = if i + 1 == self.panels { hi } else { a + step };
            total += self.recurse(&f, a, b, whole, tol, 0)?;
        }
        Ok(total)
    }

    fn recurse<F: Fn(f64) -> f64>(
        &self,
        f: &F,
        lo: f64,
        hi: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> Result<f64> {
        let mid = 0.5 * (lo + hi);
        let left = self.rule.integrate(f, lo, mid);
        let right = self.rule.integrate(f, mid, hi);
        let split = left + right;
        if (split - whole).abs() <= tol {
            return Ok(split);
        }
        if depth >= self.max_depth || !split.is_finite() {
            return Err(Error::QuadratureFailed { lo, hi });
        }
        Ok(self.recurse(f, lo, mid, left, 0.5 * tol, depth + 1)?
            + self.recurse(f, mid, hi, right, 0.5 * tol, depth + 1)?)
    }
}
