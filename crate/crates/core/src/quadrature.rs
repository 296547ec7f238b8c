//! Adaptive Gauss–Legendre quadrature.
//!
//! Each panel is integrated with a fixed-order Gauss rule and compared with
//! the sum over its two halves; panels are bisected until the difference
//! falls under the panel's share of the absolute tolerance. This is the
//! reference integrator used to check the closed-form kernels, so it shares
//! no code with the elliptic-integral path.

use crate::error::{Error, Result};

/// Oracle configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Gauss–Legendre nodes per panel.
    pub node_count: usize,
    pub abs_tolerance: f64,
}

/// Upper bound on the number of panels before the oracle gives up.
const MAX_PANELS: usize = 1 << 20;

impl QuadratureSpec {
    pub fn new(node_count: usize, abs_tolerance: f64) -> Result<Self> {
        if node_count < 8 {
            return Err(crate::error::domain("node_count", node_count as f64, "[8, inf)"));
        }
        if !(0.0..1.0).contains(&abs_tolerance) {
            return Err(crate::error::domain("abs_tolerance", abs_tolerance, "[0, 1)"));
        }
        Ok(Self {
            node_count,
            abs_tolerance,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            node_count: 16,
            abs_tolerance: 1e-13,
        }
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
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
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Reusable adaptive integrator for a fixed rule order.
#[derive(Debug, Clone)]
pub struct AdaptiveGauss {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    spec: QuadratureSpec,
}

impl AdaptiveGauss {
    pub fn new(spec: QuadratureSpec) -> Self {
        let (nodes, weights) = gauss_legendre(spec.node_count);
        Self {
            nodes,
            weights,
            spec,
        }
    }

    fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Integrates `f` over [a, b] to the configured absolute tolerance.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        if a == b {
            return Ok(0.0);
        }
        let total = (b - a).abs();
        let tol = self.spec.abs_tolerance;
        let mut stack = vec![(a, b, self.panel(&f, a, b))];
        let mut sum = 0.0;
        let mut panels = 1usize;
        let mut worst = 0.0f64;
        while let Some((lo, hi, coarse)) = stack.pop() {
            let mid = 0.5 * (lo + hi);
            let left = self.panel(&f, lo, mid);
            let right = self.panel(&f, mid, hi);
            let fine = left + right;
            let err = (fine - coarse).abs();
            let share = tol * (hi - lo).abs() / total;
            // Panels narrower than a few ulps cannot be refined further.
            let exhausted = (hi - lo).abs() <= 64.0 * f64::EPSILON * mid.abs().max(1e-300);
            // Differences at rounding level cannot shrink under bisection.
            let noise = 16.0 * f64::EPSILON * fine.abs();
            if err <= share || err <= noise || exhausted {
                sum += fine;
                continue;
            }
            panels += 1;
            if panels > MAX_PANELS {
                worst = worst.max(err);
                return Err(Error::OracleFailure {
                    panels,
                    error: worst,
                });
            }
            stack.push((mid, hi, right));
            stack.push((lo, mid, left));
        }
        Ok(sum)
    }
}

/// Integrates to a tolerance relative to a single-panel first estimate.
///
/// Useful when the magnitude of the integral is not known in advance.
pub fn integrate_relative<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel: f64) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(16);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let coarse: f64 = nodes
        .iter()
        .zip(&weights)
        .map(|(x, w)| w * f(mid + half * x).abs())
        .sum::<f64>()
        * half.abs();
    let tol = (rel * coarse).max(f64::MIN_POSITIVE);
    let spec = QuadratureSpec {
        node_count: 16,
        abs_tolerance: tol,
    };
    AdaptiveGauss::new(spec).integrate(f, a, b)
}

/// One-shot convenience wrapper around [`AdaptiveGauss`].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: QuadratureSpec) -> Result<f64> {
    AdaptiveGauss::new(spec).integrate(f, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(8);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        // Degree 15 is the highest integrated exactly by 8 nodes.
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn integrates_peaked_function() {
        let spec = QuadratureSpec::new(16, 1e-12).unwrap();
        let eps: f64 = 1e-3;
        // Lorentzian peak, exact integral 2 atan(1/eps)/eps on [-1, 1].
        let v = integrate(|x| 1.0 / (x * x + eps * eps), -1.0, 1.0, spec).unwrap();
        let exact = 2.0 * (1.0 / eps).atan() / eps;
        assert!((v - exact).abs() / exact < 1e-12);
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::new(4, 1e-10).is_err());
        assert!(QuadratureSpec::new(16, 1.5).is_err());
    }
}
