//! Complete elliptic integrals and the axisymmetric stream-function kernel.
//!
//! Parameter convention: `elliptic_k(alpha)` is
//! `∫₀¹ (1−t²)^{-1/2} (1−alpha·t²)^{-1/2} dt`, i.e. `alpha` multiplies `t²`
//! directly (it is the parameter `m`, not the modulus `k`).
//!
//! The kernel `F(s) = ∫₀^π cosθ (2(1−cosθ)+s)^{-1/2} dθ` and its first two
//! derivatives are evaluated from the arithmetic–geometric mean at
//! `alpha = 4/(4+s)`. The textbook closed forms, e.g.
//! `F = ((2+s)K − (4+s)E)/√(4+s)`, lose about `2·log10(s)` digits to
//! cancellation for large `s`. Writing `E = K(1 − (alpha + T)/2)` with the
//! positive AGM tail `T = Σ_{n≥1} 2ⁿ cₙ²` turns every combination into a
//! sum without catastrophic cancellation:
//!
//! ```text
//! F   = K T / √α
//! F'  = K ((2−α)T − α²) √α / (16 (1−α))
//! F'' = K (α²(2−α) − (1−α+α²)T) α^{3/2} / (64 (1−α)²)
//! ```
//!
//! with `1−α = s/(4+s)` computed directly.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{domain, Result};
use crate::quadrature::{AdaptiveGauss, QuadratureSpec};

/// Converged AGM data: `k = K(alpha)` and the tail `Σ_{n≥1} 2ⁿ cₙ²`.
#[derive(Debug, Clone, Copy)]
struct Agm {
    k: f64,
    tail: f64,
}

/// Runs the AGM for parameter `alpha`, given `1 − alpha` separately so that
/// callers can supply it without cancellation.
#[inline]
fn agm(alpha: f64, one_minus_alpha: f64) -> Agm {
    let b0 = one_minus_alpha.sqrt();
    let mut a = 0.5 * (1.0 + b0);
    let mut b = b0.sqrt();
    // c₁ = (1 − b₀)/2 written without the subtraction.
    let mut c = alpha / (4.0 * a);
    let mut pow = 2.0;
    let mut tail = pow * c * c;
    let mut iters = 0;
    while (a - b).abs() > 1e-15 * a && iters < 64 {
        let a_next = 0.5 * (a + b);
        b = (a * b).sqrt();
        c = 0.25 * c * c / a_next;
        a = a_next;
        pow *= 2.0;
        tail += pow * c * c;
        iters += 1;
    }
    Agm {
        k: FRAC_PI_2 / a,
        tail,
    }
}

/// Complete elliptic integral of the first kind, parameter convention.
pub fn elliptic_k(alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1)"));
    }
    Ok(agm(alpha, 1.0 - alpha).k)
}

/// Complete elliptic integral of the second kind, parameter convention.
pub fn elliptic_e(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1]"));
    }
    if alpha == 1.0 {
        return Ok(1.0);
    }
    let g = agm(alpha, 1.0 - alpha);
    Ok(g.k * (1.0 - 0.5 * (alpha + g.tail)))
}

/// `F`, `F'` and `F''` at a single argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValues {
    pub f: f64,
    pub d1: f64,
    pub d2: f64,
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(domain("s", s, "(0, inf)"))
    }
}

#[inline]
fn alpha_of(s: f64) -> (f64, f64) {
    let d = 4.0 + s;
    (4.0 / d, s / d)
}

/// `F(s)` and `F'(s)` without argument checks; `s` must be positive.
#[inline]
pub(crate) fn f_and_d1_unchecked(s: f64) -> (f64, f64) {
    let (alpha, oma) = alpha_of(s);
    let g = agm(alpha, oma);
    let sa = alpha.sqrt();
    let f = g.k * g.tail / sa;
    let d1 = g.k * ((2.0 - alpha) * g.tail - alpha * alpha) * sa / (16.0 * oma);
    (f, d1)
}

/// `F(s)` without argument checks; `s` must be positive.
#[inline]
pub(crate) fn f_unchecked(s: f64) -> f64 {
    let (alpha, oma) = alpha_of(s);
    let g = agm(alpha, oma);
    g.k * g.tail / alpha.sqrt()
}

/// All three kernel values at once (one AGM run).
pub fn f_family(s: f64) -> Result<KernelValues> {
    check_s(s)?;
    let (alpha, oma) = alpha_of(s);
    let g = agm(alpha, oma);
    let sa = alpha.sqrt();
    let t = g.tail;
    Ok(KernelValues {
        f: g.k * t / sa,
        d1: g.k * ((2.0 - alpha) * t - alpha * alpha) * sa / (16.0 * oma),
        d2: g.k * (alpha * alpha * (2.0 - alpha) - (1.0 - alpha + alpha * alpha) * t) * alpha * sa
            / (64.0 * oma * oma),
    })
}

/// `F(s) = ∫₀^π cosθ (2(1−cosθ)+s)^{-1/2} dθ`, strictly positive and decreasing.
pub fn f_kernel(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(f_unchecked(s))
}

/// `F'(s)`, strictly negative.
pub fn f_kernel_d1(s: f64) -> Result<f64> {
    check_s(s)?;
    Ok(f_and_d1_unchecked(s).1)
}

/// `F''(s)`, strictly positive.
pub fn f_kernel_d2(s: f64) -> Result<f64> {
    Ok(f_family(s)?.d2)
}

/// `F(s) − 2sF'(s)`, the combination entering the axial velocity kernel.
pub fn f_combination(s: f64) -> Result<f64> {
    check_s(s)?;
    let (f, d1) = f_and_d1_unchecked(s);
    Ok(f - 2.0 * s * d1)
}

/// Far-field leading term `(π/2) s^{-3/2}` of `F`.
pub fn f_kernel_asymptote(s: f64) -> f64 {
    FRAC_PI_2 * s.powf(-1.5)
}

/// Reference value of `∫₀^π cosθ (2(1−cosθ)+s)^{-power} dθ` by adaptive
/// quadrature. `power` must be one of 1/2, 3/2, 5/2.
pub fn oracle_theta_quadrature(s: f64, power: f64, spec: QuadratureSpec) -> Result<f64> {
    check_s(s)?;
    if ![0.5, 1.5, 2.5].contains(&power) {
        return Err(domain("power", power, "{1/2, 3/2, 5/2}"));
    }
    let q = AdaptiveGauss::new(spec);
    q.integrate(
        |theta| {
            // 2(1 − cosθ) = 4 sin²(θ/2) keeps the small-θ peak accurate.
            let h = (0.5 * theta).sin();
            theta.cos() * (4.0 * h * h + s).powf(-power)
        },
        0.0,
        PI,
    )
}

/// Reference `K(alpha)` by quadrature after `t = sin φ`.
pub fn elliptic_k_oracle(alpha: f64, spec: QuadratureSpec) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1)"));
    }
    let q = AdaptiveGauss::new(spec);
    q.integrate(
        |phi| {
            let c = phi.cos();
            // 1 − α sin²φ = (1 − α) + α cos²φ avoids cancellation near φ = π/2.
            ((1.0 - alpha) + alpha * c * c).powf(-0.5)
        },
        0.0,
        FRAC_PI_2,
    )
}

/// Reference `E(alpha)` by quadrature after `t = sin φ`.
pub fn elliptic_e_oracle(alpha: f64, spec: QuadratureSpec) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 1]"));
    }
    let q = AdaptiveGauss::new(spec);
    q.integrate(
        |phi| {
            let c = phi.cos();
            ((1.0 - alpha) + alpha * c * c).sqrt()
        },
        0.0,
        FRAC_PI_2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn spec(tol: f64) -> QuadratureSpec {
        QuadratureSpec::new(16, tol).unwrap()
    }

    #[test]
    fn k_and_e_at_zero() {
        assert_eq!(elliptic_k(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(0.0).unwrap(), FRAC_PI_2);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
    }

    #[test]
    fn k_and_e_match_quadrature_at_half() {
        let k = elliptic_k(0.5).unwrap();
        let e = elliptic_e(0.5).unwrap();
        assert!(rel(k, elliptic_k_oracle(0.5, spec(1e-13)).unwrap()) < 1e-12);
        assert!(rel(e, elliptic_e_oracle(0.5, spec(1e-13)).unwrap()) < 1e-12);
        // Frozen from the oracle (and standard tables): K(1/2), E(1/2).
        assert!(rel(k, 1.854_074_677_301_372) < 1e-14);
        assert!(rel(e, 1.350_643_881_047_675_5) < 1e-14);
    }

    #[test]
    fn k_diverges_monotonically() {
        let near = elliptic_k(1.0 - 1e-8).unwrap();
        let far = elliptic_k(1.0 - 1e-4).unwrap();
        assert!(near > far);
    }

    #[test]
    fn domain_errors() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
        assert!(elliptic_e(1.1).is_err());
        assert!(f_kernel(0.0).is_err());
        assert!(f_kernel_d1(-1.0).is_err());
        assert!(f_kernel_d2(f64::NAN).is_err());
        assert!(f_combination(0.0).is_err());
    }

    #[test]
    fn kernel_matches_theta_quadrature() {
        let f1 = oracle_theta_quadrature(1.0, 0.5, spec(1e-14)).unwrap();
        assert!((f_kernel(1.0).unwrap() - f1).abs() < 1e-10);
        let d1 = oracle_theta_quadrature(2.0, 1.5, spec(1e-14)).unwrap();
        assert!(rel(f_kernel_d1(2.0).unwrap(), -0.5 * d1) < 1e-10);
        let d2 = oracle_theta_quadrature(3.0, 2.5, spec(1e-14)).unwrap();
        assert!(rel(f_kernel_d2(3.0).unwrap(), 0.75 * d2) < 1e-10);
    }

    #[test]
    fn definitional_identities_at_four() {
        let i3 = oracle_theta_quadrature(4.0, 1.5, spec(1e-15)).unwrap();
        assert!(rel(i3, -2.0 * f_kernel_d1(4.0).unwrap()) < 1e-11);
        let i5 = oracle_theta_quadrature(4.0, 2.5, spec(1e-15)).unwrap();
        assert!(rel(i5, 4.0 / 3.0 * f_kernel_d2(4.0).unwrap()) < 1e-11);
    }

    #[test]
    fn far_field_asymptote() {
        let s = 1e4;
        assert!(rel(f_kernel(s).unwrap(), f_kernel_asymptote(s)) < 0.01);
    }

    #[test]
    fn kernel_decreasing_near_zero() {
        let a = f_kernel(1e-6).unwrap();
        let b = f_kernel(1e-5).unwrap();
        assert!(a > b && b > 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        let fd = (f_kernel(1.0 + h).unwrap() - f_kernel(1.0 - h).unwrap()) / (2.0 * h);
        assert!(rel(f_kernel_d1(1.0).unwrap(), fd) < 1e-6);
        let h = 1e-4;
        let fd2 = (f_kernel(1.0 + h).unwrap() - 2.0 * f_kernel(1.0).unwrap()
            + f_kernel(1.0 - h).unwrap())
            / (h * h);
        assert!(rel(f_kernel_d2(1.0).unwrap(), fd2) < 1e-4);
    }

    #[test]
    fn combination_is_composition() {
        let s = 0.5;
        let expected = f_kernel(s).unwrap() - 2.0 * s * f_kernel_d1(s).unwrap();
        assert_eq!(f_combination(s).unwrap(), expected);
        assert!(f_combination(1.0).unwrap() > f_combination(2.0).unwrap());
    }

    #[test]
    fn k_dominates_e() {
        for i in 1..100 {
            let a = i as f64 / 100.0;
            assert!(elliptic_k(a).unwrap() > elliptic_e(a).unwrap());
        }
    }
}
