//! Meridional-plane kernels: geometry, Green's function, velocity, and the
//! symmetrized axial kernel `𝓗`.
//!
//! All kernels act on points of the half-plane `Π = {(r, z) : r ≥ 0}`. The
//! blob regularization adds `ε²` to the numerator of `ζ²`, which keeps `G`
//! and `𝓗` symmetric and moves `𝓕` arguments to the right.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::elliptic::{f_and_d1_unchecked, f_kernel};
use crate::error::{domain, Error, Result};
use crate::quadrature::integrate_relative;

/// Targets closer to the axis than this fraction of the source radius are
/// rejected by [`velocity_kernel`].
pub const AXIS_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlanePoint {
    pub r: f64,
    pub z: f64,
}

impl HalfPlanePoint {
    pub const fn new(r: f64, z: f64) -> Self {
        Self { r, z }
    }

    /// Reflection `(r, z) ↦ (r, −z)`.
    pub fn mirror(self) -> Self {
        Self::new(self.r, -self.z)
    }

    pub fn is_valid(&self) -> bool {
        self.r >= 0.0 && self.r.is_finite() && self.z.is_finite()
    }

    pub fn dist_sq(&self, other: &Self) -> f64 {
        let dr = self.r - other.r;
        let dz = self.z - other.z;
        dr * dr + dz * dz
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regularization {
    pub epsilon: f64,
}

impl Regularization {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(epsilon >= 0.0 && epsilon.is_finite()) {
            return Err(domain("epsilon", epsilon, "[0, inf)"));
        }
        Ok(Self { epsilon })
    }

    pub const fn none() -> Self {
        Self { epsilon: 0.0 }
    }
}

/// `X`, `X̄`, `Y`, `Ȳ` at angle `θ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelXy {
    pub x: f64,
    pub x_bar: f64,
    pub y: f64,
    pub y_bar: f64,
}

/// The four distance-like quantities: `X` uses `−cosθ` and `z − z̄`, the bar
/// flips the cosine sign, `Y` flips the sign of `z̄`.
pub fn kernel_xy(p: HalfPlanePoint, q: HalfPlanePoint, theta: f64) -> KernelXy {
    let c = theta.cos();
    let base = p.r * p.r + q.r * q.r;
    let cross = 2.0 * p.r * q.r * c;
    let dm = p.z - q.z;
    let dp = p.z + q.z;
    KernelXy {
        x: base - cross + dm * dm,
        x_bar: base + cross + dm * dm,
        y: base - cross + dp * dp,
        y_bar: base + cross + dp * dp,
    }
}

fn check_off_axis(p: &HalfPlanePoint, name: &'static str) -> Result<()> {
    if p.r > 0.0 && p.r.is_finite() && p.z.is_finite() {
        Ok(())
    } else {
        Err(domain(name, p.r, "(0, inf)"))
    }
}

/// `((r−r̄)² + (z−z̄)² + ε²)/(r r̄)`.
pub fn zeta_sq(p: HalfPlanePoint, q: HalfPlanePoint, reg: Regularization) -> Result<f64> {
    check_off_axis(&p, "p.r")?;
    check_off_axis(&q, "q.r")?;
    Ok(zeta_sq_unchecked(p, q, reg.epsilon * reg.epsilon))
}

#[inline]
pub(crate) fn zeta_sq_unchecked(p: HalfPlanePoint, q: HalfPlanePoint, eps_sq: f64) -> f64 {
    (p.dist_sq(&q) + eps_sq) / (p.r * q.r)
}

/// Green's function `(r r̄)^{1/2} 𝓕(ζ²) / (2π)`.
pub fn greens(p: HalfPlanePoint, q: HalfPlanePoint, reg: Regularization) -> Result<f64> {
    let s = zeta_sq(p, q, reg)?;
    if s == 0.0 {
        return Err(Error::Singularity("greens at coincident points"));
    }
    Ok((p.r * q.r).sqrt() * f_kernel(s)? / (2.0 * PI))
}

/// Velocity induced at `target` per unit signed weight at `source`.
///
/// The weight is `ω dr̄ dz̄`; summing `(Kr, Kz)·μ` over sources gives
/// `(u^r, u^z)`. Regularized kernels are the exact derivatives of the
/// regularized Green's function.
pub fn velocity_kernel(
    target: HalfPlanePoint,
    source: HalfPlanePoint,
    reg: Regularization,
) -> Result<(f64, f64)> {
    check_off_axis(&source, "source.r")?;
    if !target.is_valid() {
        return Err(domain("target.r", target.r, "[0, inf)"));
    }
    let floor = AXIS_GUARD * source.r;
    if target.r <= floor {
        return Err(Error::AxisGuard {
            r: target.r,
            floor,
        });
    }
    let s = zeta_sq_unchecked(target, source, reg.epsilon * reg.epsilon);
    if s == 0.0 {
        return Err(Error::Singularity("velocity kernel at coincident points"));
    }
    let (f, d1) = f_and_d1_unchecked(s);
    Ok(velocity_from_values(target, source, s, f, d1))
}

/// `(Kr, Kz)` given `ζ²`, `𝓕(ζ²)` and `𝓕′(ζ²)`.
#[inline]
pub(crate) fn velocity_from_values(
    t: HalfPlanePoint,
    s_pt: HalfPlanePoint,
    s: f64,
    f: f64,
    d1: f64,
) -> (f64, f64) {
    let rt32 = t.r * t.r.sqrt();
    let sq_src = s_pt.r.sqrt();
    let pre = d1 / (PI * rt32 * sq_src);
    let kr = (s_pt.z - t.z) * pre;
    let kz = (t.r - s_pt.r) * pre + sq_src / (4.0 * PI * rt32) * (f - 2.0 * s * d1);
    (kr, kz)
}

/// Axial velocity on the symmetry axis, `u^z = ½ Σ r̄² μ / (r̄² + (z−z̄)² + ε²)^{3/2}`.
///
/// Sources with `r̄ ≤ 0` contribute nothing. Returns `(0, u^z)`.
pub fn axis_velocity(
    target_z: f64,
    sources: &[(HalfPlanePoint, f64)],
    reg: Regularization,
) -> (f64, f64) {
    let eps_sq = reg.epsilon * reg.epsilon;
    let mut uz = 0.0;
    for (q, w) in sources {
        if q.r <= 0.0 {
            continue;
        }
        let dz = target_z - q.z;
        let d2 = q.r * q.r + dz * dz + eps_sq;
        uz += 0.5 * q.r * q.r * w / (d2 * d2.sqrt());
    }
    (0.0, uz)
}

/// Symmetrized axial kernel `𝓗(r, r̄, z, z̄)` (unregularized).
pub fn h_kernel(r: f64, r_bar: f64, z: f64, z_bar: f64) -> Result<f64> {
    h_kernel_regularized(r, r_bar, z, z_bar, Regularization::none())
}

/// `𝓗` with `ε²` added to the numerator of `ζ²`.
pub fn h_kernel_regularized(
    r: f64,
    r_bar: f64,
    z: f64,
    z_bar: f64,
    reg: Regularization,
) -> Result<f64> {
    let p = HalfPlanePoint::new(r, z);
    let q = HalfPlanePoint::new(r_bar, z_bar);
    let s = zeta_sq(p, q, reg)?;
    if s == 0.0 {
        return Err(Error::Singularity("h_kernel at coincident points"));
    }
    let (f, d1) = f_and_d1_unchecked(s);
    let rr32 = (r * r_bar).powf(1.5);
    let dr = r - r_bar;
    Ok(-dr * dr / (2.0 * PI * rr32) * d1 + (r * r + r_bar * r_bar) / (8.0 * PI * rr32) * (f - 2.0 * s * d1))
}

/// Both sides of the `𝓕`-comparison estimate:
/// `lhs = ∫₀^{π/2} cos²θ / (X^{1/2} X̄) dθ`, `rhs = (r r̄)^{τ−3/2} / d^{2τ}`.
pub fn f_est_quadrature(p: HalfPlanePoint, q: HalfPlanePoint, tau: f64) -> Result<(f64, f64)> {
    check_off_axis(&p, "p.r")?;
    check_off_axis(&q, "q.r")?;
    if !(tau > 0.0 && tau <= 1.5) {
        return Err(domain("tau", tau, "(0, 3/2]"));
    }
    let d2 = p.dist_sq(&q);
    if d2 == 0.0 {
        return Err(Error::Singularity("f_est at coincident points"));
    }
    let lhs = integrate_relative(
        |theta| {
            let k = kernel_xy_sin(p, q, theta);
            let c = theta.cos();
            c * c / (k.0.sqrt() * k.1)
        },
        0.0,
        FRAC_PI_2,
        1e-12,
    )?;
    let rhs = (p.r * q.r).powf(tau - 1.5) / d2.powf(tau);
    Ok((lhs, rhs))
}

/// `(X, X̄)` with `X = d² + 4 r r̄ sin²(θ/2)`, accurate near `θ = 0`.
#[inline]
pub(crate) fn kernel_xy_sin(p: HalfPlanePoint, q: HalfPlanePoint, theta: f64) -> (f64, f64) {
    let d2 = p.dist_sq(&q);
    let h = (0.5 * theta).sin();
    let g = (0.5 * theta).cos();
    let rr4 = 4.0 * p.r * q.r;
    (d2 + rr4 * h * h, d2 + rr4 * g * g)
}
