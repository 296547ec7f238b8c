//! Growth exponents, the impulse lower-bound curve, and numerical audits of
//! the inequalities used in the growth argument.
//!
//! Audits either check a hard statement (sign facts, a constant-1 Hölder
//! bound) or report an empirical ratio against a bound whose constant is not
//! known. Only the hard ones decide pass/fail of a suite; ratio audits carry
//! a wide sanity band.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::diagnostics::{impulse_p, norms, reciprocal_norm, support_radius, weighted_norm};
use crate::elliptic::{elliptic_e, elliptic_k, f_kernel_d1, f_kernel_d2};
use crate::error::{domain, Error, Result};
use crate::kernels::{h_kernel, kernel_xy_sin, HalfPlanePoint, Regularization};
use crate::quadrature::integrate_relative;
use crate::vortex_method::{induced_field, velocity_at, Particle, ParticleSystem};

/// Upper end of the admissible `q` range.
pub const Q_MAX: f64 = 15.0 / 13.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub pass: bool,
    pub metadata: Map<String, Value>,
}

impl AuditReport {
    fn new(name: &str, lhs: f64, rhs: f64, pass: bool, hard: bool) -> Self {
        let ratio = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { lhs / rhs };
        let mut metadata = Map::new();
        metadata.insert("hard".into(), Value::Bool(hard));
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            ratio,
            pass,
            metadata,
        }
    }

    fn with(mut self, key: &str, value: Value) -> Self {
        self.metadata.insert(key.to_string(), value);
        self
    }

    /// Whether a failure of this audit should fail the suite.
    pub fn is_hard(&self) -> bool {
        self.metadata.get("hard").and_then(Value::as_bool).unwrap_or(false)
    }
}

/// True when every hard audit passed.
pub fn hard_pass(reports: &[AuditReport]) -> bool {
    reports.iter().filter(|r| r.is_hard()).all(|r| r.pass)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentSet {
    pub delta: f64,
    pub beta1: f64,
    pub beta0: f64,
    pub q: f64,
    pub x0: f64,
}

/// `(2/15 − 2δ)/(2 − δ)`, for `0 ≤ δ ≤ 1/15`.
pub fn beta1(delta: f64) -> Result<f64> {
    if !(0.0..=1.0 / 15.0).contains(&delta) {
        return Err(domain("delta", delta, "[0, 1/15]"));
    }
    Ok((2.0 / 15.0 - 2.0 * delta) / (2.0 - delta))
}

/// `β₀(δ) = (8+5δ)/(9(δ−2)) + √(536 − 1148δ + 845δ²)/(9(2−δ)√5)` on `[0, 3/20)`.
pub fn beta0(delta: f64) -> Result<f64> {
    if !(0.0..0.15).contains(&delta) {
        return Err(domain("delta", delta, "[0, 3/20)"));
    }
    let d = delta;
    let disc = 536.0 - 1148.0 * d + 845.0 * d * d;
    Ok((8.0 + 5.0 * d) / (9.0 * (d - 2.0)) + disc.sqrt() / (9.0 * (2.0 - d) * 5f64.sqrt()))
}

/// `(2δ + (2−δ)β)(10/3 + 15β/4) − 1`; vanishes at `β = β₀(δ)`.
pub fn beta0_residual(delta: f64, beta: f64) -> f64 {
    (2.0 * delta + (2.0 - delta) * beta) * (10.0 / 3.0 + 3.75 * beta) - 1.0
}

fn check_q(q: f64) -> Result<()> {
    if q > 1.0 && q < Q_MAX {
        Ok(())
    } else {
        Err(domain("q", q, "(1, 15/13)"))
    }
}

/// `X₀ = (‖ξ₀‖₁^{4−10q/3} ‖ξ₀‖∞^{q/3} Z₀^{4(q−1)} P₀^{1−q} + ‖ξ₀‖₁^{3−7q/3} ‖ξ₀‖∞^{q/3} Z₀^{2(q−1)})^{1/q}`.
pub fn x0_constant(norm_xi_l1: f64, norm_xi_linf: f64, z0: f64, p0: f64, q: f64) -> Result<f64> {
    check_q(q)?;
    for (name, v) in [
        ("norm_xi_l1", norm_xi_l1),
        ("norm_xi_linf", norm_xi_linf),
        ("Z0", z0),
        ("P0", p0),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain(name, v, "(0, inf)"));
        }
    }
    let a = norm_xi_l1.powf(4.0 - 10.0 * q / 3.0)
        * norm_xi_linf.powf(q / 3.0)
        * z0.powf(4.0 * (q - 1.0))
        * p0.powf(1.0 - q);
    let b = norm_xi_l1.powf(3.0 - 7.0 * q / 3.0) * norm_xi_linf.powf(q / 3.0) * z0.powf(2.0 * (q - 1.0));
    Ok((a + b).powf(1.0 / q))
}

/// `(C_q (E₀/X₀)^{q/(q−1)} t + P₀^{q/(q−1)})^{(q−1)/q}`.
pub fn p_lower_bound_curve(t: f64, q: f64, c_q: f64, e0: f64, x0: f64, p0: f64) -> Result<f64> {
    check_q(q)?;
    if !(c_q > 0.0) {
        return Err(domain("C_q", c_q, "(0, inf)"));
    }
    let m = q / (q - 1.0);
    Ok((c_q * (e0 / x0).powf(m) * t + p0.powf(m)).powf(1.0 / m))
}

/// Result of calibrating `C_q` on an early window and testing it later on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoldoutReport {
    pub c_q: f64,
    pub calibration_samples: usize,
    pub holdout_samples: usize,
    pub violations: usize,
    /// Smallest `P(t)/curve(t)` over the holdout window.
    pub min_margin: f64,
}

/// Largest `C_q` keeping the curve at or below `P` on `(0, t_split]`, then
/// the number of holdout samples in `(t_split, ∞)` where the curve exceeds `P`.
pub fn lower_bound_holdout(
    series: &[(f64, f64)],
    q: f64,
    e0: f64,
    x0: f64,
    p0: f64,
    t_split: f64,
) -> Result<HoldoutReport> {
    check_q(q)?;
    let m = q / (q - 1.0);
    let a = (e0 / x0).powf(m);
    let base = p0.powf(m);
    let mut c_q = f64::INFINITY;
    let mut calibration_samples = 0;
    for &(t, p) in series.iter().filter(|(t, _)| *t > 0.0 && *t <= t_split) {
        c_q = c_q.min((p.powf(m) - base) / (a * t));
        calibration_samples += 1;
    }
    if calibration_samples == 0 || !(c_q > 0.0 && c_q.is_finite()) {
        return Err(Error::Fit(format!(
            "cannot calibrate C_q from {calibration_samples} samples (got {c_q})"
        )));
    }
    let mut violations = 0;
    let mut holdout_samples = 0;
    let mut min_margin = f64::INFINITY;
    for &(t, p) in series.iter().filter(|(t, _)| *t > t_split) {
        let curve = p_lower_bound_curve(t, q, c_q, e0, x0, p0)?;
        holdout_samples += 1;
        min_margin = min_margin.min(p / curve);
        if curve > p {
            violations += 1;
        }
    }
    Ok(HoldoutReport {
        c_q,
        calibration_samples,
        holdout_samples,
        violations,
        min_margin,
    })
}

// ---------------------------------------------------------------------------
// Kernel sign facts

/// `𝓕′ < 0`, `𝓕″ > 0` and `𝓕′ + 2s𝓕″ > 0` on a log grid over `[10⁻⁶, 10⁶]`.
pub fn audit_f_signs(points: usize) -> Result<AuditReport> {
    let points = points.max(2);
    let mut violations = 0usize;
    let mut worst = f64::INFINITY;
    for i in 0..points {
        let s = 10f64.powf(-6.0 + 12.0 * i as f64 / (points - 1) as f64);
        let d1 = f_kernel_d1(s)?;
        let d2 = f_kernel_d2(s)?;
        let combo = d1 + 2.0 * s * d2;
        for v in [-d1, d2, combo] {
            worst = worst.min(v);
            if !(v > 0.0) {
                violations += 1;
            }
        }
    }
    Ok(AuditReport::new("f_sign_suite", violations as f64, 0.0, violations == 0, true)
        .with("grid_points", json!(points))
        .with("smallest_positive_quantity", json!(worst)))
}

/// `𝓗(r,r̄,z,z̄) − 𝓗(r,r̄,z,−z̄) > 0` on random tuples with `z, z̄ > 0`.
pub fn audit_h_gap(count: usize, seed: u64) -> Result<AuditReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0usize;
    let mut min_rel = f64::INFINITY;
    for _ in 0..count {
        let r = rng.random_range(0.1..10.0);
        let rb = rng.random_range(0.1..10.0);
        let z = rng.random_range(0.01..10.0);
        let zb = rng.random_range(0.01..10.0);
        let near = h_kernel(r, rb, z, zb)?;
        let far = h_kernel(r, rb, z, -zb)?;
        let gap = near - far;
        if !(gap > 0.0) {
            violations += 1;
        }
        min_rel = min_rel.min(gap / near.abs());
    }
    Ok(AuditReport::new("h_gap", violations as f64, 0.0, violations == 0, true)
        .with("samples", json!(count))
        .with("seed", json!(seed))
        .with("min_relative_gap", json!(min_rel)))
}

/// `E′ = (E − K)/(2α)` and `K′ = (E − (1−α)K)/(2α(1−α))` against central
/// differences on `α ∈ [0.01, 0.99]`.
pub fn audit_elliptic_derivatives(points: usize) -> Result<AuditReport> {
    let points = points.max(2);
    let mut worst = 0.0f64;
    for i in 0..points {
        let a = 0.01 + 0.98 * i as f64 / (points - 1) as f64;
        let h = 1e-6 * a.min(1.0 - a);
        let k = elliptic_k(a)?;
        let e = elliptic_e(a)?;
        let dk = (elliptic_k(a + h)? - elliptic_k(a - h)?) / (2.0 * h);
        let de = (elliptic_e(a + h)? - elliptic_e(a - h)?) / (2.0 * h);
        let dk_id = (e - (1.0 - a) * k) / (2.0 * a * (1.0 - a));
        let de_id = (e - k) / (2.0 * a);
        worst = worst.max(((dk - dk_id) / dk_id).abs());
        worst = worst.max(((de - de_id) / de_id).abs());
    }
    Ok(AuditReport::new("elliptic_derivative_identities", worst, 1e-6, worst <= 1e-6, true)
        .with("grid_points", json!(points)))
}

/// The kernel-level suite: sign facts, `𝓗` gap, derivative identities.
pub fn kernel_audits(seed: u64) -> Result<Vec<AuditReport>> {
    Ok(vec![
        audit_f_signs(200)?,
        audit_h_gap(10_000, seed)?,
        audit_elliptic_derivatives(99)?,
    ])
}

// ---------------------------------------------------------------------------
// Inequality audits on particle systems

const RATIO_BAND_XQ: f64 = 1e3;
const RATIO_BAND_FS: f64 = 1e2;

/// `|ξ|` summed over the full space (both halves).
fn full_l1_xi(particles: &[Particle]) -> f64 {
    2.0 * TAU * particles.iter().map(|p| p.weight().abs()).sum::<f64>()
}

fn max_abs_xi(particles: &[Particle]) -> f64 {
    particles.iter().map(|p| p.xi0.abs()).fold(0.0, f64::max)
}

/// Random points in a box around the particles, padded by `max(3ε, 10%)`.
pub fn sample_points(system: &ParticleSystem, count: usize, seed: u64) -> Vec<HalfPlanePoint> {
    if system.is_empty() {
        return Vec::new();
    }
    let (mut r0, mut r1, mut z0, mut z1) = (f64::INFINITY, 0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for p in &system.particles {
        r0 = r0.min(p.pos.r);
        r1 = r1.max(p.pos.r);
        z0 = z0.min(p.pos.z);
        z1 = z1.max(p.pos.z);
    }
    let pad = (3.0 * system.reg.epsilon).max(0.1 * (r1 - r0).max(z1 - z0));
    let (r0, r1) = ((r0 - pad).max(0.0), r1 + pad);
    let (z0, z1) = (z0 - pad, z1 + pad);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| HalfPlanePoint::new(rng.random_range(r0..r1), rng.random_range(z0..z1)))
        .collect()
}

/// `∫₀^{2π} (X + ε²)^{−q/2} dθ` between two meridional points.
fn ring_integral(p: HalfPlanePoint, q: HalfPlanePoint, q_exp: f64, eps_sq: f64) -> Result<f64> {
    if q_exp == 0.0 {
        return Ok(TAU);
    }
    let half = integrate_relative(
        |theta| (kernel_xy_sin(p, q, theta).0 + eps_sq).powf(-0.5 * q_exp),
        0.0,
        PI,
        1e-10,
    )?;
    Ok(2.0 * half)
}

/// `sup_x ∭ |x − y|^{−q} |ξ(y)| dy` against `‖ξ‖₁^{1−q/3} ‖ξ‖∞^{q/3}` (full-space norms).
///
/// The supremum is taken over `samples`; the distance is regularized by `ε`.
pub fn audit_lemma_xq(system: &ParticleSystem, q: f64, samples: &[HalfPlanePoint]) -> Result<AuditReport> {
    if !(0.0..3.0).contains(&q) {
        return Err(domain("q", q, "[0, 3)"));
    }
    if samples.is_empty() {
        return Err(Error::Config("audit_lemma_xq needs sample points".into()));
    }
    let eps_sq = system.reg.epsilon * system.reg.epsilon;
    let mut lhs = 0.0f64;
    for s in samples {
        let mut acc = 0.0;
        for p in &system.particles {
            let w = p.weight().abs();
            acc += w * ring_integral(*s, p.pos, q, eps_sq)?;
            acc += w * ring_integral(*s, p.pos.mirror(), q, eps_sq)?;
        }
        lhs = lhs.max(acc);
    }
    let rhs = full_l1_xi(&system.particles).powf(1.0 - q / 3.0) * max_abs_xi(&system.particles).powf(q / 3.0);
    let ratio = lhs / rhs;
    Ok(AuditReport::new("lemma_xq", lhs, rhs, ratio.is_finite() && ratio < RATIO_BAND_XQ, false)
        .with("q", json!(q))
        .with("samples", json!(samples.len())))
}

/// `sup ∬ |ω|/d^α` against `‖ω‖_{L¹(Π₊)}^{1−α/2} ‖ω‖_{L∞(Π₊)}^{α/2}` (planar norms).
///
/// The supremum runs over the particle positions, with `d² + ε²` in place of `d²`.
pub fn audit_lemma_2d(system: &ParticleSystem, alpha: f64) -> Result<AuditReport> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(domain("alpha", alpha, "[0, 2)"));
    }
    let eps_sq = system.reg.epsilon * system.reg.epsilon;
    let mut lhs = 0.0f64;
    for a in &system.particles {
        let s: f64 = system
            .particles
            .iter()
            .map(|b| b.weight().abs() * (a.pos.dist_sq(&b.pos) + eps_sq).powf(-0.5 * alpha))
            .sum();
        lhs = lhs.max(s);
    }
    let l1: f64 = system.particles.iter().map(|p| p.weight().abs()).sum();
    let linf = system
        .particles
        .iter()
        .map(|p| (p.pos.r * p.xi0).abs())
        .fold(0.0, f64::max);
    let rhs = l1.powf(1.0 - 0.5 * alpha) * linf.powf(0.5 * alpha);
    let ratio = lhs / rhs;
    Ok(AuditReport::new("lemma_2d", lhs, rhs, ratio.is_finite() && ratio < RATIO_BAND_XQ, false)
        .with("alpha", json!(alpha)))
}

/// `max |u|` over samples against `‖rω‖₁^{1/4} ‖ξ‖₁^{1/4} ‖ξ‖∞^{1/2}` (full-space norms).
pub fn audit_fs_bound(system: &ParticleSystem, samples: &[HalfPlanePoint]) -> Result<AuditReport> {
    if system.is_empty() {
        return Ok(AuditReport::new("fs_bound", 0.0, 0.0, true, false));
    }
    let mut lhs = 0.0f64;
    for s in samples {
        let (ur, uz) = velocity_at(system, *s)?;
        lhs = lhs.max(ur.hypot(uz));
    }
    let r_omega_l1 = 2.0 * weighted_norm(&system.particles, 1.0, |p| p.pos.r * p.pos.r * p.xi0)?;
    let rhs = r_omega_l1.powf(0.25)
        * full_l1_xi(&system.particles).powf(0.25)
        * max_abs_xi(&system.particles).sqrt();
    let ratio = lhs / rhs;
    Ok(AuditReport::new("fs_bound", lhs, rhs, ratio.is_finite() && ratio < RATIO_BAND_FS, false)
        .with("samples", json!(samples.len())))
}

/// `∭_{ℝ³₊} −r²ξ ≤ R^δ ‖ω‖_{L^p}^{2−δ} ‖ξ₀^{−1}1_{ξ₀<0}‖_{L^s}^{1−δ}` with
/// `s = (1−δ)/(1−(2−δ)/p)`, norms over the upper half-space.
///
/// The left side is `2πP`. The reciprocal norm is taken from `initial`.
pub fn audit_p_linfty(
    system: &ParticleSystem,
    initial: &[Particle],
    p: f64,
    delta: f64,
) -> Result<AuditReport> {
    if !(0.0..1.0).contains(&delta) {
        return Err(domain("delta", delta, "[0, 1)"));
    }
    if p.is_nan() || p < 2.0 - delta {
        return Err(domain("p", p, "[2 - delta, inf]"));
    }
    let denom = 1.0 - (2.0 - delta) / p;
    let s = if denom == 0.0 { f64::INFINITY } else { (1.0 - delta) / denom };
    let recip = reciprocal_norm(initial, s)?;
    let lhs = TAU * impulse_p(system);
    let r_fac = if delta == 0.0 { 1.0 } else { support_radius(system).powf(delta) };
    let rhs = r_fac * norms(system, p)?.powf(2.0 - delta) * recip.powf(1.0 - delta);
    let name = format!("p_linfty(p={p},delta={delta})");
    let report = if recip.is_finite() {
        AuditReport::new(&name, lhs, rhs, lhs <= rhs * (1.0 + 1e-9), true)
    } else {
        AuditReport::new(&name, lhs, rhs, true, false).with("not_applicable", json!(true))
    };
    Ok(report.with("p", json!(p)).with("delta", json!(delta)).with("s", json!(s)))
}

/// Energy, `Ṗ`, and the two comparison integrals for a small configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyKernelComparison {
    pub energy: f64,
    pub energy_kernel: f64,
    pub pdot: f64,
    pub pdot_kernel: f64,
}

/// Evaluates both sides of the energy and `Ṗ` comparisons. Distances carry
/// the system's `ε²`, matching its regularized energy.
pub fn energy_kernel_comparison(system: &ParticleSystem) -> Result<EnergyKernelComparison> {
    let field = induced_field(system, true)?;
    let energy = field.energy.unwrap_or(0.0);
    let pdot = crate::diagnostics::pdot_from_field(system, &field);
    let e2 = system.reg.epsilon * system.reg.epsilon;
    let mut ek = 0.0;
    let mut pk = 0.0;
    for a in &system.particles {
        for b in &system.particles {
            let (p, q) = (a.pos, b.pos);
            let ww = a.weight() * b.weight();
            let rr2 = (p.r * q.r).powi(2);
            let pm = q.mirror();
            let zz = p.z * q.z;
            if zz != 0.0 {
                ek += ww
                    * integrate_relative(
                        |th| {
                            let (x, xb) = kernel_xy_sin(p, q, th);
                            let (y, _) = kernel_xy_sin(p, pm, th);
                            let c = th.cos();
                            rr2 * zz * c * c / ((x + e2).sqrt() * (xb + e2) * (y + e2))
                        },
                        0.0,
                        PI / 2.0,
                        1e-10,
                    )?;
            }
            let zs = p.z + q.z;
            if zs != 0.0 {
                pk += ww
                    * integrate_relative(
                        |th| {
                            let (y, yb) = kernel_xy_sin(p, pm, th);
                            let c = th.cos();
                            rr2 * zs * c * c / ((y + e2).powf(1.5) * (yb + e2))
                        },
                        0.0,
                        PI / 2.0,
                        1e-10,
                    )?;
            }
        }
    }
    Ok(EnergyKernelComparison {
        energy,
        energy_kernel: ek,
        pdot,
        pdot_kernel: pk,
    })
}

/// Ratios `E/kernel` and `Ṗ/kernel` over random few-particle configurations.
pub fn audit_energy_kernel_bounds(count: usize, seed: u64) -> Result<AuditReport> {
    if count < 10 {
        return Err(domain("random_config_count", count as f64, "[10, inf)"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reg = Regularization::new(0.05)?;
    let (mut e_min, mut e_max) = (f64::INFINITY, 0.0f64);
    let (mut p_min, mut p_max) = (f64::INFINITY, 0.0f64);
    for _ in 0..count {
        let n = rng.random_range(1..=4);
        let particles: Vec<Particle> = (0..n)
            .map(|_| {
                Particle::new(
                    rng.random_range(0.3..2.0),
                    rng.random_range(0.05..1.5),
                    -rng.random_range(0.1..1.0),
                    1.0,
                )
            })
            .collect();
        let system = ParticleSystem::new(particles, reg, 2.0)?;
        let c = energy_kernel_comparison(&system)?;
        let re = c.energy / c.energy_kernel;
        let rp = c.pdot / c.pdot_kernel;
        e_min = e_min.min(re);
        e_max = e_max.max(re);
        p_min = p_min.min(rp);
        p_max = p_max.max(rp);
    }
    let band = |lo: f64, hi: f64| lo >= 1e-3 && hi <= 1e3;
    let pass = band(e_min, e_max) && band(p_min, p_max);
    Ok(AuditReport::new("energy_kernel_bounds", e_max / e_min, p_max / p_min, pass, false)
        .with("configs", json!(count))
        .with("seed", json!(seed))
        .with("energy_ratio_min", json!(e_min))
        .with("energy_ratio_max", json!(e_max))
        .with("pdot_ratio_min", json!(p_min))
        .with("pdot_ratio_max", json!(p_max)))
}

/// Inequality audits on one snapshot. `initial` supplies the reciprocal norm.
pub fn inequality_audits(
    system: &ParticleSystem,
    initial: &[Particle],
    seed: u64,
) -> Result<Vec<AuditReport>> {
    let samples = sample_points(system, 100, seed);
    let mut out = Vec::new();
    for p in [2.0, f64::INFINITY] {
        out.push(audit_p_linfty(system, initial, p, 0.0)?);
    }
    out.push(audit_p_linfty(system, initial, f64::INFINITY, 0.5)?);
    if !system.is_empty() {
        for q in [0.0, 1.0, 2.0] {
            out.push(audit_lemma_xq(system, q, &samples)?);
        }
        for a in [0.0, 1.0, 1.9] {
            out.push(audit_lemma_2d(system, a)?);
        }
    }
    out.push(audit_fs_bound(system, &samples)?);
    out.push(audit_energy_kernel_bounds(50, seed)?);
    Ok(out)
}
