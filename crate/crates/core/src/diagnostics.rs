//! Impulses, energy, norms and fluxes of a particle system, and power-law
//! fits of their time series.
//!
//! `P = Σ −r²μ` and `Z = Σ −zμ` are the planar (`dr dz`) impulses. Norms are
//! 3D norms over the upper half-space, `‖f‖_p^p = 2π Σ |f_i|^p V_i`, using the
//! conserved volume weights.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::vortex_method::{induced_field, InducedField, Particle, ParticleSystem};

/// One row of the diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub t: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[serde(rename = "Rmax")]
    pub rmax: f64,
    pub omega_linf: f64,
    pub omega_l2: f64,
    #[serde(rename = "Pdot")]
    pub pdot: f64,
    #[serde(rename = "Zdot")]
    pub zdot: f64,
}

impl TimeSeriesRecord {
    pub const HEADER: [&'static str; 10] = [
        "t", "P", "Z", "E", "Gamma", "Rmax", "omega_linf", "omega_l2", "Pdot", "Zdot",
    ];

    /// Value of a named column.
    pub fn column(&self, name: &str) -> Option<f64> {
        Some(match name {
            "t" => self.t,
            "P" => self.p,
            "Z" => self.z,
            "E" => self.e,
            "Gamma" => self.gamma,
            "Rmax" => self.rmax,
            "omega_linf" => self.omega_linf,
            "omega_l2" => self.omega_l2,
            "Pdot" => self.pdot,
            "Zdot" => self.zdot,
            _ => return None,
        })
    }
}

pub fn impulse_p(system: &ParticleSystem) -> f64 {
    system
        .particles
        .iter()
        .map(|p| -p.pos.r * p.pos.r * p.weight())
        .sum()
}

pub fn impulse_z(system: &ParticleSystem) -> f64 {
    system.particles.iter().map(|p| -p.pos.z * p.weight()).sum()
}

/// Circulation `∬ω dr dz` over the upper half-plane.
pub fn circulation(system: &ParticleSystem) -> f64 {
    system.circulation()
}

/// `½ ⨌ (r r̄)^{1/2} 𝓕(ζ²) ω ω̄` over particles and images, self-terms included.
pub fn kinetic_energy(system: &ParticleSystem) -> Result<f64> {
    if system.is_empty() {
        return Ok(0.0);
    }
    if system.reg.epsilon <= 0.0 {
        return Err(Error::Singularity("kinetic energy needs epsilon > 0"));
    }
    Ok(induced_field(system, true)?.energy.unwrap_or(0.0))
}

/// `Ṗ = Σ −2 r u^r μ`.
pub fn flux_pdot(system: &ParticleSystem) -> Result<f64> {
    Ok(pdot_from_field(system, &induced_field(system, false)?))
}

/// `Ż = −Σ u^z μ`.
pub fn flux_zdot(system: &ParticleSystem) -> Result<f64> {
    Ok(zdot_from_field(system, &induced_field(system, false)?))
}

pub fn pdot_from_field(system: &ParticleSystem, field: &InducedField) -> f64 {
    system
        .particles
        .iter()
        .zip(&field.velocities)
        .map(|(p, (ur, _))| -2.0 * p.pos.r * ur * p.weight())
        .sum()
}

pub fn zdot_from_field(system: &ParticleSystem, field: &InducedField) -> f64 {
    system
        .particles
        .iter()
        .zip(&field.velocities)
        .map(|(p, (_, uz))| -uz * p.weight())
        .sum()
}

/// `(2π Σ |f(p)|^q V)^{1/q}`, or `max |f(p)|` for `q = ∞`.
pub fn weighted_norm<F: Fn(&Particle) -> f64>(particles: &[Particle], q: f64, f: F) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(domain("p", q, "[1, inf]"));
    }
    if q == f64::INFINITY {
        return Ok(particles.iter().map(|p| f(p).abs()).fold(0.0, f64::max));
    }
    let s: f64 = particles.iter().map(|p| f(p).abs().powf(q) * p.volume).sum();
    Ok((2.0 * PI * s).powf(1.0 / q))
}

/// `‖ω‖_{L^p}` over the upper half-space, `ω = r ξ`.
pub fn norms(system: &ParticleSystem, p: f64) -> Result<f64> {
    weighted_norm(&system.particles, p, |q| q.pos.r * q.xi0)
}

/// `‖ξ‖_{L^p}` over the upper half-space; transport-invariant.
pub fn xi_norm(system: &ParticleSystem, p: f64) -> Result<f64> {
    weighted_norm(&system.particles, p, |q| q.xi0)
}

/// `‖ξ^{−1} 1_{ξ<0}‖_{L^q}` over the upper half-space, for any `q > 0`.
pub fn reciprocal_norm(particles: &[Particle], q: f64) -> Result<f64> {
    if q.is_nan() || q <= 0.0 {
        return Err(domain("q", q, "(0, inf]"));
    }
    let neg = particles.iter().filter(|p| p.xi0 < 0.0);
    if q == f64::INFINITY {
        return Ok(neg.map(|p| 1.0 / p.xi0.abs()).fold(0.0, f64::max));
    }
    let s: f64 = neg.map(|p| p.xi0.abs().powf(-q) * p.volume).sum();
    Ok((2.0 * PI * s).powf(1.0 / q))
}

/// `sup r` over the particles; 0 when empty.
pub fn support_radius(system: &ParticleSystem) -> f64 {
    system.particles.iter().map(|p| p.pos.r).fold(0.0, f64::max)
}

/// Running maximum `sup_{t′≤t} R(t′)`.
pub fn support_envelope(radii: &[f64]) -> Vec<f64> {
    radii
        .iter()
        .scan(0.0f64, |m, &r| {
            *m = m.max(r);
            Some(*m)
        })
        .collect()
}

/// Diagnostics row computed from a field that carries the energy.
pub fn record_from_field(system: &ParticleSystem, field: &InducedField) -> Result<TimeSeriesRecord> {
    let e = match field.energy {
        Some(e) => e,
        None => kinetic_energy(system)?,
    };
    Ok(TimeSeriesRecord {
        t: system.time,
        p: impulse_p(system),
        z: impulse_z(system),
        e,
        gamma: circulation(system),
        rmax: support_radius(system),
        omega_linf: norms(system, f64::INFINITY)?,
        omega_l2: norms(system, 2.0)?,
        pdot: pdot_from_field(system, field),
        zdot: zdot_from_field(system, field),
    })
}

pub fn record(system: &ParticleSystem) -> Result<TimeSeriesRecord> {
    record_from_field(system, &induced_field(system, true)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    /// RMS residual of the log-log line.
    pub residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

impl PowerLawFit {
    pub fn eval(&self, t: f64) -> f64 {
        self.prefactor * t.powf(self.exponent)
    }
}

/// The second half of the time span covered by `series`.
pub fn default_window(series: &[(f64, f64)]) -> Option<(f64, f64)> {
    let first = series.first()?.0;
    let last = series.last()?.0;
    Some((first + 0.5 * (last - first), last))
}

/// Least-squares fit of `log v = log c + k log t` over `t ∈ [t_min, t_max]`.
pub fn fit_power_law(series: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Fit(format!("empty window [{lo}, {hi}]")));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(t, _)| *t >= lo && *t <= hi)
        .copied()
        .collect();
    if pts.len() < 8 {
        return Err(Error::Fit(format!(
            "{} samples in [{lo}, {hi}], need at least 8",
            pts.len()
        )));
    }
    if let Some((t, v)) = pts.iter().find(|(t, v)| !(*t > 0.0 && *v > 0.0)) {
        return Err(Error::Fit(format!("non-positive sample ({t}, {v})")));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|(t, _)| t.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all samples share one time".into()));
    }
    let k = sxy / sxx;
    let b = my - k * mx;
    let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - b - k * x).powi(2)).sum();
    Ok(PowerLawFit {
        exponent: k,
        prefactor: b.exp(),
        residual: (ss / n).sqrt(),
        window,
        samples: pts.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::Regularization;

    fn system(ps: Vec<Particle>) -> ParticleSystem {
        ParticleSystem::new(ps, Regularization::new(0.1).unwrap(), 1.0).unwrap()
    }

    #[test]
    fn empty_system() {
        let s = system(vec![]);
        assert_eq!(impulse_p(&s), 0.0);
        assert_eq!(impulse_z(&s), 0.0);
        assert_eq!(kinetic_energy(&s).unwrap(), 0.0);
        assert_eq!(flux_pdot(&s).unwrap(), 0.0);
        assert_eq!(flux_zdot(&s).unwrap(), 0.0);
        assert_eq!(support_radius(&s), 0.0);
    }

    #[test]
    fn one_particle_values() {
        let s = system(vec![Particle::new(2.0, 0.0, -0.5, 1.0)]);
        assert_eq!(impulse_p(&s), 2.0);
        let s = system(vec![Particle::new(1.0, 3.0, -1.0, 1.0)]);
        assert_eq!(impulse_z(&s), 3.0);
        let s = system(vec![Particle::new(2.0, 1.0, -1.0, 0.01)]);
        assert_eq!(norms(&s, f64::INFINITY).unwrap(), 2.0);
        let s = system(vec![Particle::new(3.0, 1.0, -1.0, 0.01)]);
        assert_eq!(support_radius(&s), 3.0);
        assert!(norms(&s, 0.5).is_err());
    }

    #[test]
    fn energy_needs_regularization() {
        let p = Particle::new(1.0, 1.0, -1.0, 0.1);
        let s = ParticleSystem::new(vec![p], Regularization::none(), 1.0).unwrap();
        assert!(kinetic_energy(&s).is_err());
    }

    #[test]
    fn envelope_is_nondecreasing() {
        assert_eq!(support_envelope(&[1.0, 3.0, 2.0, 4.0]), vec![1.0, 3.0, 3.0, 4.0]);
    }

    #[test]
    fn fits_exact_power_laws() {
        let series: Vec<(f64, f64)> = (1..=20).map(|i| (i as f64, 3.0 * (i as f64).powi(2))).collect();
        let fit = fit_power_law(&series, (1.0, 20.0)).unwrap();
        assert!((fit.exponent - 2.0).abs() < 1e-10);
        assert!((fit.prefactor - 3.0).abs() < 1e-9);
        let flat: Vec<(f64, f64)> = (1..=20).map(|i| (i as f64, 5.0)).collect();
        assert!(fit_power_law(&flat, (1.0, 20.0)).unwrap().exponent.abs() < 1e-12);
    }

    #[test]
    fn fit_errors() {
        let series: Vec<(f64, f64)> = (1..=5).map(|i| (i as f64, i as f64)).collect();
        assert!(fit_power_law(&series, (1.0, 5.0)).is_err());
        let series: Vec<(f64, f64)> = (0..=20).map(|i| (i as f64, i as f64)).collect();
        assert!(fit_power_law(&series, (0.0, 20.0)).is_err());
        assert!(fit_power_law(&series, (3.0, 3.0)).is_err());
    }
}
