//! Lagrangian vortex-blob discretization of the relative vorticity `ξ = ω/r`.
//!
//! Particles live on the upper half-plane and carry a constant `ξ₀` and a
//! conserved volume weight `V = r₀h²`, so the signed weight `μ = ξ₀V` never
//! changes. The lower half-plane is represented by mirror images with weight
//! `−μ`.
//!
//! Velocities are summed directly over all particle pairs. Each unordered
//! pair needs one kernel evaluation for the real partner and one for the
//! image, shared between both members of the pair. Pair values are computed
//! row by row (in parallel) and then added in a fixed order, so the result
//! does not depend on the number of threads. Per target, contributions are
//! added in ascending source order.

use std::f64::consts::PI;

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{self, TimeSeriesRecord};
use crate::elliptic::f_and_d1_unchecked;
use crate::error::{domain, Error, Result};
use crate::kernels::{
    axis_velocity, velocity_from_values, zeta_sq_unchecked, HalfPlanePoint, Regularization,
    AXIS_GUARD,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub pos: HalfPlanePoint,
    /// Relative vorticity carried along the trajectory.
    pub xi0: f64,
    /// Conserved 3D volume weight `r₀h²`.
    pub volume: f64,
}

impl Particle {
    pub fn new(r: f64, z: f64, xi0: f64, volume: f64) -> Self {
        Self {
            pos: HalfPlanePoint::new(r, z),
            xi0,
            volume,
        }
    }

    /// Signed weight `μ = ξ₀ V`, the discrete `ω dr dz`.
    #[inline]
    pub fn weight(&self) -> f64 {
        self.xi0 * self.volume
    }

    /// `+1` if the particle belongs above the plane, `−1` below, `0` for
    /// weightless tracers.
    ///
    /// Negative vorticity lives on `z ≥ 0`; a mirrored system (all `z` and
    /// `ξ₀` negated) lives below.
    pub fn home_side(&self) -> f64 {
        if self.xi0 < 0.0 {
            1.0
        } else if self.xi0 > 0.0 {
            -1.0
        } else {
            0.0
        }
    }

    pub fn mirror(&self) -> Self {
        Self {
            pos: self.pos.mirror(),
            xi0: -self.xi0,
            volume: self.volume,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSystem {
    pub particles: Vec<Particle>,
    pub reg: Regularization,
    pub time: f64,
    /// Configuration size, used to place the axis floor.
    pub length_scale: f64,
    /// Number of times a particle was reflected back to its half-plane.
    pub reflections: u64,
}

impl ParticleSystem {
    /// Builds a system after checking every particle.
    pub fn new(particles: Vec<Particle>, reg: Regularization, length_scale: f64) -> Result<Self> {
        if !(length_scale > 0.0 && length_scale.is_finite()) {
            return Err(domain("length_scale", length_scale, "(0, inf)"));
        }
        for (index, p) in particles.iter().enumerate() {
            let reason = if !p.pos.is_valid() {
                Some("position outside the half-plane")
            } else if !(p.volume > 0.0 && p.volume.is_finite()) {
                Some("volume must be positive")
            } else if !p.xi0.is_finite() {
                Some("non-finite xi0")
            } else if p.home_side() * p.pos.z < 0.0 {
                Some("vorticity sign does not match its half-plane")
            } else {
                None
            };
            if let Some(reason) = reason {
                return Err(Error::InvalidParticle { index, reason });
            }
        }
        Ok(Self {
            particles,
            reg,
            time: 0.0,
            length_scale,
            reflections: 0,
        })
    }

    /// Length scale derived from the particle positions.
    pub fn natural_length_scale(particles: &[Particle]) -> f64 {
        particles
            .iter()
            .map(|p| p.pos.r.hypot(p.pos.z))
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE)
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Radius below which targets use the on-axis formula.
    pub fn r_floor(&self) -> f64 {
        AXIS_GUARD * self.length_scale
    }

    pub fn circulation(&self) -> f64 {
        self.particles.iter().map(Particle::weight).sum()
    }

    /// The reflected system `(z, ξ₀) ↦ (−z, −ξ₀)`.
    pub fn mirror(&self) -> Self {
        Self {
            particles: self.particles.iter().map(Particle::mirror).collect(),
            ..self.clone()
        }
    }

    fn positions(&self) -> Vec<HalfPlanePoint> {
        self.particles.iter().map(|p| p.pos).collect()
    }

    fn weights(&self) -> Vec<f64> {
        self.particles.iter().map(Particle::weight).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialProfile {
    /// `ξ₀ = −λ` on a disk, odd extension below the plane.
    PatchPair {
        center: HalfPlanePoint,
        radius: f64,
        amplitude: f64,
    },
    /// `ξ₀ = −A (g(p − c) − g(p − c̄))` with `g(x) = exp(−|x|²/σ²)` and `c̄`
    /// the mirrored center.
    GaussianRingPair {
        center: HalfPlanePoint,
        width: f64,
        amplitude: f64,
    },
    /// Smooth data on `[0, 1]²` with `ξ₀ = −z` on `[0, ½] × [0, 1/10]`,
    /// `ξ₀ = −1` on most of the square, and independent of `r` near the axis.
    BahouriChemin { amplitude: f64 },
}

/// C^∞ step from 0 (at `t ≤ 0`) to 1 (at `t ≥ 1`).
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

impl InitialProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::PatchPair {
                center,
                radius,
                amplitude,
            } => {
                positive("radius", radius)?;
                positive("amplitude", amplitude)?;
                if center.z - radius < 0.0 {
                    return Err(Error::Config("patch crosses the symmetry plane".into()));
                }
                if center.r - radius <= 0.0 {
                    return Err(Error::Config("patch touches the axis".into()));
                }
                Ok(())
            }
            Self::GaussianRingPair {
                center,
                width,
                amplitude,
            } => {
                positive("width", width)?;
                positive("amplitude", amplitude)?;
                positive("center.r", center.r)?;
                positive("center.z", center.z)
            }
            Self::BahouriChemin { amplitude } => positive("amplitude", amplitude),
        }
    }

    /// `ξ₀` at a point of the upper half-plane.
    pub fn xi0(&self, p: HalfPlanePoint) -> f64 {
        match *self {
            Self::PatchPair {
                center,
                radius,
                amplitude,
            } => {
                if p.dist_sq(&center) <= radius * radius {
                    -amplitude
                } else {
                    0.0
                }
            }
            Self::GaussianRingPair {
                center,
                width,
                amplitude,
            } => {
                let w2 = width * width;
                let up = (-p.dist_sq(&center) / w2).exp();
                let down = (-p.dist_sq(&center.mirror()) / w2).exp();
                -amplitude * (up - down)
            }
            Self::BahouriChemin { amplitude } => {
                let (r, z) = (p.r, p.z);
                if !(0.0..=1.0).contains(&r) || !(0.0..=1.0).contains(&z) {
                    return 0.0;
                }
                // Near the axis: z on [0, 0.1], rising to 1 by z = 0.12.
                let rise = smooth_step((z - 0.1) / 0.02);
                let inner = z * (1.0 - rise) + rise;
                // Away from the axis: a fast rise off the plane.
                let outer = smooth_step(z / 0.01);
                let blend = smooth_step((r - 0.5) / 0.02);
                let cut = (1.0 - smooth_step((r - 0.99) / 0.01)) * (1.0 - smooth_step((z - 0.99) / 0.01));
                -amplitude * cut * ((1.0 - blend) * inner + blend * outer)
            }
        }
    }

    /// `(r_min, r_max, z_min, z_max)` of a box containing the support.
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        match *self {
            Self::PatchPair { center, radius, .. } => (
                center.r - radius,
                center.r + radius,
                center.z - radius,
                center.z + radius,
            ),
            Self::GaussianRingPair { center, width, .. } => {
                let w = 6.0 * width;
                ((center.r - w).max(0.0), center.r + w, (center.z - w).max(0.0), center.z + w)
            }
            Self::BahouriChemin { .. } => (0.0, 1.0, 0.0, 1.0),
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(name, v, "(0, inf)"))
    }
}

/// Places one particle per grid cell (cells `[ih, (i+1)h]`) where the profile
/// is non-negligible.
pub fn init_from_profile(
    profile: &InitialProfile,
    h: f64,
    reg: Regularization,
) -> Result<ParticleSystem> {
    positive("h", h)?;
    profile.validate()?;
    let (r0, r1, z0, z1) = profile.bounding_box();
    let i0 = (r0 / h).floor().max(0.0) as i64;
    let i1 = (r1 / h).ceil() as i64;
    let j0 = (z0 / h).floor().max(0.0) as i64;
    let j1 = (z1 / h).ceil() as i64;
    let mut cells = Vec::new();
    for i in i0..i1 {
        let r = (i as f64 + 0.5) * h;
        for j in j0..j1 {
            let z = (j as f64 + 0.5) * h;
            let p = HalfPlanePoint::new(r, z);
            cells.push((p, profile.xi0(p)));
        }
    }
    let max = cells.iter().map(|(_, v)| v.abs()).fold(0.0, f64::max);
    if max == 0.0 {
        return Err(Error::EmptySystem);
    }
    let particles: Vec<Particle> = cells
        .into_iter()
        .filter(|(_, v)| v.abs() > 1e-12 * max)
        .map(|(p, v)| Particle::new(p.r, p.z, v, p.r * h * h))
        .collect();
    let scale = ParticleSystem::natural_length_scale(&particles);
    ParticleSystem::new(particles, reg, scale)
}

/// Velocities at every particle, optionally with the kinetic energy.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedField {
    pub velocities: Vec<(f64, f64)>,
    pub energy: Option<f64>,
}

impl InducedField {
    pub fn max_speed(&self) -> f64 {
        self.velocities
            .iter()
            .map(|(a, b)| a.hypot(*b))
            .fold(0.0, f64::max)
    }
}

/// Per-particle constants reused across pairs.
#[derive(Clone, Copy)]
struct Node {
    p: HalfPlanePoint,
    w: f64,
    sqrt_r: f64,
    r32: f64,
}

/// Contributions of one unordered pair `(i, j)`, real partner plus image.
#[derive(Clone, Copy, Default)]
struct PairTerms {
    to_i: (f64, f64),
    to_j: (f64, f64),
    energy: f64,
}

#[inline]
fn kz_term(t: &Node, s_node: &Node, d_r: f64, s: f64, f: f64, d1: f64, inv: f64) -> f64 {
    d_r * d1 * inv + s_node.sqrt_r / (4.0 * PI * t.r32) * (f - 2.0 * s * d1)
}

#[inline]
fn pair_terms(a: &Node, b: &Node, eps_sq: f64, same: bool) -> PairTerms {
    let img = b.p.mirror();
    let s = zeta_sq_unchecked(a.p, b.p, eps_sq);
    let si = zeta_sq_unchecked(a.p, img, eps_sq);
    let (f, d1) = f_and_d1_unchecked(s);
    let (fi, d1i) = f_and_d1_unchecked(si);
    let inv_ab = 1.0 / (PI * a.r32 * b.sqrt_r);
    let dr = a.p.r - b.p.r;
    // Source b at (r_b, z_b) with weight w_b, image at (r_b, −z_b) with −w_b.
    let ur_a = (b.p.z - a.p.z) * d1 * inv_ab * b.w + (-b.p.z - a.p.z) * d1i * inv_ab * (-b.w);
    let uz_a = kz_term(a, b, dr, s, f, d1, inv_ab) * b.w + kz_term(a, b, dr, si, fi, d1i, inv_ab) * (-b.w);
    let energy = (a.p.r * b.p.r).sqrt() * a.w * b.w * (f - fi);
    if same {
        return PairTerms {
            to_i: (ur_a, uz_a),
            to_j: (0.0, 0.0),
            energy,
        };
    }
    let inv_ba = 1.0 / (PI * b.r32 * a.sqrt_r);
    let ur_b = (a.p.z - b.p.z) * d1 * inv_ba * a.w + (-a.p.z - b.p.z) * d1i * inv_ba * (-a.w);
    let uz_b = kz_term(b, a, -dr, s, f, d1, inv_ba) * a.w + kz_term(b, a, -dr, si, fi, d1i, inv_ba) * (-a.w);
    PairTerms {
        to_i: (ur_a, uz_a),
        to_j: (ur_b, uz_b),
        energy,
    }
}

fn nodes(pos: &[HalfPlanePoint], w: &[f64]) -> Vec<Node> {
    pos.iter()
        .zip(w)
        .map(|(p, &w)| {
            let sqrt_r = p.r.sqrt();
            Node {
                p: *p,
                w,
                sqrt_r,
                r32: p.r * sqrt_r,
            }
        })
        .collect()
}

/// Velocity (and energy) at all particles from all particles and images.
///
/// Requires `ε > 0`: the regularized self-interaction is part of the sum.
pub(crate) fn field_at_particles(
    pos: &[HalfPlanePoint],
    w: &[f64],
    reg: Regularization,
    r_floor: f64,
    with_energy: bool,
) -> Result<InducedField> {
    let n = pos.len();
    if n == 0 {
        return Ok(InducedField {
            velocities: Vec::new(),
            energy: with_energy.then_some(0.0),
        });
    }
    if reg.epsilon <= 0.0 {
        return Err(Error::Singularity("particle velocities need epsilon > 0"));
    }
    if pos.iter().any(|p| p.r <= r_floor) {
        return Ok(field_near_axis(pos, w, reg, r_floor, with_energy));
    }
    let eps_sq = reg.epsilon * reg.epsilon;
    let nodes = nodes(pos, w);
    let row = |i: usize| -> Vec<PairTerms> {
        (i..n)
            .map(|j| pair_terms(&nodes[i], &nodes[j], eps_sq, i == j))
            .collect()
    };
    let rows: Vec<Vec<PairTerms>> = map_indices(n, row);
    let mut vel = vec![(0.0, 0.0); n];
    let mut energy = 0.0;
    for (i, terms) in rows.iter().enumerate() {
        for (k, t) in terms.iter().enumerate() {
            let j = i + k;
            vel[i].0 += t.to_i.0;
            vel[i].1 += t.to_i.1;
            if j == i {
                energy += t.energy;
            } else {
                vel[j].0 += t.to_j.0;
                vel[j].1 += t.to_j.1;
                energy += 2.0 * t.energy;
            }
        }
    }
    Ok(InducedField {
        velocities: vel,
        energy: with_energy.then_some(energy),
    })
}

/// `(0..n).map(f)`, spread over the current thread pool when there is one.
#[cfg(feature = "parallel")]
fn map_indices<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, f: F) -> Vec<T> {
    if rayon::current_num_threads() > 1 {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn map_indices<T, F: Fn(usize) -> T>(n: usize, f: F) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Per-target fallback used when some particle sits within the axis floor.
fn field_near_axis(
    pos: &[HalfPlanePoint],
    w: &[f64],
    reg: Regularization,
    r_floor: f64,
    with_energy: bool,
) -> InducedField {
    let eps_sq = reg.epsilon * reg.epsilon;
    let velocities = map_indices(pos.len(), |i| velocity_from_sources(pos[i], pos, w, reg, r_floor));
    let energy = with_energy.then(|| {
        let mut e = 0.0;
        for (i, (a, wa)) in pos.iter().zip(w).enumerate() {
            if a.r <= 0.0 {
                continue;
            }
            for (k, (b, wb)) in pos[i..].iter().zip(&w[i..]).enumerate() {
                if b.r <= 0.0 {
                    continue;
                }
                let f = f_and_d1_unchecked(zeta_sq_unchecked(*a, *b, eps_sq)).0;
                let fi = f_and_d1_unchecked(zeta_sq_unchecked(*a, b.mirror(), eps_sq)).0;
                let term = (a.r * b.r).sqrt() * wa * wb * (f - fi);
                e += if k == 0 { term } else { 2.0 * term };
            }
        }
        e
    });
    InducedField { velocities, energy }
}

/// Sums real sources and images at one target, ascending source order.
fn velocity_from_sources(
    t: HalfPlanePoint,
    pos: &[HalfPlanePoint],
    w: &[f64],
    reg: Regularization,
    r_floor: f64,
) -> (f64, f64) {
    if t.r <= r_floor {
        let mut uz = 0.0;
        for (q, &wq) in pos.iter().zip(w) {
            uz += axis_velocity(t.z, &[(*q, wq), (q.mirror(), -wq)], reg).1;
        }
        return (0.0, uz);
    }
    let eps_sq = reg.epsilon * reg.epsilon;
    let (mut ur, mut uz) = (0.0, 0.0);
    for (q, &wq) in pos.iter().zip(w) {
        if q.r <= 0.0 {
            continue;
        }
        for (src, ws) in [(*q, wq), (q.mirror(), -wq)] {
            let s = zeta_sq_unchecked(t, src, eps_sq);
            if s == 0.0 {
                return (f64::NAN, f64::NAN);
            }
            let (f, d1) = f_and_d1_unchecked(s);
            let (kr, kz) = velocity_from_values(t, src, s, f, d1);
            ur += kr * ws;
            uz += kz * ws;
        }
    }
    (ur, uz)
}

/// Velocity at an arbitrary point of `Π` induced by the system and its image.
pub fn velocity_at(system: &ParticleSystem, target: HalfPlanePoint) -> Result<(f64, f64)> {
    if !target.is_valid() {
        return Err(domain("target.r", target.r, "[0, inf)"));
    }
    let pos = system.positions();
    let w = system.weights();
    let v = velocity_from_sources(target, &pos, &w, system.reg, system.r_floor());
    if v.0.is_finite() && v.1.is_finite() {
        Ok(v)
    } else {
        Err(Error::Singularity("target coincides with an unregularized particle"))
    }
}

/// Field at the current particle positions.
pub fn induced_field(system: &ParticleSystem, with_energy: bool) -> Result<InducedField> {
    field_at_particles(
        &system.positions(),
        &system.weights(),
        system.reg,
        system.r_floor(),
        with_energy,
    )
}

/// Bookkeeping from one RK4 step.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StepInfo {
    pub reflections: u64,
    /// `dt` exceeded `0.5 ε / max|u|`.
    pub advisory_exceeded: bool,
}

/// Largest step the advisory bound allows for a given field.
pub fn advisory_dt(reg: Regularization, field: &InducedField) -> f64 {
    let vmax = field.max_speed();
    if vmax == 0.0 {
        f64::INFINITY
    } else {
        0.5 * reg.epsilon / vmax
    }
}

fn check_finite(field: &InducedField, time: f64) -> Result<()> {
    match field
        .velocities
        .iter()
        .position(|(a, b)| !(a.is_finite() && b.is_finite()))
    {
        Some(index) => Err(Error::Integration { index, time }),
        None => Ok(()),
    }
}

/// One classical RK4 step given the first-stage field.
fn advance(system: &ParticleSystem, dt: f64, k1: &InducedField) -> Result<(ParticleSystem, StepInfo)> {
    check_finite(k1, system.time)?;
    let pos0 = system.positions();
    let w = system.weights();
    let reg = system.reg;
    let floor = system.r_floor();
    let shifted = |k: &[(f64, f64)], c: f64| -> Vec<HalfPlanePoint> {
        pos0.iter()
            .zip(k)
            .map(|(p, (ur, uz))| HalfPlanePoint::new(p.r + c * ur, p.z + c * uz))
            .collect()
    };
    let half = 0.5 * dt;
    let k2 = field_at_particles(&shifted(&k1.velocities, half), &w, reg, floor, false)?;
    check_finite(&k2, system.time + half)?;
    let k3 = field_at_particles(&shifted(&k2.velocities, half), &w, reg, floor, false)?;
    check_finite(&k3, system.time + half)?;
    let k4 = field_at_particles(&shifted(&k3.velocities, dt), &w, reg, floor, false)?;
    check_finite(&k4, system.time + dt)?;

    let mut info = StepInfo {
        reflections: 0,
        advisory_exceeded: dt > advisory_dt(reg, k1),
    };
    let sixth = dt / 6.0;
    let mut next = system.clone();
    for (i, p) in next.particles.iter_mut().enumerate() {
        let (a, b, c, d) = (k1.velocities[i], k2.velocities[i], k3.velocities[i], k4.velocities[i]);
        let r = pos0[i].r + sixth * (a.0 + 2.0 * b.0 + 2.0 * c.0 + d.0);
        let mut z = pos0[i].z + sixth * (a.1 + 2.0 * b.1 + 2.0 * c.1 + d.1);
        if p.home_side() * z < 0.0 {
            z = -z;
            info.reflections += 1;
        }
        if !(r.is_finite() && z.is_finite()) {
            return Err(Error::Integration {
                index: i,
                time: system.time,
            });
        }
        // Radial motion through the axis is not physical; clamp to it.
        p.pos = HalfPlanePoint::new(r.max(0.0), z);
    }
    next.time = system.time + dt;
    next.reflections += info.reflections;
    Ok((next, info))
}

/// Advances the system by one classical Runge–Kutta step.
pub fn step_rk4(system: &ParticleSystem, dt: f64) -> Result<(ParticleSystem, StepInfo)> {
    positive("dt", dt)?;
    let k1 = induced_field(system, false)?;
    advance(system, dt, &k1)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunParams {
    pub dt: f64,
    pub t_max: f64,
    pub output_every: usize,
}

/// Totals over a completed (or aborted) run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunSummary {
    pub steps: usize,
    pub outputs: usize,
    pub reflections: u64,
    pub advisory_violations: usize,
}

/// Advances to `t_max`, calling `on_output` with the state and diagnostics
/// every `output_every` steps (and at the start and end).
///
/// Steps have size `dt` except the last, which lands on `t_max` exactly.
/// Errors abort the run after all earlier outputs have been delivered.
pub fn run_with<F>(system: &ParticleSystem, params: RunParams, mut on_output: F) -> Result<RunSummary>
where
    F: FnMut(&ParticleSystem, &TimeSeriesRecord) -> Result<()>,
{
    positive("dt", params.dt)?;
    if !(params.t_max >= 0.0 && params.t_max.is_finite()) {
        return Err(domain("t_max", params.t_max, "[0, inf)"));
    }
    if params.output_every == 0 {
        return Err(domain("output_every", 0.0, "[1, inf)"));
    }
    let t0 = system.time;
    let steps = if params.t_max <= t0 {
        0
    } else {
        ((params.t_max - t0) / params.dt - 1e-9).ceil().max(1.0) as usize
    };
    let mut summary = RunSummary::default();
    let mut state = system.clone();
    for k in 0..=steps {
        let emit = k % params.output_every == 0 || k == steps;
        let field = induced_field(&state, emit)?;
        if emit {
            let record = diagnostics::record_from_field(&state, &field)?;
            on_output(&state, &record)?;
            summary.outputs += 1;
        }
        if k == steps {
            break;
        }
        let t_next = if k + 1 == steps {
            params.t_max
        } else {
            t0 + (k + 1) as f64 * params.dt
        };
        let dt = t_next - state.time;
        let (mut next, info) = advance(&state, dt, &field)?;
        next.time = t_next;
        summary.steps += 1;
        summary.reflections += info.reflections;
        summary.advisory_violations += usize::from(info.advisory_exceeded);
        state = next;
    }
    Ok(summary)
}

/// Output of [`run`]: every emitted frame, plus the error that stopped the
/// run early, if any.
#[derive(Debug)]
pub struct RunOutput {
    pub frames: Vec<(ParticleSystem, TimeSeriesRecord)>,
    pub summary: RunSummary,
    pub failure: Option<Error>,
}

impl RunOutput {
    pub fn records(&self) -> impl Iterator<Item = &TimeSeriesRecord> {
        self.frames.iter().map(|(_, r)| r)
    }
}

/// Collecting variant of [`run_with`].
pub fn run(system: &ParticleSystem, params: RunParams) -> RunOutput {
    let mut frames = Vec::new();
    let result = run_with(system, params, |s, r| {
        frames.push((s.clone(), *r));
        Ok(())
    });
    match result {
        Ok(summary) => RunOutput {
            frames,
            summary,
            failure: None,
        },
        Err(e) => RunOutput {
            summary: RunSummary {
                outputs: frames.len(),
                ..RunSummary::default()
            },
            frames,
            failure: Some(e),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(e: f64) -> Regularization {
        Regularization::new(e).unwrap()
    }

    fn patch(h: f64) -> ParticleSystem {
        let profile = InitialProfile::PatchPair {
            center: HalfPlanePoint::new(1.0, 0.5),
            radius: 0.25,
            amplitude: 1.0,
        };
        init_from_profile(&profile, h, reg(2.0 * h)).unwrap()
    }

    #[test]
    fn patch_particle_count_and_circulation() {
        let s = patch(0.05);
        assert!((s.len() as f64 - 78.5).abs() <= 5.0, "{}", s.len());
        let exact = -PI * 0.25 * 0.25;
        assert!(((s.circulation() - exact) / exact).abs() < 0.05);
    }

    #[test]
    fn rejects_bad_particles() {
        let bad = vec![Particle::new(1.0, -0.5, -1.0, 0.1)];
        assert!(matches!(
            ParticleSystem::new(bad, reg(0.1), 1.0),
            Err(Error::InvalidParticle { index: 0, .. })
        ));
        let bad = vec![Particle::new(1.0, 0.5, -1.0, 0.0)];
        assert!(ParticleSystem::new(bad, reg(0.1), 1.0).is_err());
        let mirrored = vec![Particle::new(1.0, -0.5, 1.0, 0.1)];
        assert!(ParticleSystem::new(mirrored, reg(0.1), 1.0).is_ok());
    }

    #[test]
    fn empty_profile_is_an_error() {
        let p = InitialProfile::GaussianRingPair {
            center: HalfPlanePoint::new(1.0, 1.0),
            width: 0.1,
            amplitude: 1.0,
        };
        assert!(init_from_profile(&p, 0.05, reg(0.1)).is_ok());
        let tiny = InitialProfile::PatchPair {
            center: HalfPlanePoint::new(1.0, 0.5),
            radius: 1e-4,
            amplitude: 1.0,
        };
        assert!(matches!(
            init_from_profile(&tiny, 0.05, reg(0.1)),
            Err(Error::EmptySystem)
        ));
    }

    #[test]
    fn pair_symmetric_sum_matches_per_target_sum() {
        let s = patch(0.1);
        let field = induced_field(&s, false).unwrap();
        for (i, p) in s.particles.iter().enumerate() {
            let v = velocity_at(&s, p.pos).unwrap();
            let u = field.velocities[i];
            assert!((v.0 - u.0).abs() <= 1e-13 * (1.0 + u.0.abs()));
            assert!((v.1 - u.1).abs() <= 1e-13 * (1.0 + u.1.abs()));
        }
    }

    #[test]
    fn no_axial_flow_on_the_plane() {
        let s = patch(0.1);
        for r in [0.3, 1.0, 1.7] {
            let (_, uz) = velocity_at(&s, HalfPlanePoint::new(r, 0.0)).unwrap();
            assert_eq!(uz, 0.0);
        }
        let (ur, _) = velocity_at(&s, HalfPlanePoint::new(0.0, 0.4)).unwrap();
        assert_eq!(ur, 0.0);
    }

    #[test]
    fn empty_system_is_fixed() {
        let s = ParticleSystem::new(Vec::new(), reg(0.1), 1.0).unwrap();
        let (next, _) = step_rk4(&s, 0.1).unwrap();
        assert!(next.particles.is_empty());
        assert_eq!(next.time, 0.1);
    }

    #[test]
    fn single_particle_drifts_out_and_down() {
        let p = Particle::new(1.0, 1.0, -0.1, 1.0);
        let s = ParticleSystem::new(vec![p], reg(0.1), 1.0).unwrap();
        let (next, _) = step_rk4(&s, 0.1).unwrap();
        assert!(next.particles[0].pos.r > 1.0);
        assert!(next.particles[0].pos.z < 1.0);
    }

    #[test]
    fn zero_horizon_gives_one_record() {
        let s = patch(0.1);
        let out = run(
            &s,
            RunParams {
                dt: 0.1,
                t_max: 0.0,
                output_every: 1,
            },
        );
        assert!(out.failure.is_none());
        assert_eq!(out.frames.len(), 1);
        assert_eq!(out.frames[0].1.t, 0.0);
    }

    #[test]
    fn final_step_lands_on_horizon() {
        let s = patch(0.1);
        let out = run(
            &s,
            RunParams {
                dt: 0.04,
                t_max: 0.1,
                output_every: 10,
            },
        );
        let t: Vec<f64> = out.records().map(|r| r.t).collect();
        assert_eq!(t, vec![0.0, 0.1]);
        assert_eq!(out.summary.steps, 3);
    }
}
