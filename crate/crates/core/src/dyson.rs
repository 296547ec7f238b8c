//! Thin-filament model of an anti-parallel ring pair.
//!
//! The tracked ring sits at `(R, Z)` with `Z > 0` and carries circulation
//! `−Γ`; its mirror partner at `(R, −Z)` carries `+Γ`. The partner's exact
//! circular-filament velocity moves the tracked ring in both directions,
//! and Kelvin's self-induction `Γ/(4πR)(ln(8R/a) − 1/4)` moves it along the
//! axis, downward for `Γ > 0`.
//!
//! A mirrored state (`Z < 0`, `Γ < 0`) is accepted and evolves as the exact
//! reflection.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::kernels::{velocity_kernel, HalfPlanePoint, Regularization};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilamentPairState {
    pub r: f64,
    pub z: f64,
    pub gamma: f64,
    pub a0: f64,
    pub r0: f64,
}

impl FilamentPairState {
    /// Initial state with `R0 = R`.
    pub fn new(r: f64, z: f64, gamma: f64, a0: f64) -> Result<Self> {
        let s = Self { r, z, gamma, a0, r0: r };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("R", self.r), ("a0", self.a0), ("R0", self.r0)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(domain(name, v, "(0, inf)"));
            }
        }
        if !self.gamma.is_finite() || !self.z.is_finite() {
            return Err(Error::ModelValidity("non-finite state".into()));
        }
        if self.z == 0.0 {
            return Err(Error::Collision { time: 0.0 });
        }
        if self.gamma * self.z < 0.0 {
            return Err(Error::ModelValidity(
                "circulation sign must match the ring's side of the plane".into(),
            ));
        }
        Ok(())
    }

    /// The state reflected through the plane.
    pub fn mirror(&self) -> Self {
        Self {
            z: -self.z,
            gamma: -self.gamma,
            ..*self
        }
    }

    /// `a0 > R0/10`: the thin-core assumption is doubtful.
    pub fn thick_core(&self) -> bool {
        self.a0 > 0.1 * self.r0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoreModel {
    Fixed,
    /// Core area shrinks as the ring stretches: `a = a0 (R0/R)^{1/2}`.
    Shrinking,
}

/// Kelvin's translation speed `Γ/(4πR)(ln(8R/a) − 1/4)`.
pub fn self_induction(r: f64, gamma: f64, a: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(domain("R", r, "(0, inf)"));
    }
    if !(a > 0.0 && a < r) {
        return Err(Error::ModelValidity(format!(
            "core radius {a} must lie in (0, R = {r})"
        )));
    }
    Ok(gamma / (4.0 * PI * r) * ((8.0 * r / a).ln() - 0.25))
}

/// Velocity induced at the tracked ring by its mirror partner.
pub fn mutual_induction(state: &FilamentPairState) -> Result<(f64, f64)> {
    if state.z == 0.0 {
        return Err(Error::Collision { time: f64::NAN });
    }
    let here = HalfPlanePoint::new(state.r, state.z);
    let (kr, kz) = velocity_kernel(here, here.mirror(), Regularization::none())?;
    Ok((kr * state.gamma, kz * state.gamma))
}

/// `a0 (R0/R)^{1/2}`.
pub fn core_radius(state: &FilamentPairState) -> f64 {
    state.a0 * (state.r0 / state.r).sqrt()
}

fn core(state: &FilamentPairState, model: CoreModel) -> f64 {
    match model {
        CoreModel::Fixed => state.a0,
        CoreModel::Shrinking => core_radius(state),
    }
}

/// Signed axial self-induced velocity of the tracked ring (weight `−Γ`).
fn uz_self(state: &FilamentPairState, model: CoreModel) -> Result<f64> {
    Ok(-self_induction(state.r, state.gamma, core(state, model))?)
}

fn rhs(state: &FilamentPairState, model: CoreModel) -> Result<(f64, f64)> {
    let (ur, uz) = mutual_induction(state)?;
    Ok((ur, uz + uz_self(state, model)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DysonSample {
    pub t: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "Z")]
    pub z: f64,
    pub a: f64,
    pub uz_self: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DysonRun {
    pub samples: Vec<DysonSample>,
    /// The ring reached the symmetry plane before `t_max`.
    pub collision: bool,
    pub thick_core: bool,
}

impl DysonRun {
    pub fn series<F: Fn(&DysonSample) -> f64>(&self, f: F) -> Vec<(f64, f64)> {
        self.samples.iter().map(|s| (s.t, f(s))).collect()
    }
}

fn sample(t: f64, s: &FilamentPairState, model: CoreModel) -> Result<DysonSample> {
    Ok(DysonSample {
        t,
        r: s.r,
        z: s.z,
        a: core(s, model),
        uz_self: uz_self(s, model)?,
    })
}

/// One RK4 step; `None` if any stage reaches the plane.
fn rk4_step(
    s: &FilamentPairState,
    h: f64,
    model: CoreModel,
    side: f64,
) -> Result<Option<FilamentPairState>> {
    let at = |k: (f64, f64), c: f64| FilamentPairState {
        r: s.r + c * k.0,
        z: s.z + c * k.1,
        ..*s
    };
    let eval = |st: &FilamentPairState| -> Result<Option<(f64, f64)>> {
        if st.z * side > 0.0 {
            rhs(st, model).map(Some)
        } else {
            Ok(None)
        }
    };
    let Some(k1) = eval(s)? else { return Ok(None) };
    let Some(k2) = eval(&at(k1, 0.5 * h))? else { return Ok(None) };
    let Some(k3) = eval(&at(k2, 0.5 * h))? else { return Ok(None) };
    let Some(k4) = eval(&at(k3, h))? else { return Ok(None) };
    let next = FilamentPairState {
        r: s.r + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
        z: s.z + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        ..*s
    };
    Ok((next.z * side > 0.0).then_some(next))
}

/// RK4 from `t = 0` to `t_max`; one sample per step.
pub fn integrate(state: &FilamentPairState, dt: f64, t_max: f64, model: CoreModel) -> Result<DysonRun> {
    state.validate()?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(domain("dt", dt, "(0, inf)"));
    }
    if !(t_max >= 0.0 && t_max.is_finite()) {
        return Err(domain("t_max", t_max, "[0, inf)"));
    }
    let side = state.z.signum();
    let steps = if t_max == 0.0 {
        0
    } else {
        (t_max / dt - 1e-9).ceil().max(1.0) as usize
    };
    let mut s = *state;
    let mut t = 0.0;
    let mut samples = vec![sample(0.0, &s, model)?];
    let mut collision = false;
    for n in 1..=steps {
        let t_next = if n == steps { t_max } else { n as f64 * dt };
        let Some(next) = rk4_step(&s, t_next - t, model, side)? else {
            collision = true;
            break;
        };
        if !(next.r.is_finite() && next.z.is_finite()) {
            return Err(Error::Integration { index: 0, time: t });
        }
        s = next;
        t = t_next;
        samples.push(sample(t, &s, model)?);
    }
    Ok(DysonRun {
        samples,
        collision,
        thick_core: state.thick_core(),
    })
}
