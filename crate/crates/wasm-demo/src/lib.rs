//! Browser bindings for three interactive views: the Biot–Savart kernel
//! `F(s)`, the thin-filament ring pair, and a small vortex-blob simulation.
//!
//! Arrays cross the boundary as flat `Float64Array`s with a fixed stride.

use wasm_bindgen::prelude::*;

use axiring::diagnostics::{impulse_p, impulse_z, kinetic_energy};
use axiring::dyson::{integrate, CoreModel, FilamentPairState};
use axiring::elliptic::f_family;
use axiring::kernels::{HalfPlanePoint, Regularization};
use axiring::vortex_method::{init_from_profile, step_rk4, InitialProfile, ParticleSystem};

/// `[s, F, −F′, F″]` per row on a log grid.
pub fn kernel_table(s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>, String> {
    if !(s_min > 0.0 && s_max > s_min) || n < 2 {
        return Err(format!("need 0 < s_min < s_max and n >= 2, got [{s_min}, {s_max}], n = {n}"));
    }
    let (a, b) = (s_min.ln(), s_max.ln());
    let mut out = Vec::with_capacity(4 * n);
    for i in 0..n {
        let s = (a + (b - a) * i as f64 / (n - 1) as f64).exp();
        let v = f_family(s).map_err(|e| e.to_string())?;
        out.extend_from_slice(&[s, v.f, -v.d1, v.d2]);
    }
    Ok(out)
}

/// `[t, R, Z, a]` per sample, followed by a final `1.0` if the run collided
/// and `0.0` otherwise.
pub fn dyson_table(
    gamma: f64,
    r0: f64,
    z0: f64,
    a0: f64,
    dt: f64,
    t_max: f64,
    shrinking: bool,
) -> Result<Vec<f64>, String> {
    let state = FilamentPairState::new(r0, z0, gamma, a0).map_err(|e| e.to_string())?;
    let model = if shrinking { CoreModel::Shrinking } else { CoreModel::Fixed };
    let run = integrate(&state, dt, t_max, model).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(4 * run.samples.len() + 1);
    for s in &run.samples {
        out.extend_from_slice(&[s.t, s.r, s.z, s.a]);
    }
    out.push(if run.collision { 1.0 } else { 0.0 });
    Ok(out)
}

#[wasm_bindgen]
pub fn kernel_curves(s_min: f64, s_max: f64, n: usize) -> Result<Vec<f64>, JsError> {
    kernel_table(s_min, s_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn dyson_trajectory(
    gamma: f64,
    r0: f64,
    z0: f64,
    a0: f64,
    dt: f64,
    t_max: f64,
    shrinking: bool,
) -> Result<Vec<f64>, JsError> {
    dyson_table(gamma, r0, z0, a0, dt, t_max, shrinking).map_err(|e| JsError::new(&e))
}

/// A patch-pair simulation stepped from the page.
#[wasm_bindgen]
pub struct Simulation {
    system: ParticleSystem,
}

impl Simulation {
    pub fn create(r0: f64, z0: f64, radius: f64, h: f64) -> Result<Self, String> {
        let profile = InitialProfile::PatchPair {
            center: HalfPlanePoint::new(r0, z0),
            radius,
            amplitude: 1.0,
        };
        let reg = Regularization::new(2.0 * h).map_err(|e| e.to_string())?;
        let system = init_from_profile(&profile, h, reg).map_err(|e| e.to_string())?;
        Ok(Self { system })
    }

    pub fn advance(&mut self, dt: f64, steps: u32) -> Result<(), String> {
        for _ in 0..steps {
            self.system = step_rk4(&self.system, dt).map_err(|e| e.to_string())?.0;
        }
        Ok(())
    }
}

#[wasm_bindgen]
impl Simulation {
    /// Unit-strength patch of the given radius centred at `(r0, z0)`, grid
    /// spacing `h` and blob radius `2h`.
    #[wasm_bindgen(constructor)]
    pub fn new(r0: f64, z0: f64, radius: f64, h: f64) -> Result<Simulation, JsError> {
        Self::create(r0, z0, radius, h).map_err(|e| JsError::new(&e))
    }

    pub fn step(&mut self, dt: f64, steps: u32) -> Result<(), JsError> {
        self.advance(dt, steps).map_err(|e| JsError::new(&e))
    }

    /// `[r, z, ξ₀]` per particle.
    pub fn particles(&self) -> Vec<f64> {
        self.system
            .particles
            .iter()
            .flat_map(|p| [p.pos.r, p.pos.z, p.xi0])
            .collect()
    }

    pub fn len(&self) -> usize {
        self.system.len()
    }

    pub fn is_empty(&self) -> bool {
        self.system.is_empty()
    }

    pub fn time(&self) -> f64 {
        self.system.time
    }

    pub fn impulse_p(&self) -> f64 {
        impulse_p(&self.system)
    }

    pub fn impulse_z(&self) -> f64 {
        impulse_z(&self.system)
    }

    pub fn energy(&self) -> f64 {
        kinetic_energy(&self.system).unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_table_shape_and_signs() {
        let t = kernel_table(1e-3, 1e3, 50).unwrap();
        assert_eq!(t.len(), 200);
        assert!(t.chunks(4).all(|r| r[1] > 0.0 && r[2] > 0.0 && r[3] > 0.0));
        assert!(kernel_table(0.0, 1.0, 10).is_err());
        assert!(kernel_table(1.0, 2.0, 1).is_err());
    }

    #[test]
    fn dyson_table_ends_with_flag() {
        let t = dyson_table(1.0, 1.0, 1.0, 0.05, 0.1, 1.0, false).unwrap();
        assert_eq!(t.len(), 4 * 11 + 1);
        assert_eq!(*t.last().unwrap(), 0.0);
        assert!(dyson_table(1.0, 1.0, 1.0, 2.0, 0.1, 1.0, false).is_err());
    }

    #[test]
    fn simulation_moves_the_pair_apart() {
        let mut s = Simulation::create(1.0, 0.5, 0.25, 0.05).unwrap();
        let (p0, z0) = (s.impulse_p(), s.impulse_z());
        s.advance(0.05, 4).unwrap();
        assert!((s.time() - 0.2).abs() < 1e-12);
        assert!(s.impulse_p() > p0 && s.impulse_z() < z0);
        assert_eq!(s.particles().len(), 3 * s.len());
    }
}
