//! Run configuration files.
//!
//! A config is a JSON object with exactly the keys
//! `preset, params, h, epsilon, dt, t_max, output_every, seed, out_dir`.
//! Unknown keys and wrongly typed values are rejected, both at the top
//! level and inside `params`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::kernels::{HalfPlanePoint, Regularization};
use crate::vortex_method::{init_from_profile, InitialProfile, ParticleSystem, RunParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    PatchPair,
    GaussianRingPair,
    BahouriChemin,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatchPairParams {
    pub r0: f64,
    pub z0: f64,
    pub radius: f64,
    pub lambda: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianRingPairParams {
    pub r0: f64,
    pub z0: f64,
    pub sigma: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BahouriCheminParams {
    pub amplitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    preset: Preset,
    params: Value,
    h: f64,
    epsilon: f64,
    dt: f64,
    t_max: f64,
    output_every: usize,
    seed: u64,
    out_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub profile: InitialProfile,
    pub h: f64,
    pub epsilon: f64,
    pub dt: f64,
    pub t_max: f64,
    pub output_every: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

fn params<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Config(format!("params: {e}")))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let profile = match raw.preset {
            Preset::PatchPair => {
                let p: PatchPairParams = params(raw.params)?;
                InitialProfile::PatchPair {
                    center: HalfPlanePoint::new(p.r0, p.z0),
                    radius: p.radius,
                    amplitude: p.lambda,
                }
            }
            Preset::GaussianRingPair => {
                let p: GaussianRingPairParams = params(raw.params)?;
                InitialProfile::GaussianRingPair {
                    center: HalfPlanePoint::new(p.r0, p.z0),
                    width: p.sigma,
                    amplitude: p.amplitude,
                }
            }
            Preset::BahouriChemin => {
                let p: BahouriCheminParams = params(raw.params)?;
                InitialProfile::BahouriChemin {
                    amplitude: p.amplitude,
                }
            }
        };
        let cfg = Self {
            profile,
            h: raw.h,
            epsilon: raw.epsilon,
            dt: raw.dt,
            t_max: raw.t_max,
            output_every: raw.output_every,
            seed: raw.seed,
            out_dir: raw.out_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("h", self.h), ("epsilon", self.epsilon), ("dt", self.dt)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.t_max >= 0.0 && self.t_max.is_finite()) {
            return Err(Error::Config(format!("t_max must be non-negative, got {}", self.t_max)));
        }
        if self.output_every == 0 {
            return Err(Error::Config("output_every must be at least 1".into()));
        }
        self.profile.validate().map_err(|e| Error::Config(e.to_string()))
    }

    /// Non-fatal problems worth reporting.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.epsilon < self.h {
            w.push(format!(
                "epsilon = {} is below the grid spacing h = {}; blobs will not overlap",
                self.epsilon, self.h
            ));
        }
        w
    }

    pub fn regularization(&self) -> Result<Regularization> {
        Regularization::new(self.epsilon)
    }

    pub fn run_params(&self) -> RunParams {
        RunParams {
            dt: self.dt,
            t_max: self.t_max,
            output_every: self.output_every,
        }
    }

    pub fn initial_system(&self) -> Result<ParticleSystem> {
        init_from_profile(&self.profile, self.h, self.regularization()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{"preset":"patch-pair","params":{"r0":1,"z0":0.5,"radius":0.25,"lambda":1},
        "h":0.05,"epsilon":0.1,"dt":0.01,"t_max":0.1,"output_every":2,"seed":7,"out_dir":"out"}"#;

    #[test]
    fn parses() {
        let c = RunConfig::from_json(GOOD).unwrap();
        assert_eq!(c.output_every, 2);
        assert!(c.warnings().is_empty());
        assert!(matches!(c.profile, InitialProfile::PatchPair { radius, .. } if radius == 0.25));
    }

    #[test]
    fn rejects_unknown_and_mistyped() {
        let extra = GOOD.replace("\"seed\":7", "\"seed\":7,\"colour\":1");
        assert!(RunConfig::from_json(&extra).is_err());
        let inner = GOOD.replace("\"lambda\":1", "\"lambda\":1,\"sigma\":2");
        assert!(RunConfig::from_json(&inner).is_err());
        let typed = GOOD.replace("\"output_every\":2", "\"output_every\":\"2\"");
        assert!(RunConfig::from_json(&typed).is_err());
        let missing = GOOD.replace("\"seed\":7,", "");
        assert!(RunConfig::from_json(&missing).is_err());
        let preset = GOOD.replace("patch-pair", "patch");
        assert!(RunConfig::from_json(&preset).is_err());
    }

    #[test]
    fn error_names_the_line() {
        let e = RunConfig::from_json("{\n\"preset\": 3\n}").unwrap_err().to_string();
        assert!(e.contains("line 2"), "{e}");
    }

    #[test]
    fn warns_on_small_epsilon() {
        let c = RunConfig::from_json(&GOOD.replace("\"epsilon\":0.1", "\"epsilon\":0.01")).unwrap();
        assert_eq!(c.warnings().len(), 1);
    }
}
