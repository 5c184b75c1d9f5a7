use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use abscat::model::{InitialData, ModelParameters, Profile, DEFAULT_AMPLITUDE};
use abscat::pde::EvolveConfig;
use abscat::tolerances::{Z_GRID_MAX, Z_GRID_NODES, Z_MIN};
use abscat::verify::VerifyConfig;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProfileSpec {
    Named {
        name: String,
        amplitude: f64,
    },
    Samples {
        samples: Vec<[f64; 2]>,
        #[serde(rename = "B0", default)]
        b0: Option<Vec<f64>>,
    },
}

/// InitialData file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub grid: GridSpec,
    pub profile: ProfileSpec,
}

impl DataSpec {
    pub fn named(profile: &str, amplitude: f64, min: f64, max: f64, n: usize) -> Self {
        let p = ModelParameters::default();
        DataSpec {
            alpha: p.alpha,
            beta: p.beta,
            gamma: p.gamma,
            grid: GridSpec { min, max, n },
            profile: ProfileSpec::Named { name: profile.to_string(), amplitude },
        }
    }

    pub fn params(&self) -> Result<ModelParameters, CliError> {
        Ok(ModelParameters::new(self.alpha, self.beta, self.gamma)?)
    }

    pub fn build(&self) -> Result<InitialData, CliError> {
        let g = &self.grid;
        match &self.profile {
            ProfileSpec::Named { name, amplitude } => {
                Ok(InitialData::from_profile(Profile::parse(name)?, *amplitude, g.min, g.max, g.n)?)
            }
            ProfileSpec::Samples { samples, b0 } => {
                if samples.len() != g.n {
                    return Err(CliError::Input(format!("grid.n = {} but {} samples given", g.n, samples.len())));
                }
                let a0 = samples.iter().map(|s| C64::new(s[0], s[1])).collect();
                let b0 = b0.clone().unwrap_or_else(|| vec![0.0; g.n]);
                Ok(InitialData::new(g.min, g.max, a0, b0)?)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatterConfig {
    pub z_max: f64,
    pub z_nodes: usize,
    pub z_min: f64,
    pub check_solitons: bool,
}

impl Default for ScatterConfig {
    fn default() -> Self {
        ScatterConfig { z_max: Z_GRID_MAX, z_nodes: Z_GRID_NODES, z_min: Z_MIN, check_solitons: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub x: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AsymptoteConfig {
    /// Scattering CSV written by `scatter`; computed from the data if absent.
    pub scattering: Option<String>,
    /// Phase points; each is sampled at every time in `t`.
    pub z0: Vec<f64>,
    pub t: Vec<f64>,
    /// Extra (x, t) samples.
    pub points: Vec<Point>,
}

impl Default for AsymptoteConfig {
    fn default() -> Self {
        AsymptoteConfig { scattering: None, z0: vec![0.5, 1.0, 2.0], t: vec![10.0, 20.0, 40.0, 80.0], points: vec![] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveCmdConfig {
    pub dt: f64,
    pub checkpoints: Vec<f64>,
    pub fixed_point_tol: f64,
    pub fixed_point_max_iter: usize,
    pub damping: f64,
    /// Compare the scattering data of the last snapshot with the data.
    pub isospectral: bool,
    /// Start of the outflow taper applied before that comparison; defaults
    /// to the point 48% of the way across the grid.
    pub taper_start: Option<f64>,
}

impl Default for EvolveCmdConfig {
    fn default() -> Self {
        let e = EvolveConfig::default();
        EvolveCmdConfig {
            dt: 0.0018,
            checkpoints: vec![1.0, 2.5, 5.0],
            fixed_point_tol: e.fixed_point_tol,
            fixed_point_max_iter: e.fixed_point_max_iter,
            damping: e.damping,
            isospectral: true,
            taper_start: None,
        }
    }
}

impl EvolveCmdConfig {
    pub fn evolve_config(&self, dt: f64) -> EvolveConfig {
        EvolveConfig {
            dt,
            fixed_point_tol: self.fixed_point_tol,
            fixed_point_max_iter: self.fixed_point_max_iter,
            t_end: self.checkpoints.last().copied().unwrap_or(0.0),
            damping: self.damping,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareCmdConfig {
    pub z0: f64,
    pub checkpoints: Vec<f64>,
    pub dt: f64,
}

impl Default for CompareCmdConfig {
    fn default() -> Self {
        CompareCmdConfig { z0: 1.0, checkpoints: vec![20.0, 40.0, 80.0], dt: 0.01 }
    }
}

/// Everything a run can be configured with. Every section is optional.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Initial data shared by all commands; each command has its own default.
    pub data: Option<DataSpec>,
    pub scatter: ScatterConfig,
    pub asymptote: AsymptoteConfig,
    pub evolve: EvolveCmdConfig,
    pub compare: CompareCmdConfig,
    pub verify: VerifyConfig,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }

    pub fn data_or(&self, default: DataSpec) -> DataSpec {
        self.data.clone().unwrap_or(default)
    }
}

pub fn default_scatter_data() -> DataSpec {
    DataSpec::named("sech", DEFAULT_AMPLITUDE, -30.0, 30.0, 4096)
}

/// Long outflow domain: the evolved field spreads to the right at a speed
/// that grows like 1/z^2 for small spectral z.
pub fn default_evolve_data() -> DataSpec {
    DataSpec::named("sech", DEFAULT_AMPLITUDE, -30.0, 1500.0, 30601)
}

pub fn default_compare_data() -> DataSpec {
    DataSpec::named("sech", DEFAULT_AMPLITUDE, -60.0, 60.0, 4096)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_and_sampled_profiles_parse() {
        let named = r#"{"alpha":-1,"beta":1,"gamma":-1,"grid":{"min":-30,"max":30,"n":512},"profile":{"name":"sech","amplitude":0.3}}"#;
        let d: DataSpec = serde_json::from_str(named).unwrap();
        assert_eq!(d.build().unwrap().n(), 512);
        let n = 300;
        let samples: Vec<[f64; 2]> = (0..n).map(|_| [0.0, 0.0]).collect();
        let raw = DataSpec {
            alpha: -1.0,
            beta: 1.0,
            gamma: -1.0,
            grid: GridSpec { min: -10.0, max: 10.0, n },
            profile: ProfileSpec::Samples { samples, b0: None },
        };
        let text = serde_json::to_string(&raw).unwrap();
        let back: DataSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, raw);
        assert_eq!(back.build().unwrap().max_amplitude(), 0.0);
    }

    #[test]
    fn sample_count_must_match() {
        let raw = DataSpec {
            alpha: -1.0,
            beta: 1.0,
            gamma: -1.0,
            grid: GridSpec { min: -10.0, max: 10.0, n: 400 },
            profile: ProfileSpec::Samples { samples: vec![[0.0, 0.0]; 3], b0: None },
        };
        assert!(matches!(raw.build(), Err(CliError::Input(_))));
    }

    #[test]
    fn empty_config_is_all_defaults() {
        let c = RunConfig::parse("{}").unwrap();
        assert!(c.data.is_none());
        assert_eq!(c.scatter, ScatterConfig::default());
        assert!(RunConfig::parse(r#"{"scater":{}}"#).is_err());
    }
}
