//! Experiment configuration: one self-describing JSON document per run.

use ccilab_core::lattice::ModelConfig;
use serde::{Deserialize, Serialize};

pub const GRID_MIN: usize = 64;
pub const GRID_MAX: usize = 65536;
pub const STEPS_MAX: u64 = 1_000_000;
/// Largest auto-sized state window, in sites.
pub const WINDOW_SITE_CAP: usize = 30_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub flux: FluxParams,
    #[serde(default)]
    pub index: IndexParams,
    #[serde(default)]
    pub winding: WindingParams,
    #[serde(default)]
    pub bands: BandParams,
    #[serde(default)]
    pub shift_witness: ShiftParams,
    #[serde(default)]
    pub evolve: Option<EvolveParams>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxParams {
    #[serde(default = "default_cuts")]
    pub cuts: Vec<i64>,
}

fn default_cuts() -> Vec<i64> {
    (-4..=5).collect()
}

impl Default for FluxParams {
    fn default() -> Self {
        Self {
            cuts: default_cuts(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndexParams {
    #[serde(default = "default_cut")]
    pub cut: i64,
}

fn default_cut() -> i64 {
    1
}

impl Default for IndexParams {
    fn default() -> Self {
        Self { cut: default_cut() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindingParams {
    #[serde(default = "default_winding_grid")]
    pub grid: usize,
}

fn default_winding_grid() -> usize {
    256
}

impl Default for WindingParams {
    fn default() -> Self {
        Self {
            grid: default_winding_grid(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandParams {
    #[serde(default = "default_band_grid")]
    pub grid: usize,
}

fn default_band_grid() -> usize {
    1024
}

impl Default for BandParams {
    fn default() -> Self {
        Self {
            grid: default_band_grid(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftParams {
    #[serde(default = "default_depth")]
    pub depth: usize,
}

fn default_depth() -> usize {
    50
}

impl Default for ShiftParams {
    fn default() -> Self {
        Self {
            depth: default_depth(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveParams {
    pub steps: u64,
    /// Initial basis ket [j, k].
    pub start: [i64; 2],
    /// Explicit window [j0, j1, k0, k1]; sized automatically when absent.
    #[serde(default)]
    pub window: Option<[i64; 4]>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).map_err(|e| format!("invalid config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        for (name, grid) in [
            ("winding.grid", self.winding.grid),
            ("bands.grid", self.bands.grid),
        ] {
            if !(GRID_MIN..=GRID_MAX).contains(&grid) {
                return Err(format!(
                    "{name} = {grid} outside the documented range [{GRID_MIN}, {GRID_MAX}]"
                ));
            }
        }
        if let Some(evolve) = &self.evolve {
            if evolve.steps > STEPS_MAX {
                return Err(format!(
                    "evolve.steps = {} above the documented maximum {STEPS_MAX}",
                    evolve.steps
                ));
            }
            if let Some([j0, j1, k0, k1]) = evolve.window {
                if j0 > j1 || k0 > k1 {
                    return Err(format!(
                        "evolve.window [{j0},{j1},{k0},{k1}] has crossed bounds"
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = ExperimentConfig::parse(r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1}}"#)
            .unwrap();
        assert_eq!(cfg.flux.cuts, (-4..=5).collect::<Vec<_>>());
        assert_eq!(cfg.winding.grid, 256);
        assert_eq!(cfg.bands.grid, 1024);
        assert_eq!(cfg.shift_witness.depth, 50);
        assert!(cfg.evolve.is_none());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ExperimentConfig::parse(
            r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1}, "extra": 3}"#
        )
        .is_err());
    }

    #[test]
    fn grid_ranges_are_enforced() {
        assert!(ExperimentConfig::parse(
            r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1}, "winding": {"grid": 32}}"#
        )
        .is_err());
        assert!(ExperimentConfig::parse(
            r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1}, "bands": {"grid": 100000}}"#
        )
        .is_err());
    }

    #[test]
    fn steps_cap_is_enforced() {
        assert!(ExperimentConfig::parse(
            r#"{"model": {"n_left": 0, "n_right": 0, "seed": 1},
                "evolve": {"steps": 2000000, "start": [0, 0]}}"#
        )
        .is_err());
    }
}
