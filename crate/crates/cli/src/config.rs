//! JSON run configuration with strict unknown-key rejection.
//!
//! Geometry is in millimetres, wavelengths in nanometres. Every section has
//! defaults matching the standard desk layout: a 0.5 mm waist beam at
//! 702 nm (351 nm pump), a 256-sample grid spanning eight waists, 20
//! lines/mm analyzer plates and a matched fiber.

use std::f64::consts::TAU;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::Deserialize;

use oamsim_core::biphoton::{LossBudget, TwoPhotonState};
use oamsim_core::fieldgrid::GridSpec;
use oamsim_core::hologram::HologramSpec;
use oamsim_core::lgmodes::BeamParams;
use oamsim_core::scenarios::{RasterSpec, ScanSetup, ScenarioConfig, DEFAULT_SHIFT_SCHEDULE};

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub grid: GridSection,
    pub beam: BeamSection,
    pub state: StateSection,
    pub filters: FilterSection,
    pub scan: ScanSection,
    pub budget: BudgetSection,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n: usize,
    /// Physical side length; defaults to eight beam waists.
    pub extent_mm: Option<f64>,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            n: 256,
            extent_mm: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BeamSection {
    pub waist_mm: f64,
    pub signal_wavelength_nm: f64,
    pub pump_wavelength_nm: f64,
}

impl Default for BeamSection {
    fn default() -> Self {
        Self {
            waist_mm: 0.5,
            signal_wavelength_nm: 702.0,
            pump_wavelength_nm: 351.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StateSection {
    pub pump_l: i32,
    /// OAM truncation of the analyzers (results must be stable under +2).
    pub truncation: u32,
    /// Pair amplitudes as [re, im] over l = -L..L; equal magnitudes if null.
    pub amplitudes: Option<Vec<[f64; 2]>>,
    /// Relative phase of the vortex term in the two-term scan source.
    pub relative_phase_rad: f64,
}

impl Default for StateSection {
    fn default() -> Self {
        Self {
            pump_l: 0,
            truncation: 4,
            amplitudes: None,
            relative_phase_rad: 0.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FilterSection {
    pub line_density_per_mm: f64,
    pub blaze_depth_rad: f64,
    pub first_order_efficiency: f64,
    pub aperture_mm: f64,
    /// Fiber mode-field radius; matched to the beam waist if null.
    pub fiber_waist_mm: Option<f64>,
    pub arm1_delta_m: i32,
}

impl Default for FilterSection {
    fn default() -> Self {
        Self {
            line_density_per_mm: 20.0,
            blaze_depth_rad: TAU,
            first_order_efficiency: 0.18,
            aperture_mm: 5.0,
            fiber_waist_mm: None,
            arm1_delta_m: -2,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanSection {
    /// Raster half extent; defaults to two beam waists.
    pub raster_half_extent_mm: Option<f64>,
    pub raster_points_per_side: usize,
    /// Dislocation shifts; defaults to the standard schedule in waists.
    pub shifts_mm: Option<Vec<f64>>,
    /// When set, scans also report seeded Poisson counts at this mean
    /// number of generated pairs per raster point.
    pub mean_pairs: Option<f64>,
}

impl Default for ScanSection {
    fn default() -> Self {
        Self {
            raster_half_extent_mm: None,
            raster_points_per_side: 41,
            shifts_mm: None,
            mean_pairs: None,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BudgetSection {
    /// Named power-transmission factors; the standard five if null.
    pub factors: Option<Vec<FactorEntry>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorEntry {
    pub name: String,
    pub value: f64,
}

fn config_err(key: &str, err: impl std::fmt::Display) -> CliError {
    CliError::config(format!("invalid value for `{key}`: {err}"))
}

impl RunConfig {
    pub fn beam_params(&self) -> Result<BeamParams, CliError> {
        BeamParams::new(
            self.beam.waist_mm,
            self.beam.signal_wavelength_nm * 1e-6,
        )
        .map_err(|e| config_err("beam", e))
    }

    pub fn grid_spec(&self) -> Result<GridSpec, CliError> {
        let extent = self
            .grid
            .extent_mm
            .unwrap_or(8.0 * self.beam.waist_mm);
        GridSpec::new(self.grid.n, extent).map_err(|e| config_err("grid", e))
    }

    pub fn hologram_template(&self) -> HologramSpec {
        HologramSpec {
            delta_m: 0,
            line_density: self.filters.line_density_per_mm,
            dislocation_offset: (0.0, 0.0),
            blaze_depth: self.filters.blaze_depth_rad,
            first_order_efficiency: self.filters.first_order_efficiency,
            aperture: self.filters.aperture_mm,
        }
    }

    pub fn scenario(&self) -> Result<ScenarioConfig, CliError> {
        let template = self.hologram_template();
        template.validate().map_err(|e| config_err("filters", e))?;
        Ok(ScenarioConfig {
            beam: self.beam_params()?,
            grid: self.grid_spec()?,
            fiber_waist: self.filters.fiber_waist_mm.unwrap_or(self.beam.waist_mm),
            hologram_template: template,
            truncation: self.state.truncation,
        })
    }

    /// Source state for conservation matrices.
    pub fn pair_state(&self, pump_override: Option<i32>) -> Result<TwoPhotonState, CliError> {
        let pump = pump_override.unwrap_or(self.state.pump_l);
        match &self.state.amplitudes {
            None => Ok(TwoPhotonState::uniform(pump, 2)),
            Some(raw) => {
                if raw.len() % 2 == 0 {
                    return Err(CliError::config(format!(
                        "`state.amplitudes` must have odd length 2L+1, got {}",
                        raw.len()
                    )));
                }
                let l_max = (raw.len() as u32 - 1) / 2;
                let amps: Vec<Complex64> =
                    raw.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                TwoPhotonState::new(pump, l_max, &amps)
                    .map_err(|e| config_err("state.amplitudes", e))
            }
        }
    }

    pub fn scan_setup(&self) -> Result<ScanSetup, CliError> {
        let scenario = self.scenario()?;
        let half = self
            .scan
            .raster_half_extent_mm
            .unwrap_or(2.0 * self.beam.waist_mm);
        if half <= 0.0 {
            return Err(CliError::config(
                "`scan.raster_half_extent_mm` must be positive".into(),
            ));
        }
        if self.scan.raster_points_per_side == 0 {
            return Err(CliError::config(
                "`scan.raster_points_per_side` must be at least 1".into(),
            ));
        }
        Ok(ScanSetup {
            scenario,
            state: TwoPhotonState::two_term(self.state.relative_phase_rad),
            arm1_delta_m: self.filters.arm1_delta_m,
            raster: RasterSpec::centered(half, self.scan.raster_points_per_side),
        })
    }

    pub fn shifts(&self) -> Vec<f64> {
        match &self.scan.shifts_mm {
            Some(list) => list.clone(),
            None => DEFAULT_SHIFT_SCHEDULE
                .iter()
                .map(|s| s * self.beam.waist_mm)
                .collect(),
        }
    }

    pub fn loss_budget(&self) -> Result<LossBudget, CliError> {
        match &self.budget.factors {
            None => Ok(LossBudget::standard()),
            Some(entries) => LossBudget::new(
                entries
                    .iter()
                    .map(|f| (f.name.clone(), f.value))
                    .collect(),
            )
            .map_err(|e| config_err("budget.factors", e)),
        }
    }
}

pub fn load(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::config(format!("cannot read config {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("config {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_build_a_valid_scenario() {
        let cfg = RunConfig::default();
        let scenario = cfg.scenario().unwrap();
        assert_eq!(scenario.grid.n(), 256);
        assert!((scenario.grid.extent() - 4.0).abs() < 1e-12);
        assert!((scenario.fiber_waist - 0.5).abs() < 1e-12);
        assert_eq!(cfg.shifts().len(), 5);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = serde_json::from_str::<RunConfig>(r#"{"grid": {"m": 12}}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("unknown field `m`"), "{msg}");
    }

    #[test]
    fn amplitude_tables_must_be_odd() {
        let cfg: RunConfig =
            serde_json::from_str(r#"{"state": {"amplitudes": [[1.0, 0.0], [0.0, 0.0]]}}"#)
                .unwrap();
        assert!(cfg.pair_state(None).is_err());
    }

    #[test]
    fn wavelengths_convert_from_nanometres() {
        let cfg = RunConfig::default();
        let beam = cfg.beam_params().unwrap();
        assert!((beam.wavelength() - 7.02e-4).abs() < 1e-12);
    }
}
