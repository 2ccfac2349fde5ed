use std::path::PathBuf;

use orthoiir::{hp_lp_complement, FilterKind, FilterSpec};
use serde::Deserialize;

pub const OUTPUT_DIR_ENV: &str = "ORTHOIIR_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HpLevels {
    pub lo_level: f64,
    pub hi_level: f64,
}

/// On-disk design configuration. The low-pass characteristic is given either
/// as a full `lp_spec` or by the four band-edge shorthand fields.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub lp_spec: Option<FilterSpec>,
    #[serde(default)]
    pub passband_edge: Option<f64>,
    #[serde(default)]
    pub stopband_edge: Option<f64>,
    #[serde(default)]
    pub passband_level: Option<f64>,
    #[serde(default)]
    pub stopband_level: Option<f64>,
    pub hp_levels: HpLevels,
    #[serde(default = "default_terms")]
    pub num_terms_n: usize,
    #[serde(default = "default_terms")]
    pub num_terms_m: usize,
    #[serde(default = "default_kind")]
    pub kind: FilterKind,
    #[serde(default = "default_grid")]
    pub grid_points: usize,
    #[serde(default)]
    pub reference_omega: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
}

fn default_terms() -> usize {
    20
}

fn default_kind() -> FilterKind {
    FilterKind::LowPass
}

fn default_grid() -> usize {
    orthoiir::response::DEFAULT_GRID_POINTS
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("orthoiir-out")
}

/// Validated configuration with the low-pass spec expanded.
#[derive(Debug, Clone)]
pub struct DesignConfig {
    pub lp_spec: FilterSpec,
    pub hp_levels: HpLevels,
    pub num_terms_n: usize,
    pub num_terms_m: usize,
    pub kind: FilterKind,
    pub grid_points: usize,
    pub reference_omega: f64,
    pub output_dir: PathBuf,
}

impl DesignConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| e.to_string())?;
        Self::from_raw(raw)
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, String> {
        let shorthand = [
            raw.passband_edge,
            raw.stopband_edge,
            raw.passband_level,
            raw.stopband_level,
        ];
        let lp_spec = match (raw.lp_spec, shorthand) {
            (Some(spec), [None, None, None, None]) => spec,
            (None, [Some(pe), Some(se), Some(pl), Some(sl)]) => {
                FilterSpec::two_band(pe, se, pl, sl).map_err(|e| e.to_string())?
            }
            (Some(_), _) => return Err("give either lp_spec or the band-edge shorthand, not both".into()),
            (None, _) => {
                return Err(
                    "missing low-pass spec: need lp_spec or all of passband_edge, stopband_edge, passband_level, stopband_level"
                        .into(),
                )
            }
        };
        if lp_spec.bands().len() != 2 {
            return Err(format!(
                "lp_spec must have two bands, got {}",
                lp_spec.bands().len()
            ));
        }
        if raw.num_terms_n == 0 || raw.num_terms_m == 0 {
            return Err("num_terms_n and num_terms_m must be at least 1".into());
        }
        if raw.grid_points < orthoiir::response::MIN_GRID_POINTS {
            return Err(format!(
                "grid_points must be at least {}, got {}",
                orthoiir::response::MIN_GRID_POINTS,
                raw.grid_points
            ));
        }
        if !(0.0..=std::f64::consts::PI).contains(&raw.reference_omega) {
            return Err(format!(
                "reference_omega must lie in [0, pi], got {}",
                raw.reference_omega
            ));
        }
        Ok(DesignConfig {
            lp_spec,
            hp_levels: raw.hp_levels,
            num_terms_n: raw.num_terms_n,
            num_terms_m: raw.num_terms_m,
            kind: raw.kind,
            grid_points: raw.grid_points,
            reference_omega: raw.reference_omega,
            output_dir: raw.output_dir,
        })
    }

    /// The complementary spec; fails on non-positive levels.
    pub fn hp_spec(&self) -> orthoiir::Result<FilterSpec> {
        hp_lp_complement(
            &self.lp_spec,
            self.hp_levels.lo_level,
            self.hp_levels.hi_level,
        )
    }

    /// Output directory after applying the environment override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }
}
