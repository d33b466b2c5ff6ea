//! Every sampler weight and range in one table, overridable from TOML.
//!
//! ```toml
//! canvas_size = 512
//!
//! [mtp]
//! grid_weight = 0.7
//! brick_weight = 0.3
//! scale = [0.4, 1.2]
//!
//! [sfp]
//! voronoi_weight = 0.4
//! voronoi_sites = [6, 40]
//!
//! [edits.sfp]
//! insert_outline = 2.0
//! ```
//!
//! Keys left out keep their defaults; unknown keys are rejected.

use serde::{Deserialize, Serialize};

pub type IntRange = [i64; 2];
pub type RealRange = [f64; 2];

/// Relative weights of the four field kinds used for varying slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldWeights {
    #[serde(rename = "const")]
    pub constant: f64,
    pub alt: f64,
    pub ramp: f64,
    pub checker: f64,
}

impl Default for FieldWeights {
    fn default() -> FieldWeights {
        FieldWeights { constant: 1.0, alt: 1.0, ramp: 1.0, checker: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MtpConfig {
    pub grid_weight: f64,
    pub brick_weight: f64,
    pub grid_rows: IntRange,
    pub grid_cols: IntRange,
    pub brick_rows: IntRange,
    pub brick_cols: IntRange,
    /// Per-fragment motif scale.
    pub scale: RealRange,
    /// Motif rotation in degrees, upper bound exclusive.
    pub rotate: RealRange,
    pub margin: RealRange,
    pub fields: FieldWeights,
    /// Chance of a smaller accent motif in the same layer.
    pub accent_prob: f64,
    pub accent_scale: RealRange,
    pub second_layer_prob: f64,
    pub flip_prob: f64,
}

impl Default for MtpConfig {
    fn default() -> MtpConfig {
        MtpConfig {
            grid_weight: 0.7,
            brick_weight: 0.3,
            grid_rows: [2, 8],
            grid_cols: [2, 8],
            brick_rows: [2, 6],
            brick_cols: [2, 6],
            scale: [0.4, 1.2],
            rotate: [0.0, 360.0],
            margin: [0.05, 0.2],
            fields: FieldWeights::default(),
            accent_prob: 0.25,
            accent_scale: [0.25, 0.45],
            second_layer_prob: 0.3,
            flip_prob: 0.2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfpConfig {
    pub voronoi_weight: f64,
    pub stripes_weight: f64,
    pub grid_weight: f64,
    pub brick_weight: f64,
    pub voronoi_sites: IntRange,
    pub voronoi_relax: IntRange,
    pub stripes_count: IntRange,
    pub grid_rows: IntRange,
    pub grid_cols: IntRange,
    pub brick_rows: IntRange,
    pub brick_cols: IntRange,
    /// Merges are only sampled over fragmenters with row/col coordinates.
    pub merge_prob: f64,
    pub inset_prob: f64,
    pub inset: RealRange,
    pub outline_prob: f64,
    pub outline_width: RealRange,
    /// Chance that the fill uses `cycle` rather than `ramp`.
    pub cycle_prob: f64,
}

impl Default for SfpConfig {
    fn default() -> SfpConfig {
        SfpConfig {
            voronoi_weight: 0.4,
            stripes_weight: 0.2,
            grid_weight: 0.2,
            brick_weight: 0.2,
            voronoi_sites: [6, 40],
            voronoi_relax: [0, 2],
            stripes_count: [3, 16],
            grid_rows: [2, 8],
            grid_cols: [2, 8],
            brick_rows: [2, 6],
            brick_cols: [2, 6],
            merge_prob: 0.3,
            inset_prob: 0.4,
            inset: [0.0, 8.0],
            outline_prob: 0.5,
            outline_width: [1.0, 4.0],
            cycle_prob: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfpEditWeights {
    pub replace_fragmenter: f64,
    pub replace_fill: f64,
    pub insert_outline: f64,
    pub remove_outline: f64,
    pub change_merge_key: f64,
    pub insert_inset: f64,
}

impl Default for SfpEditWeights {
    fn default() -> SfpEditWeights {
        SfpEditWeights {
            replace_fragmenter: 1.0,
            replace_fill: 1.0,
            insert_outline: 1.0,
            remove_outline: 1.0,
            change_merge_key: 0.5,
            insert_inset: 0.5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MtpEditWeights {
    pub replace_motif: f64,
    pub replace_scale: f64,
    pub replace_rotate: f64,
    pub replace_fill: f64,
    pub insert_layer: f64,
    pub remove_accent: f64,
}

impl Default for MtpEditWeights {
    fn default() -> MtpEditWeights {
        MtpEditWeights {
            replace_motif: 1.0,
            replace_scale: 1.0,
            replace_rotate: 1.0,
            replace_fill: 1.0,
            insert_layer: 1.0,
            remove_accent: 0.5,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EditWeights {
    pub sfp: SfpEditWeights,
    pub mtp: MtpEditWeights,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    /// Square canvas edge in pixels.
    pub canvas_size: i64,
    pub mtp: MtpConfig,
    pub sfp: SfpConfig,
    pub edits: EditWeights,
}

impl Default for SamplerConfig {
    fn default() -> SamplerConfig {
        SamplerConfig { canvas_size: 512, mtp: MtpConfig::default(), sfp: SfpConfig::default(), edits: EditWeights::default() }
    }
}

impl SamplerConfig {
    pub fn from_toml(text: &str) -> Result<SamplerConfig, String> {
        let cfg: SamplerConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Rejects ranges that would let samplers produce invalid programs.
    pub fn check(&self) -> Result<(), String> {
        let int = |name: &str, r: IntRange, lo: i64, hi: i64| {
            if r[0] > r[1] || r[0] < lo || r[1] > hi {
                Err(format!("{name} = {r:?} must be ordered and within [{lo}, {hi}]"))
            } else {
                Ok(())
            }
        };
        let real = |name: &str, r: RealRange, lo: f64, hi: f64| {
            if !(r[0] <= r[1] && r[0] >= lo && r[1] <= hi) {
                Err(format!("{name} = {r:?} must be ordered and within [{lo}, {hi}]"))
            } else {
                Ok(())
            }
        };
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(format!("{name} = {p} is not a probability"))
            }
        };
        let weights = |name: &str, ws: &[f64]| {
            if ws.iter().all(|w| *w >= 0.0 && w.is_finite()) && ws.iter().sum::<f64>() > 0.0 {
                Ok(())
            } else {
                Err(format!("{name}: weights must be non-negative with a positive sum"))
            }
        };
        int("canvas_size", [self.canvas_size, self.canvas_size], 16, 4096)?;
        let m = &self.mtp;
        weights("mtp fragmenter", &[m.grid_weight, m.brick_weight])?;
        int("mtp.grid_rows", m.grid_rows, 1, 64)?;
        int("mtp.grid_cols", m.grid_cols, 1, 64)?;
        int("mtp.brick_rows", m.brick_rows, 1, 64)?;
        int("mtp.brick_cols", m.brick_cols, 1, 64)?;
        real("mtp.scale", m.scale, 0.0, 4.0)?;
        real("mtp.rotate", m.rotate, -360.0, 360.0)?;
        real("mtp.margin", m.margin, 0.0, 0.9)?;
        real("mtp.accent_scale", m.accent_scale, 0.0, 4.0)?;
        let f = &m.fields;
        weights("mtp.fields", &[f.constant, f.alt, f.ramp, f.checker])?;
        prob("mtp.accent_prob", m.accent_prob)?;
        prob("mtp.second_layer_prob", m.second_layer_prob)?;
        prob("mtp.flip_prob", m.flip_prob)?;
        let s = &self.sfp;
        weights("sfp fragmenter", &[s.voronoi_weight, s.stripes_weight, s.grid_weight, s.brick_weight])?;
        int("sfp.voronoi_sites", s.voronoi_sites, 2, 256)?;
        int("sfp.voronoi_relax", s.voronoi_relax, 0, 5)?;
        int("sfp.stripes_count", s.stripes_count, 1, 128)?;
        int("sfp.grid_rows", s.grid_rows, 1, 64)?;
        int("sfp.grid_cols", s.grid_cols, 1, 64)?;
        int("sfp.brick_rows", s.brick_rows, 1, 64)?;
        int("sfp.brick_cols", s.brick_cols, 1, 64)?;
        real("sfp.inset", s.inset, 0.0, 256.0)?;
        real("sfp.outline_width", s.outline_width, 0.0, 64.0)?;
        for (name, p) in [
            ("sfp.merge_prob", s.merge_prob),
            ("sfp.inset_prob", s.inset_prob),
            ("sfp.outline_prob", s.outline_prob),
            ("sfp.cycle_prob", s.cycle_prob),
        ] {
            prob(name, p)?;
        }
        let e = &self.edits.sfp;
        weights(
            "edits.sfp",
            &[e.replace_fragmenter, e.replace_fill, e.insert_outline, e.remove_outline, e.change_merge_key, e.insert_inset],
        )?;
        let e = &self.edits.mtp;
        weights(
            "edits.mtp",
            &[e.replace_motif, e.replace_scale, e.replace_rotate, e.replace_fill, e.insert_layer, e.remove_accent],
        )?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_override_keeps_defaults() {
        let cfg = SamplerConfig::from_toml("[sfp]\nvoronoi_weight = 0.9\n[edits.mtp]\ninsert_layer = 3.0\n").unwrap();
        assert_eq!(cfg.sfp.voronoi_weight, 0.9);
        assert_eq!(cfg.sfp.stripes_weight, 0.2);
        assert_eq!(cfg.edits.mtp.insert_layer, 3.0);
        assert_eq!(cfg.mtp, MtpConfig::default());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(SamplerConfig::from_toml("[sfp]\nwobble = 1\n").is_err());
        assert!(SamplerConfig::from_toml("[sfp]\nvoronoi_sites = [40, 6]\n").is_err());
        assert!(SamplerConfig::from_toml("[mtp]\nscale = [0.1, 9.0]\n").is_err());
        assert!(SamplerConfig::from_toml("[mtp]\ngrid_weight = 0.0\nbrick_weight = 0.0\n").is_err());
        assert!(SamplerConfig::default().check().is_ok());
    }
}
