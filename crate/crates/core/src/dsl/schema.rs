//! Parameter tables for every node kind.
//!
//! The order of entries is the canonical keyword order used by the printer.
//!
//! | node          | parameter   | type                      | default    | field |
//! |---------------|-------------|---------------------------|------------|-------|
//! | `grid`        | `rows`      | int 1..=64                | 2          | no    |
//! |               | `cols`      | int 1..=64                | 2          | no    |
//! | `brick`       | `rows`      | int 1..=64                | 2          | no    |
//! |               | `cols`      | int 1..=64                | 2          | no    |
//! |               | `offset`    | real [0, 1)               | 0.5        | no    |
//! | `stripes`     | `count`     | int 1..=128               | 4          | no    |
//! |               | `orientation` | horizontal \| vertical  | horizontal | no    |
//! | `voronoi`     | `sites`     | int 2..=256               | 12         | no    |
//! |               | `relax`     | int 0..=5                 | 0          | no    |
//! | `merge`       | `key`       | real                      | 0          | yes   |
//! | `inset`       | `distance`  | real [0, 256]             | 4          | yes   |
//! | `scale`       | `factor`    | real [0, 4]               | 1          | yes   |
//! | `rotate`      | `angle`     | real [-360, 360] degrees  | 0          | yes   |
//! | `round`       | `radius`    | real [0, 256]             | 4          | yes   |
//! | `fill`        | `color`     | color                     | #000000    | yes   |
//! | `outline`     | `color`     | color                     | #000000    | yes   |
//! |               | `width`     | real [0, 64]              | 2          | yes   |
//! | `place-motif` | `motif`     | motif id                  | circle     | no    |
//! |               | `margin`    | real [0, 0.9]             | 0.1        | no    |
//! |               | `scale`     | real [0, 4]               | 1          | yes   |
//! |               | `rotate`    | real [-360, 360] degrees  | 0          | yes   |
//! |               | `flip`      | real [0, 1]               | 0          | yes   |
//! |               | `fill`      | color                     | (absent)   | yes   |

use crate::color::Color;
use crate::num::Num;

use super::ast::{NodeKind, Value};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamType {
    Int { min: i64, max: i64 },
    Real { min: f64, max: f64, max_exclusive: bool },
    Color,
    Enum(&'static [&'static str]),
    Motif,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DefaultValue {
    Micros(i64),
    Color(Color),
    Ident(&'static str),
    Absent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamSpec {
    pub name: &'static str,
    pub ty: ParamType,
    pub default: DefaultValue,
    pub field_ok: bool,
}

impl ParamSpec {
    pub fn default_value(&self) -> Option<Value> {
        match self.default {
            DefaultValue::Micros(m) => Some(Value::Num(Num::from_micros(m))),
            DefaultValue::Color(c) => Some(Value::Color(c)),
            DefaultValue::Ident(s) => Some(Value::Ident(s.to_string())),
            DefaultValue::Absent => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        matches!(self.ty, ParamType::Int { .. })
    }

    /// Checks a numeric value against the declared range.
    pub fn accepts_number(&self, v: f64) -> bool {
        match self.ty {
            ParamType::Int { min, max } => v >= min as f64 && v <= max as f64,
            ParamType::Real { min, max, max_exclusive } => {
                v.is_finite() && v >= min && if max_exclusive { v < max } else { v <= max }
            }
            _ => false,
        }
    }

    pub fn range_text(&self) -> String {
        match self.ty {
            ParamType::Int { min, max } => format!("an integer in [{min}, {max}]"),
            ParamType::Real { min, max, max_exclusive } => {
                format!("a number in [{min}, {max}{}", if max_exclusive { ")" } else { "]" })
            }
            ParamType::Color => "a color".to_string(),
            ParamType::Enum(options) => format!("one of {}", options.join(", ")),
            ParamType::Motif => "a motif id".to_string(),
        }
    }
}

const fn int(name: &'static str, min: i64, max: i64, default: i64) -> ParamSpec {
    ParamSpec { name, ty: ParamType::Int { min, max }, default: DefaultValue::Micros(default * 1_000_000), field_ok: false }
}

const fn real(name: &'static str, min: f64, max: f64, default_micros: i64, field_ok: bool) -> ParamSpec {
    ParamSpec {
        name,
        ty: ParamType::Real { min, max, max_exclusive: false },
        default: DefaultValue::Micros(default_micros),
        field_ok,
    }
}

const fn color(name: &'static str, default: DefaultValue) -> ParamSpec {
    ParamSpec { name, ty: ParamType::Color, default, field_ok: true }
}

pub const ORIENTATIONS: &[&str] = &["horizontal", "vertical"];

const GRID: &[ParamSpec] = &[int("rows", 1, 64, 2), int("cols", 1, 64, 2)];
const BRICK: &[ParamSpec] = &[
    int("rows", 1, 64, 2),
    int("cols", 1, 64, 2),
    ParamSpec {
        name: "offset",
        ty: ParamType::Real { min: 0.0, max: 1.0, max_exclusive: true },
        default: DefaultValue::Micros(500_000),
        field_ok: false,
    },
];
const STRIPES: &[ParamSpec] = &[
    int("count", 1, 128, 4),
    ParamSpec {
        name: "orientation",
        ty: ParamType::Enum(ORIENTATIONS),
        default: DefaultValue::Ident("horizontal"),
        field_ok: false,
    },
];
const VORONOI: &[ParamSpec] = &[int("sites", 2, 256, 12), int("relax", 0, 5, 0)];
const MERGE: &[ParamSpec] = &[real("key", -1.0e9, 1.0e9, 0, true)];
const INSET: &[ParamSpec] = &[real("distance", 0.0, 256.0, 4_000_000, true)];
const SCALE: &[ParamSpec] = &[real("factor", 0.0, 4.0, 1_000_000, true)];
const ROTATE: &[ParamSpec] = &[real("angle", -360.0, 360.0, 0, true)];
const ROUND: &[ParamSpec] = &[real("radius", 0.0, 256.0, 4_000_000, true)];
const FILL: &[ParamSpec] = &[color("color", DefaultValue::Color(Color::BLACK))];
const OUTLINE: &[ParamSpec] = &[
    color("color", DefaultValue::Color(Color::BLACK)),
    real("width", 0.0, 64.0, 2_000_000, true),
];
const PLACE_MOTIF: &[ParamSpec] = &[
    ParamSpec { name: "motif", ty: ParamType::Motif, default: DefaultValue::Ident("circle"), field_ok: false },
    real("margin", 0.0, 0.9, 100_000, false),
    real("scale", 0.0, 4.0, 1_000_000, true),
    real("rotate", -360.0, 360.0, 0, true),
    real("flip", 0.0, 1.0, 0, true),
    color("fill", DefaultValue::Absent),
];

pub(crate) fn params_of(kind: NodeKind) -> &'static [ParamSpec] {
    match kind {
        NodeKind::Grid => GRID,
        NodeKind::Brick => BRICK,
        NodeKind::Stripes => STRIPES,
        NodeKind::Voronoi => VORONOI,
        NodeKind::Merge => MERGE,
        NodeKind::Inset => INSET,
        NodeKind::Scale => SCALE,
        NodeKind::Rotate => ROTATE,
        NodeKind::Round => ROUND,
        NodeKind::Fill => FILL,
        NodeKind::Outline => OUTLINE,
        NodeKind::PlaceMotif => PLACE_MOTIF,
    }
}

/// Slot arity limits per layer.
pub const MAX_LAYERS: usize = 8;
pub const MAX_MERGES: usize = 4;
pub const MAX_FRAGMENT_OPS: usize = 8;
pub const MAX_STYLES: usize = 4;

/// Canvas and layer level ranges.
pub const CANVAS_MIN: i64 = 16;
pub const CANVAS_MAX: i64 = 4096;

/// Motif ids that are always available; user motifs carry a `user/` prefix.
pub const BUILTIN_MOTIFS: &[&str] =
    &["circle", "ring", "square", "diamond", "triangle", "star5", "cross", "crescent", "petal", "stripebar"];
pub const USER_MOTIF_PREFIX: &str = "user/";

pub fn is_motif_id(name: &str) -> bool {
    BUILTIN_MOTIFS.contains(&name)
        || name.strip_prefix(USER_MOTIF_PREFIX).is_some_and(|stem| !stem.is_empty())
}
