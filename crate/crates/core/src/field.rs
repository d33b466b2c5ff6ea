//! Fragment-aware parameter maps.
//!
//! A [`FieldExpr`] turns a fragment's id, row, column or centroid into a
//! per-fragment number or color. Nodes use them wherever a parameter is
//! allowed to vary across the canvas.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use thiserror::Error;

use crate::color::Color;
use crate::dsl::CanvasSpec;
use crate::geometry::Fragment;
use crate::num::Num;
use crate::rng::{derive_seed, unit_interval, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    Row,
    Col,
    Id,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Row => "row",
            Axis::Col => "col",
            Axis::Id => "id",
        }
    }

    pub fn from_name(s: &str) -> Option<Axis> {
        match s {
            "row" => Some(Axis::Row),
            "col" => Some(Axis::Col),
            "id" => Some(Axis::Id),
            _ => None,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldType {
    Number,
    Color,
}

impl fmt::Display for FieldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldType::Number => "numeric",
            FieldType::Color => "color",
        })
    }
}

/// A literal usable inside a field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Num(Num),
    Color(Color),
}

impl Scalar {
    pub fn field_type(self) -> FieldType {
        match self {
            Scalar::Num(_) => FieldType::Number,
            Scalar::Color(_) => FieldType::Color,
        }
    }

    fn value(self) -> FieldValue {
        match self {
            Scalar::Num(n) => FieldValue::Number(n.to_f64()),
            Scalar::Color(c) => FieldValue::Color(c),
        }
    }
}

impl From<f64> for Scalar {
    fn from(v: f64) -> Scalar {
        Scalar::Num(Num::from_f64(v))
    }
}

impl From<Color> for Scalar {
    fn from(c: Color) -> Scalar {
        Scalar::Color(c)
    }
}

/// Homogeneous value list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValueList {
    Nums(Vec<Num>),
    Colors(Vec<Color>),
}

impl ValueList {
    pub fn nums(values: &[f64]) -> ValueList {
        ValueList::Nums(values.iter().copied().map(Num::from_f64).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            ValueList::Nums(v) => v.len(),
            ValueList::Colors(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn field_type(&self) -> FieldType {
        match self {
            ValueList::Nums(_) => FieldType::Number,
            ValueList::Colors(_) => FieldType::Color,
        }
    }

    fn get(&self, i: usize) -> Option<FieldValue> {
        match self {
            ValueList::Nums(v) => v.get(i).map(|n| FieldValue::Number(n.to_f64())),
            ValueList::Colors(v) => v.get(i).copied().map(FieldValue::Color),
        }
    }

    fn pick(&self, index: usize) -> Result<FieldValue, FieldError> {
        if self.is_empty() {
            return Err(FieldError::EmptyValues);
        }
        Ok(self.get(index % self.len()).expect("index reduced modulo length"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldExpr {
    Const(Scalar),
    /// `values[axis index mod len]`.
    Alt { axis: Axis, values: ValueList },
    /// Linear from `from` to `to` over the axis index range.
    Ramp { axis: Axis, from: Scalar, to: Scalar },
    /// `values[(row + col) mod 2]`.
    Checker { values: ValueList },
    /// Interpolates by distance from `center`, in unit canvas coordinates.
    Radial { center: [Num; 2], from: Scalar, to: Scalar },
    /// `values[key index mod len]`.
    Cycle { key: Axis, values: ValueList },
    /// Uniform in `[min, max]`, keyed by (program seed, salt, fragment id).
    Jitter { salt: i64, min: Num, max: Num },
}

impl FieldExpr {
    pub fn keyword(&self) -> &'static str {
        match self {
            FieldExpr::Const(_) => "const",
            FieldExpr::Alt { .. } => "alt",
            FieldExpr::Ramp { .. } => "ramp",
            FieldExpr::Checker { .. } => "checker",
            FieldExpr::Radial { .. } => "radial",
            FieldExpr::Cycle { .. } => "cycle",
            FieldExpr::Jitter { .. } => "jitter",
        }
    }

    /// Output type, or `None` when endpoints disagree.
    pub fn value_type(&self) -> Option<FieldType> {
        match self {
            FieldExpr::Const(s) => Some(s.field_type()),
            FieldExpr::Alt { values, .. } | FieldExpr::Checker { values } | FieldExpr::Cycle { values, .. } => {
                Some(values.field_type())
            }
            FieldExpr::Ramp { from, to, .. } | FieldExpr::Radial { from, to, .. } => {
                (from.field_type() == to.field_type()).then(|| from.field_type())
            }
            FieldExpr::Jitter { .. } => Some(FieldType::Number),
        }
    }

    /// Axes the expression reads.
    pub fn axes(&self) -> Vec<Axis> {
        match self {
            FieldExpr::Alt { axis, .. } | FieldExpr::Ramp { axis, .. } => vec![*axis],
            FieldExpr::Cycle { key, .. } => vec![*key],
            FieldExpr::Checker { .. } => vec![Axis::Row, Axis::Col],
            FieldExpr::Jitter { .. } => vec![Axis::Id],
            FieldExpr::Const(_) | FieldExpr::Radial { .. } => Vec::new(),
        }
    }
}

/// A per-fragment field result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FieldValue {
    Number(f64),
    Color(Color),
}

impl FieldValue {
    pub fn as_number(self) -> Result<f64, FieldError> {
        match self {
            FieldValue::Number(v) => Ok(v),
            FieldValue::Color(_) => Err(FieldError::Type { expected: FieldType::Number, found: FieldType::Color }),
        }
    }

    pub fn as_color(self) -> Result<Color, FieldError> {
        match self {
            FieldValue::Color(c) => Ok(c),
            FieldValue::Number(_) => Err(FieldError::Type { expected: FieldType::Color, found: FieldType::Number }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("axis `{0}` is not available on these fragments")]
    AxisUnavailable(Axis),
    #[error("expected a {expected} field, found a {found} one")]
    Type { expected: FieldType, found: FieldType },
    #[error("field value list is empty")]
    EmptyValues,
}

/// Everything a field may look at for one fragment.
#[derive(Clone, Copy, Debug)]
pub struct FieldContext<'a> {
    pub fragment: &'a Fragment,
    pub fragment_count: usize,
    pub row_count: Option<usize>,
    pub col_count: Option<usize>,
    pub canvas: &'a CanvasSpec,
    pub program_seed: Seed,
}

impl FieldContext<'_> {
    fn axis(&self, axis: Axis) -> Result<(usize, usize), FieldError> {
        let unavailable = || FieldError::AxisUnavailable(axis);
        match axis {
            Axis::Id => Ok((self.fragment.id, self.fragment_count)),
            Axis::Row => Ok((self.fragment.row.ok_or_else(unavailable)?, self.row_count.ok_or_else(unavailable)?)),
            Axis::Col => Ok((self.fragment.col.ok_or_else(unavailable)?, self.col_count.ok_or_else(unavailable)?)),
        }
    }
}

fn interpolate(from: Scalar, to: Scalar, t: f64) -> Result<FieldValue, FieldError> {
    match (from, to) {
        (Scalar::Num(a), Scalar::Num(b)) => {
            let (a, b) = (a.to_f64(), b.to_f64());
            Ok(FieldValue::Number(a + (b - a) * t))
        }
        (Scalar::Color(a), Scalar::Color(b)) => Ok(FieldValue::Color(a.lerp(b, t))),
        (a, b) => Err(FieldError::Type { expected: a.field_type(), found: b.field_type() }),
    }
}

/// The per-fragment jitter sample in `[0, 1)`.
pub fn jitter_unit(program_seed: Seed, salt: i64, fragment_id: usize) -> f64 {
    let keyed = derive_seed(program_seed, "jitter", salt as u64);
    unit_interval(derive_seed(keyed, "fragment", fragment_id as u64))
}

pub fn eval_field(f: &FieldExpr, ctx: &FieldContext<'_>) -> Result<FieldValue, FieldError> {
    match f {
        FieldExpr::Const(s) => Ok(s.value()),
        FieldExpr::Alt { axis, values } => values.pick(ctx.axis(*axis)?.0),
        FieldExpr::Cycle { key, values } => values.pick(ctx.axis(*key)?.0),
        FieldExpr::Ramp { axis, from, to } => {
            let (index, count) = ctx.axis(*axis)?;
            let t = if count <= 1 { 0.0 } else { index as f64 / (count - 1) as f64 };
            interpolate(*from, *to, t)
        }
        FieldExpr::Checker { values } => {
            let (row, _) = ctx.axis(Axis::Row)?;
            let (col, _) = ctx.axis(Axis::Col)?;
            values.pick((row + col) % 2)
        }
        FieldExpr::Radial { center, from, to } => {
            let u = ctx.fragment.centroid.x / ctx.canvas.width_px() - center[0].to_f64();
            let v = ctx.fragment.centroid.y / ctx.canvas.height_px() - center[1].to_f64();
            let t = ((u * u + v * v).sqrt() / FRAC_1_SQRT_2).clamp(0.0, 1.0);
            interpolate(*from, *to, t)
        }
        FieldExpr::Jitter { salt, min, max } => {
            let (lo, hi) = (min.to_f64(), max.to_f64());
            Ok(FieldValue::Number(lo + (hi - lo) * jitter_unit(ctx.program_seed, *salt, ctx.fragment.id)))
        }
    }
}

/// Conservative output bounds of a field.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldRange {
    Numeric { min: f64, max: f64 },
    /// Colors the field may produce or interpolate between.
    Colors(Vec<Color>),
    /// Endpoints of mixed type; the field is ill-typed.
    Mixed,
}

pub fn field_range(f: &FieldExpr) -> FieldRange {
    fn from_scalars(items: &[Scalar]) -> FieldRange {
        let nums: Vec<f64> = items
            .iter()
            .filter_map(|s| match s {
                Scalar::Num(n) => Some(n.to_f64()),
                Scalar::Color(_) => None,
            })
            .collect();
        let colors: Vec<Color> = items
            .iter()
            .filter_map(|s| match s {
                Scalar::Color(c) => Some(*c),
                Scalar::Num(_) => None,
            })
            .collect();
        match (nums.is_empty(), colors.is_empty()) {
            (false, true) => FieldRange::Numeric {
                min: nums.iter().copied().fold(f64::INFINITY, f64::min),
                max: nums.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            },
            (true, false) => {
                let mut colors = colors;
                colors.sort();
                colors.dedup();
                FieldRange::Colors(colors)
            }
            (true, true) => FieldRange::Colors(Vec::new()),
            (false, false) => FieldRange::Mixed,
        }
    }
    fn from_list(values: &ValueList) -> FieldRange {
        match values {
            ValueList::Nums(v) if v.is_empty() => FieldRange::Numeric { min: 0.0, max: 0.0 },
            ValueList::Nums(v) => from_scalars(&v.iter().map(|n| Scalar::Num(*n)).collect::<Vec<_>>()),
            ValueList::Colors(v) => from_scalars(&v.iter().map(|c| Scalar::Color(*c)).collect::<Vec<_>>()),
        }
    }
    match f {
        FieldExpr::Const(s) => from_scalars(&[*s]),
        FieldExpr::Alt { values, .. } | FieldExpr::Checker { values } | FieldExpr::Cycle { values, .. } => {
            from_list(values)
        }
        FieldExpr::Ramp { from, to, .. } | FieldExpr::Radial { from, to, .. } => from_scalars(&[*from, *to]),
        FieldExpr::Jitter { min, max, .. } => from_scalars(&[Scalar::Num(*min), Scalar::Num(*max)]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{split_grid, Point, Polygon};

    fn fragment(id: usize, row: Option<usize>, col: Option<usize>) -> Fragment {
        Fragment::new(
            id,
            row,
            col,
            Polygon::rect(0.0, 0.0, 10.0, 10.0),
        )
    }

    fn ctx<'a>(frag: &'a Fragment, canvas: &'a CanvasSpec) -> FieldContext<'a> {
        FieldContext { fragment: frag, fragment_count: 16, row_count: Some(4), col_count: Some(4), canvas, program_seed: 9 }
    }

    fn canvas() -> CanvasSpec {
        CanvasSpec::new(100, 100, Color::WHITE)
    }

    #[test]
    fn alt_row_three_picks_second_value() {
        let c = canvas();
        let frag = fragment(13, Some(3), Some(1));
        let f = FieldExpr::Alt { axis: Axis::Row, values: ValueList::nums(&[0.8, 1.2]) };
        assert_eq!(eval_field(&f, &ctx(&frag, &c)).unwrap(), FieldValue::Number(1.2));
    }

    #[test]
    fn ramp_over_four_columns() {
        let c = canvas();
        let frag = fragment(1, Some(0), Some(1));
        let f = FieldExpr::Ramp { axis: Axis::Col, from: 0.0.into(), to: 90.0.into() };
        let v = eval_field(&f, &ctx(&frag, &c)).unwrap().as_number().unwrap();
        assert!((v - 30.0).abs() < 1e-12);
    }

    #[test]
    fn ramp_single_axis_value_is_from() {
        let c = canvas();
        let frag = fragment(0, Some(0), Some(0));
        let mut cx = ctx(&frag, &c);
        cx.col_count = Some(1);
        let f = FieldExpr::Ramp { axis: Axis::Col, from: 5.0.into(), to: 9.0.into() };
        assert_eq!(eval_field(&f, &cx).unwrap(), FieldValue::Number(5.0));
    }

    #[test]
    fn color_ramp_rounds_half_up() {
        let c = canvas();
        let frag = fragment(1, Some(0), Some(1));
        let mut cx = ctx(&frag, &c);
        cx.col_count = Some(3);
        let f = FieldExpr::Ramp {
            axis: Axis::Col,
            from: Color::rgb(0, 0, 0).into(),
            to: Color::rgb(255, 1, 3).into(),
        };
        assert_eq!(eval_field(&f, &cx).unwrap(), FieldValue::Color(Color::rgb(128, 1, 2)));
    }

    #[test]
    fn axis_unavailable_on_voronoi_like_fragment() {
        let c = canvas();
        let frag = fragment(2, None, None);
        let mut cx = ctx(&frag, &c);
        cx.row_count = None;
        cx.col_count = None;
        let f = FieldExpr::Ramp { axis: Axis::Col, from: 0.0.into(), to: 1.0.into() };
        assert_eq!(eval_field(&f, &cx), Err(FieldError::AxisUnavailable(Axis::Col)));
        let chk = FieldExpr::Checker { values: ValueList::nums(&[0.0, 1.0]) };
        assert!(eval_field(&chk, &cx).is_err());
    }

    #[test]
    fn radial_reaches_to_at_corner() {
        let c = canvas();
        let mut frag = fragment(0, None, None);
        frag.centroid = Point::new(100.0, 100.0);
        let f = FieldExpr::Radial {
            center: [Num::from_f64(0.5), Num::from_f64(0.5)],
            from: 0.0.into(),
            to: 10.0.into(),
        };
        let v = eval_field(&f, &ctx(&frag, &c)).unwrap().as_number().unwrap();
        assert!((v - 10.0).abs() < 1e-9);
        frag.centroid = Point::new(50.0, 50.0);
        assert_eq!(eval_field(&f, &ctx(&frag, &c)).unwrap(), FieldValue::Number(0.0));
    }

    #[test]
    fn jitter_is_deterministic_and_bounded() {
        let c = canvas();
        let frag = fragment(7, Some(1), Some(3));
        let f = FieldExpr::Jitter { salt: 3, min: Num::from_int(-2), max: Num::from_int(5) };
        let a = eval_field(&f, &ctx(&frag, &c)).unwrap().as_number().unwrap();
        let b = eval_field(&f, &ctx(&frag, &c)).unwrap().as_number().unwrap();
        assert_eq!(a, b);
        assert!((-2.0..=5.0).contains(&a));
    }

    #[test]
    fn type_errors() {
        let v = FieldValue::Color(Color::BLACK);
        assert!(v.as_number().is_err());
        assert!(FieldValue::Number(1.0).as_color().is_err());
        let mixed = FieldExpr::Ramp { axis: Axis::Id, from: 0.0.into(), to: Color::BLACK.into() };
        assert_eq!(mixed.value_type(), None);
        assert_eq!(field_range(&mixed), FieldRange::Mixed);
    }

    #[test]
    fn ranges() {
        assert_eq!(field_range(&FieldExpr::Const(0.5.into())), FieldRange::Numeric { min: 0.5, max: 0.5 });
        assert_eq!(
            field_range(&FieldExpr::Ramp { axis: Axis::Id, from: 0.0.into(), to: 90.0.into() }),
            FieldRange::Numeric { min: 0.0, max: 90.0 }
        );
        assert_eq!(
            field_range(&FieldExpr::Alt { axis: Axis::Row, values: ValueList::nums(&[1.2, 0.8]) }),
            FieldRange::Numeric { min: 0.8, max: 1.2 }
        );
    }

    #[test]
    fn range_covers_every_output_on_a_grid() {
        let c = CanvasSpec::new(120, 90, Color::WHITE);
        let fs = split_grid(&c, 3, 5).unwrap();
        let exprs = [
            FieldExpr::Ramp { axis: Axis::Id, from: 4.0.into(), to: (-3.0).into() },
            FieldExpr::Radial { center: [Num::ZERO, Num::ONE], from: 1.0.into(), to: 2.0.into() },
            FieldExpr::Jitter { salt: 1, min: Num::from_int(3), max: Num::from_int(4) },
            FieldExpr::Checker { values: ValueList::nums(&[7.0, -1.0]) },
        ];
        for f in &exprs {
            let FieldRange::Numeric { min, max } = field_range(f) else { panic!() };
            for frag in &fs.fragments {
                let cx = fs.context(frag, &c, 5);
                let v = eval_field(f, &cx).unwrap().as_number().unwrap();
                assert!(v >= min - 1e-12 && v <= max + 1e-12, "{f:?} gave {v}");
            }
        }
    }
}
