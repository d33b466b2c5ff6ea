use std::fmt;

use super::ast::{Layer, Node, Program, SlotKind, Value, PROGRAM_VERSION};
use super::path::{NodePath, PathRoot};
use super::schema::{self, DefaultValue, ParamSpec, ParamType};
use crate::field::{field_range, Axis, FieldExpr, FieldRange, ValueList};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub path: NodePath,
    pub message: String,
    pub severity: Severity,
}

impl Diagnostic {
    pub fn error(path: NodePath, message: impl Into<String>) -> Diagnostic {
        Diagnostic { path, message: message.into(), severity: Severity::Error }
    }

    pub fn warning(path: NodePath, message: impl Into<String>) -> Diagnostic {
        Diagnostic { path, message: message.into(), severity: Severity::Warning }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}: {}: {}", self.path, self.message)
    }
}

/// Checks every type invariant and parameter range. An empty result means
/// the program is valid.
pub fn validate(p: &Program) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if p.version != PROGRAM_VERSION {
        out.push(Diagnostic::error(
            NodePath::param(PathRoot::Program, "version"),
            format!("unsupported version {}, expected {PROGRAM_VERSION}", p.version),
        ));
    }
    for (name, value) in [("width", p.canvas.width), ("height", p.canvas.height)] {
        let ok = value
            .as_integer()
            .is_some_and(|v| (schema::CANVAS_MIN..=schema::CANVAS_MAX).contains(&v));
        if !ok {
            out.push(Diagnostic::error(
                NodePath::param(PathRoot::Canvas, name),
                format!("{name} = {value}, expected an integer in [{}, {}]", schema::CANVAS_MIN, schema::CANVAS_MAX),
            ));
        }
    }
    if p.layers.is_empty() || p.layers.len() > schema::MAX_LAYERS {
        out.push(Diagnostic::error(
            NodePath::new(PathRoot::Program),
            format!("{} layers, expected 1 to {}", p.layers.len(), schema::MAX_LAYERS),
        ));
    }
    for (i, layer) in p.layers.iter().enumerate() {
        validate_layer(i, layer, &mut out);
    }
    out
}

/// Axes available to nodes in a slot. Merges drop row/col, so only the first
/// merge and nodes of merge-free layers on grid-like fragmenters see them.
fn coords_available(layer: &Layer, slot: SlotKind, index: usize) -> bool {
    let grid_like = layer.fragmenter.kind.has_grid_coords();
    match slot {
        SlotKind::Fragmenter => true,
        SlotKind::Merge => grid_like && index == 0,
        SlotKind::FragmentOp | SlotKind::Style => grid_like && layer.merges.is_empty(),
    }
}

fn validate_layer(i: usize, layer: &Layer, out: &mut Vec<Diagnostic>) {
    if !(0..=1_000_000).contains(&layer.opacity.micros()) {
        out.push(Diagnostic::error(
            NodePath::param(PathRoot::Layer(i), "opacity"),
            format!("opacity = {}, expected a number in [0, 1]", layer.opacity),
        ));
    }
    let limits = [
        (SlotKind::Merge, 0, schema::MAX_MERGES),
        (SlotKind::FragmentOp, 0, schema::MAX_FRAGMENT_OPS),
        (SlotKind::Style, 1, schema::MAX_STYLES),
    ];
    for (slot, min, max) in limits {
        let n = layer.slot(slot).len();
        if n < min || n > max {
            out.push(Diagnostic::error(
                NodePath::new(PathRoot::Layer(i)),
                format!("{n} {} nodes, expected {min} to {max}", slot.as_str()),
            ));
        }
    }
    for slot in [SlotKind::Fragmenter, SlotKind::Merge, SlotKind::FragmentOp, SlotKind::Style] {
        for (j, node) in layer.slot(slot).iter().enumerate() {
            let path = NodePath::new(PathRoot::slot(i, slot, j));
            if node.kind.slot() != slot {
                out.push(Diagnostic::error(path, format!("{} cannot appear in the {} slot", node.kind, slot.as_str())));
                continue;
            }
            validate_node(node, &path, coords_available(layer, slot, j), out);
        }
    }
}

fn validate_node(node: &Node, path: &NodePath, coords: bool, out: &mut Vec<Diagnostic>) {
    for spec in node.kind.params() {
        let at = path.with_param(spec.name);
        match node.get(spec.name) {
            None if spec.default != DefaultValue::Absent => {
                out.push(Diagnostic::error(at, format!("missing required parameter `{}`", spec.name)))
            }
            None => {}
            Some(value) => validate_value(spec, value, &at, coords, out),
        }
    }
    for name in node.params.keys() {
        if node.kind.param_spec(name).is_none() {
            out.push(Diagnostic::error(path.with_param(name), format!("{} has no parameter `{name}`", node.kind)));
        }
    }
}

fn validate_value(spec: &ParamSpec, value: &Value, at: &NodePath, coords: bool, out: &mut Vec<Diagnostic>) {
    let mut err = |msg: String| out.push(Diagnostic::error(at.clone(), msg));
    if !value.fits(spec) {
        let what = match value {
            Value::Field(f) if !spec.field_ok => format!("`{}` does not accept a {} field", spec.name, f.keyword()),
            _ => format!("`{}` expects {}", spec.name, spec.range_text()),
        };
        err(what);
        return;
    }
    match value {
        Value::Num(n) => {
            if (spec.is_integer() && !n.is_integer()) || !spec.accepts_number(n.to_f64()) {
                err(format!("{} = {n}, expected {}", spec.name, spec.range_text()));
            }
        }
        Value::Color(_) => {}
        Value::Ident(s) => match spec.ty {
            ParamType::Enum(options) if !options.contains(&s.as_str()) => {
                err(format!("{} = {s}, expected {}", spec.name, spec.range_text()))
            }
            ParamType::Motif if !schema::is_motif_id(s) => err(format!(
                "unknown motif `{s}`, expected one of {} or a user/ motif",
                schema::BUILTIN_MOTIFS.join(", ")
            )),
            _ => {}
        },
        Value::Field(f) => validate_field(spec, f, coords, &mut err),
    }
}

fn validate_field(spec: &ParamSpec, f: &FieldExpr, coords: bool, err: &mut impl FnMut(String)) {
    let list_ok = |values: &ValueList| !values.is_empty();
    match f {
        FieldExpr::Alt { values, .. } | FieldExpr::Cycle { values, .. } if !list_ok(values) => {
            err(format!("{} field needs at least one value", f.keyword()));
            return;
        }
        FieldExpr::Checker { values } if values.len() != 2 => {
            err(format!("checker field needs exactly 2 values, found {}", values.len()));
            return;
        }
        FieldExpr::Jitter { min, max, .. } if min > max => {
            err(format!("jitter min {min} exceeds max {max}"));
            return;
        }
        _ => {}
    }
    for axis in f.axes() {
        if axis != Axis::Id && !coords {
            err(format!("{} field reads `{axis}`, which these fragments do not have", f.keyword()));
            return;
        }
    }
    match field_range(f) {
        FieldRange::Numeric { min, max } if !(spec.accepts_number(min) && spec.accepts_number(max)) => {
            err(format!("{} field spans [{min}, {max}], expected {}", f.keyword(), spec.range_text()))
        }
        FieldRange::Mixed => err(format!("{} field mixes numbers and colors", f.keyword())),
        _ => {}
    }
}
