use std::collections::BTreeMap;
use std::fmt;

use crate::color::Color;
use crate::field::{FieldExpr, FieldType};
use crate::num::Num;

use super::schema::{ParamSpec, ParamType};

/// Current program format version.
pub const PROGRAM_VERSION: i64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StyleTag {
    Mtp,
    Sfp,
    Custom,
}

impl StyleTag {
    pub fn as_str(self) -> &'static str {
        match self {
            StyleTag::Mtp => "mtp",
            StyleTag::Sfp => "sfp",
            StyleTag::Custom => "custom",
        }
    }

    pub fn from_name(s: &str) -> Option<StyleTag> {
        match s {
            "mtp" => Some(StyleTag::Mtp),
            "sfp" => Some(StyleTag::Sfp),
            "custom" => Some(StyleTag::Custom),
            _ => None,
        }
    }
}

impl fmt::Display for StyleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Canvas dimensions in pixels plus the background color.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanvasSpec {
    pub width: Num,
    pub height: Num,
    pub background: Color,
}

impl CanvasSpec {
    pub fn new(width: i64, height: i64, background: Color) -> CanvasSpec {
        CanvasSpec { width: Num::from_int(width), height: Num::from_int(height), background }
    }

    pub fn width_px(&self) -> f64 {
        self.width.to_f64()
    }

    pub fn height_px(&self) -> f64 {
        self.height.to_f64()
    }
}

/// Which list of a layer a node lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlotKind {
    Fragmenter,
    Merge,
    FragmentOp,
    Style,
}

impl SlotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SlotKind::Fragmenter => "fragmenter",
            SlotKind::Merge => "merges",
            SlotKind::FragmentOp => "fragmentOps",
            SlotKind::Style => "style",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Grid,
    Brick,
    Stripes,
    Voronoi,
    Merge,
    Inset,
    Scale,
    Rotate,
    Round,
    Fill,
    Outline,
    PlaceMotif,
}

impl NodeKind {
    pub const ALL: [NodeKind; 12] = [
        NodeKind::Grid,
        NodeKind::Brick,
        NodeKind::Stripes,
        NodeKind::Voronoi,
        NodeKind::Merge,
        NodeKind::Inset,
        NodeKind::Scale,
        NodeKind::Rotate,
        NodeKind::Round,
        NodeKind::Fill,
        NodeKind::Outline,
        NodeKind::PlaceMotif,
    ];

    pub fn slot(self) -> SlotKind {
        match self {
            NodeKind::Grid | NodeKind::Brick | NodeKind::Stripes | NodeKind::Voronoi => SlotKind::Fragmenter,
            NodeKind::Merge => SlotKind::Merge,
            NodeKind::Inset | NodeKind::Scale | NodeKind::Rotate | NodeKind::Round => SlotKind::FragmentOp,
            NodeKind::Fill | NodeKind::Outline | NodeKind::PlaceMotif => SlotKind::Style,
        }
    }

    /// Surface-syntax head keyword.
    pub fn keyword(self) -> &'static str {
        match self {
            NodeKind::Grid => "grid",
            NodeKind::Brick => "brick",
            NodeKind::Stripes => "stripes",
            NodeKind::Voronoi => "voronoi",
            NodeKind::Merge => "merge",
            NodeKind::Inset => "inset",
            NodeKind::Scale => "scale",
            NodeKind::Rotate => "rotate",
            NodeKind::Round => "round",
            NodeKind::Fill => "fill",
            NodeKind::Outline => "outline",
            NodeKind::PlaceMotif => "place-motif",
        }
    }

    pub fn from_keyword(s: &str) -> Option<NodeKind> {
        NodeKind::ALL.into_iter().find(|k| k.keyword() == s)
    }

    /// Whether fragments produced by this fragmenter carry row/col coordinates.
    pub fn has_grid_coords(self) -> bool {
        matches!(self, NodeKind::Grid | NodeKind::Brick | NodeKind::Stripes)
    }

    pub fn params(self) -> &'static [ParamSpec] {
        super::schema::params_of(self)
    }

    pub fn param_spec(self, name: &str) -> Option<&'static ParamSpec> {
        self.params().iter().find(|p| p.name == name)
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A parameter value: literal or fragment-aware field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Num(Num),
    Color(Color),
    /// Enum member or motif id.
    Ident(String),
    Field(FieldExpr),
}

impl Value {
    pub fn num(v: f64) -> Value {
        Value::Num(Num::from_f64(v))
    }

    pub fn int(v: i64) -> Value {
        Value::Num(Num::from_int(v))
    }

    pub fn ident(s: impl Into<String>) -> Value {
        Value::Ident(s.into())
    }

    pub fn as_num(&self) -> Option<Num> {
        match self {
            Value::Num(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_ident(&self) -> Option<&str> {
        match self {
            Value::Ident(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_field(&self) -> Option<&FieldExpr> {
        match self {
            Value::Field(f) => Some(f),
            _ => None,
        }
    }

    /// Whether the value's category can occupy a slot of the given spec.
    /// Ranges are not checked here.
    pub fn fits(&self, spec: &ParamSpec) -> bool {
        match (self, &spec.ty) {
            (Value::Num(_), ParamType::Int { .. } | ParamType::Real { .. }) => true,
            (Value::Color(_), ParamType::Color) => true,
            (Value::Ident(_), ParamType::Enum(_) | ParamType::Motif) => true,
            (Value::Field(f), ty) => {
                spec.field_ok
                    && matches!(
                        (f.value_type(), ty),
                        (Some(FieldType::Number), ParamType::Int { .. } | ParamType::Real { .. })
                            | (Some(FieldType::Color), ParamType::Color)
                            | (None, _)
                    )
            }
            _ => false,
        }
    }
}

/// One operation of a layer with its parameters. Parameter names always come
/// from the kind's schema table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub kind: NodeKind,
    pub params: BTreeMap<&'static str, Value>,
}

impl Node {
    /// A node with every defaulted parameter filled in.
    pub fn new(kind: NodeKind) -> Node {
        let params = kind
            .params()
            .iter()
            .filter_map(|spec| spec.default_value().map(|v| (spec.name, v)))
            .collect();
        Node { kind, params }
    }

    /// Builder-style parameter assignment. Panics on a name missing from the
    /// kind's schema, which is a programming error.
    pub fn with(mut self, name: &str, value: Value) -> Node {
        let spec = self
            .kind
            .param_spec(name)
            .unwrap_or_else(|| panic!("{} has no parameter `{name}`", self.kind));
        self.params.insert(spec.name, value);
        self
    }

    pub fn set(&mut self, name: &str, value: Value) -> bool {
        match self.kind.param_spec(name) {
            Some(spec) => {
                self.params.insert(spec.name, value);
                true
            }
            None => false,
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.params.get(name)
    }

    pub fn num(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(Value::as_num).map(Num::to_f64)
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        self.get(name).and_then(Value::as_num).and_then(Num::as_integer)
    }

    pub fn ident(&self, name: &str) -> Option<&str> {
        self.get(name).and_then(Value::as_ident)
    }

    /// Parameters in schema order.
    pub fn ordered_params(&self) -> impl Iterator<Item = (&'static str, &Value)> {
        self.kind
            .params()
            .iter()
            .filter_map(|spec| self.params.get(spec.name).map(|v| (spec.name, v)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Layer {
    pub fragmenter: Node,
    pub merges: Vec<Node>,
    pub fragment_ops: Vec<Node>,
    pub styles: Vec<Node>,
    pub opacity: Num,
}

impl Layer {
    pub fn new(fragmenter: Node, style: Node) -> Layer {
        Layer { fragmenter, merges: Vec::new(), fragment_ops: Vec::new(), styles: vec![style], opacity: Num::ONE }
    }

    pub fn slot(&self, slot: SlotKind) -> &[Node] {
        match slot {
            SlotKind::Fragmenter => std::slice::from_ref(&self.fragmenter),
            SlotKind::Merge => &self.merges,
            SlotKind::FragmentOp => &self.fragment_ops,
            SlotKind::Style => &self.styles,
        }
    }

    /// Nodes in pre-order: fragmenter, merges, fragment ops, styles.
    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        std::iter::once(&self.fragmenter)
            .chain(self.merges.iter())
            .chain(self.fragment_ops.iter())
            .chain(self.styles.iter())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Program {
    pub version: i64,
    pub canvas: CanvasSpec,
    pub layers: Vec<Layer>,
    pub style_tag: StyleTag,
}

impl Program {
    pub fn new(canvas: CanvasSpec, layers: Vec<Layer>, style_tag: StyleTag) -> Program {
        Program { version: PROGRAM_VERSION, canvas, layers, style_tag }
    }
}

/// Structural equality of two programs. Numeric literals compare exactly in
/// their canonical decimal form; lists compare element-wise.
pub fn ast_equals(p: &Program, q: &Program) -> bool {
    p == q
}
