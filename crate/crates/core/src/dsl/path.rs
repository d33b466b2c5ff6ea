//! Textual node addresses: `/layer[i]/<slot>[j]/param[name]`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::ast::{CanvasSpec, Layer, Node, Program, SlotKind, StyleTag, Value};
use super::schema::{ParamSpec, ParamType};
use crate::num::Num;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathRoot {
    Program,
    Canvas,
    Layer(usize),
    Fragmenter(usize),
    Merge(usize, usize),
    FragmentOp(usize, usize),
    Style(usize, usize),
}

impl PathRoot {
    pub fn slot(layer: usize, slot: SlotKind, index: usize) -> PathRoot {
        match slot {
            SlotKind::Fragmenter => PathRoot::Fragmenter(layer),
            SlotKind::Merge => PathRoot::Merge(layer, index),
            SlotKind::FragmentOp => PathRoot::FragmentOp(layer, index),
            SlotKind::Style => PathRoot::Style(layer, index),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath {
    pub root: PathRoot,
    pub param: Option<String>,
}

impl NodePath {
    pub fn new(root: PathRoot) -> NodePath {
        NodePath { root, param: None }
    }

    pub fn param(root: PathRoot, name: &str) -> NodePath {
        NodePath { root, param: Some(name.to_string()) }
    }

    pub fn with_param(&self, name: &str) -> NodePath {
        NodePath::param(self.root, name)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.root {
            PathRoot::Program => {}
            PathRoot::Canvas => f.write_str("/canvas")?,
            PathRoot::Layer(i) => write!(f, "/layer[{i}]")?,
            PathRoot::Fragmenter(i) => write!(f, "/layer[{i}]/fragmenter")?,
            PathRoot::Merge(i, j) => write!(f, "/layer[{i}]/merges[{j}]")?,
            PathRoot::FragmentOp(i, j) => write!(f, "/layer[{i}]/fragmentOps[{j}]")?,
            PathRoot::Style(i, j) => write!(f, "/layer[{i}]/style[{j}]")?,
        }
        match &self.param {
            Some(p) => write!(f, "/param[{p}]"),
            None if self.root == PathRoot::Program => f.write_str("/"),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("malformed node path `{0}`")]
    Malformed(String),
    #[error("path {0} does not resolve")]
    PathNotFound(String),
    #[error("cannot place {found} at {path}, expected {expected}")]
    KindMismatch { path: String, expected: String, found: String },
}

fn segment(seg: &str) -> Option<(&str, Option<&str>)> {
    match seg.split_once('[') {
        Some((name, rest)) => rest.strip_suffix(']').map(|inner| (name, Some(inner))),
        None => Some((seg, None)),
    }
}

fn index(s: Option<&str>) -> Option<usize> {
    let s = s?;
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl FromStr for NodePath {
    type Err = PathError;

    /// Parses the textual form. A bare `style` means `style[0]`.
    fn from_str(s: &str) -> Result<NodePath, PathError> {
        let bad = || PathError::Malformed(s.to_string());
        let rest = s.strip_prefix('/').ok_or_else(bad)?;
        if rest.is_empty() {
            return Ok(NodePath::new(PathRoot::Program));
        }
        let segs: Vec<(&str, Option<&str>)> = rest.split('/').map(segment).collect::<Option<_>>().ok_or_else(bad)?;
        let (body, param) = match segs.split_last() {
            Some((("param", Some(name)), body)) if !name.is_empty() => (body, Some(name.to_string())),
            _ => (&segs[..], None),
        };
        let root = match body {
            [] => PathRoot::Program,
            [("canvas", None)] => PathRoot::Canvas,
            [("layer", i)] => PathRoot::Layer(index(*i).ok_or_else(bad)?),
            [("layer", i), (slot, j)] => {
                let i = index(*i).ok_or_else(bad)?;
                match (*slot, j) {
                    ("fragmenter", None) => PathRoot::Fragmenter(i),
                    ("merges", j) => PathRoot::Merge(i, index(*j).ok_or_else(bad)?),
                    ("fragmentOps", j) => PathRoot::FragmentOp(i, index(*j).ok_or_else(bad)?),
                    ("style", None) => PathRoot::Style(i, 0),
                    ("style", j) => PathRoot::Style(i, index(*j).ok_or_else(bad)?),
                    _ => return Err(bad()),
                }
            }
            _ => return Err(bad()),
        };
        Ok(NodePath { root, param })
    }
}

/// A borrowed view of whatever a path addresses.
#[derive(Clone, Debug, PartialEq)]
pub enum SubtreeRef<'a> {
    Program(&'a Program),
    Canvas(&'a CanvasSpec),
    Layer(&'a Layer),
    Node(&'a Node),
    Value(&'a Value),
    /// Program, canvas and layer scalars are not stored as [`Value`]s.
    Scalar(Value),
}

impl SubtreeRef<'_> {
    pub fn to_owned(&self) -> Subtree {
        match self {
            SubtreeRef::Program(p) => Subtree::Program((*p).clone()),
            SubtreeRef::Canvas(c) => Subtree::Canvas((*c).clone()),
            SubtreeRef::Layer(l) => Subtree::Layer((*l).clone()),
            SubtreeRef::Node(n) => Subtree::Node((*n).clone()),
            SubtreeRef::Value(v) => Subtree::Value((*v).clone()),
            SubtreeRef::Scalar(v) => Subtree::Value(v.clone()),
        }
    }
}

/// An owned replacement for [`substitute`].
#[derive(Clone, Debug, PartialEq)]
pub enum Subtree {
    Program(Program),
    Canvas(CanvasSpec),
    Layer(Layer),
    Node(Node),
    Value(Value),
}

impl Subtree {
    fn describe(&self) -> String {
        match self {
            Subtree::Program(_) => "a program".into(),
            Subtree::Canvas(_) => "a canvas".into(),
            Subtree::Layer(_) => "a layer".into(),
            Subtree::Node(n) => format!("a {} node", n.kind),
            Subtree::Value(v) => match v {
                Value::Num(_) => "a number".into(),
                Value::Color(_) => "a color".into(),
                Value::Ident(_) => "an identifier".into(),
                Value::Field(f) => format!("a {} field", f.keyword()),
            },
        }
    }
}

fn layer_node(p: &Program, root: PathRoot) -> Option<&Node> {
    match root {
        PathRoot::Fragmenter(i) => p.layers.get(i).map(|l| &l.fragmenter),
        PathRoot::Merge(i, j) => p.layers.get(i)?.merges.get(j),
        PathRoot::FragmentOp(i, j) => p.layers.get(i)?.fragment_ops.get(j),
        PathRoot::Style(i, j) => p.layers.get(i)?.styles.get(j),
        _ => None,
    }
}

fn layer_node_mut(p: &mut Program, root: PathRoot) -> Option<&mut Node> {
    match root {
        PathRoot::Fragmenter(i) => p.layers.get_mut(i).map(|l| &mut l.fragmenter),
        PathRoot::Merge(i, j) => p.layers.get_mut(i)?.merges.get_mut(j),
        PathRoot::FragmentOp(i, j) => p.layers.get_mut(i)?.fragment_ops.get_mut(j),
        PathRoot::Style(i, j) => p.layers.get_mut(i)?.styles.get_mut(j),
        _ => None,
    }
}

fn slot_of(root: PathRoot) -> Option<SlotKind> {
    match root {
        PathRoot::Fragmenter(_) => Some(SlotKind::Fragmenter),
        PathRoot::Merge(..) => Some(SlotKind::Merge),
        PathRoot::FragmentOp(..) => Some(SlotKind::FragmentOp),
        PathRoot::Style(..) => Some(SlotKind::Style),
        _ => None,
    }
}

/// Looks up the subtree at `path` without modifying anything.
pub fn resolve_path<'a>(p: &'a Program, path: &NodePath) -> Result<SubtreeRef<'a>, PathError> {
    let missing = || PathError::PathNotFound(path.to_string());
    match (path.root, path.param.as_deref()) {
        (PathRoot::Program, None) => Ok(SubtreeRef::Program(p)),
        (PathRoot::Program, Some("version")) => Ok(SubtreeRef::Scalar(Value::int(p.version))),
        (PathRoot::Program, Some("style")) => Ok(SubtreeRef::Scalar(Value::ident(p.style_tag.as_str()))),
        (PathRoot::Canvas, None) => Ok(SubtreeRef::Canvas(&p.canvas)),
        (PathRoot::Canvas, Some("width")) => Ok(SubtreeRef::Scalar(Value::Num(p.canvas.width))),
        (PathRoot::Canvas, Some("height")) => Ok(SubtreeRef::Scalar(Value::Num(p.canvas.height))),
        (PathRoot::Canvas, Some("background")) => Ok(SubtreeRef::Scalar(Value::Color(p.canvas.background))),
        (PathRoot::Layer(i), None) => p.layers.get(i).map(SubtreeRef::Layer).ok_or_else(missing),
        (PathRoot::Layer(i), Some("opacity")) => {
            p.layers.get(i).map(|l| SubtreeRef::Scalar(Value::Num(l.opacity))).ok_or_else(missing)
        }
        (root, None) => layer_node(p, root).map(SubtreeRef::Node).ok_or_else(missing),
        (root, Some(name)) => layer_node(p, root)
            .and_then(|n| n.get(name))
            .map(SubtreeRef::Value)
            .ok_or_else(missing),
    }
}

fn expect_num(path: &NodePath, v: &Subtree) -> Result<Num, PathError> {
    match v {
        Subtree::Value(Value::Num(n)) => Ok(*n),
        other => Err(PathError::KindMismatch { path: path.to_string(), expected: "a number".into(), found: other.describe() }),
    }
}

fn describe_spec(spec: &ParamSpec) -> String {
    let base = match spec.ty {
        ParamType::Int { .. } | ParamType::Real { .. } => "a number",
        ParamType::Color => "a color",
        ParamType::Enum(_) | ParamType::Motif => "an identifier",
    };
    if spec.field_ok {
        format!("{base} or a matching field")
    } else {
        base.to_string()
    }
}

/// Returns a copy of `p` with the subtree at `path` replaced.
pub fn substitute(p: &Program, path: &NodePath, subtree: Subtree) -> Result<Program, PathError> {
    resolve_for_substitution(p, path)?;
    let mismatch = |expected: &str, found: &Subtree| PathError::KindMismatch {
        path: path.to_string(),
        expected: expected.to_string(),
        found: found.describe(),
    };
    let mut out = p.clone();
    match (path.root, path.param.as_deref()) {
        (PathRoot::Program, None) => match subtree {
            Subtree::Program(q) => out = q,
            other => return Err(mismatch("a program", &other)),
        },
        (PathRoot::Program, Some("version")) => {
            out.version = expect_num(path, &subtree)?.as_integer().ok_or_else(|| mismatch("an integer", &subtree))?;
        }
        (PathRoot::Program, Some(_)) => match &subtree {
            Subtree::Value(Value::Ident(s)) => {
                out.style_tag = StyleTag::from_name(s).ok_or_else(|| mismatch("mtp, sfp or custom", &subtree))?;
            }
            other => return Err(mismatch("an identifier", other)),
        },
        (PathRoot::Canvas, None) => match subtree {
            Subtree::Canvas(c) => out.canvas = c,
            other => return Err(mismatch("a canvas", &other)),
        },
        (PathRoot::Canvas, Some("background")) => match subtree {
            Subtree::Value(Value::Color(c)) => out.canvas.background = c,
            other => return Err(mismatch("a color", &other)),
        },
        (PathRoot::Canvas, Some(name)) => {
            let n = expect_num(path, &subtree)?;
            if name == "width" {
                out.canvas.width = n;
            } else {
                out.canvas.height = n;
            }
        }
        (PathRoot::Layer(i), None) => match subtree {
            Subtree::Layer(l) => out.layers[i] = l,
            other => return Err(mismatch("a layer", &other)),
        },
        (PathRoot::Layer(i), Some(_)) => out.layers[i].opacity = expect_num(path, &subtree)?,
        (root, None) => {
            let slot = slot_of(root).expect("node roots have a slot");
            match subtree {
                Subtree::Node(n) if n.kind.slot() == slot => *layer_node_mut(&mut out, root).expect("resolved above") = n,
                other => return Err(mismatch(&format!("a {} node", slot.as_str()), &other)),
            }
        }
        (root, Some(name)) => {
            let node = layer_node_mut(&mut out, root).expect("resolved above");
            let spec = node.kind.param_spec(name).expect("resolved above");
            match subtree {
                Subtree::Value(v) if v.fits(spec) => {
                    node.params.insert(spec.name, v);
                }
                other => return Err(mismatch(&describe_spec(spec), &other)),
            }
        }
    }
    Ok(out)
}

/// Like [`resolve_path`], but an absent optional parameter still counts as
/// an addressable slot.
fn resolve_for_substitution(p: &Program, path: &NodePath) -> Result<(), PathError> {
    let missing = || PathError::PathNotFound(path.to_string());
    match (path.root, path.param.as_deref()) {
        (PathRoot::Program, Some(name)) if name != "version" && name != "style" => Err(missing()),
        (PathRoot::Canvas, Some(name)) if !matches!(name, "width" | "height" | "background") => Err(missing()),
        (PathRoot::Layer(_), Some(name)) if name != "opacity" => Err(missing()),
        (root @ (PathRoot::Fragmenter(_) | PathRoot::Merge(..) | PathRoot::FragmentOp(..) | PathRoot::Style(..)), Some(name)) => {
            layer_node(p, root).and_then(|n| n.kind.param_spec(name)).map(|_| ()).ok_or_else(missing)
        }
        _ => resolve_path(p, path).map(|_| ()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;
    use crate::dsl::NodeKind;
    use crate::field::{Axis, FieldExpr, ValueList};

    fn minimal() -> Program {
        let fill = Node::new(NodeKind::Fill).with(
            "color",
            Value::Field(FieldExpr::Cycle {
                key: Axis::Id,
                values: ValueList::Colors(vec![Color::rgb(0x11, 0x22, 0x33), Color::rgb(0x44, 0x55, 0x66)]),
            }),
        );
        let grid = Node::new(NodeKind::Grid).with("rows", Value::int(2)).with("cols", Value::int(2));
        Program::new(CanvasSpec::new(256, 256, Color::WHITE), vec![Layer::new(grid, fill)], StyleTag::Custom)
    }

    #[test]
    fn path_text_round_trip() {
        for text in [
            "/",
            "/canvas/param[width]",
            "/layer[0]",
            "/layer[0]/fragmenter",
            "/layer[3]/merges[1]/param[key]",
            "/layer[0]/fragmentOps[2]",
            "/layer[1]/style[0]/param[color]",
            "/layer[0]/param[opacity]",
        ] {
            let p: NodePath = text.parse().unwrap();
            assert_eq!(p.to_string(), text);
        }
        assert_eq!("/layer[0]/style".parse::<NodePath>().unwrap().root, PathRoot::Style(0, 0));
        for bad in ["", "layer[0]", "/layer", "/layer[-1]", "/layer[0]/slot[1]", "/layer[x]/fragmenter", "/layer[0]/merges"] {
            assert!(bad.parse::<NodePath>().is_err(), "{bad}");
        }
    }

    #[test]
    fn resolve_examples() {
        let p = minimal();
        let frag = resolve_path(&p, &"/layer[0]/fragmenter".parse().unwrap()).unwrap();
        assert!(matches!(frag, SubtreeRef::Node(n) if n.kind == NodeKind::Grid));
        assert!(matches!(
            resolve_path(&p, &"/layer[1]/fragmenter".parse().unwrap()),
            Err(PathError::PathNotFound(_))
        ));
        let fill = resolve_path(&p, &"/layer[0]/style/param[color]".parse().unwrap()).unwrap();
        assert!(matches!(fill, SubtreeRef::Value(Value::Field(FieldExpr::Cycle { .. }))));
        assert!(resolve_path(&p, &"/layer[0]/merges[0]".parse().unwrap()).is_err());
    }

    #[test]
    fn substitute_grid_dimensions() {
        let p = minimal();
        let path: NodePath = "/layer[0]/fragmenter".parse().unwrap();
        let grid3 = Node::new(NodeKind::Grid).with("rows", Value::int(3)).with("cols", Value::int(3));
        let q = substitute(&p, &path, Subtree::Node(grid3)).unwrap();
        assert_ne!(p, q);
        assert_eq!(q.layers[0].fragmenter.int("rows"), Some(3));
        assert_eq!(q.layers[0].styles, p.layers[0].styles);
        assert_eq!(p.layers[0].fragmenter.int("rows"), Some(2));
    }

    #[test]
    fn substitute_errors() {
        let p = minimal();
        let grid = Subtree::Node(Node::new(NodeKind::Grid));
        assert!(matches!(
            substitute(&p, &"/layer[2]/fragmenter".parse().unwrap(), grid),
            Err(PathError::PathNotFound(_))
        ));
        let fill = Subtree::Node(Node::new(NodeKind::Fill));
        assert!(matches!(
            substitute(&p, &"/layer[0]/fragmenter".parse().unwrap(), fill),
            Err(PathError::KindMismatch { .. })
        ));
        let color_into_rows = Subtree::Value(Value::Color(Color::BLACK));
        assert!(matches!(
            substitute(&p, &"/layer[0]/fragmenter/param[rows]".parse().unwrap(), color_into_rows),
            Err(PathError::KindMismatch { .. })
        ));
    }

    #[test]
    fn substitute_then_restore_is_identity() {
        let p = minimal();
        for text in ["/layer[0]/fragmenter", "/layer[0]/style[0]/param[color]", "/canvas/param[background]", "/layer[0]"] {
            let path: NodePath = text.parse().unwrap();
            let original = resolve_path(&p, &path).unwrap().to_owned();
            let replacement = match &original {
                Subtree::Node(_) => Subtree::Node(Node::new(NodeKind::Brick)),
                Subtree::Value(Value::Field(_)) => Subtree::Value(Value::Color(Color::BLACK)),
                Subtree::Value(_) => Subtree::Value(Value::Color(Color::rgb(1, 2, 3))),
                Subtree::Layer(l) => Subtree::Layer(Layer { opacity: Num::ZERO, ..l.clone() }),
                _ => unreachable!(),
            };
            let changed = substitute(&p, &path, replacement).unwrap();
            assert_ne!(changed, p, "{text}");
            assert_eq!(substitute(&changed, &path, original).unwrap(), p, "{text}");
            assert_eq!(substitute(&p, &path, resolve_path(&p, &path).unwrap().to_owned()).unwrap(), p);
        }
    }
}
