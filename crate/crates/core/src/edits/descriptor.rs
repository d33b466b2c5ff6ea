//! Edit descriptors and their `(edit …)` surface form.
//!
//! ```text
//! (edit :kind replace :target fragmenter :ordinal 0 :payload (grid :rows 3 :cols 3))
//! (edit :kind replace :target place-motif :ordinal 0 :param motif :payload star5)
//! (edit :kind insert :target layer :ordinal 0 :payload (outline :color "#202020" :width 2))
//! (edit :kind remove :target outline :ordinal 0)
//! ```

use std::fmt;

use crate::dsl::{Layer, Node, NodeKind, SlotKind, Value};
use crate::parser::{
    layer_from_sexpr, node_from_sexpr, print_layer, print_node, print_value, read_sexpr, value_from_sexpr, Form,
    ParseError, Sexpr,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditKind {
    Insert,
    Remove,
    Replace,
}

impl EditKind {
    pub const ALL: [EditKind; 3] = [EditKind::Insert, EditKind::Remove, EditKind::Replace];

    pub fn as_str(self) -> &'static str {
        match self {
            EditKind::Insert => "insert",
            EditKind::Remove => "remove",
            EditKind::Replace => "replace",
        }
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What a selector counts. Node and slot targets count in pre-order over
/// all layers; `Layer` counts layers; `Pattern` is the program itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Node(NodeKind),
    Slot(SlotKind),
    Layer,
    Pattern,
}

const SLOT_NAMES: [(SlotKind, &str); 4] = [
    (SlotKind::Fragmenter, "fragmenter"),
    (SlotKind::Merge, "merges"),
    (SlotKind::FragmentOp, "fragment-ops"),
    (SlotKind::Style, "styles"),
];

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Node(k) => k.keyword(),
            Target::Slot(s) => SLOT_NAMES.iter().find(|(k, _)| *k == s).map(|(_, n)| *n).expect("every slot is named"),
            Target::Layer => "layer",
            Target::Pattern => "pattern",
        }
    }

    pub fn from_name(s: &str) -> Option<Target> {
        match s {
            "layer" => Some(Target::Layer),
            "pattern" => Some(Target::Pattern),
            _ => SLOT_NAMES
                .iter()
                .find(|(_, n)| *n == s)
                .map(|(k, _)| Target::Slot(*k))
                .or_else(|| NodeKind::from_keyword(s).map(Target::Node)),
        }
    }

    fn all_names() -> Vec<&'static str> {
        let mut names: Vec<&str> = NodeKind::ALL.iter().map(|k| k.keyword()).collect();
        names.extend(SLOT_NAMES.iter().map(|(_, n)| *n));
        names.extend(["layer", "pattern"]);
        names
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NodeSelector {
    pub target: Target,
    pub ordinal: usize,
    /// Narrows a node selector to one of its parameters.
    pub param: Option<String>,
}

impl NodeSelector {
    pub fn new(target: Target, ordinal: usize) -> NodeSelector {
        NodeSelector { target, ordinal, param: None }
    }

    pub fn param(target: Target, ordinal: usize, name: &str) -> NodeSelector {
        NodeSelector { target, ordinal, param: Some(name.to_string()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Payload {
    Node(Node),
    Layer(Layer),
    Value(Value),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EditDescriptor {
    pub kind: EditKind,
    pub selector: NodeSelector,
    /// Present unless `kind` is remove.
    pub payload: Option<Payload>,
}

impl EditDescriptor {
    pub fn insert(selector: NodeSelector, payload: Payload) -> EditDescriptor {
        EditDescriptor { kind: EditKind::Insert, selector, payload: Some(payload) }
    }

    pub fn remove(selector: NodeSelector) -> EditDescriptor {
        EditDescriptor { kind: EditKind::Remove, selector, payload: None }
    }

    pub fn replace(selector: NodeSelector, payload: Payload) -> EditDescriptor {
        EditDescriptor { kind: EditKind::Replace, selector, payload: Some(payload) }
    }
}

/// Canonical one-line text.
pub fn print_edit(e: &EditDescriptor) -> String {
    let s = &e.selector;
    let mut out = format!("(edit :kind {} :target {} :ordinal {}", e.kind, s.target.name(), s.ordinal);
    if let Some(p) = &s.param {
        out.push_str(&format!(" :param {p}"));
    }
    if let Some(payload) = &e.payload {
        let text = match payload {
            Payload::Node(n) => print_node(n),
            Payload::Layer(l) => print_layer(l).replace("\n  ", " "),
            Payload::Value(v) => print_value(v),
        };
        out.push_str(&format!(" :payload {text}"));
    }
    out.push(')');
    out
}

impl fmt::Display for EditDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_edit(self))
    }
}

fn symbol<'a>(s: &'a Sexpr, expected: &[&str]) -> Result<&'a str, ParseError> {
    match s {
        Sexpr::Symbol { text, .. } => Ok(text),
        other => Err(ParseError::new(other.span(), &format!("unexpected {}", other.describe()), expected)),
    }
}

pub fn edit_from_sexpr(s: &Sexpr) -> Result<EditDescriptor, ParseError> {
    let form = Form::open(s, &["edit"])?;
    form.no_children()?;
    form.check_keys(&["kind", "target", "ordinal", "param", "payload"])?;
    let kind_names = ["insert", "remove", "replace"];
    let kind_sexpr = form.require("kind")?;
    let kind = match symbol(kind_sexpr, &kind_names)? {
        "insert" => EditKind::Insert,
        "remove" => EditKind::Remove,
        "replace" => EditKind::Replace,
        other => return Err(ParseError::new(kind_sexpr.span(), &format!("unknown edit kind `{other}`"), &kind_names)),
    };
    let target_sexpr = form.require("target")?;
    let names = Target::all_names();
    let target_name = symbol(target_sexpr, &names)?;
    let target = Target::from_name(target_name)
        .ok_or_else(|| ParseError::new(target_sexpr.span(), &format!("unknown target `{target_name}`"), &names))?;
    let ordinal = match form.get("ordinal") {
        None => 0,
        Some(Sexpr::Number { value, span }) => value
            .as_integer()
            .and_then(|v| usize::try_from(v).ok())
            .ok_or_else(|| ParseError::new(*span, "ordinal must be a non-negative integer", &["integer"]))?,
        Some(other) => return Err(ParseError::new(other.span(), "ordinal must be a non-negative integer", &["integer"])),
    };
    let param = form.get("param").map(|p| symbol(p, &["parameter name"]).map(str::to_string)).transpose()?;
    let payload = match (kind, form.get("payload")) {
        (EditKind::Remove, None) => None,
        (EditKind::Remove, Some(p)) => return Err(ParseError::new(p.span(), "remove takes no payload", &[")"])),
        (_, None) => return Err(ParseError::new(form.close, &format!("{kind} requires `:payload`"), &[":payload"])),
        (_, Some(p)) if param.is_some() => Some(Payload::Value(value_from_sexpr(p)?)),
        (_, Some(p @ Sexpr::List { items, .. })) if matches!(items.first(), Some(Sexpr::Symbol { text, .. }) if text == "layer") => {
            Some(Payload::Layer(layer_from_sexpr(p)?))
        }
        (_, Some(p)) => Some(Payload::Node(node_from_sexpr(p)?)),
    };
    Ok(EditDescriptor { kind, selector: NodeSelector { target, ordinal, param }, payload })
}

pub fn parse_edit(text: &str) -> Result<EditDescriptor, ParseError> {
    edit_from_sexpr(&read_sexpr(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;
    use crate::field::{Axis, FieldExpr, ValueList};

    fn round_trip(e: &EditDescriptor) {
        let text = print_edit(e);
        assert!(!text.contains('\n'));
        assert_eq!(&parse_edit(&text).unwrap(), e, "{text}");
    }

    #[test]
    fn canonical_forms() {
        let e = EditDescriptor::replace(
            NodeSelector::new(Target::Slot(SlotKind::Fragmenter), 0),
            Payload::Node(Node::new(NodeKind::Grid).with("rows", Value::int(3)).with("cols", Value::int(3))),
        );
        assert_eq!(print_edit(&e), "(edit :kind replace :target fragmenter :ordinal 0 :payload (grid :rows 3 :cols 3))");
        round_trip(&e);
        let remove = parse_edit("(edit :kind remove :target outline)").unwrap();
        assert_eq!(remove, EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Outline), 0)));
    }

    #[test]
    fn every_payload_shape_round_trips() {
        let layer = Layer::new(Node::new(NodeKind::Voronoi), Node::new(NodeKind::Fill));
        let field = Value::Field(FieldExpr::Alt { axis: Axis::Row, values: ValueList::Colors(vec![Color::BLACK, Color::WHITE]) });
        let cases = [
            EditDescriptor::insert(NodeSelector::new(Target::Pattern, 0), Payload::Layer(layer)),
            EditDescriptor::insert(NodeSelector::new(Target::Layer, 1), Payload::Node(Node::new(NodeKind::Outline))),
            EditDescriptor::replace(NodeSelector::param(Target::Node(NodeKind::Fill), 2, "color"), Payload::Value(field)),
            EditDescriptor::replace(NodeSelector::param(Target::Node(NodeKind::PlaceMotif), 0, "motif"), Payload::Value(Value::ident("user/leaf"))),
            EditDescriptor::remove(NodeSelector::new(Target::Slot(SlotKind::Merge), 3)),
            EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Merge), 0)),
        ];
        for e in &cases {
            round_trip(e);
        }
    }

    #[test]
    fn malformed_edits() {
        for text in [
            "(edit :kind twist :target grid)",
            "(edit :kind remove :target nowhere)",
            "(edit :kind replace :target grid)",
            "(edit :kind remove :target grid :payload (grid))",
            "(edit :kind remove :target grid :ordinal -1)",
            "(edit :target grid)",
        ] {
            assert!(parse_edit(text).is_err(), "{text}");
        }
    }
}
