//! Conversion from s-expressions to the program AST.

use std::collections::BTreeMap;

use crate::color::Color;
use crate::dsl::{CanvasSpec, Layer, Node, NodeKind, Program, SlotKind, StyleTag, Value, PROGRAM_VERSION};
use crate::field::{Axis, FieldExpr, Scalar, ValueList};
use crate::num::Num;

use super::sexpr::{Sexpr, SourceSpan};
use super::ParseError;

const FRAGMENTERS: &[&str] = &["grid", "brick", "stripes", "voronoi"];
const FRAGMENT_OPS: &[&str] = &["inset", "scale", "rotate", "round"];
const STYLES: &[&str] = &["fill", "outline", "place-motif"];
const FIELDS: &[&str] = &["const", "alt", "ramp", "checker", "radial", "cycle", "jitter"];
const VALUE_FORMS: &[&str] = &["number", "color", "identifier", "field"];

/// A list form split into its head symbol, keyword arguments and positional
/// sub-forms, in source order.
pub struct Form<'a> {
    pub head: &'a str,
    pub head_span: SourceSpan,
    pub close: SourceSpan,
    pub kvs: Vec<(&'a str, SourceSpan, &'a Sexpr)>,
    pub children: Vec<&'a Sexpr>,
}

impl<'a> Form<'a> {
    pub fn open(s: &'a Sexpr, expected_heads: &[&str]) -> Result<Form<'a>, ParseError> {
        let Sexpr::List { items, span, close } = s else {
            return Err(ParseError::new(s.span(), &format!("expected a list, found {}", s.describe()), &["("]));
        };
        let (head, head_span) = match items.first() {
            Some(Sexpr::Symbol { text, span }) => (text.as_str(), *span),
            Some(other) => {
                return Err(ParseError::new(other.span(), &format!("unexpected {}", other.describe()), expected_heads))
            }
            None => return Err(ParseError::new(*span, "empty list", expected_heads)),
        };
        if !expected_heads.contains(&head) {
            return Err(ParseError::new(head_span, &format!("unexpected `{head}`"), expected_heads));
        }
        let mut kvs = Vec::new();
        let mut children = Vec::new();
        let mut rest = items[1..].iter();
        while let Some(item) = rest.next() {
            match item {
                Sexpr::Keyword { name, span } => {
                    let value = rest
                        .next()
                        .ok_or_else(|| ParseError::new(*close, &format!("missing value for `:{name}`"), VALUE_FORMS))?;
                    if let Sexpr::Keyword { name: next, span } = value {
                        return Err(ParseError::new(*span, &format!("missing value for `:{name}` before `:{next}`"), VALUE_FORMS));
                    }
                    if kvs.iter().any(|(k, _, _)| k == name) {
                        return Err(ParseError::new(*span, &format!("duplicate keyword `:{name}`"), &[]));
                    }
                    kvs.push((name.as_str(), *span, value));
                }
                other => children.push(other),
            }
        }
        Ok(Form { head, head_span, close: *close, kvs, children })
    }

    /// Rejects keywords outside `allowed`.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<(), ParseError> {
        for (name, span, _) in &self.kvs {
            if !allowed.contains(name) {
                let expected: Vec<String> = allowed.iter().map(|k| format!(":{k}")).collect();
                return Err(ParseError::owned(*span, format!("unknown keyword `:{name}` for {}", self.head), expected));
            }
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&'a Sexpr> {
        self.kvs.iter().find(|(k, _, _)| *k == name).map(|(_, _, v)| *v)
    }

    pub fn require(&self, name: &str) -> Result<&'a Sexpr, ParseError> {
        self.get(name).ok_or_else(|| {
            ParseError::owned(self.close, format!("{} requires `:{name}`", self.head), vec![format!(":{name}")])
        })
    }

    pub fn no_children(&self) -> Result<(), ParseError> {
        match self.children.first() {
            Some(c) => Err(ParseError::new(c.span(), &format!("unexpected {} in {}", c.describe(), self.head), &["keyword", ")"])),
            None => Ok(()),
        }
    }
}

fn num(s: &Sexpr) -> Result<Num, ParseError> {
    match s {
        Sexpr::Number { value, .. } => Ok(*value),
        other => Err(ParseError::new(other.span(), &format!("expected a number, found {}", other.describe()), &["number"])),
    }
}

fn integer(s: &Sexpr) -> Result<i64, ParseError> {
    num(s)?
        .as_integer()
        .ok_or_else(|| ParseError::new(s.span(), "expected an integer", &["integer"]))
}

fn color(s: &Sexpr) -> Result<Color, ParseError> {
    match s {
        Sexpr::Str { text, span } => text.parse().map_err(|e: crate::color::ColorError| ParseError::new(*span, &e.to_string(), &["color"])),
        other => Err(ParseError::new(other.span(), &format!("expected a color, found {}", other.describe()), &["color"])),
    }
}

fn symbol<'a>(s: &'a Sexpr, expected: &[&str]) -> Result<&'a str, ParseError> {
    match s {
        Sexpr::Symbol { text, .. } if expected.is_empty() || expected.contains(&text.as_str()) => Ok(text),
        other => Err(ParseError::new(other.span(), &format!("unexpected {}", other.describe()), expected)),
    }
}

fn axis(s: &Sexpr) -> Result<Axis, ParseError> {
    Ok(Axis::from_name(symbol(s, &["row", "col", "id"])?).expect("checked against the axis names"))
}

fn scalar(s: &Sexpr) -> Result<Scalar, ParseError> {
    match s {
        Sexpr::Number { value, .. } => Ok(Scalar::Num(*value)),
        Sexpr::Str { .. } => color(s).map(Scalar::Color),
        other => Err(ParseError::new(other.span(), &format!("expected a number or color, found {}", other.describe()), &["number", "color"])),
    }
}

fn list_items(s: &Sexpr) -> Result<&[Sexpr], ParseError> {
    match s {
        Sexpr::List { items, .. } if !matches!(items.first(), Some(Sexpr::Symbol { .. })) => Ok(items),
        other => Err(ParseError::new(other.span(), &format!("expected a value list, found {}", other.describe()), &["("])),
    }
}

/// `:values (1 2)` or `:colors ("#..." ...)`; either key accepts either kind,
/// and the list must be homogeneous.
fn value_list(form: &Form<'_>) -> Result<ValueList, ParseError> {
    let (key, s) = match (form.get("values"), form.get("colors")) {
        (Some(_), Some(_)) => {
            return Err(ParseError::owned(form.head_span, format!("{} takes `:values` or `:colors`, not both", form.head), vec![]))
        }
        (Some(v), None) => ("values", v),
        (None, Some(c)) => ("colors", c),
        (None, None) => {
            return Err(ParseError::owned(
                form.close,
                format!("{} requires `:values` or `:colors`", form.head),
                vec![":values".into(), ":colors".into()],
            ))
        }
    };
    let items = list_items(s)?;
    match items.first() {
        None if key == "colors" => Ok(ValueList::Colors(Vec::new())),
        None => Ok(ValueList::Nums(Vec::new())),
        Some(Sexpr::Str { .. }) => items.iter().map(color).collect::<Result<_, _>>().map(ValueList::Colors),
        Some(_) => items.iter().map(num).collect::<Result<_, _>>().map(ValueList::Nums),
    }
}

pub fn field_from_sexpr(s: &Sexpr) -> Result<FieldExpr, ParseError> {
    let form = Form::open(s, FIELDS)?;
    form.no_children()?;
    let f = match form.head {
        "const" => {
            form.check_keys(&["value"])?;
            FieldExpr::Const(scalar(form.require("value")?)?)
        }
        "alt" => {
            form.check_keys(&["axis", "values", "colors"])?;
            FieldExpr::Alt { axis: axis(form.require("axis")?)?, values: value_list(&form)? }
        }
        "ramp" => {
            form.check_keys(&["axis", "from", "to"])?;
            FieldExpr::Ramp {
                axis: axis(form.require("axis")?)?,
                from: scalar(form.require("from")?)?,
                to: scalar(form.require("to")?)?,
            }
        }
        "checker" => {
            form.check_keys(&["values", "colors"])?;
            FieldExpr::Checker { values: value_list(&form)? }
        }
        "radial" => {
            form.check_keys(&["center", "from", "to"])?;
            let center_expr = form.require("center")?;
            let center = match list_items(center_expr)? {
                [x, y] => [num(x)?, num(y)?],
                _ => return Err(ParseError::new(center_expr.span(), "center takes exactly two numbers", &["(x y)"])),
            };
            FieldExpr::Radial { center, from: scalar(form.require("from")?)?, to: scalar(form.require("to")?)? }
        }
        "cycle" => {
            form.check_keys(&["key", "values", "colors"])?;
            FieldExpr::Cycle { key: axis(form.require("key")?)?, values: value_list(&form)? }
        }
        "jitter" => {
            form.check_keys(&["salt", "min", "max"])?;
            FieldExpr::Jitter {
                salt: integer(form.require("salt")?)?,
                min: num(form.require("min")?)?,
                max: num(form.require("max")?)?,
            }
        }
        _ => unreachable!("head checked by Form::open"),
    };
    Ok(f)
}

/// Parses any parameter value: number, color string, identifier or field.
pub fn value_from_sexpr(s: &Sexpr) -> Result<Value, ParseError> {
    match s {
        Sexpr::Number { value, .. } => Ok(Value::Num(*value)),
        Sexpr::Str { text, .. } if text.starts_with('#') => color(s).map(Value::Color),
        Sexpr::Str { text, .. } | Sexpr::Symbol { text, .. } => Ok(Value::Ident(text.clone())),
        Sexpr::List { .. } => field_from_sexpr(s).map(Value::Field),
        Sexpr::Keyword { .. } => Err(ParseError::new(s.span(), &format!("unexpected {}", s.describe()), VALUE_FORMS)),
    }
}

fn kind_heads() -> Vec<&'static str> {
    NodeKind::ALL.iter().map(|k| k.keyword()).collect()
}

pub fn node_from_sexpr(s: &Sexpr) -> Result<Node, ParseError> {
    node_with_heads(s, &kind_heads())
}

fn node_with_heads(s: &Sexpr, heads: &[&str]) -> Result<Node, ParseError> {
    let form = Form::open(s, heads)?;
    let kind = NodeKind::from_keyword(form.head).expect("heads are node keywords");
    form.no_children()?;
    let names: Vec<&str> = kind.params().iter().map(|p| p.name).collect();
    form.check_keys(&names)?;
    let mut node = Node::new(kind);
    for (name, _, value) in &form.kvs {
        node.set(name, value_from_sexpr(value)?);
    }
    Ok(node)
}

fn slot_heads(slot: SlotKind) -> &'static [&'static str] {
    match slot {
        SlotKind::Fragmenter => FRAGMENTERS,
        SlotKind::Merge => &["merge"],
        SlotKind::FragmentOp => FRAGMENT_OPS,
        SlotKind::Style => STYLES,
    }
}

pub fn layer_from_sexpr(s: &Sexpr) -> Result<Layer, ParseError> {
    let form = Form::open(s, &["layer"])?;
    form.check_keys(&["opacity"])?;
    let opacity = form.get("opacity").map(num).transpose()?.unwrap_or(Num::ONE);
    let order = [SlotKind::Fragmenter, SlotKind::Merge, SlotKind::FragmentOp, SlotKind::Style];
    let mut slots: BTreeMap<SlotKind, Vec<Node>> = BTreeMap::new();
    // Index into `order` of the slot that the previous node occupied.
    let mut at: Option<usize> = None;
    let allowed_from = |at: Option<usize>| -> Vec<&'static str> {
        match at {
            None => FRAGMENTERS.to_vec(),
            Some(i) => order[i.max(1)..].iter().flat_map(|s| slot_heads(*s).iter().copied()).collect(),
        }
    };
    for child in &form.children {
        let expected = allowed_from(at);
        let node = node_with_heads(child, &expected)?;
        let idx = order.iter().position(|s| *s == node.kind.slot()).expect("every kind has a slot");
        at = Some(idx);
        slots.entry(node.kind.slot()).or_default().push(node);
    }
    let mut take = |slot| slots.remove(&slot).unwrap_or_default();
    let fragmenter = take(SlotKind::Fragmenter).pop().ok_or_else(|| {
        ParseError::new(form.close, "layer needs a fragmenter", FRAGMENTERS)
    })?;
    let merges = take(SlotKind::Merge);
    let fragment_ops = take(SlotKind::FragmentOp);
    let styles = take(SlotKind::Style);
    if styles.is_empty() {
        return Err(ParseError::owned(form.close, "layer needs a style".into(), allowed_from(at).iter().map(|s| s.to_string()).collect()));
    }
    Ok(Layer { fragmenter, merges, fragment_ops, styles, opacity })
}

fn canvas_from_sexpr(s: &Sexpr) -> Result<CanvasSpec, ParseError> {
    let form = Form::open(s, &["canvas"])?;
    form.no_children()?;
    form.check_keys(&["width", "height", "background"])?;
    Ok(CanvasSpec {
        width: num(form.require("width")?)?,
        height: num(form.require("height")?)?,
        background: form.get("background").map(color).transpose()?.unwrap_or(Color::WHITE),
    })
}

pub fn program_from_sexpr(s: &Sexpr) -> Result<Program, ParseError> {
    let form = Form::open(s, &["pattern"])?;
    form.check_keys(&["version", "style"])?;
    let version = form.get("version").map(integer).transpose()?.unwrap_or(PROGRAM_VERSION);
    let style_tag = match form.get("style") {
        Some(tag) => StyleTag::from_name(symbol(tag, &["mtp", "sfp", "custom"])?).expect("checked against tag names"),
        None => StyleTag::Custom,
    };
    let mut children = form.children.iter();
    let canvas = match children.next() {
        Some(c) => canvas_from_sexpr(c)?,
        None => return Err(ParseError::new(form.close, "pattern needs a canvas", &["canvas"])),
    };
    let layers = children.map(|c| layer_from_sexpr(c)).collect::<Result<Vec<_>, _>>()?;
    if layers.is_empty() {
        return Err(ParseError::new(form.close, "pattern needs at least one layer", &["layer"]));
    }
    Ok(Program { version, canvas, layers, style_tag })
}
