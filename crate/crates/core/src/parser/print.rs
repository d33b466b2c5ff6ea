//! Canonical pretty printer.
//!
//! Two-space indentation, one node per line, parameters in schema order,
//! closing parentheses on the last line of their form, LF line endings and a
//! trailing newline.

use std::fmt::Write;

use crate::dsl::{Layer, Node, Program, Value};
use crate::field::{FieldExpr, Scalar, ValueList};

fn is_plain_symbol(s: &str) -> bool {
    !s.is_empty()
        && !s.starts_with(|c: char| c.is_ascii_digit() || c == ':' || c == '-' || c == '.' || c == '#')
        && !s.chars().any(|c| c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';'))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn scalar(s: &Scalar) -> String {
    match s {
        Scalar::Num(n) => n.to_string(),
        Scalar::Color(c) => format!("\"{c}\""),
    }
}

fn values(list: &ValueList) -> String {
    let items: Vec<String> = match list {
        ValueList::Nums(v) => v.iter().map(|n| n.to_string()).collect(),
        ValueList::Colors(v) => v.iter().map(|c| format!("\"{c}\"")).collect(),
    };
    let key = match list {
        ValueList::Nums(_) => "values",
        ValueList::Colors(_) => "colors",
    };
    format!(":{key} ({})", items.join(" "))
}

pub fn print_field(f: &FieldExpr) -> String {
    match f {
        FieldExpr::Const(v) => format!("(const :value {})", scalar(v)),
        FieldExpr::Alt { axis, values: v } => format!("(alt :axis {axis} {})", values(v)),
        FieldExpr::Ramp { axis, from, to } => format!("(ramp :axis {axis} :from {} :to {})", scalar(from), scalar(to)),
        FieldExpr::Checker { values: v } => format!("(checker {})", values(v)),
        FieldExpr::Radial { center, from, to } => {
            format!("(radial :center ({} {}) :from {} :to {})", center[0], center[1], scalar(from), scalar(to))
        }
        FieldExpr::Cycle { key, values: v } => format!("(cycle :key {key} {})", values(v)),
        FieldExpr::Jitter { salt, min, max } => format!("(jitter :salt {salt} :min {min} :max {max})"),
    }
}

pub fn print_value(v: &Value) -> String {
    match v {
        Value::Num(n) => n.to_string(),
        Value::Color(c) => format!("\"{c}\""),
        Value::Ident(s) if is_plain_symbol(s) => s.clone(),
        Value::Ident(s) => quote(s),
        Value::Field(f) => print_field(f),
    }
}

/// One node on a single line.
pub fn print_node(n: &Node) -> String {
    let mut out = format!("({}", n.kind);
    for (name, value) in n.ordered_params() {
        let _ = write!(out, " :{name} {}", print_value(value));
    }
    out.push(')');
    out
}

fn layer_lines(l: &Layer, indent: &str) -> String {
    let mut out = format!("{indent}(layer :opacity {}", l.opacity);
    for node in l.nodes() {
        let _ = write!(out, "\n{indent}  {}", print_node(node));
    }
    out.push(')');
    out
}

pub fn print_layer(l: &Layer) -> String {
    layer_lines(l, "")
}

pub fn print(p: &Program) -> String {
    let mut out = format!("(pattern :version {} :style {}\n", p.version, p.style_tag);
    let c = &p.canvas;
    let _ = write!(out, "  (canvas :width {} :height {} :background \"{}\")", c.width, c.height, c.background);
    for layer in &p.layers {
        out.push('\n');
        out.push_str(&layer_lines(layer, "  "));
    }
    out.push_str(")\n");
    out
}
