//! Parameter-wise blending of two structurally identical programs.

use thiserror::Error;

use crate::dsl::schema::ParamType;
use crate::dsl::{CanvasSpec, Layer, Node, NodePath, PathRoot, Program, Value};
use crate::field::{FieldExpr, Scalar, ValueList};
use crate::num::Num;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {reason}")]
pub struct StructureMismatch {
    pub path: NodePath,
    pub reason: String,
}

fn mismatch(path: &NodePath, reason: impl Into<String>) -> StructureMismatch {
    StructureMismatch { path: path.clone(), reason: reason.into() }
}

/// Interpolates every numeric and color leaf of `p` toward `q`. Integer
/// slots round half up; `t = 0` and `t = 1` give back `p` and `q` exactly.
pub fn interpolate_programs(p: &Program, q: &Program, t: f64) -> Result<Program, StructureMismatch> {
    let root = NodePath::new(PathRoot::Program);
    if p.version != q.version {
        return Err(mismatch(&root, "versions differ"));
    }
    if p.layers.len() != q.layers.len() {
        return Err(mismatch(&root, format!("{} layers against {}", p.layers.len(), q.layers.len())));
    }
    let canvas = CanvasSpec {
        width: p.canvas.width.lerp(q.canvas.width, t).round_half_up(),
        height: p.canvas.height.lerp(q.canvas.height, t).round_half_up(),
        background: p.canvas.background.lerp(q.canvas.background, t),
    };
    let layers = p
        .layers
        .iter()
        .zip(&q.layers)
        .enumerate()
        .map(|(i, (a, b))| layer(i, a, b, t))
        .collect::<Result<_, _>>()?;
    Ok(Program { version: p.version, canvas, layers, style_tag: p.style_tag })
}

fn layer(i: usize, a: &Layer, b: &Layer, t: f64) -> Result<Layer, StructureMismatch> {
    let nodes = |xs: &[Node], ys: &[Node], root: &dyn Fn(usize) -> PathRoot| -> Result<Vec<Node>, StructureMismatch> {
        if xs.len() != ys.len() {
            return Err(mismatch(&NodePath::new(PathRoot::Layer(i)), "slot lengths differ"));
        }
        xs.iter().zip(ys).enumerate().map(|(j, (x, y))| node(&NodePath::new(root(j)), x, y, t)).collect()
    };
    Ok(Layer {
        fragmenter: node(&NodePath::new(PathRoot::Fragmenter(i)), &a.fragmenter, &b.fragmenter, t)?,
        merges: nodes(&a.merges, &b.merges, &|j| PathRoot::Merge(i, j))?,
        fragment_ops: nodes(&a.fragment_ops, &b.fragment_ops, &|j| PathRoot::FragmentOp(i, j))?,
        styles: nodes(&a.styles, &b.styles, &|j| PathRoot::Style(i, j))?,
        opacity: a.opacity.lerp(b.opacity, t),
    })
}

fn node(path: &NodePath, a: &Node, b: &Node, t: f64) -> Result<Node, StructureMismatch> {
    if a.kind != b.kind {
        return Err(mismatch(path, format!("{} against {}", a.kind, b.kind)));
    }
    if !a.params.keys().eq(b.params.keys()) {
        return Err(mismatch(path, "parameter sets differ"));
    }
    let mut out = a.clone();
    for (name, va) in &a.params {
        let path = path.with_param(name);
        let integer = matches!(a.kind.param_spec(name).map(|s| s.ty), Some(ParamType::Int { .. }));
        let v = value(&path, va, &b.params[name], t)?;
        let v = match v {
            Value::Num(n) if integer => Value::Num(n.round_half_up()),
            v => v,
        };
        out.params.insert(name, v);
    }
    Ok(out)
}

fn value(path: &NodePath, a: &Value, b: &Value, t: f64) -> Result<Value, StructureMismatch> {
    match (a, b) {
        (Value::Num(x), Value::Num(y)) => Ok(Value::Num(x.lerp(*y, t))),
        (Value::Color(x), Value::Color(y)) => Ok(Value::Color(x.lerp(*y, t))),
        (Value::Ident(x), Value::Ident(y)) if x == y => Ok(a.clone()),
        (Value::Ident(x), Value::Ident(y)) => Err(mismatch(path, format!("`{x}` against `{y}`"))),
        (Value::Field(x), Value::Field(y)) => field(path, x, y, t).map(Value::Field),
        _ => Err(mismatch(path, "value kinds differ")),
    }
}

fn scalar(path: &NodePath, a: &Scalar, b: &Scalar, t: f64) -> Result<Scalar, StructureMismatch> {
    match (a, b) {
        (Scalar::Num(x), Scalar::Num(y)) => Ok(Scalar::Num(x.lerp(*y, t))),
        (Scalar::Color(x), Scalar::Color(y)) => Ok(Scalar::Color(x.lerp(*y, t))),
        _ => Err(mismatch(path, "scalar types differ")),
    }
}

fn list(path: &NodePath, a: &ValueList, b: &ValueList, t: f64) -> Result<ValueList, StructureMismatch> {
    if a.len() != b.len() {
        return Err(mismatch(path, "list lengths differ"));
    }
    match (a, b) {
        (ValueList::Nums(x), ValueList::Nums(y)) => Ok(ValueList::Nums(x.iter().zip(y).map(|(u, v)| u.lerp(*v, t)).collect())),
        (ValueList::Colors(x), ValueList::Colors(y)) => {
            Ok(ValueList::Colors(x.iter().zip(y).map(|(u, v)| u.lerp(*v, t)).collect()))
        }
        _ => Err(mismatch(path, "list types differ")),
    }
}

fn field(path: &NodePath, a: &FieldExpr, b: &FieldExpr, t: f64) -> Result<FieldExpr, StructureMismatch> {
    use FieldExpr as F;
    let axis_mismatch = || mismatch(path, "field axes differ");
    Ok(match (a, b) {
        (F::Const(x), F::Const(y)) => F::Const(scalar(path, x, y, t)?),
        (F::Alt { axis, values }, F::Alt { axis: ax2, values: v2 }) if axis == ax2 => {
            F::Alt { axis: *axis, values: list(path, values, v2, t)? }
        }
        (F::Ramp { axis, from, to }, F::Ramp { axis: ax2, from: f2, to: t2 }) if axis == ax2 => {
            F::Ramp { axis: *axis, from: scalar(path, from, f2, t)?, to: scalar(path, to, t2, t)? }
        }
        (F::Checker { values }, F::Checker { values: v2 }) => F::Checker { values: list(path, values, v2, t)? },
        (F::Radial { center, from, to }, F::Radial { center: c2, from: f2, to: t2 }) => F::Radial {
            center: [center[0].lerp(c2[0], t), center[1].lerp(c2[1], t)],
            from: scalar(path, from, f2, t)?,
            to: scalar(path, to, t2, t)?,
        },
        (F::Cycle { key, values }, F::Cycle { key: k2, values: v2 }) if key == k2 => {
            F::Cycle { key: *key, values: list(path, values, v2, t)? }
        }
        (F::Jitter { salt, min, max }, F::Jitter { salt: s2, min: m2, max: x2 }) if salt == s2 => {
            let (lo, hi): (Num, Num) = (min.lerp(*m2, t), max.lerp(*x2, t));
            F::Jitter { salt: *salt, min: lo, max: hi }
        }
        (F::Alt { .. }, F::Alt { .. }) | (F::Ramp { .. }, F::Ramp { .. }) | (F::Cycle { .. }, F::Cycle { .. }) => {
            return Err(axis_mismatch())
        }
        (F::Jitter { .. }, F::Jitter { .. }) => return Err(mismatch(path, "jitter salts differ")),
        _ => return Err(mismatch(path, format!("`{}` field against `{}`", a.keyword(), b.keyword()))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::ast_equals;
    use crate::parser::parse;

    fn prog(rows: i64, color: &str, opacity: &str) -> Program {
        parse(&format!(
            "(pattern (canvas :width 100 :height 100) (layer :opacity {opacity} (grid :rows {rows} :cols 2) (rotate :angle (ramp :axis id :from 0 :to 90)) (fill :color \"{color}\")))"
        ))
        .unwrap()
    }

    #[test]
    fn endpoints_are_exact() {
        let (p, q) = (prog(2, "#000000", "1"), prog(4, "#FF8800", "0.3"));
        assert!(ast_equals(&interpolate_programs(&p, &q, 0.0).unwrap(), &p));
        assert!(ast_equals(&interpolate_programs(&p, &q, 1.0).unwrap(), &q));
    }

    #[test]
    fn midpoint_rounds_integer_slots() {
        let (p, q) = (prog(2, "#000000", "1"), prog(4, "#FF8800", "0.5"));
        let m = interpolate_programs(&p, &q, 0.5).unwrap();
        assert_eq!(m.layers[0].fragmenter.int("rows"), Some(3));
        assert_eq!(m.layers[0].opacity, Num::from_f64(0.75));
        assert_eq!(m.layers[0].styles[0].get("color"), Some(&Value::Color("#804400".parse().unwrap())));
        let q3 = prog(3, "#000000", "1");
        assert_eq!(interpolate_programs(&p, &q3, 0.5).unwrap().layers[0].fragmenter.int("rows"), Some(3));
    }

    #[test]
    fn mismatches() {
        let p = prog(2, "#000000", "1");
        let mut two = p.clone();
        two.layers.push(p.layers[0].clone());
        assert!(interpolate_programs(&p, &two, 0.5).is_err());
        let voronoi = parse("(pattern (canvas :width 100 :height 100) (layer (voronoi) (rotate) (fill)))").unwrap();
        let err = interpolate_programs(&p, &voronoi, 0.5).unwrap_err();
        assert_eq!(err.path.to_string(), "/layer[0]/fragmenter");
    }
}
