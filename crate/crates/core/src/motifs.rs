//! Motif library: ten procedural builtins plus user-supplied SVG outlines.
//!
//! Every motif is a set of closed subpaths normalized into the unit box,
//! with curves flattened to polylines.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dsl::schema::{BUILTIN_MOTIFS, USER_MOTIF_PREFIX};
use crate::geometry::Point;

const CIRCLE_SEGMENTS: usize = 64;
const CURVE_SEGMENTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MotifSource {
    Builtin,
    UserFile(PathBuf),
}

impl MotifSource {
    pub fn label(&self) -> &'static str {
        match self {
            MotifSource::Builtin => "builtin",
            MotifSource::UserFile(_) => "userFile",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MotifDef {
    pub id: String,
    pub source: MotifSource,
    /// Closed subpaths inside `[0, 1]²`.
    pub subpaths: Vec<Vec<Point>>,
    pub even_odd: bool,
}

impl MotifDef {
    pub fn bbox(&self) -> (Point, Point) {
        bbox(self.subpaths.iter().flatten())
    }
}

fn bbox<'a>(points: impl Iterator<Item = &'a Point>) -> (Point, Point) {
    points.fold(
        (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY)),
        |(lo, hi), p| (Point::new(lo.x.min(p.x), lo.y.min(p.y)), Point::new(hi.x.max(p.x), hi.y.max(p.y))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct MotifParseError {
    pub files: Vec<(PathBuf, String)>,
}

impl fmt::Display for MotifParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "could not load motif files:")?;
        for (path, why) in &self.files {
            write!(f, "\n  {}: {why}", path.display())?;
        }
        Ok(())
    }
}

/// Immutable id → motif map.
#[derive(Clone, Debug, PartialEq)]
pub struct MotifRegistry {
    motifs: BTreeMap<String, MotifDef>,
}

impl Default for MotifRegistry {
    fn default() -> MotifRegistry {
        MotifRegistry::builtin()
    }
}

impl MotifRegistry {
    pub fn builtin() -> MotifRegistry {
        let motifs = BUILTIN_MOTIFS
            .iter()
            .map(|&id| {
                let (subpaths, even_odd) = builtin_geometry(id);
                (id.to_string(), MotifDef { id: id.to_string(), source: MotifSource::Builtin, subpaths, even_odd })
            })
            .collect();
        MotifRegistry { motifs }
    }

    pub fn get(&self, id: &str) -> Option<&MotifDef> {
        self.motifs.get(id)
    }

    pub fn len(&self) -> usize {
        self.motifs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.motifs.is_empty()
    }

    /// Motifs sorted by id.
    pub fn iter(&self) -> impl Iterator<Item = &MotifDef> {
        self.motifs.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.motifs.keys().map(String::as_str)
    }
}

/// Builtins plus every `*.svg` file in `dir` as `user/<stem>`.
pub fn load_motif_library(dir: Option<&Path>) -> Result<MotifRegistry, MotifParseError> {
    let mut registry = MotifRegistry::builtin();
    let Some(dir) = dir else { return Ok(registry) };
    let entries = std::fs::read_dir(dir).map_err(|e| MotifParseError { files: vec![(dir.to_path_buf(), e.to_string())] })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x.eq_ignore_ascii_case("svg")))
        .collect();
    files.sort();
    let mut failures = Vec::new();
    for path in files {
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
        let parsed = std::fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse_svg_outline(&text));
        match parsed {
            Ok((subpaths, even_odd)) if !stem.is_empty() => {
                let id = format!("{USER_MOTIF_PREFIX}{stem}");
                registry
                    .motifs
                    .insert(id.clone(), MotifDef { id, source: MotifSource::UserFile(path), subpaths, even_odd });
            }
            Ok(_) => failures.push((path, "file name has no usable stem".to_string())),
            Err(why) => failures.push((path, why)),
        }
    }
    if failures.is_empty() {
        Ok(registry)
    } else {
        Err(MotifParseError { files: failures })
    }
}

/// Extracts the outline of an SVG document: every `path` and `polygon`
/// element, flattened and normalized into the unit box.
pub fn parse_svg_outline(text: &str) -> Result<(Vec<Vec<Point>>, bool), String> {
    let doc = roxmltree::Document::parse(text).map_err(|e| e.to_string())?;
    if doc.root_element().tag_name().name() != "svg" {
        return Err("root element is not <svg>".to_string());
    }
    let mut subpaths = Vec::new();
    let mut even_odd = false;
    for node in doc.descendants().filter(|n| n.is_element()) {
        match node.tag_name().name() {
            "path" => {
                let d = node.attribute("d").ok_or("<path> without `d`")?;
                subpaths.extend(flatten_path(d)?);
            }
            "polygon" => {
                let pts = node.attribute("points").ok_or("<polygon> without `points`")?;
                subpaths.push(svgtypes::PointsParser::from(pts).map(|(x, y)| Point::new(x, y)).collect());
            }
            _ => continue,
        }
        even_odd |= node.attribute("fill-rule") == Some("evenodd");
    }
    subpaths.retain(|s: &Vec<Point>| s.len() >= 3);
    if subpaths.is_empty() {
        return Err("no closed outline found".to_string());
    }
    let (lo, hi) = bbox(subpaths.iter().flatten());
    let extent = (hi.x - lo.x).max(hi.y - lo.y);
    if !(extent.is_finite() && extent > 0.0) {
        return Err("outline has zero extent".to_string());
    }
    let pad = Point::new((extent - (hi.x - lo.x)) / 2.0, (extent - (hi.y - lo.y)) / 2.0);
    for p in subpaths.iter_mut().flatten() {
        *p = (*p - lo + pad) * (1.0 / extent);
    }
    Ok((subpaths, even_odd))
}

fn flatten_path(d: &str) -> Result<Vec<Vec<Point>>, String> {
    use svgtypes::SimplePathSegment as S;
    let mut out: Vec<Vec<Point>> = Vec::new();
    let mut cur: Vec<Point> = Vec::new();
    let mut last = Point::default();
    for seg in svgtypes::SimplifyingPathParser::from(d) {
        match seg.map_err(|e| format!("bad path data: {e}"))? {
            S::MoveTo { x, y } => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
                last = Point::new(x, y);
                cur.push(last);
            }
            S::LineTo { x, y } => {
                last = Point::new(x, y);
                cur.push(last);
            }
            S::CurveTo { x1, y1, x2, y2, x, y } => {
                let (p0, p1, p2, p3) = (last, Point::new(x1, y1), Point::new(x2, y2), Point::new(x, y));
                for i in 1..=CURVE_SEGMENTS {
                    let t = i as f64 / CURVE_SEGMENTS as f64;
                    let u = 1.0 - t;
                    cur.push(p0 * (u * u * u) + p1 * (3.0 * u * u * t) + p2 * (3.0 * u * t * t) + p3 * (t * t * t));
                }
                last = p3;
            }
            S::Quadratic { x1, y1, x, y } => {
                let (p0, p1, p2) = (last, Point::new(x1, y1), Point::new(x, y));
                for i in 1..=CURVE_SEGMENTS {
                    let t = i as f64 / CURVE_SEGMENTS as f64;
                    let u = 1.0 - t;
                    cur.push(p0 * (u * u) + p1 * (2.0 * u * t) + p2 * (t * t));
                }
                last = p2;
            }
            S::ClosePath => {
                if let Some(&first) = cur.first() {
                    last = first;
                    out.push(std::mem::take(&mut cur));
                    cur.push(first);
                }
            }
        }
    }
    if cur.len() > 1 {
        out.push(cur);
    }
    for sub in &mut out {
        if sub.len() > 1 && sub.first() == sub.last() {
            sub.pop();
        }
    }
    Ok(out)
}

fn arc(center: Point, r: f64, from: f64, to: f64, n: usize) -> Vec<Point> {
    (0..=n)
        .map(|i| {
            let a = from + (to - from) * i as f64 / n as f64;
            center + Point::new(a.cos(), a.sin()) * r
        })
        .collect()
}

fn circle(center: Point, r: f64) -> Vec<Point> {
    let mut pts = arc(center, r, 0.0, TAU, CIRCLE_SEGMENTS);
    pts.pop();
    pts
}

fn builtin_geometry(id: &str) -> (Vec<Vec<Point>>, bool) {
    let c = Point::new(0.5, 0.5);
    let p = Point::new;
    match id {
        "circle" => (vec![circle(c, 0.5)], false),
        "ring" => (vec![circle(c, 0.5), circle(c, 0.3)], true),
        "square" => (vec![vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)]], false),
        "diamond" => (vec![vec![p(0.5, 0.0), p(1.0, 0.5), p(0.5, 1.0), p(0.0, 0.5)]], false),
        "triangle" => (vec![vec![p(0.5, 0.0), p(1.0, 1.0), p(0.0, 1.0)]], false),
        "star5" => {
            let pts = (0..10)
                .map(|i| {
                    let a = -PI / 2.0 + i as f64 * PI / 5.0;
                    let r = if i % 2 == 0 { 0.5 } else { 0.2 };
                    c + Point::new(a.cos(), a.sin()) * r
                })
                .collect();
            (vec![pts], false)
        }
        "cross" => {
            let (a, b) = (1.0 / 3.0, 2.0 / 3.0);
            let pts = vec![
                p(a, 0.0), p(b, 0.0), p(b, a), p(1.0, a), p(1.0, b), p(b, b),
                p(b, 1.0), p(a, 1.0), p(a, b), p(0.0, b), p(0.0, a), p(a, a),
            ];
            (vec![pts], false)
        }
        "crescent" => {
            // Outer circle minus a shifted inner circle, traced along both arcs.
            let (c2, r1, r2) = (p(0.7, 0.5), 0.5, 0.45);
            let dx = (r1 * r1 - r2 * r2 + (c2.x - c.x).powi(2)) / (2.0 * (c2.x - c.x));
            let dy = (r1 * r1 - dx * dx).sqrt();
            let outer_a = dy.atan2(dx);
            let inner_a = dy.atan2(c.x + dx - c2.x);
            let mut pts = arc(c, r1, outer_a, TAU - outer_a, 48);
            let mut inner = arc(c2, r2, TAU - inner_a, inner_a, 48);
            inner.pop();
            inner.remove(0);
            pts.extend(inner);
            (vec![pts], false)
        }
        "petal" => {
            let n = 32;
            let side = |sign: f64| -> Vec<Point> {
                (0..=n)
                    .map(|i| {
                        let t = i as f64 / n as f64;
                        p(0.5 + sign * 0.3 * (PI * t).sin(), t)
                    })
                    .collect()
            };
            let mut pts = side(1.0);
            let mut back = side(-1.0);
            back.reverse();
            pts.extend(&back[1..n]);
            (vec![pts], false)
        }
        "stripebar" => (vec![vec![p(0.0, 0.35), p(1.0, 0.35), p(1.0, 0.65), p(0.0, 0.65)]], false),
        _ => unreachable!("not a builtin motif: {id}"),
    }
}
