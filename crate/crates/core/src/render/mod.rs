//! Program interpretation, SVG emission, raster export and frame
//! interpolation.

mod interpolate;
mod raster;
mod svg;

use std::collections::BTreeSet;

use thiserror::Error;

pub use interpolate::{interpolate_programs, StructureMismatch};
pub use raster::{Rasterizer, ResvgRasterizer};
pub use svg::{emit_svg, shape_path_data};

use crate::color::Color;
use crate::dsl::{CanvasSpec, Diagnostic, Layer, Node, NodeKind, NodePath, PathRoot, Program, Value};
use crate::field::{eval_field, FieldContext, FieldError, FieldExpr, FieldType, FieldValue, Scalar};
use crate::geometry::{
    merge_fragments, polygon_inset, split_brick, split_grid, split_stripes, split_voronoi, FragmentSet, GeometryError,
    Orientation, Point, Polygon, MIN_FRAGMENT_AREA,
};
use crate::motifs::{MotifDef, MotifRegistry};
use crate::rng::{derive_seed, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    /// Decimal places kept in path coordinates, 1 to 6.
    pub precision: u32,
    /// Raster edge length in pixels, when a PNG is wanted.
    pub raster_size: Option<u32>,
}

impl Default for RenderOptions {
    fn default() -> RenderOptions {
        RenderOptions { precision: 3, raster_size: None }
    }
}

/// A polygon whose corners are optionally rounded by `corner_radius`.
#[derive(Clone, Debug, PartialEq)]
pub struct Shape {
    pub polygon: Polygon,
    pub corner_radius: f64,
}

/// Row-major 2×3 affine map `[a b c d e f]`, as in SVG's `matrix()`:
/// `x' = a·x + c·y + e`, `y' = b·x + d·y + f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine(pub [f64; 6]);

impl Affine {
    pub fn apply(&self, p: Point) -> Point {
        let [a, b, c, d, e, f] = self.0;
        Point::new(a * p.x + c * p.y + e, b * p.x + d * p.y + f)
    }

    /// Uniform scale factor magnitude, `sqrt(|det|)`.
    pub fn scale(&self) -> f64 {
        let [a, b, c, d, ..] = self.0;
        (a * d - b * c).abs().sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    FilledPath { shape: Shape, fill: Color, opacity: f64 },
    StrokedPath { shape: Shape, stroke: Color, width: f64, opacity: f64 },
    /// `transform` maps the motif's unit-box coordinates onto the canvas.
    MotifInstance { motif_id: String, transform: Affine, fill: Option<Color>, opacity: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneGraph {
    pub canvas: CanvasSpec,
    /// Referenced motifs, sorted by id.
    pub defs: Vec<MotifDef>,
    /// Paint order.
    pub elements: Vec<Element>,
    pub warnings: Vec<Diagnostic>,
}

impl SceneGraph {
    pub fn empty(canvas: CanvasSpec) -> SceneGraph {
        SceneGraph { canvas, defs: Vec::new(), elements: Vec::new(), warnings: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RenderError {
    #[error("{path}: {source}")]
    Geometry { path: NodePath, source: GeometryError },
    #[error("{path}: {source}")]
    Field { path: NodePath, source: FieldError },
    #[error("{path}: unknown motif `{id}`")]
    UnknownMotif { path: NodePath, id: String },
    #[error("rasterization failed: {0}")]
    Raster(String),
}

impl RenderError {
    pub fn path(&self) -> Option<&NodePath> {
        match self {
            RenderError::Geometry { path, .. } | RenderError::Field { path, .. } | RenderError::UnknownMotif { path, .. } => {
                Some(path)
            }
            RenderError::Raster(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternImage {
    pub svg: String,
    /// PNG bytes, present only when a raster size was requested.
    pub raster: Option<Vec<u8>>,
}

fn fragment(canvas: &CanvasSpec, node: &Node, seed: Seed) -> Result<FragmentSet, GeometryError> {
    let int = |name| node.int(name).unwrap_or(0);
    match node.kind {
        NodeKind::Grid => split_grid(canvas, int("rows"), int("cols")),
        NodeKind::Brick => split_brick(canvas, int("rows"), int("cols"), node.num("offset").unwrap_or(0.0)),
        NodeKind::Stripes => {
            let orientation = node.ident("orientation").and_then(Orientation::from_name).unwrap_or(Orientation::Horizontal);
            split_stripes(canvas, int("count"), orientation)
        }
        NodeKind::Voronoi => split_voronoi(canvas, int("sites"), seed, int("relax")),
        other => unreachable!("{other} is not a fragmenter"),
    }
}

fn eval_value(v: &Value, ctx: &FieldContext<'_>) -> Result<FieldValue, FieldError> {
    match v {
        Value::Num(n) => Ok(FieldValue::Number(n.to_f64())),
        Value::Color(c) => Ok(FieldValue::Color(*c)),
        Value::Field(f) => eval_field(f, ctx),
        Value::Ident(_) => Err(FieldError::Type { expected: FieldType::Number, found: FieldType::Color }),
    }
}

/// A parameter evaluated for one fragment, with errors pinned to its path.
struct Params<'a> {
    node: &'a Node,
    path: NodePath,
}

impl Params<'_> {
    fn value(&self, name: &str, ctx: &FieldContext<'_>) -> Result<Option<FieldValue>, RenderError> {
        self.node
            .get(name)
            .map(|v| eval_value(v, ctx))
            .transpose()
            .map_err(|source| RenderError::Field { path: self.path.with_param(name), source })
    }

    fn number(&self, name: &str, ctx: &FieldContext<'_>) -> Result<f64, RenderError> {
        let v = self.value(name, ctx)?.unwrap_or(FieldValue::Number(0.0));
        v.as_number().map_err(|source| RenderError::Field { path: self.path.with_param(name), source })
    }

    fn color(&self, name: &str, ctx: &FieldContext<'_>) -> Result<Option<Color>, RenderError> {
        self.value(name, ctx)?
            .map(|v| v.as_color().map_err(|source| RenderError::Field { path: self.path.with_param(name), source }))
            .transpose()
    }
}

fn about(poly: &Polygon, center: Point, f: impl Fn(Point) -> Point) -> Polygon {
    poly.map(|p| center + f(p - center))
}

fn rotation(deg: f64) -> (f64, f64) {
    let r = deg.to_radians();
    (r.sin(), r.cos())
}

/// Interprets a validated program into a scene graph. `seed` feeds voronoi
/// sites and jitter fields only.
pub fn interpret(p: &Program, seed: Seed, registry: &MotifRegistry) -> Result<SceneGraph, RenderError> {
    let mut scene = SceneGraph::empty(p.canvas.clone());
    let mut used = BTreeSet::new();
    for (i, layer) in p.layers.iter().enumerate() {
        interpret_layer(p, i, layer, seed, registry, &mut scene, &mut used)?;
    }
    scene.defs = used.iter().filter_map(|id: &String| registry.get(id).cloned()).collect();
    Ok(scene)
}

fn interpret_layer(
    p: &Program,
    i: usize,
    layer: &Layer,
    seed: Seed,
    registry: &MotifRegistry,
    scene: &mut SceneGraph,
    used: &mut BTreeSet<String>,
) -> Result<(), RenderError> {
    let canvas = &p.canvas;
    let geo = |path: NodePath| move |source| RenderError::Geometry { path, source };
    let mut fs = fragment(canvas, &layer.fragmenter, derive_seed(seed, "voronoi", i as u64))
        .map_err(geo(NodePath::new(PathRoot::Fragmenter(i))))?;
    for (j, m) in layer.merges.iter().enumerate() {
        let key = match m.get("key") {
            Some(Value::Field(f)) => f.clone(),
            Some(Value::Num(n)) => FieldExpr::Const(Scalar::Num(*n)),
            _ => FieldExpr::Const(Scalar::Num(Default::default())),
        };
        fs = merge_fragments(&fs, &key, canvas, seed).map_err(geo(NodePath::new(PathRoot::Merge(i, j))))?;
    }

    let mut shapes: Vec<Option<Shape>> =
        fs.fragments.iter().map(|f| Some(Shape { polygon: f.polygon.clone(), corner_radius: 0.0 })).collect();
    let mut dropped = 0usize;
    for (j, op) in layer.fragment_ops.iter().enumerate() {
        let params = Params { node: op, path: NodePath::new(PathRoot::FragmentOp(i, j)) };
        for (frag, slot) in fs.fragments.iter().zip(shapes.iter_mut()) {
            let Some(shape) = slot.as_mut() else { continue };
            let ctx = fs.context(frag, canvas, seed);
            let center = shape.polygon.centroid();
            match op.kind {
                NodeKind::Inset => {
                    let d = params.number("distance", &ctx)?;
                    match polygon_inset(&shape.polygon, d) {
                        Some(poly) => shape.polygon = poly,
                        None => *slot = None,
                    }
                }
                NodeKind::Scale => {
                    let k = params.number("factor", &ctx)?;
                    shape.polygon = about(&shape.polygon, center, |v| v * k);
                    shape.corner_radius *= k;
                }
                NodeKind::Rotate => {
                    let (sin, cos) = rotation(params.number("angle", &ctx)?);
                    shape.polygon = about(&shape.polygon, center, |v| Point::new(v.x * cos - v.y * sin, v.x * sin + v.y * cos));
                }
                NodeKind::Round => shape.corner_radius = params.number("radius", &ctx)?.max(0.0),
                other => unreachable!("{other} is not a fragment op"),
            }
            if slot.as_ref().is_some_and(|s| s.polygon.area() < MIN_FRAGMENT_AREA) {
                *slot = None;
            }
            if slot.is_none() {
                dropped += 1;
            }
        }
    }
    if dropped > 0 {
        scene.warnings.push(Diagnostic::warning(
            NodePath::new(PathRoot::Layer(i)),
            format!("{dropped} fragments fell below {MIN_FRAGMENT_AREA} px² and were dropped"),
        ));
    }

    let opacity = layer.opacity.to_f64();
    for (j, style) in layer.styles.iter().enumerate() {
        let params = Params { node: style, path: NodePath::new(PathRoot::Style(i, j)) };
        for (frag, slot) in fs.fragments.iter().zip(&shapes) {
            let Some(shape) = slot else { continue };
            let ctx = fs.context(frag, canvas, seed);
            match style.kind {
                NodeKind::Fill => {
                    let fill = params.color("color", &ctx)?.unwrap_or(Color::BLACK);
                    scene.elements.push(Element::FilledPath { shape: shape.clone(), fill, opacity });
                }
                NodeKind::Outline => {
                    let stroke = params.color("color", &ctx)?.unwrap_or(Color::BLACK);
                    let width = params.number("width", &ctx)?;
                    if width > 0.0 {
                        scene.elements.push(Element::StrokedPath { shape: shape.clone(), stroke, width, opacity });
                    }
                }
                NodeKind::PlaceMotif => {
                    let id = style.ident("motif").unwrap_or_default();
                    let motif = registry
                        .get(id)
                        .ok_or_else(|| RenderError::UnknownMotif { path: params.path.with_param("motif"), id: id.to_string() })?;
                    let margin = style.num("margin").unwrap_or(0.0);
                    let factor = params.number("scale", &ctx)?;
                    let angle = params.number("rotate", &ctx)?;
                    let flip = params.number("flip", &ctx)? >= 0.5;
                    let fill = params.color("fill", &ctx)?;
                    if let Some(transform) = fit_motif(motif, &shape.polygon, margin, factor, angle, flip) {
                        used.insert(motif.id.clone());
                        scene.elements.push(Element::MotifInstance { motif_id: motif.id.clone(), transform, fill, opacity });
                    }
                }
                other => unreachable!("{other} is not a style"),
            }
        }
    }
    Ok(())
}

/// Uniformly scales the motif to fit the fragment's bounding box shrunk by
/// `margin`, centers it on the fragment centroid, then applies the
/// per-fragment scale, rotation (degrees) and horizontal mirror.
fn fit_motif(motif: &MotifDef, poly: &Polygon, margin: f64, factor: f64, angle: f64, flip: bool) -> Option<Affine> {
    let (lo, hi) = poly.bbox();
    let (mlo, mhi) = motif.bbox();
    let (mw, mh) = (mhi.x - mlo.x, mhi.y - mlo.y);
    let fit = ((hi.x - lo.x) * (1.0 - margin) / mw).min((hi.y - lo.y) * (1.0 - margin) / mh);
    let s = fit * factor;
    if !(s.is_finite() && s > 0.0) {
        return None;
    }
    let sx = if flip { -s } else { s };
    let (sin, cos) = rotation(angle);
    let (a, b, c, d) = (cos * sx, sin * sx, -sin * s, cos * s);
    let mc = (mlo + mhi) * 0.5;
    let center = poly.centroid();
    let e = center.x - (a * mc.x + c * mc.y);
    let f = center.y - (b * mc.x + d * mc.y);
    Some(Affine([a, b, c, d, e, f]))
}

/// Interprets, emits SVG and rasterizes with resvg when asked.
pub fn render(p: &Program, seed: Seed, opts: &RenderOptions, registry: &MotifRegistry) -> Result<PatternImage, RenderError> {
    render_with(p, seed, opts, registry, &ResvgRasterizer)
}

pub fn render_with(
    p: &Program,
    seed: Seed,
    opts: &RenderOptions,
    registry: &MotifRegistry,
    rasterizer: &dyn Rasterizer,
) -> Result<PatternImage, RenderError> {
    let svg = emit_svg(&interpret(p, seed, registry)?, opts);
    let raster = opts.raster_size.map(|size| rasterizer.rasterize(&svg, size)).transpose()?;
    Ok(PatternImage { svg, raster })
}
