//! Deterministic SVG text for a scene graph.

use std::fmt::Write;

use crate::geometry::Point;
use crate::motifs::MotifDef;

use super::{Element, RenderOptions, SceneGraph, Shape};

/// Motif definitions are written in a box of this size so their coordinates
/// survive rounding; instance transforms divide it back out.
const MOTIF_DEF_SIZE: f64 = 100.0;
/// Decimal places for `matrix()` entries.
const TRANSFORM_PRECISION: u32 = 6;

fn num(v: f64, precision: u32) -> String {
    let mut s = format!("{:.*}", precision as usize, v);
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

fn point(out: &mut String, p: Point, precision: u32) {
    let _ = write!(out, "{} {}", num(p.x, precision), num(p.y, precision));
}

/// `M`/`L`/`Z` path data, with one elliptical arc per corner when the shape
/// is rounded. The tangent distance at each corner is `r·tan(φ/2)` for turn
/// angle φ, capped at half the shorter incident edge.
pub fn shape_path_data(shape: &Shape, precision: u32) -> String {
    let pts = &shape.polygon.points;
    let n = pts.len();
    let mut d = String::new();
    if n == 0 {
        return d;
    }
    if shape.corner_radius <= 0.0 {
        for (i, &p) in pts.iter().enumerate() {
            d.push_str(if i == 0 { "M " } else { " L " });
            point(&mut d, p, precision);
        }
        d.push_str(" Z");
        return d;
    }
    for i in 0..n {
        let (prev, v, next) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
        let (inc, out) = (v - prev, next - v);
        let (li, lo) = (inc.length(), out.length());
        let (u, w) = (inc * (1.0 / li), out * (1.0 / lo));
        let turn = u.cross(w).atan2(u.dot(w)).abs();
        let half = (turn / 2.0).tan();
        let t = (shape.corner_radius * half).min(li.min(lo) / 2.0);
        let rho = if half > 1e-12 { t / half } else { 0.0 };
        let sweep = if u.cross(w) > 0.0 { 1 } else { 0 };
        d.push_str(if i == 0 { "M " } else { " L " });
        point(&mut d, v - u * t, precision);
        let r = num(rho, precision);
        let _ = write!(d, " A {r} {r} 0 0 {sweep} ");
        point(&mut d, v + w * t, precision);
    }
    d.push_str(" Z");
    d
}

fn def_id(id: &str) -> String {
    let safe: String = id.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '-' }).collect();
    format!("motif-{safe}")
}

fn def_path(def: &MotifDef, precision: u32) -> String {
    let mut d = String::new();
    for sub in &def.subpaths {
        for (i, &p) in sub.iter().enumerate() {
            if !d.is_empty() {
                d.push(' ');
            }
            d.push_str(if i == 0 { "M " } else { "L " });
            point(&mut d, p * MOTIF_DEF_SIZE, precision);
        }
        d.push_str(" Z");
    }
    d
}

fn opacity_attr(opacity: f64) -> String {
    if opacity >= 1.0 {
        String::new()
    } else {
        format!(" opacity=\"{}\"", num(opacity, 6))
    }
}

/// Serializes the scene. Attributes are written in alphabetical order and
/// the output depends only on the scene and `opts`.
pub fn emit_svg(g: &SceneGraph, opts: &RenderOptions) -> String {
    let prec = opts.precision.clamp(1, 6);
    let (w, h) = (g.canvas.width_px(), g.canvas.height_px());
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg height=\"{h}\" version=\"1.1\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\">",
        w = num(w, prec),
        h = num(h, prec),
    );
    if !g.defs.is_empty() {
        out.push_str("<defs>\n");
        for def in &g.defs {
            let rule = if def.even_odd { " fill-rule=\"evenodd\"" } else { "" };
            let _ = writeln!(out, "<path d=\"{}\"{rule} id=\"{}\"/>", def_path(def, prec), def_id(&def.id));
        }
        out.push_str("</defs>\n");
    }
    let _ = writeln!(
        out,
        "<rect fill=\"{}\" height=\"{}\" width=\"{}\" x=\"0\" y=\"0\"/>",
        g.canvas.background,
        num(h, prec),
        num(w, prec)
    );
    for e in &g.elements {
        match e {
            Element::FilledPath { shape, fill, opacity } => {
                let _ = writeln!(out, "<path d=\"{}\" fill=\"{fill}\"{}/>", shape_path_data(shape, prec), opacity_attr(*opacity));
            }
            Element::StrokedPath { shape, stroke, width, opacity } => {
                let _ = writeln!(
                    out,
                    "<path d=\"{}\" fill=\"none\"{} stroke=\"{stroke}\" stroke-width=\"{}\"/>",
                    shape_path_data(shape, prec),
                    opacity_attr(*opacity),
                    num(*width, prec)
                );
            }
            Element::MotifInstance { motif_id, transform, fill, opacity } => {
                let [a, b, c, d, e, f] = transform.0;
                let k = 1.0 / MOTIF_DEF_SIZE;
                let m: Vec<String> = [a * k, b * k, c * k, d * k, e, f].iter().map(|&v| num(v, TRANSFORM_PRECISION)).collect();
                let fill = fill.map(|c| format!(" fill=\"{c}\"")).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "<use{fill}{} transform=\"matrix({})\" xlink:href=\"#{}\"/>",
                    opacity_attr(*opacity),
                    m.join(" "),
                    def_id(motif_id)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Color;
    use crate::dsl::CanvasSpec;
    use crate::geometry::Polygon;
    use crate::motifs::MotifRegistry;
    use crate::parser::parse;
    use crate::render::interpret;

    fn svg_of(text: &str) -> String {
        let g = interpret(&parse(text).unwrap(), 0, &MotifRegistry::builtin()).unwrap();
        emit_svg(&g, &RenderOptions::default())
    }

    #[test]
    fn number_formatting() {
        assert_eq!(num(1.0, 3), "1");
        assert_eq!(num(0.12345, 3), "0.123");
        assert_eq!(num(-0.0001, 3), "0");
        assert_eq!(num(2.5, 1), "2.5");
        assert_eq!(num(-12.30, 2), "-12.3");
    }

    #[test]
    fn minimal_document() {
        let svg = svg_of("(pattern (canvas :width 256 :height 256 :background \"#FFFFFF\") (layer (grid :rows 2 :cols 2) (fill :color (cycle :key id :colors (\"#112233\" \"#445566\")))))");
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let drawn: Vec<_> = doc.root_element().children().filter(|n| n.is_element()).collect();
        assert_eq!(drawn.len(), 5);
        assert_eq!(drawn[0].tag_name().name(), "rect");
        assert_eq!(drawn[1].attribute("d"), Some("M 0 0 L 128 0 L 128 128 L 0 128 Z"));
        let fills: Vec<_> = drawn[1..].iter().map(|n| n.attribute("fill").unwrap()).collect();
        assert_eq!(fills, ["#112233", "#445566", "#112233", "#445566"]);
        assert!(svg.starts_with("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg height=\"256\" version=\"1.1\" viewBox=\"0 0 256 256\" width=\"256\""));
    }

    #[test]
    fn empty_scene_is_only_background() {
        let g = SceneGraph::empty(CanvasSpec::new(64, 32, Color::rgb(1, 2, 3)));
        let svg = emit_svg(&g, &RenderOptions::default());
        let doc = roxmltree::Document::parse(&svg).unwrap();
        assert_eq!(doc.root_element().children().filter(|n| n.is_element()).count(), 1);
        assert!(svg.contains("<rect fill=\"#010203\" height=\"32\" width=\"64\" x=\"0\" y=\"0\"/>"));
    }

    #[test]
    fn emission_is_repeatable() {
        let text = "(pattern (canvas :width 300 :height 200) (layer (voronoi :sites 9) (round :radius 3) (fill :color (ramp :axis id :from \"#102030\" :to \"#F0E0D0\")) (place-motif :motif ring :fill \"#FFFFFF\")))";
        assert_eq!(svg_of(text), svg_of(text));
        roxmltree::Document::parse(&svg_of(text)).unwrap();
    }

    #[test]
    fn motif_uses_reference_sorted_defs() {
        let svg = svg_of("(pattern (canvas :width 100 :height 100) (layer :opacity 0.5 (grid) (place-motif :motif star5) (place-motif :motif ring :fill \"#FF0000\")))");
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let defs: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("defs")).flat_map(|d| d.children().filter(|n| n.is_element())).collect();
        let ids: Vec<_> = defs.iter().map(|n| n.attribute("id").unwrap()).collect();
        assert_eq!(ids, ["motif-ring", "motif-star5"]);
        assert_eq!(defs[0].attribute("fill-rule"), Some("evenodd"));
        let uses: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("use")).collect();
        assert_eq!(uses.len(), 8);
        assert!(uses.iter().all(|u| u.attribute("opacity") == Some("0.5")));
        assert_eq!(uses[0].attribute("fill"), None);
        assert_eq!(uses[4].attribute("fill"), Some("#FF0000"));
        // 50px cells, 0.9 fit: 45px from a 100-unit def.
        assert_eq!(uses[4].attribute("transform"), Some("matrix(0.45 0 0 0.45 2.5 2.5)"));
    }

    #[test]
    fn transparent_layer_keeps_its_elements() {
        let svg = svg_of("(pattern (canvas :width 100 :height 100) (layer :opacity 0 (grid) (fill)))");
        assert_eq!(svg.matches("opacity=\"0\"").count(), 4);
    }

    #[test]
    fn rounded_square_has_one_arc_per_corner() {
        let shape = Shape { polygon: Polygon::rect(0.0, 0.0, 10.0, 10.0), corner_radius: 2.0 };
        let d = shape_path_data(&shape, 3);
        assert_eq!(d, "M 0 2 A 2 2 0 0 1 2 0 L 8 0 A 2 2 0 0 1 10 2 L 10 8 A 2 2 0 0 1 8 10 L 2 10 A 2 2 0 0 1 0 8 Z");
        let big = Shape { polygon: Polygon::rect(0.0, 0.0, 10.0, 4.0), corner_radius: 50.0 };
        assert_eq!(shape_path_data(&big, 3).matches(" A ").count(), 4);
        assert!(shape_path_data(&big, 3).starts_with("M 0 2 A 2 2"));
    }
}
