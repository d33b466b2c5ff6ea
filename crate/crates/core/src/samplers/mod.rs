//! Seeded program samplers for motif tiling (MTP) and split filling (SFP)
//! patterns.

mod config;
mod palette;

use rand::Rng;

pub use config::{
    EditWeights, FieldWeights, IntRange, MtpConfig, MtpEditWeights, RealRange, SamplerConfig, SfpConfig, SfpEditWeights,
};
pub use palette::{delta_e, hue_of, sample_palette, Palette, Scheme, MIN_DELTA_E};

use crate::color::Color;
use crate::dsl::{CanvasSpec, Layer, Node, NodeKind, Program, StyleTag, Value};
use crate::field::{Axis, FieldExpr, Scalar, ValueList};
use crate::motifs::MotifRegistry;
use crate::num::Num;
use crate::rng::{substream, Seed, Stream};

/// Index drawn with probability proportional to `weights`.
pub fn pick_weighted(rng: &mut Stream, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen_range(0.0..total);
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

pub fn int_in(rng: &mut Stream, r: IntRange) -> i64 {
    rng.gen_range(r[0]..=r[1])
}

/// Uniform in `r`, rounded to `decimals` places and kept inside `r`.
pub fn real_in(rng: &mut Stream, r: RealRange, decimals: i32) -> Num {
    let scale = 10f64.powi(decimals);
    let v = if r[0] < r[1] { rng.gen_range(r[0]..r[1]) } else { r[0] };
    let lo = (r[0] * scale).ceil() / scale;
    let hi = (r[1] * scale).floor() / scale;
    Num::from_f64(((v * scale).round() / scale).clamp(lo.min(hi), hi.max(lo)))
}

fn choose<T: Clone>(rng: &mut Stream, items: &[T]) -> T {
    items[rng.gen_range(0..items.len())].clone()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Const,
    Alt,
    Ramp,
    Checker,
}

impl FieldKind {
    pub const ALL: [FieldKind; 4] = [FieldKind::Const, FieldKind::Alt, FieldKind::Ramp, FieldKind::Checker];

    pub fn of(v: &Value) -> Option<FieldKind> {
        match v {
            Value::Num(_) | Value::Color(_) | Value::Field(FieldExpr::Const(_)) => Some(FieldKind::Const),
            Value::Field(FieldExpr::Alt { .. }) => Some(FieldKind::Alt),
            Value::Field(FieldExpr::Ramp { .. }) => Some(FieldKind::Ramp),
            Value::Field(FieldExpr::Checker { .. }) => Some(FieldKind::Checker),
            _ => None,
        }
    }
}

fn field_kind(rng: &mut Stream, w: &FieldWeights) -> FieldKind {
    FieldKind::ALL[pick_weighted(rng, &[w.constant, w.alt, w.ramp, w.checker])]
}

/// A numeric slot filled with a field of the given kind. Grid-like
/// fragmenters supply every axis, so any may be used.
pub fn numeric_field(rng: &mut Stream, kind: FieldKind, range: RealRange, decimals: i32) -> Value {
    let axis = choose(rng, &[Axis::Row, Axis::Col, Axis::Id]);
    let mut two = || {
        let a = real_in(rng, range, decimals);
        let b = real_in(rng, range, decimals);
        (a, b)
    };
    let (a, b) = two();
    match kind {
        FieldKind::Const => Value::Num(a),
        FieldKind::Alt => Value::Field(FieldExpr::Alt { axis, values: ValueList::Nums(vec![a, b]) }),
        FieldKind::Ramp => Value::Field(FieldExpr::Ramp { axis, from: Scalar::Num(a), to: Scalar::Num(b) }),
        FieldKind::Checker => Value::Field(FieldExpr::Checker { values: ValueList::Nums(vec![a, b]) }),
    }
}

/// A color slot over `colors` (at least one).
pub fn color_field(rng: &mut Stream, kind: FieldKind, colors: &[Color]) -> Value {
    let axis = choose(rng, &[Axis::Row, Axis::Col, Axis::Id]);
    let a = choose(rng, colors);
    let b = if colors.len() > 1 {
        let rest: Vec<Color> = colors.iter().copied().filter(|c| *c != a).collect();
        choose(rng, &rest)
    } else {
        a
    };
    match kind {
        FieldKind::Const => Value::Color(a),
        FieldKind::Alt => Value::Field(FieldExpr::Alt { axis, values: ValueList::Colors(vec![a, b]) }),
        FieldKind::Ramp => Value::Field(FieldExpr::Ramp { axis, from: Scalar::Color(a), to: Scalar::Color(b) }),
        FieldKind::Checker => Value::Field(FieldExpr::Checker { values: ValueList::Colors(vec![a, b]) }),
    }
}

/// Fragment count of each layer's fragmenter before merging, summed.
pub fn nominal_fragment_count(p: &Program) -> usize {
    p.layers
        .iter()
        .map(|l| {
            let f = &l.fragmenter;
            let get = |name| f.int(name).unwrap_or(0).max(0) as usize;
            match f.kind {
                NodeKind::Grid | NodeKind::Brick => get("rows") * get("cols"),
                NodeKind::Stripes => get("count"),
                NodeKind::Voronoi => get("sites"),
                _ => 0,
            }
        })
        .sum()
}

/// Draws a sampler's results from one substream per seed.
pub struct Sampler<'a> {
    pub config: &'a SamplerConfig,
    pub registry: &'a MotifRegistry,
}

impl Sampler<'_> {
    fn canvas(&self, background: Color) -> CanvasSpec {
        CanvasSpec::new(self.config.canvas_size, self.config.canvas_size, background)
    }

    pub fn mtp_fragmenter(&self, rng: &mut Stream) -> Node {
        let m = &self.config.mtp;
        if pick_weighted(rng, &[m.grid_weight, m.brick_weight]) == 0 {
            Node::new(NodeKind::Grid)
                .with("rows", Value::int(int_in(rng, m.grid_rows)))
                .with("cols", Value::int(int_in(rng, m.grid_cols)))
        } else {
            Node::new(NodeKind::Brick)
                .with("rows", Value::int(int_in(rng, m.brick_rows)))
                .with("cols", Value::int(int_in(rng, m.brick_cols)))
        }
    }

    pub fn motif(&self, rng: &mut Stream) -> String {
        let ids: Vec<&str> = self.registry.ids().collect();
        choose(rng, &ids).to_string()
    }

    pub fn mtp_scale(&self, rng: &mut Stream) -> Value {
        let kind = field_kind(rng, &self.config.mtp.fields);
        numeric_field(rng, kind, self.config.mtp.scale, 2)
    }

    pub fn mtp_rotate(&self, rng: &mut Stream) -> Value {
        let kind = field_kind(rng, &self.config.mtp.fields);
        let [lo, hi] = self.config.mtp.rotate;
        // Whole degrees, upper bound exclusive.
        numeric_field(rng, kind, [lo, (hi - 1.0).max(lo)], 0)
    }

    pub fn mtp_fill(&self, rng: &mut Stream, inks: &[Color]) -> Value {
        let kind = field_kind(rng, &self.config.mtp.fields);
        color_field(rng, kind, inks)
    }

    /// A full-size motif style.
    pub fn motif_style(&self, rng: &mut Stream, inks: &[Color]) -> Node {
        let m = &self.config.mtp;
        let mut node = Node::new(NodeKind::PlaceMotif)
            .with("motif", Value::ident(self.motif(rng)))
            .with("margin", Value::Num(real_in(rng, m.margin, 2)))
            .with("scale", self.mtp_scale(rng))
            .with("rotate", self.mtp_rotate(rng))
            .with("fill", self.mtp_fill(rng, inks));
        if rng.gen_bool(m.flip_prob) {
            node.set("flip", Value::Field(FieldExpr::Checker { values: ValueList::nums(&[0.0, 1.0]) }));
        }
        node
    }

    fn accent_style(&self, rng: &mut Stream, inks: &[Color]) -> Node {
        Node::new(NodeKind::PlaceMotif)
            .with("motif", Value::ident(self.motif(rng)))
            .with("scale", Value::Num(real_in(rng, self.config.mtp.accent_scale, 2)))
            .with("fill", Value::Color(choose(rng, inks)))
    }

    /// One motif layer over a fresh grid or brick.
    pub fn motif_layer(&self, rng: &mut Stream, inks: &[Color]) -> Layer {
        let fragmenter = self.mtp_fragmenter(rng);
        Layer::new(fragmenter, self.motif_style(rng, inks))
    }

    pub fn sample_mtp(&self, seed: Seed) -> Program {
        let m = &self.config.mtp;
        let palette = sample_palette(seed);
        let inks = palette.inks();
        let mut rng = substream(seed, "mtp", 0);
        let mut first = self.motif_layer(&mut rng, &inks);
        if rng.gen_bool(m.accent_prob) {
            first.styles.push(self.accent_style(&mut rng, &inks));
        }
        let mut layers = vec![first];
        if rng.gen_bool(m.second_layer_prob) {
            layers.push(self.motif_layer(&mut rng, &inks));
        }
        Program::new(self.canvas(palette.lightest()), layers, StyleTag::Mtp)
    }

    pub fn sfp_fragmenter(&self, rng: &mut Stream) -> Node {
        let s = &self.config.sfp;
        match pick_weighted(rng, &[s.voronoi_weight, s.stripes_weight, s.grid_weight, s.brick_weight]) {
            0 => Node::new(NodeKind::Voronoi)
                .with("sites", Value::int(int_in(rng, s.voronoi_sites)))
                .with("relax", Value::int(int_in(rng, s.voronoi_relax))),
            1 => Node::new(NodeKind::Stripes)
                .with("count", Value::int(int_in(rng, s.stripes_count)))
                .with("orientation", Value::ident(choose(rng, &["horizontal", "vertical"]))),
            2 => Node::new(NodeKind::Grid)
                .with("rows", Value::int(int_in(rng, s.grid_rows)))
                .with("cols", Value::int(int_in(rng, s.grid_cols))),
            _ => Node::new(NodeKind::Brick)
                .with("rows", Value::int(int_in(rng, s.brick_rows)))
                .with("cols", Value::int(int_in(rng, s.brick_cols))),
        }
    }

    /// Alternating merge key along rows or columns; repeated entries make
    /// neighbouring bands fuse.
    pub fn merge_key(&self, rng: &mut Stream) -> Value {
        let axis = choose(rng, &[Axis::Row, Axis::Col]);
        let len = rng.gen_range(2..=4);
        let mut keys: Vec<f64> = (0..len).map(|_| rng.gen_range(0..=2) as f64).collect();
        keys[1] = keys[0];
        Value::Field(FieldExpr::Alt { axis, values: ValueList::nums(&keys) })
    }

    /// Fill colors keyed by fragment id, which every fragmenter supplies.
    pub fn sfp_fill(&self, rng: &mut Stream, inks: &[Color]) -> Value {
        if rng.gen_bool(self.config.sfp.cycle_prob) || inks.len() < 2 {
            let mut colors = inks.to_vec();
            for i in (1..colors.len()).rev() {
                colors.swap(i, rng.gen_range(0..=i));
            }
            colors.truncate(rng.gen_range(2.min(colors.len())..=colors.len()));
            Value::Field(FieldExpr::Cycle { key: Axis::Id, values: ValueList::Colors(colors) })
        } else {
            let a = choose(rng, inks);
            let rest: Vec<Color> = inks.iter().copied().filter(|c| *c != a).collect();
            Value::Field(FieldExpr::Ramp { axis: Axis::Id, from: Scalar::Color(a), to: Scalar::Color(choose(rng, &rest)) })
        }
    }

    pub fn inset(&self, rng: &mut Stream) -> Node {
        let [lo, hi] = self.config.sfp.inset;
        Node::new(NodeKind::Inset).with("distance", Value::Num(real_in(rng, [lo.max(0.5), hi.max(0.5)], 1)))
    }

    pub fn outline(&self, rng: &mut Stream, color: Color) -> Node {
        Node::new(NodeKind::Outline)
            .with("color", Value::Color(color))
            .with("width", Value::Num(real_in(rng, self.config.sfp.outline_width, 1)))
    }

    pub fn sample_sfp(&self, seed: Seed) -> Program {
        let s = &self.config.sfp;
        let palette = sample_palette(seed);
        let inks = palette.inks();
        let mut rng = substream(seed, "sfp", 0);
        let fragmenter = self.sfp_fragmenter(&mut rng);
        let gridded = matches!(fragmenter.kind, NodeKind::Grid | NodeKind::Brick | NodeKind::Stripes);
        let mut layer = Layer::new(fragmenter, Node::new(NodeKind::Fill));
        if gridded && rng.gen_bool(s.merge_prob) {
            layer.merges.push(Node::new(NodeKind::Merge).with("key", self.merge_key(&mut rng)));
        }
        layer.styles[0].set("color", self.sfp_fill(&mut rng, &inks));
        if rng.gen_bool(s.inset_prob) {
            layer.fragment_ops.push(self.inset(&mut rng));
        }
        if rng.gen_bool(s.outline_prob) {
            layer.styles.push(self.outline(&mut rng, palette.darkest()));
        }
        Program::new(self.canvas(palette.lightest()), vec![layer], StyleTag::Sfp)
    }
}

/// MTP program with the default table and builtin motifs.
pub fn sample_mtp(seed: Seed) -> Program {
    let (config, registry) = (SamplerConfig::default(), MotifRegistry::builtin());
    Sampler { config: &config, registry: &registry }.sample_mtp(seed)
}

/// SFP program with the default table.
pub fn sample_sfp(seed: Seed) -> Program {
    let (config, registry) = (SamplerConfig::default(), MotifRegistry::builtin());
    Sampler { config: &config, registry: &registry }.sample_sfp(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{ast_equals, validate};

    #[test]
    fn samplers_are_deterministic() {
        assert!(ast_equals(&sample_mtp(7), &sample_mtp(7)));
        assert!(ast_equals(&sample_sfp(7), &sample_sfp(7)));
        assert!(!ast_equals(&sample_sfp(7), &sample_sfp(8)));
    }

    #[test]
    fn sampled_programs_validate() {
        for seed in 0..200 {
            for p in [sample_mtp(seed), sample_sfp(seed)] {
                let d = validate(&p);
                assert!(d.is_empty(), "seed {seed}: {d:?}");
            }
        }
    }

    #[test]
    fn real_in_stays_in_range() {
        let mut rng = substream(1, "t", 0);
        for _ in 0..1000 {
            let v = real_in(&mut rng, [0.4, 1.2], 2).to_f64();
            assert!((0.4..=1.2).contains(&v));
            assert_eq!(Num::from_f64(v), Num::from_f64((v * 100.0).round() / 100.0));
        }
    }

    #[test]
    fn weighted_pick_respects_zero_weights() {
        let mut rng = substream(2, "t", 0);
        for _ in 0..500 {
            assert_ne!(pick_weighted(&mut rng, &[1.0, 0.0, 2.0]), 1);
        }
    }
}
