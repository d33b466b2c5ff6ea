//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any fails.
//!
//! ```sh
//! cargo test -p splitweave-cli --test acceptance
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use splitweave::dsl::{ast_equals, CanvasSpec, Layer, Node, NodeKind, Program, SlotKind, StyleTag, Value};
use splitweave::edits::{
    apply_edit, audit_dataset, inverse_of_insert, parse_edit, read_manifest, sample_edit, write_dataset, DatasetSpec,
    EditDescriptor, EditError, EditKind, NodeSelector, Payload, QuartetGenerator, Target, MEMBERS,
};
use splitweave::field::{eval_field, jitter_unit, Axis, FieldExpr, FieldValue, Scalar, ValueList};
use splitweave::geometry::{
    convex_intersection_area, split_brick, split_grid, split_stripes, split_voronoi, FragmentSet, Orientation, Point,
};
use splitweave::motifs::MotifRegistry;
use splitweave::parser::{parse, print};
use splitweave::render::{interpolate_programs, RenderOptions};
use splitweave::rng::{derive_seed, unit_interval};
use splitweave::samplers::{sample_mtp, sample_sfp, Sampler, SamplerConfig};
use splitweave::Color;
use splitweave_cli::{cmd_animate, Context};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

/// Deterministic integer in `lo..=hi` for `(tag, i)`.
fn pick(tag: &str, i: u64, lo: i64, hi: i64) -> i64 {
    lo + (derive_seed(42, tag, i) % (hi - lo + 1) as u64) as i64
}

fn unit(tag: &str, i: u64) -> f64 {
    unit_interval(derive_seed(42, tag, i))
}

fn program(style: StyleTag, seed: u64) -> Program {
    match style {
        StyleTag::Mtp => sample_mtp(seed),
        _ => sample_sfp(seed),
    }
}

fn generate(config: &SamplerConfig, registry: &MotifRegistry, count: usize, out: &Path, workers: usize) -> Result<(), String> {
    let gen = QuartetGenerator { sampler: Sampler { config, registry }, render: RenderOptions::default() };
    let spec = DatasetSpec {
        count,
        styles: vec![StyleTag::Mtp, StyleTag::Sfp],
        master_seed: 42,
        out_dir: out.to_path_buf(),
        workers,
    };
    write_dataset(&gen, &spec).map(|_| ()).map_err(|e| e.to_string())
}

/// Every file under `dir`, relative path and bytes, sorted by path.
fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
        for entry in fs::read_dir(dir).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                walk(root, &path, out);
            } else {
                out.push((path.strip_prefix(root).unwrap().to_path_buf(), fs::read(&path).unwrap()));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}

fn quartet_consistency(work: &Path) -> Outcome {
    let (config, registry) = (SamplerConfig::default(), MotifRegistry::builtin());
    let dir = work.join("consistency");
    let started = Instant::now();
    if let Err(e) = generate(&config, &registry, 1000, &dir, 4) {
        return outcome(false, e);
    }
    let records = read_manifest(&dir).unwrap();
    let (mut relation, mut changed) = (0, 0);
    for r in &records {
        let e = parse_edit(&r.edit).unwrap();
        let base = dir.join(&r.a).parent().unwrap().to_path_buf();
        let load = |name: &str| parse(&fs::read_to_string(base.join(format!("{name}.sw"))).unwrap()).unwrap();
        let svg = |name: &str| fs::read(base.join(format!("{name}.svg"))).unwrap();
        let [a, a2, b, b2] = MEMBERS.map(load);
        let holds = |p: &Program, q: &Program| apply_edit(p, &e).is_ok_and(|x| ast_equals(&x, q));
        relation += usize::from(holds(&a, &a2) && holds(&b, &b2));
        changed += usize::from(svg("a") != svg("a_prime") && svg("b") != svg("b_prime"));
    }
    let elapsed = started.elapsed();
    let n = records.len();
    outcome(
        n == 1000 && relation == n && changed == n && elapsed <= Duration::from_secs(300),
        format!("{relation}/{n} satisfy the edit relation, {changed}/{n} change both SVGs, {:.1}s", elapsed.as_secs_f64()),
    )
}

fn dataset_determinism(work: &Path) -> Outcome {
    let (config, registry) = (SamplerConfig::default(), MotifRegistry::builtin());
    let runs = [("first", 8), ("second", 8), ("serial", 1)];
    for (name, workers) in runs {
        if let Err(e) = generate(&config, &registry, 1000, &work.join(name), workers) {
            return outcome(false, e);
        }
    }
    let [first, second, serial] = runs.map(|(name, _)| snapshot(&work.join(name)));
    let files = first.len();
    outcome(
        files == 1000 * 8 + 1 && first == second && first == serial,
        format!("{files} files; repeat identical: {}, 1 vs 8 workers identical: {}", first == second, first == serial),
    )
}

fn parser_round_trip() -> Outcome {
    let mut failures = 0;
    for style in [StyleTag::Mtp, StyleTag::Sfp] {
        for i in 0..1000 {
            let p = program(style, derive_seed(42, "round-trip", i));
            let text = print(&p);
            match parse(&text) {
                Ok(back) if ast_equals(&back, &p) && print(&back) == text => {}
                _ => failures += 1,
            }
        }
    }
    outcome(failures == 0, format!("{} of 2000 programs round-trip with idempotent printing", 2000 - failures))
}

fn fragmentation(i: u64) -> (CanvasSpec, FragmentSet) {
    let c = CanvasSpec::new(pick("w", i, 64, 768), pick("h", i, 64, 768), Color::WHITE);
    let fs = match i % 4 {
        0 => split_grid(&c, pick("rows", i, 1, 16), pick("cols", i, 1, 16)),
        1 => split_brick(&c, pick("rows", i, 1, 12), pick("cols", i, 1, 12), unit("offset", i)),
        2 => {
            let o = if i % 8 == 2 { Orientation::Horizontal } else { Orientation::Vertical };
            split_stripes(&c, pick("stripes", i, 1, 32), o)
        }
        _ => split_voronoi(&c, pick("sites", i, 2, 48), derive_seed(42, "voronoi", i), pick("relax", i, 0, 2)),
    };
    (c, fs.expect("parameters are in range"))
}

fn geometry_partition() -> Outcome {
    let (mut worst_area, mut worst_overlap) = (0.0f64, 0.0f64);
    for i in 0..500 {
        let (c, fs) = fragmentation(i);
        let wh = c.width_px() * c.height_px();
        let total: f64 = fs.fragments.iter().map(|f| f.polygon.area()).sum();
        worst_area = worst_area.max((total - wh).abs() / wh);
        for (j, a) in fs.fragments.iter().enumerate() {
            for b in &fs.fragments[j + 1..] {
                worst_overlap = worst_overlap.max(convex_intersection_area(&a.polygon, &b.polygon) / wh);
            }
        }
    }
    outcome(
        worst_area <= 5e-3 && worst_overlap <= 1e-3,
        format!("500 fragmentations: worst |area-WH|/WH = {worst_area:.2e}, worst pairwise overlap/WH = {worst_overlap:.2e}"),
    )
}

fn voronoi_nearest_site() -> Outcome {
    let (mut checked, mut agree) = (0usize, 0usize);
    for split in 0..50 {
        let c = CanvasSpec::new(pick("vw", split, 128, 640), pick("vh", split, 128, 640), Color::WHITE);
        let fs = split_voronoi(&c, pick("vn", split, 2, 64), derive_seed(42, "nearest", split), 0).unwrap();
        let sites: Vec<Point> = fs.fragments.iter().map(|f| f.site.expect("voronoi cells keep their site")).collect();
        // 40 x 25 lattice at cell centres.
        for k in 0..1000 {
            let p = Point::new((k % 40) as f64 + 0.5, (k / 40) as f64 + 0.5);
            let p = Point::new(p.x * c.width_px() / 40.0, p.y * c.height_px() / 25.0);
            let mut order: Vec<usize> = (0..sites.len()).collect();
            order.sort_by(|&a, &b| sites[a].distance(p).total_cmp(&sites[b].distance(p)));
            let (s1, s2) = (sites[order[0]], sites[order[1]]);
            let to_bisector = (s2.distance(p).powi(2) - s1.distance(p).powi(2)) / (2.0 * s1.distance(s2));
            if to_bisector < 0.5 {
                continue;
            }
            checked += 1;
            agree += usize::from(fs.fragments[order[0]].polygon.contains(p));
        }
    }
    let rate = agree as f64 / checked.max(1) as f64;
    outcome(rate >= 0.999, format!("{agree}/{checked} lattice points lie in their nearest site's cell ({:.4})", rate))
}

fn field_identities() -> Outcome {
    let mut broken = Vec::new();
    let eval = |fs: &FragmentSet, c: &CanvasSpec, f: &FieldExpr, seed: u64| -> Vec<FieldValue> {
        fs.fragments.iter().map(|fr| eval_field(f, &fs.context(fr, c, seed)).unwrap()).collect()
    };
    for i in 0..200 {
        let (c, fs) = fragmentation(i);
        let k = Color::rgb(pick("r", i, 0, 255) as u8, pick("g", i, 0, 255) as u8, pick("b", i, 0, 255) as u8);
        let constant = eval(&fs, &c, &FieldExpr::Const(Scalar::Color(k)), i);
        let axes: &[Axis] = if fs.row_count.is_some() { &[Axis::Row, Axis::Col, Axis::Id] } else { &[Axis::Id] };
        for &axis in axes {
            let alt = FieldExpr::Alt { axis, values: ValueList::Colors(vec![k]) };
            let ramp = FieldExpr::Ramp { axis, from: Scalar::Color(k), to: Scalar::Color(k) };
            if eval(&fs, &c, &alt, i) != constant {
                broken.push(format!("alt on {axis:?}"));
            }
            if eval(&fs, &c, &ramp, i) != constant {
                broken.push(format!("ramp on {axis:?}"));
            }
        }
    }
    let c = CanvasSpec::new(100, 80, Color::WHITE);
    let one = split_grid(&c, 1, 1).unwrap();
    let checker = FieldExpr::Checker { values: ValueList::nums(&[3.0, 7.0]) };
    if eval(&one, &c, &checker, 0) != eval(&one, &c, &FieldExpr::Const(Scalar::Num(splitweave::Num::from_int(3))), 0) {
        broken.push("checker on 1x1".into());
    }
    let samples: Vec<f64> = (0..10_000).map(|id| jitter_unit(42, 7, id)).collect();
    if samples.iter().enumerate().any(|(id, &u)| u != jitter_unit(42, 7, id)) {
        broken.push("jitter repeat".into());
    }
    let mut sorted = samples.clone();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let ks = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (x - i as f64 / n).abs().max(((i + 1) as f64 / n - x).abs()))
        .fold(0.0, f64::max);
    if ks >= 0.02 {
        broken.push(format!("jitter KS {ks:.4}"));
    }
    let detail = if broken.is_empty() {
        format!("identities hold on 200 fragmentations; jitter KS = {ks:.4} on 10^4 draws")
    } else {
        format!("broken: {}", broken.join(", "))
    };
    outcome(broken.is_empty(), detail)
}

fn negatives() -> Vec<(Program, EditDescriptor)> {
    let base = parse("(pattern (canvas :width 64 :height 64) (layer (grid :rows 2 :cols 2) (fill :color \"#336699\")))").unwrap();
    let four_styles = {
        let mut p = base.clone();
        p.layers[0].styles = vec![Node::new(NodeKind::Fill); 4];
        p
    };
    let eight_layers = {
        let mut p = base.clone();
        p.layers = vec![p.layers[0].clone(); 8];
        p
    };
    let fragmenter = NodeSelector::new(Target::Slot(SlotKind::Fragmenter), 0);
    let layer = Layer::new(Node::new(NodeKind::Grid), Node::new(NodeKind::Fill));
    vec![
        (base.clone(), EditDescriptor::remove(fragmenter.clone())),
        (base.clone(), EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Fill), 0))),
        (base.clone(), EditDescriptor::remove(NodeSelector::new(Target::Layer, 0))),
        (base.clone(), EditDescriptor::remove(NodeSelector::new(Target::Node(NodeKind::Outline), 0))),
        (base.clone(), EditDescriptor::replace(fragmenter, Payload::Node(Node::new(NodeKind::Outline)))),
        (base.clone(), EditDescriptor::insert(NodeSelector::new(Target::Layer, 3), Payload::Node(Node::new(NodeKind::Fill)))),
        (base.clone(), EditDescriptor::insert(NodeSelector::new(Target::Layer, 0), Payload::Node(Node::new(NodeKind::Brick)))),
        (
            base,
            EditDescriptor::replace(NodeSelector::param(Target::Node(NodeKind::Fill), 0, "scale"), Payload::Value(Value::int(1))),
        ),
        (four_styles, EditDescriptor::insert(NodeSelector::new(Target::Layer, 0), Payload::Node(Node::new(NodeKind::Fill)))),
        (eight_layers, EditDescriptor::insert(NodeSelector::new(Target::Pattern, 0), Payload::Layer(layer))),
    ]
}

fn insert_remove_inverse() -> Outcome {
    let (mut pairs, mut restored, mut draws) = (0, 0, 0u64);
    while pairs < 500 && draws < 100_000 {
        let style = if draws % 2 == 0 { StyleTag::Mtp } else { StyleTag::Sfp };
        let p = program(style, derive_seed(42, "inverse-program", draws));
        let e = sample_edit(derive_seed(42, "inverse-edit", draws), style);
        draws += 1;
        if e.kind != EditKind::Insert {
            continue;
        }
        let Ok(q) = apply_edit(&p, &e) else { continue };
        pairs += 1;
        let back = inverse_of_insert(&p, &e).and_then(|undo| apply_edit(&q, &undo).ok());
        restored += usize::from(back.is_some_and(|b| ast_equals(&b, &p)));
    }
    let negatives = negatives();
    let rejected = negatives.iter().filter(|(p, e)| matches!(apply_edit(p, e), Err(EditError::Incompatible(_)))).count();
    outcome(
        pairs == 500 && restored == pairs && rejected == negatives.len(),
        format!("{restored}/{pairs} inserts undone; {rejected}/{} negatives rejected as incompatible", negatives.len()),
    )
}

fn animate_endpoints(work: &Path) -> Outcome {
    let ctx = Context { registry: MotifRegistry::builtin(), config: SamplerConfig::default() };
    let (mut pairs, mut exact, mut draws) = (0, 0, 0u64);
    while pairs < 40 && draws < 10_000 {
        let style = if draws % 2 == 0 { StyleTag::Mtp } else { StyleTag::Sfp };
        let p = program(style, derive_seed(42, "animate", draws));
        let e = sample_edit(derive_seed(42, "animate-edit", draws), style);
        draws += 1;
        if e.kind != EditKind::Replace {
            continue;
        }
        let Ok(q) = apply_edit(&p, &e) else { continue };
        if interpolate_programs(&p, &q, 0.5).is_err() {
            continue;
        }
        let dir = work.join(format!("animate-{pairs}"));
        fs::create_dir_all(&dir).unwrap();
        let (pa, pb) = (dir.join("p.sw"), dir.join("q.sw"));
        fs::write(&pa, print(&p)).unwrap();
        fs::write(&pb, print(&q)).unwrap();
        pairs += 1;
        if cmd_animate(&ctx, &pa, &pb, 2, &dir.join("frames"), 0).is_err() {
            continue;
        }
        let frame = |i: usize| parse(&fs::read_to_string(dir.join(format!("frames/frame_{i:04}.sw"))).unwrap()).unwrap();
        exact += usize::from(ast_equals(&frame(0), &p) && ast_equals(&frame(1), &q));
    }
    outcome(pairs == 40 && exact == pairs, format!("{exact}/{pairs} two-frame animations reproduce both endpoints"))
}

fn large_dataset(work: &Path) -> Outcome {
    let (config, registry) = (SamplerConfig::default(), MotifRegistry::builtin());
    let dir = work.join("large");
    let started = Instant::now();
    if let Err(e) = generate(&config, &registry, 10_000, &dir, 4) {
        return outcome(false, e);
    }
    let report = match audit_dataset(&dir) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let elapsed = started.elapsed();
    let _ = fs::remove_dir_all(&dir);
    outcome(
        report.records == 10_000 && report.is_clean() && elapsed <= Duration::from_secs(3600),
        format!(
            "{} quartets, {} audit problems, {:.1}s including audit",
            report.records,
            report.problems.len(),
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let work = tempfile::tempdir().expect("temporary directory");
    let criteria: Vec<(&str, Criterion)> = vec![
        ("quartet edit consistency (1,000 quartets, seed 42)", Box::new(|| quartet_consistency(work.path()))),
        ("dataset determinism (repeat, 1 vs 8 workers)", Box::new(|| dataset_determinism(work.path()))),
        ("parser round-trip and print idempotence (2,000 programs)", Box::new(parser_round_trip)),
        ("fragmentation partitions the canvas (500 fragmentations)", Box::new(geometry_partition)),
        ("voronoi nearest-site agreement (50 x 1,000 points)", Box::new(voronoi_nearest_site)),
        ("field identities, jitter determinism and uniformity", Box::new(field_identities)),
        ("insert/remove inverse (500 pairs) and incompatible negatives", Box::new(insert_remove_inverse)),
        ("two-frame animation reproduces its endpoints", Box::new(|| animate_endpoints(work.path()))),
        ("10,000 quartets without sampling exhaustion, clean audit", Box::new(|| large_dataset(work.path()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("[{}] {}. {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
