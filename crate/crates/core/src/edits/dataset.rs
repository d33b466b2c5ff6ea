//! Dataset writer and auditor.
//!
//! Layout: `<out>/<style>/<id>/{a,a_prime,b,b_prime}.{svg,sw}` (plus `.png`
//! when a raster size is set) and `<out>/manifest.jsonl`, one JSON record
//! per quartet sorted by id, written after every quartet is on disk.

use std::collections::HashSet;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::{ast_equals, Program, StyleTag};
use crate::parser::{parse, print};
use crate::rng::{derive_seed, fnv1a, Seed};
use crate::samplers::nominal_fragment_count;

use super::apply::apply_edit;
use super::descriptor::{parse_edit, print_edit};
use super::quartet::{QuartetError, QuartetGenerator, MAX_SIMPLE_FRAGMENTS};

pub const MANIFEST: &str = "manifest.jsonl";
pub const MEMBERS: [&str; 4] = ["a", "a_prime", "b", "b_prime"];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Sampling(#[from] QuartetError),
    #[error("could not start {0} workers: {1}")]
    Workers(usize, String),
    #[error("{path}: bad manifest line: {message}")]
    Manifest { path: PathBuf, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io { path: path.to_path_buf(), source }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub id: String,
    pub seed: Seed,
    pub style: String,
    pub edit: String,
    pub a: String,
    pub a_prime: String,
    pub b: String,
    pub b_prime: String,
    pub split: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetSpec {
    pub count: usize,
    /// Assigned round-robin by index.
    pub styles: Vec<StyleTag>,
    pub master_seed: Seed,
    pub out_dir: PathBuf,
    pub workers: usize,
}

pub fn quartet_id(index: usize) -> String {
    format!("q{index:07}")
}

pub fn quartet_seed(master: Seed, index: usize) -> Seed {
    derive_seed(master, "quartet", index as u64)
}

/// `val` for about one id in twenty, by hash.
pub fn split_of(id: &str) -> &'static str {
    if fnv1a(id.as_bytes()) % 100 < 5 {
        "val"
    } else {
        "train"
    }
}

fn write_quartet(gen: &QuartetGenerator, spec: &DatasetSpec, index: usize) -> Result<ManifestRecord, DatasetError> {
    let id = quartet_id(index);
    let seed = quartet_seed(spec.master_seed, index);
    let style = spec.styles[index % spec.styles.len()];
    let mut q = gen.make_quartet(seed, style)?;
    q.id = id.clone();
    let rel = format!("{style}/{id}");
    let dir = spec.out_dir.join(&rel);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    let programs = [&q.a, &q.a_prime, &q.b, &q.b_prime];
    for ((name, program), image) in MEMBERS.iter().zip(programs).zip(&q.images) {
        let text = print(program);
        for (ext, bytes) in [("svg", image.svg.as_bytes()), ("sw", text.as_bytes())] {
            let path = dir.join(format!("{name}.{ext}"));
            fs::write(&path, bytes).map_err(io_err(&path))?;
        }
        if let Some(png) = &image.raster {
            let path = dir.join(format!("{name}.png"));
            fs::write(&path, png).map_err(io_err(&path))?;
        }
    }
    let file = |name: &str| format!("{rel}/{name}.svg");
    Ok(ManifestRecord {
        split: split_of(&id).to_string(),
        id,
        seed,
        style: style.to_string(),
        edit: print_edit(&q.edit),
        a: file("a"),
        a_prime: file("a_prime"),
        b: file("b"),
        b_prime: file("b_prime"),
    })
}

/// Generates `spec.count` quartets on `spec.workers` threads. Output bytes
/// do not depend on the worker count. On failure every quartet directory
/// written by this call is removed and the error of the lowest index is
/// returned.
pub fn write_dataset(gen: &QuartetGenerator, spec: &DatasetSpec) -> Result<Vec<ManifestRecord>, DatasetError> {
    write_dataset_with_progress(gen, spec, &|_| {})
}

/// [`write_dataset`], calling `progress` with the number of finished
/// quartets after each one (in completion order, from worker threads).
pub fn write_dataset_with_progress(
    gen: &QuartetGenerator,
    spec: &DatasetSpec,
    progress: &(dyn Fn(usize) + Sync),
) -> Result<Vec<ManifestRecord>, DatasetError> {
    assert!(!spec.styles.is_empty(), "at least one style is required");
    fs::create_dir_all(&spec.out_dir).map_err(io_err(&spec.out_dir))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| DatasetError::Workers(spec.workers, e.to_string()))?;
    let done = AtomicUsize::new(0);
    let results: Vec<Result<ManifestRecord, DatasetError>> = pool.install(|| {
        (0..spec.count)
            .into_par_iter()
            .map(|i| {
                let r = write_quartet(gen, spec, i);
                progress(done.fetch_add(1, Ordering::Relaxed) + 1);
                r
            })
            .collect()
    });
    if results.iter().any(Result::is_err) {
        cleanup(spec);
        return Err(results.into_iter().find_map(Result::err).expect("an error is present"));
    }
    let records: Vec<ManifestRecord> = results.into_iter().map(Result::unwrap).collect();
    let mut text = String::new();
    for r in &records {
        text.push_str(&serde_json::to_string(r).expect("records serialize"));
        text.push('\n');
    }
    let path = spec.out_dir.join(MANIFEST);
    if let Err(e) = fs::write(&path, text) {
        cleanup(spec);
        return Err(io_err(&path)(e));
    }
    Ok(records)
}

fn cleanup(spec: &DatasetSpec) {
    for i in 0..spec.count {
        let style = spec.styles[i % spec.styles.len()];
        let _ = fs::remove_dir_all(spec.out_dir.join(style.as_str()).join(quartet_id(i)));
    }
    for style in &spec.styles {
        // Only succeeds when nothing else lives there.
        let _ = fs::remove_dir(spec.out_dir.join(style.as_str()));
    }
    let _ = fs::remove_file(spec.out_dir.join(MANIFEST));
}

pub fn read_manifest(dir: &Path) -> Result<Vec<ManifestRecord>, DatasetError> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(n, line)| {
            serde_json::from_str(line)
                .map_err(|e| DatasetError::Manifest { path: path.clone(), message: format!("line {}: {e}", n + 1) })
        })
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub records: usize,
    pub problems: Vec<String>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.problems.is_empty()
    }
}

fn audit_record(dir: &Path, r: &ManifestRecord) -> Vec<String> {
    let mut problems = Vec::new();
    let mut fail = |msg: String| problems.push(format!("{}: {msg}", r.id));
    if split_of(&r.id) != r.split {
        fail(format!("split is {} but the id hashes to {}", r.split, split_of(&r.id)));
    }
    let svg_paths = [&r.a, &r.a_prime, &r.b, &r.b_prime];
    let mut svgs = Vec::new();
    let mut programs: Vec<Program> = Vec::new();
    for rel in svg_paths {
        let path = dir.join(rel);
        match fs::read(&path) {
            Ok(bytes) => svgs.push(bytes),
            Err(e) => fail(format!("{rel}: {e}")),
        }
        let sw = path.with_extension("sw");
        match fs::read_to_string(&sw).map_err(|e| e.to_string()).and_then(|t| parse(&t).map_err(|e| e.to_string())) {
            Ok(p) => programs.push(p),
            Err(e) => fail(format!("{}: {e}", sw.display())),
        }
    }
    if svgs.len() == 4 && (svgs[0] == svgs[1] || svgs[2] == svgs[3]) {
        fail("an edit leaves its SVG unchanged".into());
    }
    let edit = match parse_edit(&r.edit) {
        Ok(e) => e,
        Err(e) => {
            fail(format!("edit does not parse: {e}"));
            return problems;
        }
    };
    if programs.len() == 4 {
        let (a, a2, b, b2) = (&programs[0], &programs[1], &programs[2], &programs[3]);
        for (name, p, q) in [("A", a, a2), ("B", b, b2)] {
            match apply_edit(p, &edit) {
                Ok(edited) if ast_equals(&edited, q) => {}
                Ok(_) => fail(format!("applying the edit to {name} does not give {name}'")),
                Err(e) => fail(format!("edit fails on {name}: {e}")),
            }
            if ast_equals(p, q) {
                fail(format!("{name} and {name}' are equal"));
            }
        }
        let (na, nb) = (nominal_fragment_count(a), nominal_fragment_count(b));
        if a.layers.len() != 1 || na > MAX_SIMPLE_FRAGMENTS || na > nb {
            fail(format!("A is not simple: {} layers, {na} fragments against {nb} in B", a.layers.len()));
        }
    }
    problems
}

/// Re-checks every manifest record against the files on disk.
pub fn audit_dataset(dir: &Path) -> Result<AuditReport, DatasetError> {
    let records = read_manifest(dir)?;
    let mut problems = Vec::new();
    let mut seen = HashSet::new();
    for (i, r) in records.iter().enumerate() {
        if !seen.insert(r.id.as_str()) {
            problems.push(format!("{}: duplicate id", r.id));
        }
        if i > 0 && records[i - 1].id >= r.id {
            problems.push(format!("{}: manifest is not sorted by id", r.id));
        }
    }
    let per_record: Vec<Vec<String>> = records.par_iter().map(|r| audit_record(dir, r)).collect();
    problems.extend(per_record.into_iter().flatten());
    Ok(AuditReport { records: records.len(), problems })
}
