//! The `splitweave` command.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse or semantic error,
//! 3 runtime error (geometry, sampling, I/O, incompatible edits).

use std::fmt;
use std::fs;
use std::io::Write;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use splitweave::dsl::{validate, Severity, StyleTag};
use splitweave::edits::{
    apply_edit, audit_dataset, parse_edit, write_dataset_with_progress, DatasetSpec, QuartetGenerator, MANIFEST,
};
use splitweave::motifs::{load_motif_library, MotifRegistry};
use splitweave::parser::{self, parse, parse_unchecked, print};
use splitweave::render::{emit_svg, interpolate_programs, interpret, render, RenderOptions, ResvgRasterizer, Rasterizer};
use splitweave::samplers::{Sampler, SamplerConfig};

#[derive(Debug, Parser)]
#[command(name = "splitweave", version, about = "Render, sample and edit SplitWeave pattern programs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Directory of user motif SVGs, registered as `user/<name>`.
    #[arg(long, global = true, env = "SPLITWEAVE_MOTIF_DIR")]
    pub motif_dir: Option<PathBuf>,
    /// Sampler configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Render a program to SVG.
    Render {
        program: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Defaults to the program path with an `.svg` extension.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a PNG this many pixels wide next to the SVG.
        #[arg(long, value_name = "SIZE")]
        png: Option<u32>,
    },
    /// Sample a program.
    Sample {
        #[arg(long)]
        style: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Apply an edit descriptor to a program.
    Edit {
        program: PathBuf,
        #[arg(long)]
        edit: PathBuf,
        /// Writes to standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a quartet dataset.
    Dataset {
        #[arg(long)]
        count: usize,
        #[arg(long, value_delimiter = ',', default_value = "mtp,sfp")]
        styles: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, value_name = "SIZE")]
        png: Option<u32>,
    },
    /// Write frames interpolating between two programs of the same shape.
    Animate {
        prog_a: PathBuf,
        prog_b: PathBuf,
        #[arg(long, default_value_t = 10)]
        frames: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print diagnostics for a program.
    Validate { program: PathBuf },
    /// Rewrite a program in canonical form.
    Fmt { program: PathBuf },
    /// Re-check a dataset directory against its manifest.
    Audit { dir: PathBuf },
    /// Run the HTTP API and playground.
    Serve {
        #[arg(long, default_value_t = splitweave_server::DEFAULT_PORT)]
        port: u16,
        /// Built playground assets served at `/`.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }

    pub fn invalid(message: impl Into<String>) -> Failure {
        Failure { code: 2, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Failure {
        Failure { code: 3, message: message.into() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> CmdResult {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::runtime(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| Failure::runtime(format!("{}: {e}", path.display())))
}

fn write_or_stdout(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::runtime(e.to_string())),
    }
}

fn load_program(path: &Path) -> Result<splitweave::dsl::Program, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| match e {
        parser::Error::Parse(e) => Failure::invalid(format!("{}:{e}", path.display())),
        parser::Error::Semantic(e) => Failure::invalid(format!("{}: invalid program\n{e}", path.display())),
    })
}

fn parse_style(name: &str) -> Result<StyleTag, Failure> {
    match StyleTag::from_name(name) {
        Some(s @ (StyleTag::Mtp | StyleTag::Sfp)) => Ok(s),
        _ => Err(Failure::usage(format!("unknown style {name:?}, expected mtp or sfp"))),
    }
}

/// Motif registry and sampler configuration shared by the commands.
pub struct Context {
    pub registry: MotifRegistry,
    pub config: SamplerConfig,
}

impl Context {
    pub fn load(global: &Global) -> Result<Context, Failure> {
        let registry = load_motif_library(global.motif_dir.as_deref()).map_err(|e| Failure::runtime(e.to_string()))?;
        let config = match &global.config {
            Some(path) => SamplerConfig::from_toml(&read(path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
            None => SamplerConfig::default(),
        };
        Ok(Context { registry, config })
    }

    pub fn sampler(&self) -> Sampler<'_> {
        Sampler { config: &self.config, registry: &self.registry }
    }
}

pub fn run(cli: Cli) -> CmdResult {
    let ctx = Context::load(&cli.global)?;
    match cli.command {
        Command::Render { program, seed, out, png } => {
            let out = out.unwrap_or_else(|| program.with_extension("svg"));
            cmd_render(&ctx, &program, seed, &out, png)
        }
        Command::Sample { style, seed, out } => cmd_sample(&ctx, &style, seed, out.as_deref()),
        Command::Edit { program, edit, out } => cmd_edit(&program, &edit, out.as_deref()),
        Command::Dataset { count, styles, seed, out, jobs, png } => {
            let styles = styles.iter().map(|s| parse_style(s.trim())).collect::<Result<Vec<_>, _>>()?;
            if styles.is_empty() {
                return Err(Failure::usage("--styles is empty"));
            }
            let spec = DatasetSpec { count, styles, master_seed: seed, out_dir: out, workers: jobs.max(1) };
            cmd_dataset(&ctx, &spec, png)
        }
        Command::Animate { prog_a, prog_b, frames, out, seed } => cmd_animate(&ctx, &prog_a, &prog_b, frames, &out, seed),
        Command::Validate { program } => cmd_validate(&program),
        Command::Fmt { program } => cmd_fmt(&program),
        Command::Audit { dir } => cmd_audit(&dir),
        Command::Serve { port, static_dir } => cmd_serve(ctx, port, static_dir),
    }
}

pub fn cmd_render(ctx: &Context, program: &Path, seed: u64, out: &Path, png: Option<u32>) -> CmdResult {
    let p = load_program(program)?;
    for d in validate(&p) {
        eprintln!("{d}");
    }
    let graph = interpret(&p, seed, &ctx.registry).map_err(|e| Failure::runtime(e.to_string()))?;
    for d in &graph.warnings {
        eprintln!("{d}");
    }
    let svg = emit_svg(&graph, &RenderOptions::default());
    write(out, &svg)?;
    if let Some(size) = png {
        let bytes = ResvgRasterizer.rasterize(&svg, size).map_err(|e| Failure::runtime(e.to_string()))?;
        write(&out.with_extension("png"), bytes)?;
    }
    Ok(())
}

pub fn cmd_sample(ctx: &Context, style: &str, seed: u64, out: Option<&Path>) -> CmdResult {
    let p = match parse_style(style)? {
        StyleTag::Mtp => ctx.sampler().sample_mtp(seed),
        _ => ctx.sampler().sample_sfp(seed),
    };
    write_or_stdout(out, &print(&p))
}

pub fn cmd_edit(program: &Path, edit: &Path, out: Option<&Path>) -> CmdResult {
    let p = load_program(program)?;
    let e = parse_edit(&read(edit)?).map_err(|e| Failure::invalid(format!("{}:{e}", edit.display())))?;
    let edited = apply_edit(&p, &e).map_err(|err| Failure::runtime(format!("{}: {err}", program.display())))?;
    write_or_stdout(out, &print(&edited))
}

pub fn cmd_dataset(ctx: &Context, spec: &DatasetSpec, png: Option<u32>) -> CmdResult {
    let gen = QuartetGenerator { sampler: ctx.sampler(), render: RenderOptions { raster_size: png, ..RenderOptions::default() } };
    let started = Instant::now();
    let step = (spec.count / 20).max(1);
    let progress = |done: usize| {
        if done.is_multiple_of(step) || done == spec.count {
            eprintln!("{done}/{} quartets ({:.1}s)", spec.count, started.elapsed().as_secs_f64());
        }
    };
    write_dataset_with_progress(&gen, spec, &progress).map_err(|e| Failure::runtime(e.to_string()))?;
    println!("{}", spec.out_dir.join(MANIFEST).display());
    Ok(())
}

/// Frame `i` of `n` sits at `t = i / (n - 1)`; a single frame is `p`.
pub fn frame_t(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        i as f64 / (n - 1) as f64
    }
}

pub fn cmd_animate(ctx: &Context, a: &Path, b: &Path, frames: usize, out: &Path, seed: u64) -> CmdResult {
    if frames == 0 {
        return Err(Failure::usage("--frames must be at least 1"));
    }
    let (p, q) = (load_program(a)?, load_program(b)?);
    for i in 0..frames {
        let frame = interpolate_programs(&p, &q, frame_t(i, frames)).map_err(|e| Failure::runtime(e.to_string()))?;
        let svg = render(&frame, seed, &RenderOptions::default(), &ctx.registry).map_err(|e| Failure::runtime(e.to_string()))?;
        write(&out.join(format!("frame_{i:04}.svg")), &svg.svg)?;
        write(&out.join(format!("frame_{i:04}.sw")), print(&frame))?;
    }
    Ok(())
}

pub fn cmd_validate(program: &Path) -> CmdResult {
    let text = read(program)?;
    let p = parse_unchecked(&text).map_err(|e| Failure::invalid(format!("{}:{e}", program.display())))?;
    let diagnostics = validate(&p);
    for d in &diagnostics {
        eprintln!("{}: {d}", program.display());
    }
    let errors = diagnostics.iter().filter(|d| d.severity == Severity::Error).count();
    if errors > 0 {
        return Err(Failure::invalid(format!("{}: {errors} error(s)", program.display())));
    }
    Ok(())
}

pub fn cmd_fmt(program: &Path) -> CmdResult {
    let text = read(program)?;
    let p = parse_unchecked(&text).map_err(|e| Failure::invalid(format!("{}:{e}", program.display())))?;
    let canonical = print(&p);
    if canonical != text {
        write(program, canonical)?;
    }
    Ok(())
}

pub fn cmd_audit(dir: &Path) -> CmdResult {
    let report = audit_dataset(dir).map_err(|e| Failure::runtime(e.to_string()))?;
    for problem in &report.problems {
        eprintln!("{problem}");
    }
    println!("{} records, {} problems", report.records, report.problems.len());
    if report.is_clean() {
        Ok(())
    } else {
        Err(Failure::runtime(format!("{}: audit failed", dir.display())))
    }
}

pub fn cmd_serve(ctx: Context, port: u16, static_dir: Option<PathBuf>) -> CmdResult {
    let state = splitweave_server::AppState {
        registry: Arc::new(ctx.registry),
        config: Arc::new(ctx.config),
        budget: splitweave_server::RENDER_BUDGET,
    };
    let addr = SocketAddr::from((Ipv4Addr::LOCALHOST, port));
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::runtime(e.to_string()))?;
    runtime
        .block_on(splitweave_server::serve(addr, state, static_dir))
        .map_err(|e| Failure::runtime(format!("{addr}: {e}")))
}
