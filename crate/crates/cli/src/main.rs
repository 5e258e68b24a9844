//! `rocks`: lay out structured text as ragged blocks.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 unreadable or malformed
//! input, 3 layout failure, 4 bad flags or configuration.

mod bench;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rocks::linebreak::BreakParams;
use rocks::metrics::{report, report_masked};
use rocks::model::{parse_document, to_layout_tree, InputFormat, PlainTextMode};
use rocks::pipeline::{run, Algorithm, JsonLayout, Options, Output};
use rocks::regions_stateful::layout_l1s;
use rocks::render::{render_svg, RenderOptions, StyleSheet};
use rocks::{LayoutTree, Metrics};

use config::Config;

#[derive(Parser)]
#[command(
    name = "rocks",
    version,
    about = "Lay out nested structured text as ragged blocks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Lay out a document and write SVG and/or JSON.
    Layout(LayoutArgs),
    /// Like `layout`, with outline simplification on.
    Simplify(LayoutArgs),
    /// Mesh distance and mean line width of a layout.
    Metrics(MetricsArgs),
    /// Time every algorithm over a corpus directory.
    Bench(BenchArgs),
    /// Print the stateful layout's padding timetable.
    DumpTimetable(InputArgs),
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Tree file (.json) or plain text.
    input: PathBuf,
    /// TOML configuration file.
    #[arg(long, alias = "metrics-config")]
    config: Option<PathBuf>,
    /// Give every wrap this padding.
    #[arg(long)]
    padding: Option<f64>,
    #[arg(long)]
    char_width: Option<f64>,
    #[arg(long)]
    line_height: Option<f64>,
    /// Treat plain-text input as prose (explicit spacers between words).
    #[arg(long)]
    prose: bool,
}

#[derive(Args, Clone)]
struct LayoutArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_algo)]
    algo: Option<Algorithm>,
    #[arg(long)]
    simplify: bool,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Write fragment positions and regions; `-` for stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// CSS-like style sheet for wrap outlines.
    #[arg(long)]
    style: Option<PathBuf>,
    /// Paint-time corner radius for outlines.
    #[arg(long)]
    radius: Option<f64>,
    /// L2a: constrain runs of unpinned fragments as one unit.
    #[arg(long)]
    grouped: bool,
    #[arg(long)]
    ideal_width: Option<f64>,
    #[arg(long)]
    target_width: Option<f64>,
    #[arg(long)]
    stretch: Option<f64>,
    #[arg(long)]
    shrink: Option<f64>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Document to lay out and compare with its zero-padding layout.
    input: Option<PathBuf>,
    #[arg(long, value_parser = parse_algo, default_value = "l1s")]
    algo: Algorithm,
    /// Reference layout (a `--json` dump).
    #[arg(long = "ref", requires = "test", conflicts_with = "input")]
    reference: Option<PathBuf>,
    /// Layout to evaluate (a `--json` dump).
    #[arg(long, requires = "reference")]
    test: Option<PathBuf>,
    #[arg(long, alias = "metrics-config")]
    config: Option<PathBuf>,
    #[arg(long)]
    padding: Option<f64>,
    #[arg(long)]
    prose: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of tree files, or a single file.
    corpus: PathBuf,
    /// Comma-separated algorithms.
    #[arg(long, value_delimiter = ',', value_parser = parse_algo,
          default_value = "flat,l1p,l1s,l2a,boxes,boxes-ns,sblocks")]
    algos: Vec<Algorithm>,
    #[arg(long, default_value_t = 10)]
    repeat: usize,
    /// Uniform padding for every wrap; negative keeps the files' own.
    #[arg(long, default_value_t = 2.0)]
    padding: f64,
    /// Also bench a generated document with this many fragments, seeded
    /// from ROCKS_SEED.
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, alias = "metrics-config")]
    config: Option<PathBuf>,
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse()
}

enum Fail {
    Io(anyhow::Error),
    Input(anyhow::Error),
    Layout(anyhow::Error),
    Flags(anyhow::Error),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Io(_) => 1,
            Fail::Input(_) => 2,
            Fail::Layout(_) => 3,
            Fail::Flags(_) => 4,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Fail::Io(e) | Fail::Input(e) | Fail::Layout(e) | Fail::Flags(e) => e,
        }
    }
}

type Res<T> = Result<T, Fail>;

fn load_config(path: Option<&Path>) -> Res<Config> {
    match path {
        Some(p) => Config::load(p)
            .with_context(|| format!("reading config {}", p.display()))
            .map_err(Fail::Flags),
        None => Ok(Config::default()),
    }
}

fn metrics_of(cfg: &Config, char_width: Option<f64>, line_height: Option<f64>) -> Res<Metrics> {
    let d = Metrics::default();
    let m = Metrics {
        char_width: char_width
            .or(cfg.metrics.char_width)
            .unwrap_or(d.char_width),
        line_height: line_height
            .or(cfg.metrics.line_height)
            .unwrap_or(d.line_height),
    };
    if !(m.char_width > 0.0 && m.line_height > 0.0) {
        return Err(Fail::Flags(anyhow!(
            "char width and line height must be positive"
        )));
    }
    Ok(m)
}

fn read_tree(path: &Path, prose: bool, m: &Metrics, padding: Option<f64>) -> Res<LayoutTree> {
    let bytes = std::fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Fail::Input)?;
    let format = match InputFormat::from_path(path) {
        InputFormat::PlainText(_) if prose => InputFormat::PlainText(PlainTextMode::Prose),
        f => f,
    };
    let doc = parse_document(&bytes, format, m)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(Fail::Input)?;
    let tree = to_layout_tree(&doc)
        .with_context(|| format!("converting {}", path.display()))
        .map_err(Fail::Input)?;
    match padding {
        Some(p) if p < 0.0 => Err(Fail::Flags(anyhow!("padding must be non-negative"))),
        Some(p) => Ok(tree.with_uniform_padding(p)),
        None => Ok(tree),
    }
}

fn write_out(path: &Path, text: &str) -> Res<()> {
    if path == Path::new("-") {
        print!("{text}");
        return Ok(());
    }
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Fail::Io)
}

fn layout_cmd(a: LayoutArgs, force_simplify: bool) -> Res<()> {
    let cfg = load_config(a.input.config.as_deref())?;
    let m = metrics_of(&cfg, a.input.char_width, a.input.line_height)?;
    let algo = match (a.algo, &cfg.layout.algo) {
        (Some(x), _) => x,
        (None, Some(s)) => s.parse().map_err(|e: String| Fail::Flags(anyhow!(e)))?,
        (None, None) => Algorithm::L1s,
    };
    let padding = a.input.padding.or(cfg.layout.padding);
    let tree = read_tree(&a.input.input, a.input.prose, &m, padding)?;

    let lb = &cfg.linebreak;
    let ideal = a
        .ideal_width
        .or(lb.ideal_width)
        .unwrap_or(80.0 * m.char_width);
    let breaks = BreakParams {
        ideal_width: ideal,
        stretch: a.stretch.or(lb.stretch).unwrap_or(0.5),
        shrink: a.shrink.or(lb.shrink).unwrap_or(0.33),
    };
    let opts = Options {
        line_height: m.line_height,
        outlines: true,
        simplify: force_simplify || a.simplify || cfg.layout.simplify.unwrap_or(false),
        grouped: a.grouped || cfg.layout.grouped.unwrap_or(false),
        breaks,
        target_width: a.target_width.or(lb.target_width),
    };
    let out = run(&tree, algo, &opts).map_err(|e| Fail::Layout(e.into()))?;
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }

    if let Some(svg) = &a.svg {
        let mut ro = RenderOptions::default();
        if let Some(p) = &cfg.render.palette {
            if p.is_empty() {
                return Err(Fail::Flags(anyhow!("palette must not be empty")));
            }
            ro.palette = p.clone();
        }
        ro.corner_radius = a.radius.or(cfg.render.corner_radius).unwrap_or(0.0);
        ro.font_size = m.char_width / 0.6;
        if let Some(path) = a.style.as_ref().or(cfg.render.style.as_ref()) {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading style sheet {}", path.display()))
                .map_err(Fail::Flags)?;
            ro.sheet = StyleSheet::parse(&text).map_err(|e| Fail::Flags(e.into()))?;
        }
        let outlines: Vec<_> = out
            .outlines
            .iter()
            .map(|(w, _, p)| (*w, p.clone()))
            .collect();
        write_out(svg, &render_svg(&out.tree, &out.placement, &outlines, &ro))?;
    }
    let json = match (&a.json, &a.svg) {
        (Some(j), _) => Some(j.clone()),
        (None, None) => Some(PathBuf::from("-")),
        (None, Some(_)) => None,
    };
    if let Some(j) = json {
        write_out(&j, &(to_json(&JsonLayout::new(&out, m.line_height)) + "\n"))?;
    }
    if force_simplify && a.json.is_some() && a.svg.is_some() {
        corner_summary(&out);
    }
    Ok(())
}

fn corner_summary(out: &Output) {
    for (w, _, p) in &out.outlines {
        eprintln!("{}: {} corners", out.tree.wrap(*w).name, p.corner_count());
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("layout data serializes")
}

fn read_dump(path: &Path) -> Res<JsonLayout> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Fail::Input)?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing layout dump {}", path.display()))
        .map_err(Fail::Input)
}

fn metrics_cmd(a: MetricsArgs) -> Res<()> {
    let r = match (&a.input, &a.reference, &a.test) {
        (None, Some(rp), Some(tp)) => {
            let (rl, tl) = (read_dump(rp)?, read_dump(tp)?);
            let (rpl, rmask) = rl.to_placement();
            let (tpl, tmask) = tl.to_placement();
            if rmask != tmask {
                return Err(Fail::Layout(anyhow!("layouts have different fragments")));
            }
            report_masked(&tmask, &tpl, &rpl).map_err(|e| Fail::Layout(e.into()))?
        }
        (Some(input), None, None) => {
            let cfg = load_config(a.config.as_deref())?;
            let m = metrics_of(&cfg, None, None)?;
            let tree = read_tree(input, a.prose, &m, a.padding.or(cfg.layout.padding))?;
            let opts = Options {
                line_height: m.line_height,
                outlines: false,
                ..Options::default()
            };
            let out = run(&tree, a.algo, &opts).map_err(|e| Fail::Layout(e.into()))?;
            let reference = out.reference(m.line_height);
            report(&out.tree, &out.placement, &reference).map_err(|e| Fail::Layout(e.into()))?
        }
        _ => {
            return Err(Fail::Flags(anyhow!(
                "give an input file, or both --ref and --test"
            )))
        }
    };
    println!("{}", to_json(&r));
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Res<()> {
    let cfg = load_config(a.config.as_deref())?;
    let m = metrics_of(&cfg, None, None)?;
    let mut files: Vec<PathBuf> = if a.corpus.is_file() {
        vec![a.corpus.clone()]
    } else {
        std::fs::read_dir(&a.corpus)
            .with_context(|| format!("reading corpus {}", a.corpus.display()))
            .map_err(Fail::Input)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect()
    };
    files.sort();
    if files.is_empty() && a.synthetic.is_none() {
        return Err(Fail::Input(anyhow!(
            "corpus {} has no files",
            a.corpus.display()
        )));
    }
    let padding = (a.padding >= 0.0).then_some(a.padding);
    let opts = Options {
        line_height: m.line_height,
        outlines: false,
        ..Options::default()
    };
    let mut rows = Vec::new();
    for f in &files {
        let tree = read_tree(f, false, &m, padding)?;
        let name = f
            .file_name()
            .map_or_else(String::new, |n| n.to_string_lossy().into_owned());
        rows.extend(bench::measure(&name, &tree, &a.algos, a.repeat, &opts));
    }
    if let Some(n) = a.synthetic {
        let seed = rocks::synth::seed_from_env(1);
        let tree = rocks::synth::code_like_tree(&mut rocks::synth::rng(seed), n, &m);
        let tree = match padding {
            Some(p) => tree.with_uniform_padding(p),
            None => tree,
        };
        rows.extend(bench::measure(
            &format!("synthetic-{n}-seed{seed}"),
            &tree,
            &a.algos,
            a.repeat,
            &opts,
        ));
    }
    print!("{}", bench::table(&rows));
    if let Some(j) = &a.json {
        write_out(j, &(to_json(&rows) + "\n"))?;
    }
    Ok(())
}

fn dump_cmd(a: InputArgs) -> Res<()> {
    let cfg = load_config(a.config.as_deref())?;
    let m = metrics_of(&cfg, a.char_width, a.line_height)?;
    let tree = read_tree(&a.input, a.prose, &m, a.padding.or(cfg.layout.padding))?;
    let (_, state) = layout_l1s(&tree, m.line_height);
    print!("{}", state.timetable().dump(&tree));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(4),
            };
        }
    };
    let r = match cli.cmd {
        Cmd::Layout(a) => layout_cmd(a, false),
        Cmd::Simplify(a) => layout_cmd(a, true),
        Cmd::Metrics(a) => metrics_cmd(a),
        Cmd::Bench(a) => bench_cmd(a),
        Cmd::DumpTimetable(a) => dump_cmd(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.code())
        }
    }
}
