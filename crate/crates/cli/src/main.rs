//! `planarity-ht`: level and radial level planarity from the command line.
//!
//! Exit codes: 0 planar / success, 1 non-planar or mismatch, 2 error,
//! 3 budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use planarity_ht::constraints::ConstraintError;
use planarity_ht::constraints::{
    build_level_full, build_level_reduced, build_radial_full, build_radial_reduced, choose_reference_sets, SeedOrder,
};
use planarity_ht::corpus;
use planarity_ht::drawing::{count_crossings_level, count_crossings_radial};
use planarity_ht::graph::{properize, LevelGraph, ProperLevelGraph};
use planarity_ht::io::{graph_to_json, parse_graph, ConstraintDump, DrawingFile, DrawingKind, IoError};
use planarity_ht::oracle::{brute_level, brute_radial, OracleError, DEFAULT_BUDGET};
use planarity_ht::pipeline::{
    check, crosscheck, drop_empty_levels, CheckOptions, CrosscheckError, Mode, PipelineError, Witness,
};
use planarity_ht::structures::{LevelStructures, RadialStructures};
use planarity_ht::svg::{render_level, render_radial};

const BUDGET_ENV: &str = "PLANARITY_HT_BUDGET";

#[derive(Parser)]
#[command(name = "planarity-ht", version, about = "Level and radial level planarity testing")]
struct Cli {
    /// Print one JSON summary line on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Level,
    Radial,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Level => Mode::Level,
            ModeArg::Radial => Mode::Radial,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Stage {
    /// The (properized) input graph.
    G,
    /// The subdivided star form.
    Gplus,
}

#[derive(Args)]
struct SystemChoice {
    /// Include transitivity constraints.
    #[arg(long, conflicts_with = "reduced")]
    full: bool,
    /// XOR constraints only (default).
    #[arg(long)]
    reduced: bool,
}

fn parse_seed(s: &str) -> Result<SeedOrder, String> {
    match s {
        "ascending" => Ok(SeedOrder::Ascending),
        "descending" => Ok(SeedOrder::Descending),
        n => n
            .parse()
            .map(SeedOrder::Shuffled)
            .map_err(|_| format!("expected ascending, descending or a number, got {n}")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide planarity by solving the constraint system.
    Check {
        #[arg(long, value_enum)]
        mode: ModeArg,
        file: PathBuf,
        #[command(flatten)]
        system: SystemChoice,
        /// Build and verify a Hanani-Tutte drawing and write it here; the
        /// graph it draws goes next to it as `<stem>.graph.json`.
        #[arg(long, value_name = "DRAWING")]
        witness: Option<PathBuf>,
        /// Tie-breaking order for reference edges: ascending, descending or a shuffle seed.
        #[arg(long, default_value = "ascending", value_parser = parse_seed)]
        seed_order: SeedOrder,
        /// Largest solution space `--full` may search.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Print the constraint system.
    EmitConstraints {
        #[arg(long, value_enum)]
        mode: ModeArg,
        file: PathBuf,
        #[command(flatten)]
        system: SystemChoice,
        #[arg(long, value_enum, default_value = "g")]
        stage: Stage,
        #[arg(long, default_value = "ascending", value_parser = parse_seed)]
        seed_order: SeedOrder,
    },
    /// Decide planarity by exhaustive search.
    Oracle {
        #[arg(long, value_enum)]
        mode: ModeArg,
        file: PathBuf,
        /// Maximum number of search states (default 10^7, or $PLANARITY_HT_BUDGET).
        #[arg(long)]
        budget: Option<u64>,
        /// Write the crossing-free drawing found; its graph goes to `<stem>.graph.json`.
        #[arg(long, value_name = "DRAWING")]
        witness: Option<PathBuf>,
    },
    /// Draw a drawing file as SVG with crossings marked.
    Render {
        drawing: PathBuf,
        graph: PathBuf,
        /// Output file (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare solver and oracle on many instances.
    Crosscheck {
        /// Directory of graph files.
        corpus: Option<PathBuf>,
        /// Number of random instances.
        #[arg(long, conflicts_with_all = ["corpus", "exhaustive"])]
        random: Option<usize>,
        /// Size bound LEVELSxPERLEVEL for random or exhaustive instances.
        #[arg(long, default_value = "3x3")]
        max_size: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Every graph up to --max-size, one per within-level relabeling class.
        #[arg(long, conflicts_with = "corpus")]
        exhaustive: bool,
        /// Radial reference-set choices tried per instance.
        #[arg(long, default_value_t = 2)]
        ref_sets: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn error(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::error(e)
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        let code = match e {
            PipelineError::Constraint(ConstraintError::Budget(..))
            | PipelineError::Oracle(OracleError::Budget { .. }) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        PipelineError::from(e).into()
    }
}

/// Result of a command: exit code, human-readable text and JSON summary.
struct Outcome {
    code: u8,
    text: String,
    summary: Value,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<LevelGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::error(format!("{}: {e}", path.display())))
}

fn budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Failure::error(format!("{BUDGET_ENV} must be a number, got {s:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

/// Sibling path `<stem>.graph.json` of a drawing path.
fn graph_path_for(drawing: &Path) -> PathBuf {
    let stem = drawing.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "witness".into());
    drawing.with_file_name(format!("{stem}.graph.json"))
}

fn write_witness(path: &Path, g: &ProperLevelGraph, drawing: &DrawingFile) -> Result<PathBuf, Failure> {
    write(path, &(drawing.to_json() + "\n"))?;
    let gpath = graph_path_for(path);
    write(&gpath, &(graph_to_json(g) + "\n"))?;
    Ok(gpath)
}

fn planar_word(p: bool) -> &'static str {
    if p {
        "planar"
    } else {
        "not planar"
    }
}

fn cmd_check(
    mode: Mode,
    file: &Path,
    full: bool,
    witness: Option<&Path>,
    seed: SeedOrder,
    budget_flag: Option<u64>,
) -> Result<Outcome, Failure> {
    let g = load_graph(file)?;
    let opts = CheckOptions { full, witness: witness.is_some(), seed, budget: budget(budget_flag)? };
    let report = check(&g, mode, &opts)?;
    let mut text = format!(
        "{mode} {}: {} variables, {} XOR equations, {} transitivity clauses\n",
        planar_word(report.planar),
        report.vars,
        report.xors,
        report.transitivity
    );
    let mut written = Value::Null;
    let mut crossings = Value::Null;
    if let (Some(path), Some(w)) = (witness, &report.witness) {
        let (graph, file, report) = match w {
            Witness::Level { graph, drawing, star_crossings } => {
                (graph, DrawingFile::from_level(graph, drawing), star_crossings)
            }
            Witness::Radial { graph, drawing, refs, star_crossings } => {
                (graph, DrawingFile::from_radial(graph, drawing, Some(refs)), star_crossings)
            }
        };
        let gpath = write_witness(path, graph, &file)?;
        text += &format!(
            "Hanani-Tutte drawing verified ({} crossings, all even on independent pairs); wrote {} and {}\n",
            report.total(),
            path.display(),
            gpath.display()
        );
        written = json!(path.display().to_string());
        crossings = json!(report.total());
    }
    let summary = json!({
        "command": "check",
        "mode": mode,
        "planar": report.planar,
        "system": if full { "full" } else { "reduced" },
        "vars": report.vars,
        "xors": report.xors,
        "transitivity": report.transitivity,
        "witness": written,
        "witnessCrossings": crossings,
    });
    Ok(Outcome { code: if report.planar { 0 } else { 1 }, text, summary })
}

fn cmd_emit(mode: Mode, file: &Path, full: bool, stage: Stage, seed: SeedOrder) -> Result<Outcome, Failure> {
    let g = load_graph(file)?;
    let proper = properize(&g).graph;
    let (sys, graph) = match (mode, stage) {
        (Mode::Level, Stage::G) => {
            let sys = if full { build_level_full(&proper) } else { build_level_reduced(&proper) };
            (sys, proper)
        }
        (Mode::Level, Stage::Gplus) => {
            let s = LevelStructures::new(proper);
            let gp = s.plus.graph().clone();
            let sys = if full { build_level_full(&gp) } else { s.sys_plus };
            (sys, gp)
        }
        (Mode::Radial, _) => {
            let compact = drop_empty_levels(&proper);
            let (refs, aug) = choose_reference_sets(&compact, seed).map_err(PipelineError::from)?;
            match stage {
                Stage::G => {
                    let sys = if full { build_radial_full(&aug, &refs) } else { build_radial_reduced(&aug, &refs) };
                    (sys.map_err(PipelineError::from)?, aug)
                }
                Stage::Gplus => {
                    let s = RadialStructures::new(aug, refs).map_err(PipelineError::from)?;
                    let gp = s.plus.graph().clone();
                    let sys =
                        if full { build_radial_full(&gp, &s.beta).map_err(PipelineError::from)? } else { s.sys_plus };
                    (sys, gp)
                }
            }
        }
    };
    let dump = ConstraintDump::from_system(&sys);
    let text = dump.to_text(&graph);
    let summary = json!({
        "command": "emit-constraints",
        "mode": mode,
        "system": if full { "full" } else { "reduced" },
        "vars": sys.num_vars(),
        "xors": dump.xors.len(),
        "transitivity": dump.transitivity.len(),
        "dump": text,
    });
    Ok(Outcome { code: 0, text, summary })
}

fn cmd_oracle(mode: Mode, file: &Path, budget_flag: Option<u64>, witness: Option<&Path>) -> Result<Outcome, Failure> {
    let g = load_graph(file)?;
    let budget = budget(budget_flag)?;
    let proper = properize(&g).graph;
    let (planar, states, drawing, graph) = match mode {
        Mode::Level => {
            let r = brute_level(&proper, budget)?;
            let d = r.witness.map(|w| DrawingFile::from_level(&proper, &w));
            (r.planar, r.states_examined, d, proper)
        }
        Mode::Radial => {
            let compact = drop_empty_levels(&proper);
            let (refs, aug) = choose_reference_sets(&compact, SeedOrder::Ascending).map_err(PipelineError::from)?;
            let r = brute_radial(&aug, &refs, budget)?;
            let d = r.witness.map(|w| DrawingFile::from_radial(&aug, &w, Some(&refs)));
            (r.planar, r.states_examined, d, aug)
        }
    };
    let mut text = format!("{mode} {}: {states} states examined\n", planar_word(planar));
    if let Some(d) = &drawing {
        text += &d.to_json();
        text.push('\n');
    }
    if let (Some(path), Some(d)) = (witness, &drawing) {
        let gpath = write_witness(path, &graph, d)?;
        text += &format!("wrote {} and {}\n", path.display(), gpath.display());
    }
    let summary = json!({
        "command": "oracle",
        "mode": mode,
        "planar": planar,
        "statesExamined": states,
        "witness": drawing,
    });
    Ok(Outcome { code: if planar { 0 } else { 1 }, text, summary })
}

fn cmd_render(drawing: &Path, graph: &Path, out: Option<&Path>) -> Result<Outcome, Failure> {
    let input = load_graph(graph)?;
    let sub = properize(&input);
    let g = sub.graph;
    let file = DrawingFile::parse(&read(drawing)?)?;
    // odd pairs are counted between input edges, not their subdivisions
    let odd_pairs = |r: planarity_ht::drawing::CrossingReport| r.aggregate(&sub.edge_owner, &input).ht_violations.len();
    let (rendering, kind, total, odd) = match file.kind {
        DrawingKind::Level => {
            let d = file.to_level(&g)?;
            let report = count_crossings_level(&d, &g).map_err(Failure::error)?;
            (render_level(&g, &d).map_err(Failure::error)?, "level", report.total(), odd_pairs(report))
        }
        DrawingKind::Radial => {
            let (d, refs) = file.to_radial(&g)?;
            let refs = match refs {
                Some(r) => r,
                None => {
                    let (r, aug) = choose_reference_sets(&g, SeedOrder::Ascending).map_err(Failure::error)?;
                    if aug.num_edges() != g.num_edges() {
                        return Err(Failure::error("drawing file needs reference sets for this graph"));
                    }
                    r
                }
            };
            let report = count_crossings_radial(&d, &g, &refs).map_err(Failure::error)?;
            (render_radial(&g, &d, &refs).map_err(Failure::error)?, "radial", report.total(), odd_pairs(report))
        }
    };
    let mut text = String::new();
    match out {
        Some(path) => {
            write(path, &rendering.svg)?;
            text += &format!("{kind} drawing with {total} crossings written to {}\n", path.display());
        }
        None => text += &rendering.svg,
    }
    let summary = json!({
        "command": "render",
        "kind": kind,
        "crossings": total,
        "markers": rendering.crossings.len(),
        "oddIndependentPairs": odd,
        "out": out.map(|p| p.display().to_string()),
    });
    Ok(Outcome { code: 0, text, summary })
}

fn parse_size(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::error(format!("--max-size expects LEVELSxPERLEVEL, got {s}"));
    let (a, b) = s.split_once('x').ok_or_else(bad)?;
    let a: usize = a.parse().map_err(|_| bad())?;
    let b: usize = b.parse().map_err(|_| bad())?;
    if a == 0 || b == 0 {
        return Err(bad());
    }
    Ok((a, b))
}

fn load_corpus(dir: &Path) -> Result<Vec<(String, LevelGraph)>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Failure::error(format!("{}: {e}", dir.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths.into_iter().map(|p| Ok((p.display().to_string(), load_graph(&p)?))).collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_crosscheck(
    corpus_dir: Option<&Path>,
    random: Option<usize>,
    max_size: &str,
    seed: u64,
    exhaustive: bool,
    ref_sets: usize,
    budget_flag: Option<u64>,
) -> Result<Outcome, Failure> {
    let budget = budget(budget_flag)?;
    let instances: Vec<(String, LevelGraph)> = if let Some(dir) = corpus_dir {
        load_corpus(dir)?
    } else {
        let (levels, per_level) = parse_size(max_size)?;
        let graphs = if exhaustive {
            corpus::exhaustive(levels, per_level, 20_000)
        } else {
            corpus::random_corpus(seed, random.unwrap_or(100), levels, per_level)
        };
        graphs.into_iter().enumerate().map(|(i, g)| (format!("#{i}"), g.into_inner())).collect()
    };
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
    let chunk = instances.len().div_ceil(threads).max(1);
    let results: Vec<Result<_, CrosscheckError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = instances
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|(_, g)| crosscheck(g, ref_sets, budget)).collect::<Vec<_>>())
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("crosscheck worker panicked")).collect()
    });
    let (mut level, mut radial, mut skipped) = (0usize, 0usize, 0usize);
    let mut text = String::new();
    let mut mismatches = Vec::new();
    for ((name, g), result) in instances.iter().zip(&results) {
        match result {
            Ok(o) => {
                level += usize::from(o.level_planar);
                radial += usize::from(o.radial_planar);
            }
            Err(CrosscheckError::Pipeline(PipelineError::Oracle(OracleError::Budget { .. }))) => skipped += 1,
            Err(e) => {
                text += &format!(
                    "mismatch on {name}: {e}\n{}\n",
                    serde_json::to_string(&g.to_file()).expect("graphs serialize")
                );
                mismatches.push(json!({ "instance": name, "error": e.to_string(), "graph": g.to_file() }));
            }
        }
    }
    let n = instances.len();
    text += &format!(
        "{n} instances: {level} level planar, {radial} radial planar, {} mismatches, {skipped} over budget\n",
        mismatches.len()
    );
    let code = if !mismatches.is_empty() {
        1
    } else if skipped > 0 {
        3
    } else {
        0
    };
    let summary = json!({
        "command": "crosscheck",
        "instances": n,
        "levelPlanar": level,
        "radialPlanar": radial,
        "mismatches": mismatches,
        "overBudget": skipped,
    });
    Ok(Outcome { code, text, summary })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Check { mode, file, system, witness, seed_order, budget } => {
            cmd_check((*mode).into(), file, system.full, witness.as_deref(), *seed_order, *budget)
        }
        Command::EmitConstraints { mode, file, system, stage, seed_order } => {
            cmd_emit((*mode).into(), file, system.full, *stage, *seed_order)
        }
        Command::Oracle { mode, file, budget, witness } => {
            cmd_oracle((*mode).into(), file, *budget, witness.as_deref())
        }
        Command::Render { drawing, graph, out } => cmd_render(drawing, graph, out.as_deref()),
        Command::Crosscheck { corpus, random, max_size, seed, exhaustive, ref_sets, budget } => {
            cmd_crosscheck(corpus.as_deref(), *random, max_size, *seed, *exhaustive, *ref_sets, *budget)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", outcome.summary);
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            if cli.json {
                println!("{}", json!({ "error": f.message, "exitCode": f.code }));
            }
            ExitCode::from(f.code)
        }
    }
}
