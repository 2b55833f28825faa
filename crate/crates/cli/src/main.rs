//! `aed` — error-detecting codes on asymmetric channels whose additive
//! noise is nonnegative and bounded in amplitude, Hamming weight, and total
//! weight. Subcommands cover the noise model (`out`), congruence codes
//! (`code`), exact detection checks (`check`, `mindist`), converse bounds
//! (`bounds`), exact optimal-size search (`search`, `sweep`), and Monte
//! Carlo simulation (`sim`).
//!
//! Exit codes: 0 success, 1 usage or runtime failure, 2 a `check` that
//! found a confusable pair (the witness is printed as JSON).

mod manifest;
mod output;

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand};
use serde_json::json;

use aed_core::ser::ratio_string;
use aed_core::{
    all_bounds, best_index, build_conflict_graph, class_counts, enumerate_out, exact_optimum,
    format_word, is_aed, max_index, min_hamming_distance, parse_code, parse_words, run_sweep,
    rows_to_csv, simulate, Adversary, BoundValue, Budget, ChannelParams, CongruenceCode, Coord,
    GridSpec, Mode, RawParams, SimCode, SweepRow, Word, DEFAULT_VERTEX_CAP,
};

use manifest::RunManifest;
use output::{emit, Emission, Format};

/// Error-detecting codes on asymmetric channels with bounded nonnegative
/// noise.
#[derive(Parser)]
#[command(name = "aed", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Cap the number of worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the result to this file (plus a `.manifest.json` sidecar)
    /// instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; every subcommand picks a natural default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the output region Out(x) of one input word.
    Out(OutArgs),
    /// Congruence-code queries (count, enumerate, jstar, density).
    #[command(subcommand)]
    Code(CodeCommand),
    /// Verify that a codeword file detects every admissible error.
    Check(CheckArgs),
    /// Minimum pairwise Hamming distance of a codeword file.
    Mindist(MindistArgs),
    /// Evaluate the converse bounds for a channel.
    Bounds(BoundsArgs),
    /// Exact branch-and-bound search for the largest detecting code.
    Search(SearchArgs),
    /// Run the exact search across a parameter grid (TOML or JSON).
    Sweep(SweepArgs),
    /// Monte Carlo simulation of transmissions over the channel.
    Sim(SimArgs),
}

/// Channel selection shared by most subcommands.
#[derive(Args)]
struct ChannelArgs {
    /// Channel tuple `q,n,a,h,t`; `.` leaves a field unconstrained
    /// (`q` must be `.` in integer mode).
    #[arg(long)]
    params: String,
    /// Alphabet semantics: finite (clipped), cyclic (wraparound), or
    /// integer (unbounded).
    #[arg(long, default_value = "finite")]
    mode: String,
}

impl ChannelArgs {
    fn channel(&self) -> Result<ChannelParams> {
        let mode: Mode = self.mode.parse()?;
        let raw: RawParams = self.params.parse()?;
        Ok(raw.normalize(mode)?)
    }
}

#[derive(Args)]
struct OutArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// The input word: comma-separated coordinates, e.g. "0,3,1".
    #[arg(long)]
    x: String,
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Exact number of codewords in the class.
    Count(ClassArgs),
    /// List the codewords, one per line.
    Enumerate(ClassArgs),
    /// The closed-form favoured class index and the verified largest class.
    Jstar(JstarArgs),
    /// Exact density of the integer-alphabet class on the window
    /// {-k,..,k}^n.
    Density(DensityArgs),
}

#[derive(Args)]
struct ClassArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Class index j (the residue of the coordinate sum mod t+1).
    #[arg(long, default_value_t = 0)]
    j: u64,
}

#[derive(Args)]
struct JstarArgs {
    #[command(flatten)]
    channel: ChannelArgs,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Class index j (the residue of the coordinate sum mod t+1).
    #[arg(long, default_value_t = 0)]
    j: u64,
    /// Window half-width k.
    #[arg(long, default_value_t = 1000)]
    window: u64,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Codeword file: one word per line, space-separated coordinates,
    /// `#` comments.
    #[arg(long)]
    code: PathBuf,
}

#[derive(Args)]
struct MindistArgs {
    /// Codeword file: one word per line, space-separated coordinates,
    /// `#` comments.
    #[arg(long)]
    code: PathBuf,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    channel: ChannelArgs,
}

#[derive(Args)]
struct SearchArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Stop after expanding this many branch nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop after this many seconds of search.
    #[arg(long)]
    budget_secs: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Grid file, `.toml` or `.json`.
    #[arg(long)]
    grid: PathBuf,
    /// Stop each instance after expanding this many branch nodes.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Stop each instance after this many seconds of search.
    #[arg(long)]
    budget_secs: Option<u64>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["code_family", "code"])))]
struct SimArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    /// Simulate a congruence class, written as "j=<index>".
    #[arg(long)]
    code_family: Option<String>,
    /// Simulate an explicit codeword file.
    #[arg(long)]
    code: Option<PathBuf>,
    /// Number of transmissions.
    #[arg(long)]
    trials: u64,
    /// RNG seed; identical seeds give identical reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Out-of-model noise instead of the channel's own:
    /// "weight=<w>" (uniform over total-weight-w errors) or
    /// "concentrated=<w>" (one coordinate takes all of w).
    #[arg(long)]
    adversary: Option<String>,
}

/// A finished subcommand: what to print, how, and the exit status.
struct Outcome {
    manifest: RunManifest,
    emission: Emission,
    default_format: Format,
    /// Check violations always print JSON so the witness is parseable.
    force_json: bool,
    exit: u8,
}

impl Outcome {
    fn new(manifest: RunManifest, emission: Emission, default_format: Format) -> Self {
        Outcome { manifest, emission, default_format, force_json: false, exit: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Usage problems exit 1 in this tool (2 is reserved for failed
            // checks); help and version remain successes.
            let is_help = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if is_help { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("aed: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let outcome = match &cli.command {
        Command::Out(args) => run_out(args)?,
        Command::Code(CodeCommand::Count(args)) => run_count(args)?,
        Command::Code(CodeCommand::Enumerate(args)) => run_enumerate(args)?,
        Command::Code(CodeCommand::Jstar(args)) => run_jstar(args)?,
        Command::Code(CodeCommand::Density(args)) => run_density(args)?,
        Command::Check(args) => run_check(args)?,
        Command::Mindist(args) => run_mindist(args)?,
        Command::Bounds(args) => run_bounds(args)?,
        Command::Search(args) => run_search(args)?,
        Command::Sweep(args) => run_sweep_cmd(args)?,
        Command::Sim(args) => run_sim(args)?,
    };
    let format =
        if outcome.force_json { Format::Json } else { cli.format.unwrap_or(outcome.default_format) };
    emit(cli.out.as_deref(), format, outcome.manifest, &outcome.emission)?;
    Ok(ExitCode::from(outcome.exit))
}

/// The search vertex cap, overridable through `AED_VERTEX_CAP`.
fn vertex_cap() -> Result<usize> {
    match env::var("AED_VERTEX_CAP") {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| anyhow!("AED_VERTEX_CAP must be a nonnegative integer, got {v:?}")),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_VERTEX_CAP),
        Err(err) => Err(err).context("reading AED_VERTEX_CAP"),
    }
}

fn parse_point(text: &str) -> Result<Word> {
    text.split(',')
        .map(|field| {
            field
                .trim()
                .parse::<Coord>()
                .map_err(|_| anyhow!("coordinate {field:?} is not an integer"))
        })
        .collect::<Result<Word>>()
        .with_context(|| format!("parsing the word {text:?}"))
}

fn read_code_file(path: &PathBuf, manifest: &mut RunManifest) -> Result<String> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    manifest.record_input(path, &bytes);
    String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))
}

fn search_budget(budget_nodes: Option<u64>, budget_secs: Option<u64>) -> Budget {
    let mut budget = Budget::default();
    if let Some(nodes) = budget_nodes {
        budget.max_nodes = nodes;
    }
    budget.max_time = budget_secs.map(Duration::from_secs);
    budget
}

fn run_out(args: &OutArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let x = parse_point(&args.x)?;
    let region = enumerate_out(&x, &p)?;
    let members = region.members();
    let text = members.iter().map(|w| format_word(w)).collect::<Vec<_>>().join("\n");
    let json = json!({ "x": x, "size": members.len(), "members": members });
    Ok(Outcome::new(
        RunManifest::new("out").with_params(&p),
        Emission { text, json },
        Format::Text,
    ))
}

fn run_count(args: &ClassArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let code = CongruenceCode::from_params(&p, args.j)?;
    let count = code.count()?;
    let json = json!({ "j": args.j, "modulus": code.modulus(), "count": count.to_string() });
    Ok(Outcome::new(
        RunManifest::new("code count").with_params(&p),
        Emission { text: count.to_string(), json },
        Format::Text,
    ))
}

fn run_enumerate(args: &ClassArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let code = CongruenceCode::from_params(&p, args.j)?;
    let words = code.words()?;
    let text = words.iter().map(|w| format_word(w)).collect::<Vec<_>>().join("\n");
    let json = json!({ "j": args.j, "size": words.len(), "words": words });
    Ok(Outcome::new(
        RunManifest::new("code enumerate").with_params(&p),
        Emission { text, json },
        Format::Text,
    ))
}

fn run_jstar(args: &JstarArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let q = p
        .q()
        .ok_or_else(|| anyhow!("jstar compares class sizes, which needs a bounded alphabet"))?;
    let (n, t) = (p.n() as u64, p.total_budget());
    let counts = class_counts(q, n, t)?;
    let formula_j = max_index(q, n, t)?;
    let (best_j, best_count) = best_index(q, n, t)?;
    let text = format!(
        "formula_index {formula_j}\nformula_count {}\nbest_index {best_j}\nbest_count {best_count}",
        counts[formula_j as usize]
    );
    let json = json!({
        "modulus": t + 1,
        "formula_index": formula_j,
        "formula_count": counts[formula_j as usize].to_string(),
        "best_index": best_j,
        "best_count": best_count.to_string(),
        "class_counts": counts.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome::new(
        RunManifest::new("code jstar").with_params(&p),
        Emission { text, json },
        Format::Text,
    ))
}

fn run_density(args: &DensityArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let code = CongruenceCode::from_params(&p, args.j)?;
    let report = code.density(args.window)?;
    let text = format!(
        "window_k {}\nmember_count {}\nwindow_size {}\nempirical {}\nexact {}",
        report.window_k,
        report.member_count,
        report.window_size,
        ratio_string(&report.empirical),
        ratio_string(&report.exact),
    );
    let mut json = serde_json::to_value(&report)?;
    json["j"] = json!(args.j);
    Ok(Outcome::new(
        RunManifest::new("code density").with_params(&p),
        Emission { text, json },
        Format::Json,
    ))
}

fn run_check(args: &CheckArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let mut manifest = RunManifest::new("check").with_params(&p);
    let text = read_code_file(&args.code, &mut manifest)?;
    let words = parse_words(&text)?;
    let verdict = is_aed(&words, &p)?;
    let json = json!({
        "holds": verdict.holds,
        "code_size": words.len(),
        "witness": verdict.witness.as_ref().map(|(x, y)| json!({ "x": x, "y": y })),
    });
    let emission = match &verdict.witness {
        None => Emission {
            text: format!("ok: {} codewords detect every admissible error on {p}", words.len()),
            json,
        },
        Some((x, y)) => Emission {
            text: format!("confusable pair: {} -> {}", format_word(x), format_word(y)),
            json,
        },
    };
    let mut outcome = Outcome::new(manifest, emission, Format::Text);
    if !verdict.holds {
        outcome.force_json = true;
        outcome.exit = 2;
    }
    Ok(outcome)
}

fn run_mindist(args: &MindistArgs) -> Result<Outcome> {
    let mut manifest = RunManifest::new("mindist");
    let text = read_code_file(&args.code, &mut manifest)?;
    let words = parse_words(&text)?;
    let distance = min_hamming_distance(&words)?;
    let json = json!({ "code_size": words.len(), "min_distance": distance });
    Ok(Outcome::new(manifest, Emission { text: distance.to_string(), json }, Format::Text))
}

fn run_bounds(args: &BoundsArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let reports = all_bounds(&p);
    let text = reports
        .iter()
        .map(|r| {
            let value = match &r.value {
                None => "-".to_string(),
                Some(BoundValue::Density { limit }) => ratio_string(limit),
                Some(BoundValue::Cardinality { words }) => words.to_string(),
                Some(BoundValue::CardinalityRational { exact, floor }) => {
                    format!("{} (floor {floor})", ratio_string(exact))
                }
            };
            let applicable = if r.applicable { "applicable" } else { "inapplicable" };
            format!("{} {applicable} {value}: {}", r.kind.name(), r.reason)
        })
        .collect::<Vec<_>>()
        .join("\n");
    let json = serde_json::to_value(&reports)?;
    Ok(Outcome::new(
        RunManifest::new("bounds").with_params(&p),
        Emission { text, json },
        Format::Json,
    ))
}

fn run_search(args: &SearchArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let graph = build_conflict_graph(&p, vertex_cap()?)?;
    let budget = search_budget(args.budget_nodes, args.budget_secs);
    let result = exact_optimum(&graph, &budget);
    let text = format!(
        "lower {}\nupper {}\nexact {}\nnodes {}\nprunes {}",
        result.lower,
        result.upper,
        result.exact(),
        result.stats.nodes,
        result.stats.prunes,
    );
    let json = json!({
        "lower": result.lower,
        "upper": result.upper,
        "exact": result.exact(),
        "truncated": result.truncated,
        "vertex_count": graph.vertex_count(),
        "nodes": result.stats.nodes,
        "prunes": result.stats.prunes,
        "witness": result.witness.words(),
    });
    Ok(Outcome::new(
        RunManifest::new("search").with_params(&p),
        Emission { text, json },
        Format::Json,
    ))
}

fn sweep_row_json(row: &SweepRow) -> serde_json::Value {
    let p = &row.params;
    json!({
        "q": p.q(),
        "n": p.n(),
        "a": p.amplitude(),
        "h": p.hamming_budget(),
        "t": p.total_budget(),
        "mode": p.mode().as_str(),
        "lower": row.lower,
        "upper": row.upper,
        "exact": row.exact,
        "congruence_size": row.congruence_size.to_string(),
        "flag": row.flag.as_str(),
    })
}

fn run_sweep_cmd(args: &SweepArgs) -> Result<Outcome> {
    let mut manifest = RunManifest::new("sweep");
    let bytes =
        fs::read(&args.grid).with_context(|| format!("reading {}", args.grid.display()))?;
    manifest.record_input(&args.grid, &bytes);
    let text = String::from_utf8(bytes)
        .with_context(|| format!("{} is not UTF-8", args.grid.display()))?;
    let grid: GridSpec = match args.grid.extension().and_then(|e| e.to_str()) {
        Some("toml") => toml::from_str(&text)
            .with_context(|| format!("parsing {} as TOML", args.grid.display()))?,
        Some("json") => serde_json::from_str(&text)
            .with_context(|| format!("parsing {} as JSON", args.grid.display()))?,
        _ => bail!("grid file {} must end in .toml or .json", args.grid.display()),
    };
    let budget = search_budget(args.budget_nodes, args.budget_secs);
    let rows = run_sweep(&grid, &budget, vertex_cap()?)?;
    let json = json!(rows.iter().map(sweep_row_json).collect::<Vec<_>>());
    Ok(Outcome::new(manifest, Emission { text: rows_to_csv(&rows), json }, Format::Text))
}

fn parse_adversary(text: &str) -> Result<Adversary> {
    let (kind, value) = text
        .split_once('=')
        .ok_or_else(|| anyhow!("adversary {text:?} must be weight=<w> or concentrated=<w>"))?;
    let weight: u64 = value
        .trim()
        .parse()
        .map_err(|_| anyhow!("adversary weight {value:?} is not an integer"))?;
    match kind.trim() {
        "weight" => Ok(Adversary::UniformWeight { weight }),
        "concentrated" => Ok(Adversary::Concentrated { weight }),
        other => bail!("unknown adversary {other:?} (expected weight or concentrated)"),
    }
}

fn run_sim(args: &SimArgs) -> Result<Outcome> {
    let p = args.channel.channel()?;
    let mut manifest = RunManifest::new("sim").with_params(&p).with_seed(args.seed);
    let code = match (&args.code_family, &args.code) {
        (Some(family), None) => {
            let j: u64 = family
                .strip_prefix("j=")
                .and_then(|v| v.trim().parse().ok())
                .ok_or_else(|| anyhow!("code family {family:?} must be written j=<index>"))?;
            SimCode::Congruence(CongruenceCode::from_params(&p, j)?)
        }
        (None, Some(path)) => {
            let q = p.q().ok_or_else(|| {
                anyhow!("simulation needs a bounded alphabet (finite or cyclic mode)")
            })?;
            let text = read_code_file(path, &mut manifest)?;
            SimCode::Explicit(parse_code(&text, q)?)
        }
        _ => unreachable!("clap enforces exactly one code source"),
    };
    let adversary = args.adversary.as_deref().map(parse_adversary).transpose()?;
    let report = simulate(&code, &p, args.trials, args.seed, adversary)?;
    let text = format!(
        "trials {}\ndetected {}\nsilent {}\nin_model_misses {}\nout_of_model_misses {}\ndetection_rate {}",
        report.trials,
        report.detected,
        report.silent,
        report.in_model_misses,
        report.out_of_model_misses,
        ratio_string(&report.detection_rate),
    );
    let json = serde_json::to_value(&report)?;
    Ok(Outcome::new(manifest, Emission { text, json }, Format::Json))
}
