//! `percolab`: generators, analytics, percolation runs, audits and
//! experiments from the command line.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 when a run fails.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use percolab::audit::{audit_profile, spectral_lambda, ExpansionProfile, LayerSpectrum, ProfileMode};
use percolab::graph::write_edge_list;
use percolab::gw::{
    component_tail_bound, small_component_threshold, solve, solve_y_asymptotic, DegreeMode, ThresholdMode,
    DEFAULT_TOLERANCE,
};
use percolab::harness::{
    run_counterexample, run_ercp_with, run_scaling, write_histogram, ExperimentConfig, GraphSpec, HarnessError,
};
use percolab::percolation::{bond_components, components, sample_site};
use percolab::{Error, ErrorKind, Graph};

/// Threshold scale of the desk-scale profile.
const SCALED_PROFILE: f64 = 0.03;

#[derive(Parser, Debug)]
#[command(name = "percolab", version, about = "Percolation laboratory for regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Branching-process fixed points, thresholds and tail bounds.
    Gw(Flags),
    /// Write a host graph as an edge list.
    Gen(GenArgs),
    /// One percolation sample; prints its component statistics.
    Percolate(Flags),
    /// Expansion-profile audit with a spectral estimate.
    Audit(Flags),
    /// Repeated site percolation with two-round exposure.
    Ercp(Flags),
    /// ERCP runs over an increasing sequence of hosts.
    Scaling(Flags),
    /// Trials and structural audit of the clustered construction.
    Counterexample(Flags),
}

#[derive(Args, Debug)]
#[command(args_override_self = true)]
struct GenArgs {
    /// Graph family (same as --family).
    #[arg(value_enum)]
    family_arg: Option<Family>,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Family {
    Hypercube,
    RandomRegular,
    Counterexample,
    Complete,
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ModeArg {
    Growing,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ProfileArg {
    P,
    Q,
    R,
    Harper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ThresholdProfile {
    Explicit,
    Scaled,
}

/// Flags shared by every subcommand. A config file given with `--config`
/// holds `key=value` lines with the same names.
#[derive(Args, Debug, Clone, Serialize)]
#[command(args_override_self = true)]
struct Flags {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value_t = ModeArg::Growing)]
    mode: ModeArg,
    /// Edge-list file of the host graph.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Seed of random host graphs; defaults to --seed.
    #[arg(long)]
    graph_seed: Option<u64>,
    /// CSV output: size histogram (ercp) or scaling points (scaling).
    #[arg(long)]
    hist: Option<PathBuf>,
    #[arg(long, value_enum)]
    profile: Option<ProfileArg>,
    #[arg(long, value_enum, default_value_t = ThresholdProfile::Explicit)]
    thresholds: ThresholdProfile,
    /// Explicit threshold multiplier; overrides --thresholds.
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    w_cutoff: Option<f64>,
    #[arg(long)]
    gap_lo: Option<f64>,
    #[arg(long)]
    gap_hi: Option<f64>,
    #[arg(long)]
    c1: Option<f64>,
    #[arg(long)]
    c2: Option<f64>,
    #[arg(long)]
    c3: Option<f64>,
    /// Log power `C` of the profile scopes.
    #[arg(long)]
    log_power: Option<f64>,
    /// Scope constant of the local vertex-expansion property (mode Q).
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    budget: Option<u64>,
    /// Hypercube dimensions for scaling, comma separated.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Random-regular sizes for scaling, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Residual tolerance of the spectral estimate.
    #[arg(long)]
    tol: Option<f64>,
    /// Bond instead of site percolation.
    #[arg(long)]
    bond: bool,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(PathBuf, std::io::Error),
    Core(Error),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(..) => 2,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Runtime => 2,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require<T>(value: Option<T>, flag: &str, command: &str) -> Result<T> {
    value.ok_or_else(|| usage(format!("{command} needs --{flag}")))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("PERCOLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| usage(format!("PERCOLAB_THREADS = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| usage(format!("thread pool: {e}")))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Gw(f) => cmd_gw(&f),
        Command::Gen(g) => {
            let family = g.family_arg.or(g.flags.family);
            cmd_gen(family, &g.flags)
        }
        Command::Percolate(f) => cmd_percolate(&f),
        Command::Audit(f) => cmd_audit(&f),
        Command::Ercp(f) => cmd_ercp(&f),
        Command::Scaling(f) => cmd_scaling(&f),
        Command::Counterexample(f) => cmd_counterexample(&f),
    }
}

fn degree_mode(f: &Flags) -> DegreeMode {
    match f.mode {
        ModeArg::Growing => DegreeMode::Growing,
        ModeArg::Constant => DegreeMode::Constant,
    }
}

fn invocation(command: &str, f: &Flags) -> Value {
    json!({ "command": command, "flags": f })
}

/// Adds the invocation to a serialised report.
fn with_invocation<T: Serialize>(report: &T, command: &str, f: &Flags) -> Result<Value> {
    let mut value = serde_json::to_value(report).map_err(|e| usage(format!("serialisation: {e}")))?;
    if let Value::Object(map) = &mut value {
        map.insert("invocation".into(), invocation(command, f));
    }
    Ok(value)
}

fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialise");
    text.push('\n');
    text
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Writes to `--out` when given, otherwise to stdout.
fn emit(f: &Flags, text: &str) -> Result<()> {
    match &f.out {
        Some(path) => write_file(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io("<stdout>".into(), e))
        }
    }
}

fn graph_spec(f: &Flags, command: &str) -> Result<GraphSpec> {
    if let Some(path) = &f.graph {
        return Ok(GraphSpec::File { path: path.clone() });
    }
    let family = require(f.family, "family or --graph", command)?;
    family_spec(family, f, command)
}

fn family_spec(family: Family, f: &Flags, command: &str) -> Result<GraphSpec> {
    let seed = f.graph_seed.unwrap_or(f.seed);
    Ok(match family {
        Family::Hypercube => GraphSpec::Hypercube { d: require(f.d, "d", command)? },
        Family::RandomRegular => {
            GraphSpec::RandomRegular { n: require(f.n, "n", command)?, d: require(f.d, "d", command)?, seed }
        }
        Family::Counterexample => GraphSpec::Counterexample {
            n: require(f.n, "n", command)?,
            d: require(f.d, "d", command)?,
            b: integer_b(f, command)?,
            k: f.k,
            seed,
        },
        Family::Complete => GraphSpec::Complete { n: require(f.n, "n", command)? },
        Family::Cycle => GraphSpec::Cycle { n: require(f.n, "n", command)? },
    })
}

fn integer_b(f: &Flags, command: &str) -> Result<usize> {
    let b = require(f.b, "b", command)?;
    if b.fract() != 0.0 || b < 0.0 {
        return Err(usage(format!("--b {b} must be a non-negative integer for the construction")));
    }
    Ok(b as usize)
}

fn cmd_gw(f: &Flags) -> Result<()> {
    let d = require(f.d, "d", "gw")?;
    let mode = degree_mode(f);
    let p = match (f.p, f.eps) {
        (Some(p), _) => p,
        (None, Some(eps)) => {
            if d < 2 {
                return Err(usage("--d must be at least 2"));
            }
            mode.retention(d, eps)
        }
        (None, None) => return Err(usage("gw needs --p or --eps")),
    };
    let sol = solve(d, p, mode, DEFAULT_TOLERANCE)?;
    let eps = f.eps.unwrap_or(sol.epsilon);
    let mut lines = vec![
        format!("q={:.12}", sol.q),
        format!("y={:.12}", sol.y),
        format!("x={:.12}", sol.x),
        format!("p={:.12}", sol.p),
        format!("eps={:.12}", sol.epsilon),
    ];
    let mut record = json!({ "solution": sol });
    if eps > 0.0 {
        let asym = solve_y_asymptotic(eps, DEFAULT_TOLERANCE)?;
        lines.push(format!("y_asymptotic={:.12}", asym.y));
        record["asymptotic"] = json!(asym);
    }
    if let Some(n) = f.n {
        let threshold_mode = match mode {
            DegreeMode::Growing => ThresholdMode::Growing { eps },
            DegreeMode::Constant => {
                ThresholdMode::Constant { alpha: f.alpha.unwrap_or(1.0 + eps), delta: f.delta.unwrap_or(0.0) }
            }
        };
        let t = small_component_threshold(threshold_mode, n as f64)?;
        lines.push(format!("threshold={:.6}", t.value));
        record["threshold"] = json!(t);
    }
    if let Some(k) = f.k {
        let tail = component_tail_bound(eps, d, k as f64);
        lines.push(format!("tail_bound={:.6e} (clamped {:.6e}, in scope: {})", tail.raw, tail.clamped, tail.in_scope));
        record["tail_bound"] = json!(tail);
    }
    let mut text = lines.join("\n");
    text.push('\n');
    print!("{text}");
    if let Some(path) = &f.out {
        record["invocation"] = invocation("gw", f);
        write_file(path, &render(&record))?;
    }
    Ok(())
}

fn cmd_gen(family: Option<Family>, f: &Flags) -> Result<()> {
    let family = family.ok_or_else(|| usage("gen needs a family"))?;
    let out = require(f.out.as_ref(), "out", "gen")?;
    let spec = family_spec(family, f, "gen")?;
    let g = spec.build().map_err(Error::from)?;
    write_edge_list(&g, out)?;
    eprintln!("wrote {} vertices, {} edges to {}", g.n(), g.edge_count(), out.display());
    Ok(())
}

fn load_graph(f: &Flags, command: &str) -> Result<(GraphSpec, Graph)> {
    let spec = graph_spec(f, command)?;
    let g = spec.build().map_err(Error::from)?;
    Ok((spec, g))
}

fn cmd_percolate(f: &Flags) -> Result<()> {
    let (spec, g) = load_graph(f, "percolate")?;
    let d = g.regular_degree().unwrap_or_else(|| g.max_degree());
    let p = match (f.p, f.eps) {
        (Some(p), _) => p,
        (None, Some(eps)) if d >= 2 => degree_mode(f).retention(d, eps).min(1.0),
        _ => return Err(usage("percolate needs --p, or --eps on a host of degree at least 2")),
    };
    let stats = if f.bond {
        bond_components(&g, p, f.seed)?
    } else {
        let retained = sample_site(&g, p, f.seed)?;
        components(&g, &retained)?
    };
    let report = json!({
        "graph": spec,
        "n": g.n(),
        "p": p,
        "kind": if f.bond { "bond" } else { "site" },
        "retained": stats.retained.count(),
        "components": stats.num_components(),
        "L1": stats.l1,
        "L2": stats.l2,
        "histogram": stats.size_histogram(),
        "invocation": invocation("percolate", f),
    });
    emit(f, &render(&report))
}

fn profile_from(f: &Flags, mode: ProfileMode, default_cap: usize) -> ExpansionProfile {
    let mut profile = ExpansionProfile::new(mode, f.cap.unwrap_or(default_cap));
    let set = |target: &mut f64, value: Option<f64>| {
        if let Some(v) = value {
            *target = v;
        }
    };
    set(&mut profile.c1, f.c1);
    set(&mut profile.c2, f.c2);
    set(&mut profile.c3, f.c3);
    set(&mut profile.alpha, f.alpha);
    set(&mut profile.big_c, f.log_power);
    set(&mut profile.eps, f.eps);
    set(&mut profile.b, f.b);
    set(&mut profile.c, f.c);
    set(&mut profile.delta, f.delta);
    if let Some(budget) = f.budget {
        profile.budget = budget;
    }
    profile
}

fn cmd_audit(f: &Flags) -> Result<()> {
    let (spec, g) = load_graph(f, "audit")?;
    let mode = match f.profile.unwrap_or(ProfileArg::P) {
        ProfileArg::P => ProfileMode::P,
        ProfileArg::Q => ProfileMode::Q,
        ProfileArg::R => ProfileMode::R,
        ProfileArg::Harper => ProfileMode::Harper,
    };
    let mut profile = profile_from(f, mode, 6);
    let mut notes = Vec::new();
    let mut spectral = Value::Null;
    if g.regular_degree().is_some() {
        match spectral_lambda(&g, f.tol.unwrap_or(1e-6), 1_000_000, f.seed) {
            Ok(est) => {
                if est.bipartite {
                    notes.push("bipartite host: lambda = d, so every mixing certificate is vacuous".to_string());
                }
                profile.spectra.push(LayerSpectrum {
                    label: "G".into(),
                    degree: est.d as f64,
                    lambda: est.certified_lambda(),
                    own_graph: true,
                });
                spectral = json!(est);
            }
            Err(e) => notes.push(format!("no spectral estimate: {e}")),
        }
    } else {
        notes.push("irregular host: no spectral estimate".to_string());
    }
    let audit = audit_profile(&g, &profile)?;
    let report = json!({
        "graph": spec,
        "spectral": spectral,
        "notes": notes,
        "audit": audit,
        "invocation": invocation("audit", f),
    });
    emit(f, &render(&report))
}

fn experiment(f: &Flags, spec: GraphSpec, command: &str) -> Result<ExperimentConfig> {
    let eps = require(f.eps, "eps", command)?;
    let mut config = ExperimentConfig::new(spec, eps, f.trials.unwrap_or(30), f.seed);
    config.mode = degree_mode(f);
    if let Some(s) = f.s {
        config.s = s;
    }
    let t = &mut config.thresholds;
    t.scale = f.scale.unwrap_or(match f.thresholds {
        ThresholdProfile::Explicit => 1.0,
        ThresholdProfile::Scaled => SCALED_PROFILE,
    });
    t.w_cutoff = f.w_cutoff;
    t.gap_lo = f.gap_lo;
    t.gap_hi = f.gap_hi;
    if let Some(c) = f.log_power {
        t.big_c = c;
    }
    if let Some(delta) = f.delta {
        t.delta = delta;
    }
    if let Some(cap) = f.cap {
        config.audit_cap = cap;
    }
    if let Some(budget) = f.budget {
        config.audit_budget = budget;
    }
    config.output = f.out.clone();
    config.validate().map_err(Error::from)?;
    Ok(config)
}

fn cmd_ercp(f: &Flags) -> Result<()> {
    let config = experiment(f, graph_spec(f, "ercp")?, "ercp")?;
    let mut flush_error = None;
    let report = run_ercp_with(&config, |partial| {
        eprintln!("trials {}/{}", partial.trials.len(), config.trials);
        if let (Some(path), false) = (&f.out, partial.complete) {
            // keep what has been computed if the run is cut short
            let text = with_invocation(partial, "ercp", f).map(|v| render(&v));
            if let Err(e) = text.and_then(|t| write_file(path, &t)) {
                flush_error.get_or_insert(e);
            }
        }
    })
    .map_err(Error::from)?;
    if let Some(e) = flush_error {
        return Err(e);
    }
    if let Some(path) = &f.hist {
        write_histogram(&report.histogram, path).map_err(Error::from)?;
    }
    emit(f, &render(&with_invocation(&report, "ercp", f)?))
}

fn cmd_scaling(f: &Flags) -> Result<()> {
    let sequence: Vec<GraphSpec> = match (&f.dims, &f.sizes) {
        (Some(dims), None) => dims.iter().map(|&d| GraphSpec::Hypercube { d }).collect(),
        (None, Some(sizes)) => {
            let d = require(f.d, "d", "scaling")?;
            let seed = f.graph_seed.unwrap_or(f.seed);
            sizes.iter().map(|&n| GraphSpec::RandomRegular { n, d, seed }).collect()
        }
        _ => return Err(usage("scaling needs exactly one of --dims or --sizes")),
    };
    let config = experiment(f, sequence[0].clone(), "scaling")?;
    let report = run_scaling(&config, &sequence).map_err(Error::from)?;
    if let Some(path) = &f.hist {
        let mut csv = String::from("n,d,median_L2,mean_L1_frac,x_predicted,l2_over_ln_n,merge_rate\n");
        for p in &report.points {
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                p.n, p.d, p.median_l2, p.mean_l1_frac, p.x_predicted, p.l2_over_ln_n, p.merge_rate
            ));
        }
        write_file(path, &csv)?;
    }
    emit(f, &render(&with_invocation(&report, "scaling", f)?))
}

fn cmd_counterexample(f: &Flags) -> Result<()> {
    let spec = match &f.graph {
        Some(_) => return Err(usage("counterexample builds its own host; drop --graph")),
        None => family_spec(Family::Counterexample, f, "counterexample")?,
    };
    let config = experiment(f, spec, "counterexample")?;
    let report = run_counterexample(&config).map_err(|e: HarnessError| Error::from(e))?;
    emit(f, &render(&with_invocation(&report, "counterexample", f)?))
}

