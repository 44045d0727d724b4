mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use quietlift_core::certificates::{
    hoffman_chromatic, hoffman_independence, hoffman_max_t_cut, kahale_bound, trivial_domination, ExpansionMode,
    Quantity,
};
use quietlift_core::ensembles::{
    apply_noise, random_lift, sample_bipartite_regular, sample_regular_with, NoiseMode, NoiseSpec, RegularMethod,
    DEFAULT_RETRY_CAP,
};
use quietlift_core::exact::{
    chromatic_exact, domination_exact, independence_exact, max_t_cut_exact, modified_independence,
    small_set_expansion_exact, BoundaryConvention, EdgeWeighted, ExpansionSearch,
};
use quietlift_core::harness::{self, builtin, ExperimentConfig, ExperimentKind};
use quietlift_core::sdp::{
    infeasibility_certificate, lost2_build_constraints, lost2_check, lost2_lower_witness, lost2_reduce,
    null_witness, path_stats_check, planted_pseudomoment, planted_witness, symmetric_path_stats,
    NullWitnessOptions, PathStatsInstance, SymmetricDecision, DEFAULT_S_CAP,
};
use quietlift_core::spectral::{graph_spectrum, is_ramanujan, nontrivial_extremes, DENSE_LIMIT};
use quietlift_core::{find_bipartition, Error, RegularGraph, SimpleGraph};
use serde_json::json;

use crate::io::{edge_csv, emit, load_graph, load_lift, Format, GraphSource, LiftFile, Output};

#[derive(Debug, Parser)]
#[command(name = "quietlift", version, about = "Random lifts, spectral certificates and Path Statistics checks")]
struct Cli {
    /// Base seed for every stochastic step.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file, or directory for commands that write several files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample graphs.
    #[command(subcommand)]
    Gen(Gen),
    /// Perturb a graph by degree-preserving edge swaps.
    Noise(NoiseArgs),
    /// Eigenvalues and the Ramanujan test.
    Spectrum(SpectrumArgs),
    /// Spectral certificate for a combinatorial quantity.
    Certify(CertifyArgs),
    /// Exact optimum on a small graph.
    Exact(ExactArgs),
    /// Path Statistics and Local Statistics checks.
    #[command(subcommand)]
    Sdp(Sdp),
    /// Spectral-radius detection experiment.
    Detect(DetectArgs),
    /// Reproduction suites.
    #[command(subcommand)]
    Repro(Repro),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Auto,
    Pairing,
    Sequential,
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// Uniform simple d-regular graph.
    Regular {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
    },
    /// Bipartite d-regular graph with n/2 vertices per side.
    Bipartite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Uniform m-lift of a base graph.
    Lift {
        #[command(flatten)]
        base: GraphSource,
        #[arg(long)]
        m: usize,
    },
}

#[derive(Debug, Args)]
struct NoiseArgs {
    /// Graph or lift file.
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    epsilon: f64,
    /// rand, rand_bi, respectful_rand, respectful_rand_bi, adversarial, respectful_adversarial.
    #[arg(long, default_value = "rand")]
    mode: String,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Treat -d as trivial.
    #[arg(long)]
    bipartite: bool,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// max_t_cut, chromatic, independence, domination, vertex_expansion, edge_expansion.
    quantity: String,
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Search {
    Connected,
    AllSubsets,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Boundary {
    Inclusive,
    Disjoint,
}

#[derive(Debug, Args)]
struct ExactArgs {
    /// max_t_cut, chromatic, independence, modified_independence, domination, vertex_expansion, edge_expansion.
    quantity: String,
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = Search::Connected)]
    search: Search,
    #[arg(long, value_enum, default_value_t = Boundary::Inclusive)]
    boundary: Boundary,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PathWitness {
    Planted,
    Null,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Lost2Witness {
    Planted,
    Lower,
}

#[derive(Debug, Args)]
struct LevelArgs {
    /// Walk-length level D.
    #[arg(long, default_value_t = 3)]
    level: usize,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Additive slack is slack_c0 * ln n.
    #[arg(long, default_value_t = 0.0)]
    slack_c0: f64,
    #[arg(long)]
    bipartite: bool,
}

#[derive(Debug, Subcommand)]
enum Sdp {
    /// Check a Path Statistics witness on a graph against a base spectrum.
    PathStats {
        /// Graph file; a lift file for the planted witness.
        #[arg(long)]
        graph: PathBuf,
        /// Base whose spectrum sets the targets (defaults to the lift's base).
        #[arg(long)]
        base: Option<String>,
        #[arg(long, value_enum, default_value_t = PathWitness::Null)]
        witness: PathWitness,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Symmetric Path Statistics with every nontrivial eigenvalue equal to lambda.
    SymPathStats {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Degree-(2, D) Local Statistics check and its reduction to Path Statistics.
    Lost2 {
        /// Lift file (its base supplies the labels).
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Lost2Witness::Planted)]
        witness: Lost2Witness,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Chebyshev infeasibility certificate for a non-Ramanujan base.
    Refute {
        #[arg(long)]
        base: String,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        level: LevelArgs,
    },
}

#[derive(Debug, Args)]
struct DetectArgs {
    #[arg(long)]
    base: String,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    #[arg(long, default_value = "rand")]
    noise: String,
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Repro {
    /// Ground-truth checks for the four figure graphs.
    Figures,
    /// One row of the applications table.
    Table1 {
        #[arg(long)]
        row: String,
        #[arg(long, default_value_t = 2000)]
        n: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Run an experiment from a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::InvalidParameter(msg.into()).into()
}

fn gen(cmd: &Gen, seed: u64) -> Result<Output> {
    Ok(match cmd {
        Gen::Regular { n, d, method } => {
            let method = match method {
                Method::Auto => RegularMethod::Auto,
                Method::Pairing => RegularMethod::Pairing,
                Method::Sequential => RegularMethod::Sequential,
            };
            let g = sample_regular_with(*n, *d, seed, method, DEFAULT_RETRY_CAP)?;
            Output::new(g.to_json())?.with_csv(edge_csv(&g))
        }
        Gen::Bipartite { n, d } => {
            let (g, layout) = sample_bipartite_regular(*n, *d, seed)?;
            let mut j = serde_json::to_value(g.to_json())?;
            j["left"] = json!(layout.left);
            Output::new(j)?.with_csv(edge_csv(&g))
        }
        Gen::Lift { base, m } => {
            let h = base.load()?.multigraph();
            let lift = random_lift(&h, *m, seed)?;
            Output::new(LiftFile::from_lift(&lift))?.with_csv(edge_csv(&lift.graph))
        }
    })
}

fn noise(a: &NoiseArgs, seed: u64) -> Result<Output> {
    let mode: NoiseMode = a.mode.parse()?;
    let lift = if mode.respectful() { Some(load_lift(&a.graph)?) } else { None };
    let g = match &lift {
        Some(l) => l.graph.clone(),
        None => load_graph(&a.graph)?.simple()?,
    };
    let out = apply_noise(&g, &NoiseSpec::new(a.epsilon, mode), lift.as_ref(), seed)?;
    let mut j = match &lift {
        Some(l) => {
            let mut f = LiftFile::from_lift(l);
            f.edges = out.graph.edges().into_iter().map(|(u, v)| [u, v]).collect();
            serde_json::to_value(f)?
        }
        None => serde_json::to_value(out.graph.to_json())?,
    };
    j["noise"] = json!({
        "epsilon": a.epsilon,
        "mode": mode,
        "removed": out.removed,
        "added": out.added,
        "attempts": out.attempts,
        "switching_repair": out.switching_repair,
    });
    Ok(Output::new(j)?.with_csv(edge_csv(&out.graph)))
}

fn spectrum_of<G: RegularGraph>(g: &G, bipartite: bool) -> Result<Output> {
    let ram = is_ramanujan(g, bipartite)?;
    let ex = nontrivial_extremes(g, bipartite)?;
    if g.order() > DENSE_LIMIT && !g.prefers_dense() {
        return Output::new(json!({ "n": g.order(), "extremes": ex, "ramanujan": ram }));
    }
    let s = graph_spectrum(g, bipartite)?;
    let mut csv = String::from("index,value,trivial\n");
    for (i, (v, t)) in s.values.iter().zip(&s.trivial_mask).enumerate() {
        csv.push_str(&format!("{i},{v},{t}\n"));
    }
    Ok(Output::new(json!({ "n": g.order(), "spectrum": s, "extremes": ex, "ramanujan": ram }))?.with_csv(csv))
}

fn certify_on<G: RegularGraph>(g: &G, a: &CertifyArgs) -> Result<Output> {
    let q: Quantity = a.quantity.parse()?;
    let c = match q {
        Quantity::MaxTCut => hoffman_max_t_cut(g, a.t)?,
        Quantity::Chromatic => hoffman_chromatic(g)?,
        Quantity::Independence | Quantity::ModifiedIndependence => hoffman_independence(g)?,
        Quantity::Domination => trivial_domination(g.common_degree().ok_or(Error::NotRegular)?)?,
        Quantity::VertexExpansion => kahale_bound(g, a.epsilon, ExpansionMode::Vertex)?,
        Quantity::EdgeExpansion => kahale_bound(g, a.epsilon, ExpansionMode::Edge)?,
    };
    Output::new(c)
}

fn exact_on<G: RegularGraph + EdgeWeighted>(g: &G, a: &ExactArgs, multi: Option<&quietlift_core::Multigraph>) -> Result<Output> {
    let q: Quantity = a.quantity.parse()?;
    let search = match a.search {
        Search::Connected => ExpansionSearch::Connected,
        Search::AllSubsets => ExpansionSearch::AllSubsets,
    };
    let boundary = match a.boundary {
        Boundary::Inclusive => BoundaryConvention::Inclusive,
        Boundary::Disjoint => BoundaryConvention::Disjoint,
    };
    let r = match q {
        Quantity::MaxTCut => max_t_cut_exact(g, a.t)?,
        Quantity::Chromatic => chromatic_exact(g)?,
        Quantity::Independence => independence_exact(g)?,
        Quantity::ModifiedIndependence => match multi {
            Some(h) => modified_independence(h)?,
            None => independence_exact(g)?,
        },
        Quantity::Domination => domination_exact(g)?,
        Quantity::VertexExpansion => small_set_expansion_exact(g, a.epsilon, ExpansionMode::Vertex, search, boundary)?,
        Quantity::EdgeExpansion => small_set_expansion_exact(g, a.epsilon, ExpansionMode::Edge, search, boundary)?,
    };
    Output::new(json!({ "value_f64": r.value_f64(), "result": r }))
}

fn layout_for(g: &SimpleGraph, bipartite: bool) -> Result<Option<quietlift_core::BipartiteLayout>> {
    if !bipartite {
        return Ok(None);
    }
    Ok(Some(find_bipartition(g)?.ok_or(Error::NotBipartite)?))
}

fn instance(h: &quietlift_core::Multigraph, l: &LevelArgs) -> Result<PathStatsInstance> {
    Ok(PathStatsInstance::from_base(h, l.level, l.delta, l.bipartite)?.with_slack(l.slack_c0))
}

fn sdp(cmd: &Sdp, seed: u64) -> Result<Output> {
    let options = NullWitnessOptions { seed, ..NullWitnessOptions::default() };
    match cmd {
        Sdp::PathStats { graph, base, witness, level } => {
            let (g, p, base_graph, log) = match witness {
                PathWitness::Planted => {
                    let lift = load_lift(graph)?;
                    let p = planted_witness(&lift);
                    let h = match base {
                        Some(name) => builtin(name)?,
                        None => lift.base.clone(),
                    };
                    (lift.graph, p, h, None)
                }
                PathWitness::Null => {
                    let g = load_graph(graph)?.simple()?;
                    let h = builtin(base.as_deref().ok_or_else(|| usage("--base is required for the null witness"))?)?;
                    let inst = instance(&h, level)?;
                    let layout = layout_for(&g, level.bipartite)?;
                    let (p, log) = null_witness(&g, &inst, layout.as_ref(), &options)?;
                    (g, p, h, Some(log))
                }
            };
            let inst = instance(&base_graph, level)?;
            let layout = layout_for(&g, level.bipartite)?;
            let rep = path_stats_check(&g, &p, &inst, layout.as_ref())?;
            let pass = rep.feasible;
            Ok(Output::new(json!({ "report": rep, "witness_log": log }))?
                .with_csv(io::to_csv(&serde_json::to_value(&rep.constraints)?))
                .with_pass(pass))
        }
        Sdp::SymPathStats { graph, lambda, k, level } => {
            let g = load_graph(graph)?.simple()?;
            let layout = layout_for(&g, level.bipartite)?;
            let rep =
                symmetric_path_stats(&g, *lambda, *k, level.level, level.delta, level.bipartite, layout.as_ref(), &options)?;
            let pass = rep.decision != SymmetricDecision::Undetermined;
            Ok(Output::new(rep)?.with_pass(pass))
        }
        Sdp::Lost2 { graph, witness, level } => {
            let lift = load_lift(graph)?;
            let layout = layout_for(&lift.graph, level.bipartite)?;
            let pm = match witness {
                Lost2Witness::Planted => planted_pseudomoment(&lift)?,
                Lost2Witness::Lower => {
                    lost2_lower_witness(&lift.graph, &lift.base, level.level, level.delta, layout.as_ref(), &options)?
                }
            };
            let c = lost2_build_constraints(&lift.graph, &lift.base, level.level, level.delta, layout.as_ref())?
                .with_slack(level.slack_c0);
            let rep = lost2_check(&pm, &c)?;
            let p = lost2_reduce(&pm)?;
            let widened = (lift.k() + 1) as f64 * level.delta;
            let inst = instance(&lift.base, level)?.with_delta(widened);
            let reduced = path_stats_check(&lift.graph, &p, &inst, layout.as_ref())?;
            let pass = rep.feasible && reduced.feasible;
            Ok(Output::new(json!({ "lost2": rep, "reduced_path_stats": reduced }))?.with_pass(pass))
        }
        Sdp::Refute { base, graph, level } => {
            let h = builtin(base)?;
            let inst = instance(&h, level)?;
            let cert = match graph {
                Some(p) => infeasibility_certificate(&load_graph(p)?.simple()?, &inst, DEFAULT_S_CAP)?,
                None => quietlift_core::sdp::chebyshev_certificate(&inst, DEFAULT_S_CAP)?,
            };
            let pass = cert.is_some();
            Ok(Output::new(json!({ "base": base, "certificate": cert }))?.with_pass(pass))
        }
    }
}

/// Runs an experiment; files go to `out` when set, otherwise the main file is printed.
fn experiment(mut config: ExperimentConfig, out: Option<&PathBuf>, format: Format) -> Result<(Output, bool)> {
    if let Some(dir) = out {
        config.out = Some(dir.clone());
    }
    let written = config.out.is_some();
    let arts = harness::run(&config)?;
    let (main, csv) = match config.experiment {
        ExperimentKind::Detect => ("detect.json", "roc.csv"),
        ExperimentKind::DeltaSweep => ("sweep.json", "sweep.csv"),
        ExperimentKind::NoiseRobustness => ("slopes.json", "residuals.csv"),
    };
    let json: serde_json::Value = if written {
        json!({ "written": arts.written })
    } else {
        serde_json::from_str(arts.get(main).context("missing experiment output")?)?
    };
    let mut o = Output::new(json)?;
    if !written && format == Format::Csv {
        o = o.with_csv(arts.get(csv).unwrap_or_default().to_string());
    }
    Ok((o, written))
}

fn repro(cmd: &Repro, seed: Option<u64>, out: Option<&PathBuf>, format: Format) -> Result<(Output, bool)> {
    match cmd {
        Repro::Figures => {
            let rep = harness::repro_figures()?;
            let rows: Vec<_> = rep.checks().cloned().collect();
            let csv = io::to_csv(&serde_json::to_value(&rows)?);
            let pass = rep.all_pass;
            Ok((Output::new(rep)?.with_csv(csv).with_pass(pass), false))
        }
        Repro::Table1 { row, n, trials } => {
            let rep = harness::repro_table1(row, *n, *trials, seed.unwrap_or(0))?;
            let pass = rep.lower_bound.as_ref().map_or(true, |w| w.valid);
            Ok((Output::new(rep)?.with_pass(pass), false))
        }
        Repro::Run { config } => {
            let text = std::fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
            let mut c: ExperimentConfig = serde_json::from_str(&text).map_err(|e| usage(format!("config: {e}")))?;
            if let Some(s) = seed {
                c.seed = s;
            }
            experiment(c, out, format)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<bool> {
    let seed = cli.seed.unwrap_or(0);
    let (output, written) = match &cli.command {
        Command::Gen(g) => (gen(g, seed)?, false),
        Command::Noise(a) => (noise(a, seed)?, false),
        Command::Spectrum(a) => match a.source.load()? {
            io::Loaded::Simple(g) => (spectrum_of(&g, a.bipartite)?, false),
            io::Loaded::Multi(h) => (spectrum_of(&h, a.bipartite)?, false),
        },
        Command::Certify(a) => match a.source.load()? {
            io::Loaded::Simple(g) => (certify_on(&g, a)?, false),
            io::Loaded::Multi(h) => (certify_on(&h, a)?, false),
        },
        Command::Exact(a) => match a.source.load()? {
            io::Loaded::Simple(g) => (exact_on(&g, a, None)?, false),
            io::Loaded::Multi(h) => (exact_on(&h, a, Some(&h))?, false),
        },
        Command::Sdp(s) => (sdp(s, seed)?, false),
        Command::Detect(a) => {
            let mut c = ExperimentConfig::new(ExperimentKind::Detect, &a.base);
            c.n = a.n;
            c.trials = a.trials;
            c.seed = seed;
            c.epsilon = a.epsilon;
            c.noise = a.noise.parse()?;
            c.threshold = a.threshold;
            experiment(c, cli.out.as_ref(), cli.format)?
        }
        Command::Repro(r) => repro(r, cli.seed, cli.out.as_ref(), cli.format)?,
    };
    let text = output.render(cli.format)?;
    // experiment files already went to the output directory
    emit(&text, if written { None } else { cli.out.as_deref() })?;
    Ok(output.pass)
}

/// Errors caused by the invocation rather than by a computation.
fn is_usage(e: &anyhow::Error) -> bool {
    fn core(e: &Error) -> bool {
        match e {
            Error::InvalidParameter(_)
            | Error::UnknownGraph(_)
            | Error::UnknownRow(_)
            | Error::Parse(_)
            | Error::ParityViolation { .. }
            | Error::OddFiberWithLoops(_)
            | Error::SizeCapExceeded(_)
            | Error::Json(_) => true,
            Error::Context { source, .. } => core(source),
            _ => false,
        }
    }
    e.chain().any(|c| {
        c.downcast_ref::<Error>().is_some_and(core)
            || c.downcast_ref::<serde_json::Error>().is_some()
            || c.downcast_ref::<std::io::Error>().is_some()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
