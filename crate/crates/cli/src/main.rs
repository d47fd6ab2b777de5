use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use grog_core::claims::{self, ClaimId, VerifyConfig};
use grog_core::competition::{
    compare_closed_form, competition_graph, jaco_competition_closed_form,
};
use grog_core::engine::{enumerate_greedy, DEFAULT_ARC_CAP};
use grog_core::jaco::{build_jaco_with_cap, DEFAULT_JACO_CAP};
use grog_core::webs::{
    complete_graph, cycle_graph, for_each_solved, path_graph, star_graph, web_count_formula,
    MAX_WEB_ORDER,
};
use grog_core::{run_strategy, solve_exact, Digraph, Error, Strategy, UGraph, Web};

/// Arc masks are 64 bits wide.
const HARD_ARC_CAP: usize = 64;

#[derive(Parser, Debug)]
#[command(
    name = "grog",
    version,
    about = "Jaco graphs, competition graphs and grog numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args, Debug, Clone)]
struct Shared {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write output here instead of stdout (for `verify`, the JSON report).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomised checks.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Largest arc count the exhaustive solver accepts.
    #[arg(long, global = true, default_value_t = DEFAULT_ARC_CAP)]
    max_arcs: usize,
    /// Largest order accepted for generated graphs.
    #[arg(long, global = true)]
    max_n: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Dot,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the Jaco graph on n vertices.
    Jaco {
        #[arg(long)]
        n: usize,
    },
    /// Competition graph of a digraph file or of a Jaco graph.
    Competition {
        /// Digraph JSON file, or `-` for stdin.
        input: Option<PathBuf>,
        /// Use the Jaco graph on this many vertices.
        #[arg(long, conflicts_with = "input")]
        jaco: Option<usize>,
        /// Build the Jaco competition graph from its closed form.
        #[arg(long, requires = "jaco")]
        closed_form: bool,
        /// Compare the closed form against the definition.
        #[arg(long, requires = "jaco", conflicts_with = "closed_form")]
        check: bool,
    },
    /// Solve or replay the predation process on one web.
    Grog {
        #[command(subcommand)]
        action: GrogAction,
    },
    /// Every web of a base graph, solved exactly.
    Enumerate {
        /// path, cycle, star, complete, or an undirected graph JSON file.
        #[arg(long)]
        graph: String,
        #[arg(long)]
        n: Option<usize>,
        /// Identify webs that are the same labelled digraph.
        #[arg(long)]
        dedup: bool,
        /// Residual histogram and per-web greedy strategy counts.
        #[arg(long)]
        distribution: bool,
    },
    /// Re-check the quantitative claims.
    Verify {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        claim: Vec<String>,
        #[arg(long)]
        all: bool,
        /// Order limit for the path, cycle and Jaco claims.
        #[arg(long)]
        n_max: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum GrogAction {
    /// Exact grog number of a web.
    Solve {
        #[command(flatten)]
        web: WebInput,
        /// Include an optimal strategy.
        #[arg(long)]
        witness: bool,
    },
    /// Replay a strategy file.
    Run {
        #[command(flatten)]
        web: WebInput,
        /// Strategy JSON file, `[{"predator": i, "prey": [j, ...]}, ...]`.
        #[arg(long)]
        strategy: PathBuf,
        /// Accept strategies that stop before an exit state.
        #[arg(long)]
        partial: bool,
    },
}

#[derive(Args, Debug)]
struct WebInput {
    /// Digraph JSON file, or `-` for stdin.
    input: Option<PathBuf>,
    /// Use the Jaco graph on this many vertices.
    #[arg(long, conflicts_with = "input")]
    jaco: Option<usize>,
}

/// Failures, split by exit code.
enum Failure {
    /// Exit 1.
    Check(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::IllegalStep { .. } | Error::NotTerminal { .. } => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<Outcome, Failure>;

/// What a command produced: its rendered output and whether its checks held.
struct Outcome {
    output: String,
    ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, ok: true }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data");
    s.push('\n');
    s
}

fn unsupported(format: Format, cmd: &str) -> Failure {
    usage(format!("{cmd} has no {format:?} output").to_lowercase())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn check_n(n: usize, shared: &Shared, hard: usize) -> Result<(), Failure> {
    let cap = shared.max_n.unwrap_or(hard).min(hard);
    if n > cap {
        return Err(usage(format!("n = {n} exceeds the cap of {cap}")));
    }
    Ok(())
}

fn solver_cap(shared: &Shared) -> Result<usize, Failure> {
    if shared.max_arcs > HARD_ARC_CAP {
        return Err(usage(format!("--max-arcs is at most {HARD_ARC_CAP}")));
    }
    Ok(shared.max_arcs)
}

fn jaco_digraph(n: usize, shared: &Shared) -> Result<Digraph, Failure> {
    check_n(n, shared, DEFAULT_JACO_CAP)?;
    Ok(build_jaco_with_cap(n, DEFAULT_JACO_CAP)?.into_digraph())
}

fn load_web(input: &WebInput, shared: &Shared) -> Result<Web, Failure> {
    match (&input.input, input.jaco) {
        (_, Some(n)) => Ok(Web::new(jaco_digraph(n, shared)?)),
        (Some(path), None) => parse_json(path),
        (None, None) => Err(usage("give a digraph JSON file or --jaco N")),
    }
}

fn arc_lines(arcs: impl IntoIterator<Item = (usize, usize)>, sep: &str) -> String {
    arcs.into_iter()
        .map(|(u, v)| format!("{u} {sep} {v}\n"))
        .collect()
}

fn cmd_jaco(n: usize, shared: &Shared) -> CmdResult {
    check_n(n, shared, DEFAULT_JACO_CAP)?;
    let g = build_jaco_with_cap(n, DEFAULT_JACO_CAP)?;
    let out = match shared.format {
        Format::Json => to_json(&g),
        Format::Dot => g.digraph().to_dot(),
        Format::Csv => {
            let mut s = String::from("vertex,in_degree,out_degree\n");
            for v in g.digraph().vertices() {
                s.push_str(&format!(
                    "{},{},{}\n",
                    v.index(),
                    g.in_degree(v),
                    g.out_degree(v)
                ));
            }
            s
        }
        Format::Text => {
            let jaconian = g
                .jaconian()
                .map_or("none".to_string(), |v| v.index().to_string());
            format!(
                "jaco graph on {n} vertices, {} arcs, jaconian vertex {jaconian}\n{}",
                g.digraph().arc_count(),
                arc_lines(g.digraph().arc_pairs(), "->")
            )
        }
    };
    Ok(Outcome::ok(out))
}

fn cmd_competition(
    input: Option<&Path>,
    jaco: Option<usize>,
    closed_form: bool,
    check: bool,
    shared: &Shared,
) -> CmdResult {
    if check {
        let n = jaco.expect("clap enforces --jaco");
        check_n(n, shared, DEFAULT_JACO_CAP)?;
        let c = compare_closed_form(n)?;
        let out = match shared.format {
            Format::Json => to_json(&c),
            Format::Text => {
                if c.equal {
                    "equal\n".to_string()
                } else {
                    format!("differs\nmissing: {:?}\nextra: {:?}\n", c.missing, c.extra)
                }
            }
            f => return Err(unsupported(f, "competition --check")),
        };
        return Ok(Outcome {
            output: out,
            ok: c.equal,
        });
    }
    let graph = match (input, jaco) {
        (_, Some(n)) if closed_form => {
            check_n(n, shared, DEFAULT_JACO_CAP)?;
            jaco_competition_closed_form(n)?
        }
        (_, Some(n)) => competition_graph(&jaco_digraph(n, shared)?),
        (Some(path), None) => competition_graph(&parse_json::<Digraph>(path)?),
        (None, None) => return Err(usage("give a digraph JSON file or --jaco N")),
    };
    let out = match shared.format {
        Format::Json => to_json(&graph),
        Format::Dot => graph.to_dot(),
        Format::Csv => {
            let mut s = String::from("u,v\n");
            for (u, v) in graph.graph().edge_pairs() {
                s.push_str(&format!("{u},{v}\n"));
            }
            s
        }
        Format::Text => {
            let iso: Vec<String> = graph
                .isolated_indices()
                .iter()
                .map(|v| v.to_string())
                .collect();
            format!(
                "competition graph on {} vertices, {} edges\n{}isolated: {}\n",
                graph.graph().n(),
                graph.graph().edge_count(),
                arc_lines(graph.graph().edge_pairs(), "--"),
                iso.join(" ")
            )
        }
    };
    Ok(Outcome::ok(out))
}

fn strategy_text(s: &Strategy) -> String {
    s.batches()
        .iter()
        .map(|b| {
            let prey: Vec<String> = b.prey.iter().map(|v| v.index().to_string()).collect();
            format!("  {} eats {}\n", b.predator.index(), prey.join(" "))
        })
        .collect()
}

fn cmd_grog(action: &GrogAction, shared: &Shared) -> CmdResult {
    let cap = solver_cap(shared)?;
    match action {
        GrogAction::Solve { web, witness } => {
            let web = load_web(web, shared)?;
            let r = solve_exact(&web, cap)?;
            let out = match shared.format {
                Format::Json => {
                    let mut v = json!({
                        "grog": r.grog,
                        "max_predations": r.max_predations,
                        "states_explored": r.states_explored,
                    });
                    if *witness {
                        v["witness"] = json!(r.witness);
                    }
                    to_json(&v)
                }
                Format::Text => {
                    let mut s = format!(
                        "grog {}\nmax predations {}\nstates explored {}\n",
                        r.grog, r.max_predations, r.states_explored
                    );
                    if *witness {
                        s.push_str("witness:\n");
                        s.push_str(&strategy_text(&r.witness));
                    }
                    s
                }
                f => return Err(unsupported(f, "grog solve")),
            };
            Ok(Outcome::ok(out))
        }
        GrogAction::Run {
            web,
            strategy,
            partial,
        } => {
            let web = load_web(web, shared)?;
            let strategy: Strategy = parse_json(strategy)?;
            let r = run_strategy(&web, &strategy, !partial)?;
            let out = match shared.format {
                Format::Json => to_json(&r),
                Format::Text => format!(
                    "residual {}\npredation count {}\nterminal {}\npopulations {:?}\n",
                    r.residual,
                    r.predation_count,
                    r.is_terminal(),
                    r.final_state.populations()
                ),
                f => return Err(unsupported(f, "grog run")),
            };
            Ok(Outcome::ok(out))
        }
    }
}

fn base_graph(
    graph_arg: &str,
    n: Option<usize>,
    shared: &Shared,
) -> Result<(String, UGraph), Failure> {
    let family: Option<fn(usize) -> grog_core::Result<UGraph>> = match graph_arg {
        "path" => Some(path_graph),
        "cycle" => Some(cycle_graph),
        "star" => Some(star_graph),
        "complete" => Some(complete_graph),
        _ => None,
    };
    match family {
        Some(make) => {
            let n = n.ok_or_else(|| usage(format!("--graph {graph_arg} needs --n")))?;
            check_n(n, shared, MAX_WEB_ORDER)?;
            Ok((format!("{graph_arg} {n}"), make(n)?))
        }
        None => {
            let g: UGraph = parse_json(Path::new(graph_arg))?;
            check_n(g.n(), shared, MAX_WEB_ORDER)?;
            Ok((graph_arg.to_string(), g))
        }
    }
}

#[derive(Serialize)]
struct WebRow {
    indexing: Vec<usize>,
    web: Web,
    grog: usize,
    greedy_strategies: u128,
}

fn cmd_enumerate(
    graph_arg: &str,
    n: Option<usize>,
    dedup: bool,
    distribution: bool,
    shared: &Shared,
) -> CmdResult {
    let cap = solver_cap(shared)?;
    let (name, g) = base_graph(graph_arg, n, shared)?;
    if g.edge_count() > cap {
        return Err(usage(format!(
            "{} edges exceed --max-arcs {cap}",
            g.edge_count()
        )));
    }
    let formula = web_count_formula(g.n(), g.edge_count())?;
    let mut count = 0u64;
    let mut best: Option<(Value, Strategy, usize)> = None;
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    let mut rows: Vec<WebRow> = Vec::new();
    let mut greedy_error = None;
    for_each_solved(&g, dedup, |w, s| {
        count += 1;
        *hist.entry(s.grog).or_insert(0) += 1;
        if best.as_ref().is_none_or(|b| s.grog < b.2) {
            best = Some((json!(w), s.witness.clone(), s.grog));
        }
        if distribution {
            let greedy = match enumerate_greedy(&w.web, cap) {
                Ok(summary) => summary.strategies,
                Err(e) => {
                    greedy_error.get_or_insert(e);
                    0
                }
            };
            rows.push(WebRow {
                indexing: w.indexing.labels().iter().map(|v| v.index()).collect(),
                web: w.web,
                grog: s.grog,
                greedy_strategies: greedy,
            });
        }
    })?;
    if let Some(e) = greedy_error {
        return Err(e.into());
    }
    let (witness, strategy, grog) = best.ok_or_else(|| usage("no webs"))?;
    let out = match shared.format {
        Format::Csv => {
            if !distribution {
                return Err(usage(
                    "csv output is the residual histogram; add --distribution",
                ));
            }
            let mut s = String::from("residual,count\n");
            for (r, c) in &hist {
                s.push_str(&format!("{r},{c}\n"));
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "graph": g,
                "dedup": dedup,
                "webs": count,
                "formula": formula,
                "grog": grog,
                "witness": { "web": witness, "strategy": strategy },
            });
            if distribution {
                v["distribution"] = json!(hist);
                v["per_web"] = json!(rows);
            }
            to_json(&v)
        }
        Format::Text => {
            let mut s = format!(
                "{name}: {count} webs{} (n! 2^eps / 2 = {formula})\ngrog number {grog}\nwitness web: {}\nwitness strategy:\n{}",
                if dedup { " up to relabelling" } else { "" },
                witness["web"],
                strategy_text(&strategy)
            );
            if distribution {
                s.push_str("residual,count\n");
                for (r, c) in &hist {
                    s.push_str(&format!("{r},{c}\n"));
                }
                s.push_str("indexing | arcs | grog | greedy strategies\n");
                for row in &rows {
                    s.push_str(&format!(
                        "{:?} | {:?} | {} | {}\n",
                        row.indexing,
                        row.web.digraph().arc_pairs(),
                        row.grog,
                        row.greedy_strategies
                    ));
                }
            }
            s
        }
        Format::Dot => return Err(unsupported(Format::Dot, "enumerate")),
    };
    Ok(Outcome::ok(out))
}

fn cmd_verify(claim: &[String], all: bool, n_max: Option<usize>, shared: &Shared) -> CmdResult {
    let mut config = VerifyConfig {
        seed: shared.seed,
        max_arcs: solver_cap(shared)?,
        ..VerifyConfig::default()
    };
    if let Some(n) = n_max {
        config = config.with_n_max(n);
    }
    let ids: Vec<ClaimId> = if all {
        ClaimId::ALL.to_vec()
    } else {
        claim
            .iter()
            .map(|c| c.parse())
            .collect::<grog_core::Result<_>>()?
    };
    let started = Instant::now();
    let report = claims::run_claims(&ids, &config)?;
    eprintln!(
        "verify: {} claims in {:.2}s",
        report.claims.len(),
        started.elapsed().as_secs_f64()
    );
    let json = report.to_json();
    if let Some(path) = &shared.out {
        fs::write(path, &json).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let out = match shared.format {
        Format::Json => json,
        Format::Text => report.summary(),
        f => return Err(unsupported(f, "verify")),
    };
    Ok(Outcome {
        output: out,
        ok: report.passed(),
    })
}

fn dispatch(cli: &Cli) -> CmdResult {
    let shared = &cli.shared;
    match &cli.command {
        Command::Jaco { n } => cmd_jaco(*n, shared),
        Command::Competition {
            input,
            jaco,
            closed_form,
            check,
        } => cmd_competition(input.as_deref(), *jaco, *closed_form, *check, shared),
        Command::Grog { action } => cmd_grog(action, shared),
        Command::Enumerate {
            graph,
            n,
            dedup,
            distribution,
        } => cmd_enumerate(graph, *n, *dedup, *distribution, shared),
        Command::Verify { claim, all, n_max } => cmd_verify(claim, *all, *n_max, shared),
    }
}

fn emit(cli: &Cli, output: &str) -> io::Result<()> {
    match (&cli.shared.out, &cli.command) {
        (Some(path), cmd) if !matches!(cmd, Command::Verify { .. }) => fs::write(path, output),
        _ => io::stdout().lock().write_all(output.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli, &outcome.output) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
