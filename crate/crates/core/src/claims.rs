//! Desk-scale checks of the quantitative statements about Jaco graphs,
//! competition graphs and grog numbers.
//!
//! Each claim yields a [`ClaimReport`]. Assert-mode claims fail the report
//! when any instance disagrees; report-only claims record what was observed
//! and never fail. Randomised checks draw from a ChaCha stream seeded from
//! the configured seed and the claim's position, so reports are reproducible
//! and independent of the order in which claims run.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::competition::{check_closed_form_range, competition_graph};
use crate::digraph::{ArcPair, Digraph, UGraph, VertexId};
use crate::engine::{
    enumerate_greedy, random_maximal_strategy, run_strategy, solve_exact, PredationBatch,
    RunResult, Strategy, Web, DEFAULT_ARC_CAP,
};
use crate::error::{check_cap, Error, Result};
use crate::jaco::{build_jaco, jaconian_vertex};
use crate::webs::{
    automorphisms, complete_graph, cycle_graph, enumerate_webs, for_each_solved, grog_number,
    path_graph, random_web, star_graph, web_count_formula,
};

/// Failures kept verbatim per claim; the full count is always recorded.
const MAX_RECORDED_FAILURES: usize = 25;
/// Largest path or cycle the graph-level claims will enumerate.
pub const MAX_FAMILY_ORDER: usize = 6;

macro_rules! claim_ids {
    ($($variant:ident => $id:literal),+ $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum ClaimId { $($variant),+ }

        impl ClaimId {
            /// Every claim, in report order.
            pub const ALL: &'static [ClaimId] = &[$(ClaimId::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $(ClaimId::$variant => $id),+ }
            }
        }

        impl FromStr for ClaimId {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($id => Ok(ClaimId::$variant),)+
                    other => Err(Error::UnknownClaim(other.to_string())),
                }
            }
        }
    };
}

claim_ids! {
    ClosedFormCompetition => "thm-1.1",
    ExitState => "lemma-2.1",
    ResidualParity => "lemma-2.2",
    PredationCount => "lemma-2.3",
    PathExtension => "prop-2.4",
    PathRecursion => "cor-2.5",
    IndexingDivergence => "thm-2.6",
    CycleExtension => "prop-2.7",
    CycleVersusPath => "cor-2.8",
    JaconianBound => "lemma-2.9",
    JacoRecursion => "prop-2.10",
    JacoMonotone => "cor-2.11",
    Termination => "obs-1",
    Determinism => "obs-2",
    GreedyEquivalence => "def-2.2-equivalence",
    WebCount => "web-count",
}

impl fmt::Display for ClaimId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ClaimId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Assert,
    ReportOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Reported,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimReport {
    pub id: ClaimId,
    pub mode: Mode,
    pub status: Status,
    pub instances: u64,
    pub failures: Vec<Value>,
    pub values: Value,
}

impl ClaimReport {
    fn new(id: ClaimId, mode: Mode) -> Self {
        ClaimReport {
            id,
            mode,
            status: Status::Pass,
            instances: 0,
            failures: Vec::new(),
            values: json!({}),
        }
    }

    fn skipped(id: ClaimId, mode: Mode, reason: String) -> Self {
        ClaimReport {
            status: Status::Skipped,
            values: json!({ "reason": reason }),
            ..ClaimReport::new(id, mode)
        }
    }

    fn fail(&mut self, failure: Value) {
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(failure);
        }
        self.set("failure_count", self.failure_count() + 1);
    }

    pub fn failure_count(&self) -> u64 {
        self.values
            .get("failure_count")
            .and_then(Value::as_u64)
            .unwrap_or(0)
    }

    fn set(&mut self, key: &str, value: impl Serialize) {
        self.values[key] = serde_json::to_value(value).expect("plain data");
    }

    fn finish(mut self) -> Self {
        self.status = match (self.mode, self.failure_count()) {
            (Mode::ReportOnly, _) => Status::Reported,
            (Mode::Assert, 0) => Status::Pass,
            (Mode::Assert, _) => Status::Fail,
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub claims: Vec<ClaimReport>,
    pub status: Status,
    pub seed: u64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn claim(&self, id: ClaimId) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    /// One line per claim.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.claims {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
                Status::Reported => "INFO",
            };
            out.push_str(&format!(
                "{tag:<5}{:<22}{:>8} instances",
                c.id.as_str(),
                c.instances
            ));
            if c.status == Status::Fail {
                out.push_str(&format!(", {} failures", c.failure_count()));
            }
            if let Some(reason) = c.values.get("reason").and_then(Value::as_str) {
                out.push_str(&format!(" ({reason})"));
            }
            out.push('\n');
        }
        let overall = if self.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("overall: {overall} (seed {})\n", self.seed));
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Largest `n` for `g(P_n)`.
    pub path_n_max: usize,
    /// Largest `n` for `g(C_n)`.
    pub cycle_n_max: usize,
    /// Largest `n` whose `P_n` webs are extended to `P_{n+1}`.
    pub extension_n_max: usize,
    /// Largest `n` for `g(J_n(1))`.
    pub jaco_n_max: usize,
    /// Largest `n` for the Jaconian vertex bound.
    pub jaconian_n_max: usize,
    /// Largest `n` for the closed-form competition graph.
    pub closed_form_n_max: usize,
    pub random_webs: usize,
    pub runs_per_web: usize,
    pub random_max_n: usize,
    pub random_max_edges: usize,
    pub greedy_random_webs: usize,
    pub max_arcs: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 42,
            path_n_max: 6,
            cycle_n_max: 6,
            extension_n_max: 5,
            jaco_n_max: 8,
            jaconian_n_max: 200,
            closed_form_n_max: 40,
            random_webs: 40,
            runs_per_web: 50,
            random_max_n: 7,
            random_max_edges: 10,
            greedy_random_webs: 200,
            max_arcs: DEFAULT_ARC_CAP,
        }
    }
}

impl VerifyConfig {
    /// Applies one order limit to the path, cycle and Jaco claims.
    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.path_n_max = n_max;
        self.cycle_n_max = n_max;
        self.jaco_n_max = n_max;
        self.extension_n_max = n_max.saturating_sub(1);
        self
    }

    fn rng_for(&self, id: ClaimId, salt: u64) -> ChaCha8Rng {
        let k = ClaimId::ALL.iter().position(|&c| c == id).unwrap() as u64;
        ChaCha8Rng::seed_from_u64(
            self.seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(k << 32 | salt),
        )
    }
}

/// A named web for reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusWeb {
    pub name: String,
    pub web: Web,
}

/// Every distinct labelled web of `P_3`, `P_4`, `C_3` and `C_4`.
pub fn small_family_corpus() -> Result<Vec<CorpusWeb>> {
    let mut out = Vec::new();
    for (name, g) in [
        ("P3", path_graph(3)?),
        ("P4", path_graph(4)?),
        ("C3", cycle_graph(3)?),
        ("C4", cycle_graph(4)?),
    ] {
        for (k, w) in enumerate_webs(&g, true)?.enumerate() {
            out.push(CorpusWeb {
                name: format!("{name}#{k}"),
                web: w.web,
            });
        }
    }
    Ok(out)
}

/// Random connected webs on `2..=max_n` vertices with at most `max_edges` arcs.
pub fn random_corpus(
    count: usize,
    max_n: usize,
    max_edges: usize,
    rng: &mut impl Rng,
) -> Vec<CorpusWeb> {
    (0..count)
        .map(|k| {
            let n = rng.gen_range(2..=max_n.max(2));
            CorpusWeb {
                name: format!("random#{k}"),
                web: random_web(rng, n, max_edges),
            }
        })
        .collect()
}

fn run_corpus(config: &VerifyConfig, id: ClaimId) -> Result<Vec<CorpusWeb>> {
    let mut corpus = small_family_corpus()?;
    let mut rng = config.rng_for(id, 0);
    corpus.extend(random_corpus(
        config.random_webs,
        config.random_max_n,
        config.random_max_edges,
        &mut rng,
    ));
    Ok(corpus)
}

fn arcs_json(arcs: &[ArcPair]) -> Value {
    json!(arcs
        .iter()
        .map(|&(u, v)| [u.index(), v.index()])
        .collect::<Vec<_>>())
}

fn web_json(web: &Web) -> Value {
    json!({ "n": web.n(), "arcs": arcs_json(web.digraph().arcs()) })
}

/// How a check replays a strategy. Production checks use [`run_strategy`];
/// tests substitute faulty runners to make sure the checks can fail.
pub type Runner<'a> = &'a (dyn Fn(&Web, &Strategy) -> Result<RunResult> + Sync);

fn default_runner(web: &Web, strategy: &Strategy) -> Result<RunResult> {
    run_strategy(web, strategy, true)
}

/// Plays `runs` random maximal strategies on every corpus web and hands each
/// outcome to `inspect`, which returns a failure description if it objects.
fn sample_runs(
    report: &mut ClaimReport,
    corpus: &[CorpusWeb],
    runs: usize,
    rng: &mut ChaCha8Rng,
    runner: Runner<'_>,
    mut inspect: impl FnMut(&Web, &RunResult) -> Option<Value>,
) {
    for entry in corpus {
        for _ in 0..runs {
            let strategy = random_maximal_strategy(&entry.web, rng);
            report.instances += 1;
            match runner(&entry.web, &strategy) {
                Ok(result) => {
                    if let Some(why) = inspect(&entry.web, &result) {
                        report.fail(json!({
                            "web": entry.name,
                            "graph": web_json(&entry.web),
                            "strategy": strategy,
                            "residual": result.residual,
                            "predation_count": result.predation_count,
                            "population": result.final_state.populations(),
                            "problem": why,
                        }));
                    }
                }
                Err(e) => report.fail(json!({
                    "web": entry.name,
                    "graph": web_json(&entry.web),
                    "strategy": strategy,
                    "problem": e.to_string(),
                })),
            }
        }
    }
}

/// Every exit state of a connected web on at least two vertices has a vertex
/// with population zero and a vertex with positive population.
pub fn check_exit_lemma(corpus: &[CorpusWeb], runs: usize, seed: u64) -> ClaimReport {
    let mut report = ClaimReport::new(ClaimId::ExitState, Mode::Assert);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (small, usable): (Vec<_>, Vec<_>) = corpus.iter().cloned().partition(|c| c.web.n() < 2);
    sample_runs(
        &mut report,
        &usable,
        runs,
        &mut rng,
        &default_runner,
        |_, r| {
            let pops = r.final_state.populations();
            let zero = pops.contains(&0);
            let positive = pops.iter().any(|&p| p > 0);
            (!(zero && positive)).then(|| json!({ "has_zero": zero, "has_positive": positive }))
        },
    );
    report.set("skipped_webs", small.len());
    report.set("seed", seed);
    report.finish()
}

/// Residual parity matches the parity of `1 + ... + n` on every run.
pub fn check_parity(
    corpus: &[CorpusWeb],
    runs: usize,
    seed: u64,
    runner: Runner<'_>,
) -> ClaimReport {
    let mut report = ClaimReport::new(ClaimId::ResidualParity, Mode::Assert);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_runs(&mut report, corpus, runs, &mut rng, runner, |web, r| {
        let total = web.total_population();
        let residual = r.final_state.residual();
        (residual % 2 != total % 2 || r.residual != residual)
            .then(|| json!({ "total": total, "population_sum": residual }))
    });
    report.set("seed", seed);
    report.finish()
}

/// The number of consumed arcs is `(1 + ... + n - residual) / 2` on every run.
pub fn check_arc_count(
    corpus: &[CorpusWeb],
    runs: usize,
    seed: u64,
    runner: Runner<'_>,
) -> ClaimReport {
    let mut report = ClaimReport::new(ClaimId::PredationCount, Mode::Assert);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_runs(&mut report, corpus, runs, &mut rng, runner, |web, r| {
        let total = web.total_population();
        let residual = r.final_state.residual();
        let ok = residual <= total
            && (total - residual) % 2 == 0
            && r.predation_count == (total - residual) / 2
            && r.used_arcs.len() == r.predation_count;
        (!ok).then(|| json!({ "total": total, "population_sum": residual }))
    });
    report.set("seed", seed);
    report.finish()
}

/// Both arithmetic identities over one sample.
pub fn check_parity_and_arc_count(
    corpus: &[CorpusWeb],
    runs: usize,
    seed: u64,
) -> (ClaimReport, ClaimReport) {
    (
        check_parity(corpus, runs, seed, &default_runner),
        check_arc_count(corpus, runs, seed, &default_runner),
    )
}

/// Every run stops after at most one predation per arc and ends terminal.
pub fn check_termination(corpus: &[CorpusWeb], runs: usize, seed: u64) -> ClaimReport {
    let mut report = ClaimReport::new(ClaimId::Termination, Mode::Assert);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut longest = 0;
    sample_runs(
        &mut report,
        corpus,
        runs,
        &mut rng,
        &default_runner,
        |web, r| {
            longest = longest.max(r.predation_count);
            (r.predation_count > web.arc_count() || !r.is_terminal())
                .then(|| json!({ "arcs": web.arc_count() }))
        },
    );
    report.set("longest_run", longest);
    report.set("seed", seed);
    report.finish()
}

/// Replaying a strategy reproduces its result exactly, and any reordering of
/// its single-arc predations is legal and reaches the same exit state.
pub fn check_determinism(corpus: &[CorpusWeb], runs: usize, seed: u64) -> ClaimReport {
    let mut report = ClaimReport::new(ClaimId::Determinism, Mode::Assert);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let mut reorderings = 0u64;
    for entry in corpus {
        for _ in 0..runs {
            report.instances += 1;
            let strategy = random_maximal_strategy(&entry.web, &mut rng);
            let first = run_strategy(&entry.web, &strategy, true);
            let second = run_strategy(&entry.web, &strategy, true);
            let (Ok(first), Ok(second)) = (first, second) else {
                report.fail(
                    json!({ "web": entry.name, "strategy": strategy, "problem": "replay failed" }),
                );
                continue;
            };
            if first != second {
                report.fail(
                    json!({ "web": entry.name, "strategy": strategy, "problem": "replays differ" }),
                );
                continue;
            }
            let mut arcs: Vec<ArcPair> = strategy.arcs().collect();
            arcs.shuffle(&mut shuffle_rng);
            reorderings += 1;
            let singles = Strategy::new(
                arcs.iter()
                    .map(|&(u, v)| PredationBatch::single(u, v))
                    .collect(),
            );
            match run_strategy(&entry.web, &singles, false) {
                Ok(r) if r.final_state == first.final_state => {}
                Ok(_) => report.fail(json!({
                    "web": entry.name, "strategy": strategy, "reordered": singles,
                    "problem": "reordering changed the exit state",
                })),
                Err(e) => report.fail(json!({
                    "web": entry.name, "strategy": strategy, "reordered": singles,
                    "problem": e.to_string(),
                })),
            }
        }
    }
    report.set("reorderings", reorderings);
    report.set("seed", seed);
    report.finish()
}

/// Exact grog number against the best greedy strategy, web by web.
pub fn check_greedy_equivalence(corpus: &[CorpusWeb], max_arcs: usize) -> Result<ClaimReport> {
    let mut report = ClaimReport::new(ClaimId::GreedyEquivalence, Mode::Assert);
    for c in corpus {
        check_cap("arc count", c.web.arc_count(), max_arcs)?;
    }
    let outcomes: Vec<(usize, crate::engine::GreedySummary)> = corpus
        .par_iter()
        .map(|c| {
            Ok((
                solve_exact(&c.web, max_arcs)?.grog,
                enumerate_greedy(&c.web, max_arcs)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut p3_counts: BTreeMap<String, u64> = BTreeMap::new();
    for (c, (exact, greedy)) in corpus.iter().zip(outcomes) {
        report.instances += 1;
        if c.name.starts_with("P3#") {
            *p3_counts.entry(greedy.strategies.to_string()).or_insert(0) += 1;
        }
        if exact != greedy.min_residual {
            report.fail(json!({
                "web": c.name,
                "graph": web_json(&c.web),
                "exact": exact,
                "greedy_min": greedy.min_residual,
            }));
        }
    }
    report.set("p3_greedy_strategy_counts", p3_counts);
    Ok(report.finish())
}

fn graph_grog(g: &UGraph) -> Result<usize> {
    Ok(grog_number(g)?.grog)
}

fn family_values(make: fn(usize) -> Result<UGraph>, lo: usize, n_max: usize) -> Result<Vec<usize>> {
    (lo..=n_max)
        .into_par_iter()
        .map(|n| graph_grog(&make(n)?))
        .collect()
}

fn check_family_range(what: &str, lo: usize, n_max: usize) -> Result<()> {
    if n_max < lo {
        return Err(Error::Domain(format!(
            "{what} needs n_max >= {lo}, got {n_max}"
        )));
    }
    check_cap("n_max", n_max, MAX_FAMILY_ORDER)
}

/// `g(P_{n+1}) = g(P_n) + (n - 1)` for `3 <= n < n_max`, from brute-forced
/// path grog numbers, seeded at `g(P_3) = 2`.
pub fn check_path_recursion(n_max: usize) -> Result<ClaimReport> {
    check_family_range("path recursion", 3, n_max)?;
    let mut report = ClaimReport::new(ClaimId::PathRecursion, Mode::Assert);
    let values = family_values(path_graph, 3, n_max)?;
    report.instances = values.len() as u64;
    if values[0] != 2 {
        report.fail(json!({ "n": 3, "grog": values[0], "expected": 2 }));
    }
    for (k, w) in values.windows(2).enumerate() {
        let n = 3 + k;
        if w[1] != w[0] + (n - 1) {
            report.fail(
                json!({ "n": n, "g_n": w[0], "g_next": w[1], "expected_next": w[0] + n - 1 }),
            );
        }
    }
    report.set("n", (3..=n_max).collect::<Vec<_>>());
    report.set("grog", values);
    Ok(report.finish())
}

/// Extends every `P_n` web to a `P_{n+1}` web in each possible way and records
/// how the grog number moves, split by whether the vertex labelled `1` sits at
/// the attachment point.
pub fn check_path_extension(n_max: usize, max_arcs: usize) -> Result<ClaimReport> {
    if n_max < 3 {
        return Err(Error::Domain(format!(
            "path extension needs n_max >= 3, got {n_max}"
        )));
    }
    check_cap("n_max", n_max + 1, MAX_FAMILY_ORDER)?;
    let mut report = ClaimReport::new(ClaimId::PathExtension, Mode::ReportOnly);
    for n in 3..=n_max {
        // case -> (delta -> count)
        let mut deltas: BTreeMap<&str, BTreeMap<i64, u64>> = BTreeMap::new();
        let mut minima: BTreeMap<&str, i64> = BTreeMap::new();
        let webs: Vec<Web> = enumerate_webs(&path_graph(n)?, true)?
            .map(|w| w.web)
            .collect();
        let rows: Vec<Vec<(&str, i64)>> = webs
            .par_iter()
            .map(|web| {
                let base = solve_exact(web, max_arcs)?.grog as i64;
                let mut out = Vec::new();
                for (case, ext) in path_extensions(web) {
                    let g = solve_exact(&ext, max_arcs)?.grog as i64;
                    out.push((case, g - base));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        for (case, d) in rows.into_iter().flatten() {
            report.instances += 1;
            *deltas.entry(case).or_default().entry(d).or_insert(0) += 1;
            let m = minima.entry(case).or_insert(d);
            *m = (*m).min(d);
        }
        let predicted = json!({
            "end-at-label-1": n + 1,
            "end-elsewhere": n - 1,
            "inside-next-to-label-1": n,
            "inside-elsewhere": n - 1,
        });
        report.set(
            &format!("P{n}"),
            json!({ "deltas": deltas, "min_delta": minima, "stated_delta": predicted }),
        );
    }
    Ok(report.finish())
}

/// Labelled `P_{n+1}` webs obtained from a `P_n` web by attaching `v_{n+1}`
/// at an end, or by inserting it into an arc, in both directions.
fn path_extensions(web: &Web) -> Vec<(&'static str, Web)> {
    let d = web.digraph();
    let n = d.n();
    let new = n + 1;
    let base: Vec<(usize, usize)> = d.arc_pairs();
    let mut out = Vec::new();
    let ends: Vec<VertexId> = d.vertices().filter(|&v| d.degree(v) <= 1).collect();
    for e in ends {
        let case = if e.index() == 1 {
            "end-at-label-1"
        } else {
            "end-elsewhere"
        };
        for arc in [(new, e.index()), (e.index(), new)] {
            let arcs = base.iter().copied().chain([arc]);
            out.push((
                case,
                Web::new(Digraph::new(new, arcs).expect("path extension")),
            ));
        }
    }
    for (k, &(p, q)) in base.iter().enumerate() {
        let case = if p == 1 || q == 1 {
            "inside-next-to-label-1"
        } else {
            "inside-elsewhere"
        };
        for (a, b) in [
            ((p, new), (new, q)),
            ((p, new), (q, new)),
            ((new, p), (new, q)),
            ((new, p), (q, new)),
        ] {
            let arcs = base
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &x)| x)
                .chain([a, b]);
            out.push((
                case,
                Web::new(Digraph::new(new, arcs).expect("path extension")),
            ));
        }
    }
    out
}

/// For each base graph, some two webs have different grog numbers.
pub fn check_orientation_divergence(bases: &[(String, UGraph)]) -> Result<ClaimReport> {
    let mut report = ClaimReport::new(ClaimId::IndexingDivergence, Mode::Assert);
    let mut per_base = BTreeMap::new();
    let mut skipped = Vec::new();
    for (name, g) in bases {
        if g.n() < 3 {
            skipped.push(name.clone());
            continue;
        }
        report.instances += 1;
        let mut lo: Option<(usize, Value)> = None;
        let mut hi: Option<(usize, Value)> = None;
        for_each_solved(g, true, |w, s| {
            if lo.as_ref().is_none_or(|(g, _)| s.grog < *g) {
                lo = Some((s.grog, json!(w)));
            }
            if hi.as_ref().is_none_or(|(g, _)| s.grog > *g) {
                hi = Some((s.grog, json!(w)));
            }
        })?;
        let (lo, hi) = (lo.unwrap(), hi.unwrap());
        if lo.0 == hi.0 {
            report.fail(json!({ "base": name, "grog": lo.0 }));
        }
        per_base.insert(
            name.clone(),
            json!({ "min": lo.0, "max": hi.0, "min_web": lo.1, "max_web": hi.1 }),
        );
    }

    // the two P_3 webs singled out: v1 -> v2 -> v3, and v2 -> v1 -> v3
    let forward = Web::from_arcs(3, [(1, 2), (2, 3)])?;
    let through_one = Web::from_arcs(3, [(2, 1), (1, 3)])?;
    let g_forward = solve_exact(&forward, DEFAULT_ARC_CAP)?.grog;
    let g_through = solve_exact(&through_one, DEFAULT_ARC_CAP)?.grog;
    report.instances += 1;
    if (g_forward, g_through) != (2, 4) {
        report.fail(json!({ "base": "P3", "pair": [g_forward, g_through], "expected": [2, 4] }));
    }
    report.set("p3_pair", [g_forward, g_through]);
    report.set("bases", per_base);
    report.set("skipped_bases", skipped);
    Ok(report.finish())
}

/// Bases used by default for the divergence check.
pub fn divergence_bases() -> Result<Vec<(String, UGraph)>> {
    Ok(vec![
        ("P3".into(), path_graph(3)?),
        ("P4".into(), path_graph(4)?),
        ("P5".into(), path_graph(5)?),
        ("C3".into(), cycle_graph(3)?),
        ("C4".into(), cycle_graph(4)?),
        ("star4".into(), star_graph(4)?),
        ("K4".into(), complete_graph(4)?),
    ])
}

/// Brute-forced `g(C_n)` and its differences; nothing is asserted.
pub fn check_cycle_relations(n_max: usize) -> Result<(ClaimReport, ClaimReport)> {
    check_family_range("cycle relations", 3, n_max)?;
    let cycles = family_values(cycle_graph, 3, n_max)?;
    let paths = family_values(path_graph, 3, n_max)?;
    let ns: Vec<usize> = (3..=n_max).collect();

    let mut growth = ClaimReport::new(ClaimId::CycleExtension, Mode::ReportOnly);
    growth.instances = cycles.len() as u64;
    let deltas: Vec<i64> = cycles
        .windows(2)
        .map(|w| w[1] as i64 - w[0] as i64)
        .collect();
    let stated: Vec<usize> = ns.iter().take(deltas.len()).map(|n| n - 1).collect();
    growth.set("n", &ns);
    growth.set("cycle_grog", &cycles);
    growth.set("cycle_delta", &deltas);
    growth.set("stated_delta", &stated);
    growth.set(
        "delta_matches_stated",
        deltas
            .iter()
            .zip(&stated)
            .map(|(&d, &s)| d == s as i64)
            .collect::<Vec<_>>(),
    );

    let mut closing = ClaimReport::new(ClaimId::CycleVersusPath, Mode::ReportOnly);
    closing.instances = cycles.len() as u64;
    let gaps: Vec<i64> = cycles
        .iter()
        .zip(&paths)
        .map(|(&c, &p)| c as i64 - p as i64)
        .collect();
    closing.set("n", &ns);
    closing.set("cycle_grog", &cycles);
    closing.set("path_grog", &paths);
    closing.set("cycle_minus_path", &gaps);
    closing.set("stated_cycle_minus_path", -2);
    closing.set(
        "gap_matches_stated",
        gaps.iter().map(|&g| g == -2).collect::<Vec<_>>(),
    );
    closing.set("closing_deltas", closing_deltas(n_max.min(5))?);
    Ok((growth.finish(), closing.finish()))
}

/// For every `P_n` web, adds an arc between its two ends in either direction
/// and records `g(cycle web) - g(path web)`.
fn closing_deltas(n_max: usize) -> Result<BTreeMap<String, BTreeMap<i64, u64>>> {
    let mut out = BTreeMap::new();
    for n in 3..=n_max {
        let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
        for w in enumerate_webs(&path_graph(n)?, true)? {
            let d = w.web.digraph();
            let base = solve_exact(&w.web, DEFAULT_ARC_CAP)?.grog as i64;
            let ends: Vec<usize> = d
                .vertices()
                .filter(|&v| d.degree(v) == 1)
                .map(VertexId::index)
                .collect();
            let (a, b) = (ends[0], ends[1]);
            for arc in [(a, b), (b, a)] {
                let closed = Web::from_arcs(n, d.arc_pairs().into_iter().chain([arc]))?;
                let g = solve_exact(&closed, DEFAULT_ARC_CAP)?.grog as i64;
                *hist.entry(g - base).or_insert(0) += 1;
            }
        }
        out.insert(format!("P{n}"), hist);
    }
    Ok(out)
}

/// The closed form for `C(J_n(1))` against the direct definition, and
/// `v_1, v_2, v_n` isolated, for `5 <= n <= n_max`.
pub fn check_closed_form(n_max: usize) -> Result<ClaimReport> {
    let mut report = ClaimReport::new(ClaimId::ClosedFormCompetition, Mode::Assert);
    let checks = check_closed_form_range(n_max)?;
    for c in &checks {
        report.instances += 1;
        if !c.equal {
            report.fail(json!(c));
        }
        let direct = competition_graph(build_jaco(c.n)?.digraph());
        let iso = direct.isolated_indices();
        for v in [1, 2, c.n] {
            if !iso.contains(&v) {
                report.fail(json!({ "n": c.n, "not_isolated": v }));
            }
        }
    }
    let five = competition_graph(build_jaco(5)?.digraph());
    report.set("n_range", [5, n_max]);
    report.set("c_j5_edges", five.graph().edge_pairs());
    report.set("c_j5_isolated", five.isolated_indices());
    Ok(report.finish())
}

/// `2i - n >= 0` and `i + d^+(v_i) in {n - 1, n}` for the Jaconian vertex
/// `v_i` of every `J_n(1)`, `2 <= n <= n_max`. Also lists the orders where the
/// smallest-index maximum-degree vertex is a different vertex.
pub fn check_jaconian_bound(n_max: usize) -> Result<ClaimReport> {
    if n_max < 2 {
        return Err(Error::Domain(format!(
            "Jaconian bound needs n_max >= 2, got {n_max}"
        )));
    }
    let mut report = ClaimReport::new(ClaimId::JaconianBound, Mode::Assert);
    let mut listed = Vec::new();
    let mut differs = Vec::new();
    for n in 2..=n_max {
        report.instances += 1;
        let g = build_jaco(n)?;
        let Some(v) = g.jaconian() else {
            report.fail(json!({ "n": n, "problem": "no jaconian vertex" }));
            continue;
        };
        let i = v.index();
        let reach = i + g.out_degree(v);
        if 2 * i < n || !(reach == n || reach + 1 == n) {
            report.fail(json!({ "n": n, "i": i, "i_plus_out_degree": reach }));
        }
        if g.max_degree_vertex() != v {
            differs.push(n);
        }
        if n <= 12 {
            listed.push(i);
        }
    }
    report.set("jaconian_n2_to_n12", listed);
    report.set("max_degree_vertex_differs_at", differs);
    Ok(report.finish())
}

fn jaco_grog_numbers(n_max: usize, max_arcs: usize) -> Result<Vec<usize>> {
    if n_max < 2 {
        return Err(Error::Domain(format!(
            "Jaco recursion needs n_max >= 2, got {n_max}"
        )));
    }
    let jaco = build_jaco(n_max)?;
    check_cap("arc count", jaco.digraph().arc_count(), max_arcs)?;
    (2..=n_max)
        .into_par_iter()
        .map(|n| Ok(solve_exact(&Web::new(build_jaco(n)?.into_digraph()), max_arcs)?.grog))
        .collect()
}

/// `g(J_{n+1}(1)) = g(J_n(1)) + (2i - n) + 1` with `v_i` the Jaconian vertex
/// of `J_n(1)`, from exhaustively solved grog numbers.
pub fn check_jaco_recursion(n_max: usize, max_arcs: usize) -> Result<ClaimReport> {
    let grogs = jaco_grog_numbers(n_max, max_arcs)?;
    let mut report = ClaimReport::new(ClaimId::JacoRecursion, Mode::Assert);
    let mut jaconians = Vec::new();
    for n in 2..n_max {
        report.instances += 1;
        let i = jaconian_vertex(n)?.index();
        jaconians.push(i);
        let (now, next) = (grogs[n - 2], grogs[n - 1]);
        if 2 * i < n {
            report.fail(json!({ "n": n, "i": i, "problem": "2i - n < 0" }));
            continue;
        }
        let predicted = now + (2 * i - n) + 1;
        if next != predicted {
            report.fail(
                json!({ "n": n, "i": i, "g_n": now, "g_next": next, "predicted": predicted }),
            );
        }
    }
    report.set("n", (2..=n_max).collect::<Vec<_>>());
    report.set("grog", &grogs);
    report.set("jaconian", jaconians);
    Ok(report.finish())
}

/// `g(J_n(1))` strictly increases with `n`.
pub fn check_jaco_monotone(n_max: usize, max_arcs: usize) -> Result<ClaimReport> {
    let grogs = jaco_grog_numbers(n_max, max_arcs)?;
    let mut report = ClaimReport::new(ClaimId::JacoMonotone, Mode::Assert);
    for (k, w) in grogs.windows(2).enumerate() {
        report.instances += 1;
        if w[1] <= w[0] {
            report.fail(json!({ "n": k + 2, "g_n": w[0], "g_next": w[1] }));
        }
    }
    report.set("grog", &grogs);
    Ok(report.finish())
}

/// Deduplicated web counts against `n! 2^eps / 2` and `n! 2^eps / |Aut|`.
pub fn check_web_count() -> Result<ClaimReport> {
    let mut report = ClaimReport::new(ClaimId::WebCount, Mode::Assert);
    let mut rows = BTreeMap::new();
    let bases = [
        ("K2", path_graph(2)?),
        ("P3", path_graph(3)?),
        ("P4", path_graph(4)?),
        ("C3", cycle_graph(3)?),
        ("C4", cycle_graph(4)?),
        ("star4", star_graph(4)?),
        ("K4", complete_graph(4)?),
    ];
    for (name, g) in bases {
        report.instances += 1;
        let labelled = enumerate_webs(&g, false)?.count() as u64;
        let distinct = enumerate_webs(&g, true)?.count() as u64;
        let aut = automorphisms(&g)?.len() as u64;
        let formula = web_count_formula(g.n(), g.edge_count())?;
        let quotient = 2 * formula / aut;
        if labelled != 2 * formula || distinct != quotient || (aut == 2 && distinct != formula) {
            report.fail(json!({
                "base": name, "labelled": labelled, "distinct": distinct,
                "automorphisms": aut, "formula": formula,
            }));
        }
        rows.insert(
            name,
            json!({
                "labelled": labelled,
                "distinct": distinct,
                "automorphisms": aut,
                "half_formula": formula,
                "formula_agrees": distinct == formula,
            }),
        );
    }
    report.set("bases", rows);
    Ok(report.finish())
}

fn skip_on_domain(id: ClaimId, mode: Mode, r: Result<ClaimReport>) -> Result<ClaimReport> {
    match r {
        Err(Error::Domain(reason)) => Ok(ClaimReport::skipped(id, mode, reason)),
        other => other,
    }
}

/// Runs a single claim. Domain problems (an `n_max` below a claim's range)
/// produce a skipped report; cap violations are errors.
pub fn run_claim(id: ClaimId, config: &VerifyConfig) -> Result<ClaimReport> {
    use ClaimId::*;
    let runs = config.runs_per_web;
    let seed_of = |id: ClaimId| config.rng_for(id, 1).gen::<u64>();
    let report = match id {
        ClosedFormCompetition => skip_on_domain(
            id,
            Mode::Assert,
            check_closed_form(config.closed_form_n_max),
        )?,
        ExitState => check_exit_lemma(&run_corpus(config, id)?, runs, seed_of(id)),
        ResidualParity => {
            check_parity(&run_corpus(config, id)?, runs, seed_of(id), &default_runner)
        }
        PredationCount => {
            check_arc_count(&run_corpus(config, id)?, runs, seed_of(id), &default_runner)
        }
        Termination => check_termination(&run_corpus(config, id)?, runs, seed_of(id)),
        Determinism => check_determinism(&run_corpus(config, id)?, runs, seed_of(id)),
        PathExtension => skip_on_domain(
            id,
            Mode::ReportOnly,
            check_path_extension(config.extension_n_max, config.max_arcs),
        )?,
        PathRecursion => skip_on_domain(id, Mode::Assert, check_path_recursion(config.path_n_max))?,
        IndexingDivergence => check_orientation_divergence(&divergence_bases()?)?,
        CycleExtension | CycleVersusPath => match check_cycle_relations(config.cycle_n_max) {
            Ok((growth, closing)) => {
                if id == CycleExtension {
                    growth
                } else {
                    closing
                }
            }
            Err(Error::Domain(reason)) => ClaimReport::skipped(id, Mode::ReportOnly, reason),
            Err(e) => return Err(e),
        },
        JaconianBound => skip_on_domain(
            id,
            Mode::Assert,
            check_jaconian_bound(config.jaconian_n_max),
        )?,
        JacoRecursion => skip_on_domain(
            id,
            Mode::Assert,
            check_jaco_recursion(config.jaco_n_max, config.max_arcs),
        )?,
        JacoMonotone => skip_on_domain(
            id,
            Mode::Assert,
            check_jaco_monotone(config.jaco_n_max, config.max_arcs),
        )?,
        GreedyEquivalence => {
            let mut corpus = small_family_corpus()?;
            let mut rng = config.rng_for(id, 0);
            corpus.extend(random_corpus(
                config.greedy_random_webs,
                config.random_max_n,
                config.random_max_edges.min(10),
                &mut rng,
            ));
            check_greedy_equivalence(&corpus, config.max_arcs)?
        }
        WebCount => check_web_count()?,
    };
    Ok(report)
}

pub fn run_claims(ids: &[ClaimId], config: &VerifyConfig) -> Result<Report> {
    let claims: Vec<ClaimReport> = ids
        .par_iter()
        .map(|&id| run_claim(id, config))
        .collect::<Result<_>>()?;
    let status = if claims.iter().all(ClaimReport::passed) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report {
        claims,
        status,
        seed: config.seed,
    })
}

pub fn run_all(config: &VerifyConfig) -> Result<Report> {
    run_claims(ClaimId::ALL, config)
}
