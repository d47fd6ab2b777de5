//! Acceptance criteria, run through the `grog` binary. Prints one line per
//! criterion and exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: Vec<u8>,
    elapsed: Duration,
}

fn grog(args: &[&str]) -> Run {
    let started = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_grog"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: out.stdout,
        elapsed: started.elapsed(),
    }
}

impl Run {
    fn json(&self) -> Result<Value, String> {
        serde_json::from_slice(&self.stdout).map_err(|e| format!("bad JSON: {e}"))
    }
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(run: &Run, limit: Duration) -> Result<(), String> {
    ensure(run.elapsed < limit, || {
        format!(
            "took {:.2}s, limit {:.0}s",
            run.elapsed.as_secs_f64(),
            limit.as_secs_f64()
        )
    })
}

fn claim<'a>(report: &'a Value, id: &str) -> Result<&'a Value, String> {
    report["claims"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["id"] == id))
        .ok_or_else(|| format!("{id} missing from report"))
}

fn verify(claims: &[&str], extra: &[&str]) -> Result<(Run, Value), String> {
    let mut args = vec!["verify", "--format", "json"];
    for c in claims {
        args.extend(["--claim", c]);
    }
    args.extend(extra);
    let run = grog(&args);
    let report = run.json()?;
    Ok((run, report))
}

fn passed(c: &Value) -> Result<(), String> {
    ensure(c["status"] == "pass", || {
        format!("{} is {}: {}", c["id"], c["status"], c["failures"])
    })
}

fn example_one() -> Outcome {
    let run = grog(&[
        "enumerate",
        "--graph",
        "path",
        "--n",
        "3",
        "--dedup",
        "--distribution",
        "--format",
        "json",
    ]);
    within(&run, Duration::from_secs(1))?;
    let v = run.json()?;
    ensure(v["webs"] == 12, || format!("{} webs", v["webs"]))?;
    ensure(v["distribution"] == json!({"2": 8, "4": 4}), || {
        format!("histogram {}", v["distribution"])
    })?;
    let rows = v["per_web"].as_array().ok_or("no per-web rows")?;
    ensure(
        rows.len() == 12 && rows.iter().all(|r| r["greedy_strategies"] == 2),
        || {
            format!(
                "greedy counts {:?}",
                rows.iter()
                    .map(|r| &r["greedy_strategies"])
                    .collect::<Vec<_>>()
            )
        },
    )?;
    ensure(v["grog"] == 2, || format!("g = {}", v["grog"]))?;
    Ok(format!(
        "12 webs, histogram {{2: 8, 4: 4}}, greedy count 2 each, g = 2 in {:.2}s",
        run.elapsed.as_secs_f64()
    ))
}

fn closed_form() -> Outcome {
    let (run, report) = verify(&["thm-1.1"], &[])?;
    let c5 = grog(&["competition", "--jaco", "5", "--format", "json"]);
    within(&run, Duration::from_secs(5))?;
    let c = claim(&report, "thm-1.1")?;
    passed(c)?;
    ensure(
        c["values"]["n_range"] == json!([5, 40]) && c["instances"] == 36,
        || {
            format!(
                "range {} with {} instances",
                c["values"]["n_range"], c["instances"]
            )
        },
    )?;
    let g = c5.json()?;
    ensure(
        g["edges"] == json!([[3, 4]]) && g["isolated"] == json!([1, 2, 5]),
        || format!("C(J_5) edges {} isolated {}", g["edges"], g["isolated"]),
    )?;
    Ok(format!(
        "closed form equals definition for 5..=40, C(J_5) = {{3,4}} in {:.2}s",
        run.elapsed.as_secs_f64()
    ))
}

fn path_recursion() -> Outcome {
    let (run, report) = verify(&["cor-2.5"], &["--n-max", "6"])?;
    within(&run, Duration::from_secs(120))?;
    let c = claim(&report, "cor-2.5")?;
    passed(c)?;
    ensure(c["values"]["grog"] == json!([2, 4, 7, 11]), || {
        format!("g(P_n) = {}", c["values"]["grog"])
    })?;
    Ok(format!(
        "g(P_3..6) = [2, 4, 7, 11] in {:.2}s",
        run.elapsed.as_secs_f64()
    ))
}

fn jaco_claims() -> Result<(Run, Value), String> {
    verify(&["lemma-2.9", "prop-2.10", "cor-2.11"], &["--n-max", "7"])
}

fn jaco_recursion() -> Outcome {
    let (run, report) = jaco_claims()?;
    within(&run, Duration::from_secs(60))?;
    for id in ["lemma-2.9", "prop-2.10", "cor-2.11"] {
        passed(claim(&report, id)?)?;
    }
    let rec = claim(&report, "prop-2.10")?;
    ensure(rec["values"]["grog"] == json!([1, 2, 4, 5, 7, 8]), || {
        format!("g(J_n) = {}", rec["values"]["grog"])
    })?;
    let jac = &claim(&report, "lemma-2.9")?["values"]["jaconian_n2_to_n12"];
    Ok(format!(
        "g(J_2..7) = [1, 2, 4, 5, 7, 8], recursion holds with computed jaconians {}, 2i - n >= 0, increasing, in {:.2}s",
        json!(jac.as_array().map(|a| &a[..6])),
        run.elapsed.as_secs_f64()
    ))
}

fn jaco_listed_jaconians() -> Outcome {
    let (_, report) = jaco_claims()?;
    let jac = claim(&report, "lemma-2.9")?["values"]["jaconian_n2_to_n12"]
        .as_array()
        .ok_or("no jaconian list")?[..6]
        .to_vec();
    let listed = json!([1, 1, 2, 2, 3, 3]);
    ensure(json!(jac) == listed, || {
        format!(
            "computed jaconians for n = 2..7 are {}, listed {listed}",
            json!(jac)
        )
    })?;
    Ok("jaconians match the listed [v1, v1, v2, v2, v3, v3]".into())
}

fn run_identities() -> Outcome {
    let (_, report) = verify(&["lemma-2.1", "lemma-2.2", "lemma-2.3"], &["--seed", "42"])?;
    let mut counts = Vec::new();
    for id in ["lemma-2.1", "lemma-2.2", "lemma-2.3"] {
        let c = claim(&report, id)?;
        passed(c)?;
        // 164 small-family webs plus 40 random webs, 50 runs each
        ensure(
            c["instances"].as_u64().unwrap_or(0) >= 164 * 50 + 1000,
            || format!("{id}: only {} runs", c["instances"]),
        )?;
        counts.push(c["instances"].as_u64().unwrap());
    }
    Ok(format!(
        "exit, parity and arc-count identities hold on {} runs each",
        counts[0]
    ))
}

fn greedy_equivalence() -> Outcome {
    let (_, report) = verify(&["def-2.2-equivalence"], &[])?;
    let c = claim(&report, "def-2.2-equivalence")?;
    passed(c)?;
    ensure(c["instances"] == 164 + 200, || {
        format!("{} webs checked", c["instances"])
    })?;
    Ok("best greedy strategy is optimal on 164 small-family webs and 200 random webs".into())
}

fn divergence() -> Outcome {
    let (_, report) = verify(&["thm-2.6"], &[])?;
    let c = claim(&report, "thm-2.6")?;
    ensure(c["values"]["p3_pair"] == json!([2, 4]), || {
        format!("P3 pair {}", c["values"]["p3_pair"])
    })?;
    passed(c).map_err(|_| {
        let bases = &c["values"]["bases"];
        let flat: Vec<String> = bases
            .as_object()
            .map(|m| {
                m.iter()
                    .filter(|(_, v)| v["min"] == v["max"])
                    .map(|(k, v)| format!("{k} only {}", v["min"]))
                    .collect()
            })
            .unwrap_or_default();
        format!(
            "P3 pair realises 2 and 4, but every web has one grog value for: {}",
            flat.join(", ")
        )
    })?;
    Ok("every base has webs with distinct grog numbers; P3 realises 2 and 4".into())
}

fn report_only_findings() -> Outcome {
    let (_, report) = verify(&["prop-2.4", "prop-2.7", "cor-2.8"], &[])?;
    for id in ["prop-2.4", "prop-2.7", "cor-2.8"] {
        let c = claim(&report, id)?;
        ensure(c["status"] == "reported", || {
            format!("{id} is {}", c["status"])
        })?;
    }
    let growth = &claim(&report, "prop-2.7")?["values"];
    let closing = &claim(&report, "cor-2.8")?["values"];
    let len = |v: &Value| v.as_array().map_or(0, Vec::len);
    ensure(
        len(&growth["cycle_grog"]) == 4
            && len(&growth["cycle_delta"]) == 3
            && len(&closing["cycle_minus_path"]) == 4,
        || "cycle sequences incomplete".into(),
    )?;
    Ok(format!(
        "g(C_3..6) = {}, deltas {}, g(C_n) - g(P_n) = {}",
        growth["cycle_grog"], growth["cycle_delta"], closing["cycle_minus_path"]
    ))
}

fn determinism() -> Outcome {
    let a = grog(&["verify", "--all", "--seed", "42", "--format", "json"]);
    let b = grog(&["verify", "--all", "--seed", "42", "--format", "json"]);
    ensure(!a.stdout.is_empty(), || "empty report".into())?;
    ensure(a.stdout == b.stdout && a.code == b.code, || {
        "reports differ".into()
    })?;
    Ok(format!(
        "two reports of {} bytes are identical",
        a.stdout.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1", example_one),
        ("2", closed_form),
        ("3", path_recursion),
        ("4", jaco_recursion),
        ("4 (listed jaconians)", jaco_listed_jaconians),
        ("5", run_identities),
        ("6", greedy_equivalence),
        ("7", divergence),
        ("8", report_only_findings),
        ("9", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("criterion {name}: PASS - {detail}"),
            Err(why) => {
                failed += 1;
                println!("criterion {name}: FAIL - {why}");
            }
        }
    }
    println!(
        "acceptance: {} of {} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
