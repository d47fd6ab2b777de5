use grog_core::claims::{
    check_arc_count, check_parity, run_all, run_claim, small_family_corpus, ClaimId, Mode, Status,
    VerifyConfig,
};
use grog_core::engine::run_strategy;
use grog_core::{Error, RunResult, Strategy, Web};

/// Reports one unit too much residual per batch, as if every predator lost
/// one unit fewer than it should.
fn off_by_one_runner(web: &Web, strategy: &Strategy) -> grog_core::Result<RunResult> {
    let mut r = run_strategy(web, strategy, true)?;
    let extra = strategy.batches().len();
    r.residual += extra;
    Ok(r)
}

#[test]
fn parity_check_catches_a_faulty_engine() {
    let corpus = small_family_corpus().unwrap();
    let honest = check_parity(&corpus, 5, 7, &|w, s| run_strategy(w, s, true));
    assert_eq!(honest.status, Status::Pass);
    let faulty = check_parity(&corpus, 5, 7, &off_by_one_runner);
    assert_eq!(faulty.status, Status::Fail);
    assert!(faulty.failure_count() > 0);
    let first = &faulty.failures[0];
    assert!(first.get("graph").is_some() && first.get("strategy").is_some());
}

#[test]
fn arc_count_check_catches_a_faulty_engine() {
    let corpus = small_family_corpus().unwrap();
    let runner = |w: &Web, s: &Strategy| {
        let mut r = run_strategy(w, s, true)?;
        r.predation_count += 1;
        Ok(r)
    };
    assert_eq!(check_arc_count(&corpus, 3, 1, &runner).status, Status::Fail);
}

#[test]
fn reports_are_reproducible() {
    let config = VerifyConfig {
        random_webs: 10,
        runs_per_web: 5,
        greedy_random_webs: 20,
        jaconian_n_max: 50,
        closed_form_n_max: 12,
        ..VerifyConfig::default()
    }
    .with_n_max(5);
    let a = run_all(&config).unwrap();
    let b = run_all(&config).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let ids: Vec<ClaimId> = a.claims.iter().map(|c| c.id).collect();
    assert_eq!(ids, ClaimId::ALL);
    let other = run_all(&VerifyConfig { seed: 43, ..config }).unwrap();
    assert_eq!(other.seed, 43);
}

#[test]
fn report_only_claims_never_fail() {
    let config = VerifyConfig::default().with_n_max(5);
    for id in [
        ClaimId::PathExtension,
        ClaimId::CycleExtension,
        ClaimId::CycleVersusPath,
    ] {
        let r = run_claim(id, &config).unwrap();
        assert_eq!(r.mode, Mode::ReportOnly);
        assert_eq!(r.status, Status::Reported);
    }
}

#[test]
fn cycle_findings_are_recorded() {
    let r = run_claim(ClaimId::CycleVersusPath, &VerifyConfig::default()).unwrap();
    assert_eq!(r.values["cycle_grog"], serde_json::json!([2, 4, 7, 11]));
    assert_eq!(
        r.values["cycle_minus_path"],
        serde_json::json!([0, 0, 0, 0])
    );
    let g = run_claim(ClaimId::CycleExtension, &VerifyConfig::default()).unwrap();
    assert_eq!(g.values["cycle_delta"], serde_json::json!([2, 3, 4]));
}

#[test]
fn caps_are_errors_not_skips() {
    let config = VerifyConfig::default().with_n_max(7);
    assert!(matches!(
        run_claim(ClaimId::PathRecursion, &config),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn report_shape() {
    let r = run_claim(ClaimId::WebCount, &VerifyConfig::default()).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["id", "mode", "status", "instances", "failures", "values"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["id"], "web-count");
    assert_eq!(v["status"], "pass");
}
