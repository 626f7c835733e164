//! Acceptance criteria. Each criterion prints one PASS or FAIL line; the
//! test fails if any criterion fails.

use std::time::{Duration, Instant};

use kunz_core::algebra::{IdealHandle, RingPresentation};
use kunz_core::deform::{deformation_bank, section_count_vs_derivations, ExtensionKind};
use kunz_core::dsl::load;
use kunz_core::fpmodule::ModulePresentation;
use kunz_core::verdict::{classify, corpus_run, CaseKind, CaseReport, CorpusReport, RunOptions, Status};
use kunz_core::Budget;
use serde_json::{json, Value};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(filter: &str) -> (CorpusReport, Duration) {
    let opts = RunOptions {
        filter: Some(glob::Pattern::new(filter).unwrap()),
        ..RunOptions::default()
    };
    let start = Instant::now();
    let report = corpus_run(&opts).expect("corpus run");
    (report, start.elapsed())
}

fn check<'a>(case: &'a CaseReport, name: &str) -> Option<&'a kunz_core::verdict::CheckOutcome> {
    case.checks.iter().find(|c| c.name == name)
}

fn observed(case: &CaseReport, name: &str) -> Value {
    check(case, name).map(|c| c.observed.clone()).unwrap_or(Value::Null)
}

fn kunz_suite(full: &CorpusReport, elapsed: Duration) -> Outcome {
    let maps: Vec<&CaseReport> = full.cases.iter().filter(|c| c.kind == CaseKind::Map).collect();
    let required = [
        "etale-localization/",
        "cusp/",
        "artin-schreier/",
        "closed-immersion/",
        "polynomial/",
        "frobenius-twist/",
    ];
    let covered = required.iter().all(|r| maps.iter().any(|c| c.name.starts_with(r)));
    let decided = maps
        .iter()
        .filter(|c| c.verdict.as_ref().is_some_and(|v| v.omega_zero.is_some() && v.frob_surjective.is_some()))
        .count();
    let pass = maps.len() >= 12
        && covered
        && decided == maps.len()
        && full.kunz.disagreements == 0
        && elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!(
            "{} maps, {} decided, {} disagreements, {:.2?}",
            maps.len(),
            decided,
            full.kunz.disagreements,
            elapsed
        ),
    )
}

fn unramified_not_etale() -> Outcome {
    let mut ok = true;
    for p in [2, 3, 5, 7] {
        let budget = Budget::new(Budget::DEFAULT_STEPS);
        let prog = load(&format!("prime {p}\nring R = [u]\nring A = R[] / (u)"), &budget).unwrap();
        let v = classify("closed-immersion", &prog.map("A").unwrap(), 2, &budget).unwrap();
        ok &= v.frob_surjective == Some(true)
            && v.frob_injective == Some(false)
            && v.classification.as_ref().map(|c| c.summary.as_str()) == Some("formally unramified, not formally étale");
    }
    outcome(ok, "F_p[u] -> F_p[u]/(u) for p = 2, 3, 5, 7")
}

fn p_root_tower() -> Outcome {
    let (report, elapsed) = run("p-root-tower/*");
    let mut ok = report.cases.len() == 12 && elapsed < Duration::from_secs(10);
    let mut degrees = Vec::new();
    for p in [2u64, 3] {
        let mut prev = 0u64;
        for n in 1..=6u32 {
            let Some(case) = report.cases.iter().find(|c| c.name == format!("p-root-tower/p={p},N={n}")) else {
                ok = false;
                continue;
            };
            ok &= observed(case, "a^[p] != a") == json!(true);
            ok &= case.witnesses.get("outside a^[p]").is_some_and(|w| w == "s");
            // The witness s has minimal polynomial X^(p^N) - t over level 0.
            let d = observed(case, "witness degree over level 0").as_u64().unwrap_or(0);
            ok &= d == p.pow(n) && d > prev;
            prev = d;
            degrees.push(d);
        }
    }
    outcome(ok, format!("degrees {degrees:?}, {elapsed:.2?}"))
}

fn dyadic_counts(full: &CorpusReport) -> Outcome {
    let mut ok = true;
    for n in 1..=6 {
        let Some(case) = full.cases.iter().find(|c| c.name == format!("dyadic-root-tower/N={n}")) else {
            ok = false;
            continue;
        };
        ok &= observed(case, "dim R/a^[3]") == json!(3);
        ok &= observed(case, "dim R/a") == json!(1);
        ok &= observed(case, "R/a^[3] -> R/a is not injective") == json!(true);
        ok &= observed(case, "rank of the roots t^(1/2^k) in R/a^[3]") == json!((n + 1).min(2));
        ok &= case.status == Status::Pass;
    }
    outcome(ok, "dim 3 and 1 at N = 1..6, kernel witness s")
}

fn paired_stages(full: &CorpusReport) -> Outcome {
    let mut ok = true;
    let mut count = 0;
    for i in 0..=2 {
        for n in 1..=2 {
            let Some(case) = full.cases.iter().find(|c| c.name == format!("paired-root-tower/i={i},N={n}")) else {
                ok = false;
                continue;
            };
            count += 1;
            ok &= observed(case, "lowest root is nonzero") == json!(true);
            ok &= observed(case, "lowest root has zero p-th power") == json!(true);
            ok &= observed(case, "Frobenius of the stage is injective") == json!(false);
            ok &= observed(case, "interior roots lie in the Frobenius image") == json!(true);
            ok &= observed(case, "transition is well defined") == json!(true);
            if n == 2 {
                ok &= observed(case, "transition commutes with the level maps") == json!(true);
            }
            ok &= case.status == Status::Pass;
        }
    }
    outcome(ok && count == 6, format!("{count} stages"))
}

fn deformation_oracle(full: &CorpusReport) -> Outcome {
    let mut ok = true;
    let mut entries = 0;
    for case in full.cases.iter().filter(|c| c.kind == CaseKind::Map) {
        let Some(v) = &case.verdict else {
            ok = false;
            continue;
        };
        entries = entries.max(case.lifts.len());
        let counts: Vec<u64> = case.lifts.iter().filter_map(|l| l.lifts).collect();
        if v.frob_surjective == Some(true) {
            ok &= counts.iter().all(|&c| c <= 1);
        }
        if v.frob_iso == Some(true) {
            ok &= case
                .lifts
                .iter()
                .filter(|l| l.kind == ExtensionKind::SquareZero)
                .all(|l| l.lifts == Some(1));
        }
        if v.omega_zero == Some(false) {
            ok &= counts.iter().any(|&c| c >= 2);
        }
    }
    // The p-infinitesimal entries at p = 3 have ideal (e) with e^2 != 0.
    let budget = Budget::new(Budget::DEFAULT_STEPS);
    let prog = load("prime 3\nring R = [u]\nring A = R[x] / (x^3 - x - u)", &budget).unwrap();
    let bank = deformation_bank(&prog.map("A").unwrap(), &budget).unwrap();
    let non_square_zero = bank.iter().any(|e| {
        e.ext.kind() == ExtensionKind::PInfinitesimal
            && e.ext.ideal().gens().iter().any(|g| {
                let sq = g * g;
                !e.ext.ring().is_zero(&sq, &budget).unwrap()
            })
    });
    ok &= entries >= 6 && non_square_zero;
    outcome(
        ok,
        format!("largest bank {entries} extensions, p = 3 p-infinitesimal non-square-zero: {non_square_zero}"),
    )
}

fn adjunction_counts(full: &CorpusReport) -> Outcome {
    let mut equal = 0;
    let mut ok = true;
    for case in &full.cases {
        for c in case.checks.iter().filter(|c| c.name.starts_with("sections of Xi")) {
            ok &= c.pass;
            equal += usize::from(c.pass);
        }
    }
    // Dual numbers over F_2 into the residue field: one derivation basis
    // element dx ↦ 1, so two derivations and two sections.
    let budget = Budget::new(Budget::DEFAULT_STEPS);
    let a = load("prime 2\nring A = [x] / (x^2)", &budget).unwrap();
    let alpha = a.map("A").unwrap();
    let ring: &RingPresentation = a.ring("A").unwrap();
    let m = ModulePresentation::cyclic(&IdealHandle::new(ring, &[ring.var(0)], &budget).unwrap());
    let dual = section_count_vs_derivations(&alpha, &m, &budget).unwrap();
    ok &= dual == (2, 2);
    outcome(ok && equal >= 5, format!("{equal} equalities in the corpus, dual numbers {dual:?}"))
}

fn stability(full: &CorpusReport) -> Outcome {
    let base_changes = full
        .cases
        .iter()
        .filter(|c| c.name.starts_with("stability/base-change/") && c.status == Status::Pass)
        .count();
    let compositions = full
        .cases
        .iter()
        .filter(|c| c.name.starts_with("stability/composition/") && c.status == Status::Pass)
        .count();
    let preserved = full
        .cases
        .iter()
        .filter(|c| c.kind == CaseKind::Stability)
        .all(|c| c.verdict.as_ref().and_then(|v| v.frob_iso) == Some(true));
    let coherent = full
        .cases
        .iter()
        .filter(|c| c.kind == CaseKind::Map)
        .all(|c| c.verdict.as_ref().and_then(|v| v.iterates_coherent) == Some(true));
    outcome(
        base_changes >= 5 && compositions >= 3 && preserved && coherent,
        format!("{base_changes} base changes, {compositions} compositions, iterates coherent: {coherent}"),
    )
}

fn self_checks(full: &CorpusReport) -> Outcome {
    let cases: Vec<&CaseReport> = full.cases.iter().filter(|c| c.kind == CaseKind::SelfCheck).collect();
    let clean = cases.iter().all(|c| c.status == Status::Pass);
    let instances = cases.len() * kunz_core::verdict::SELF_CHECK_COUNT;
    let verifying = cases.iter().all(|c| c.checks.iter().any(|k| k.name == "Buchberger criterion" && k.pass));
    let opts = RunOptions {
        seed: 42,
        ..RunOptions::default()
    };
    let first = serde_json::to_string_pretty(&corpus_run(&opts).unwrap()).unwrap();
    let second = serde_json::to_string_pretty(&corpus_run(&opts).unwrap()).unwrap();
    let identical = first == second;
    outcome(
        clean && identical && !cases.is_empty() && verifying,
        format!(
            "{} rings, {instances} instances, every basis verified: {verifying}, byte-identical: {identical}",
            cases.len()
        ),
    )
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let opts = RunOptions {
        verify: true,
        ..RunOptions::default()
    };
    let full = corpus_run(&opts).expect("corpus run");
    let elapsed = start.elapsed();
    let results = [
        ("1 Kunz biconditional suite", kunz_suite(&full, elapsed)),
        ("2 unramified-not-étale separation", unramified_not_etale()),
        ("3 p-root truncation family", p_root_tower()),
        ("4 dyadic truncation counts", dyadic_counts(&full)),
        ("5 paired-root truncated stages", paired_stages(&full)),
        ("6 deformation oracle agreement", deformation_oracle(&full)),
        ("7 adjunction counts", adjunction_counts(&full)),
        ("8 stability suite", stability(&full)),
        ("9 engine self-checks", self_checks(&full)),
    ];
    let mut failed = Vec::new();
    for (name, o) in &results {
        println!("criterion {name}: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
