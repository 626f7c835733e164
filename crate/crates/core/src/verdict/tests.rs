use proptest::prelude::*;

use super::*;
use crate::dsl::load;
use crate::polycore::PrimeField;

fn classify_src(src: &str, map: &str) -> Verdict {
    let budget = Budget::new(Budget::DEFAULT_STEPS);
    let prog = load(src, &budget).unwrap();
    classify(map, &prog.map(map).unwrap(), 2, &budget).unwrap()
}

#[test]
fn artin_schreier_is_etale() {
    let v = classify_src("prime 3\nring R = [u]\nring A = R[x] / (x^3 - x - u)", "A");
    assert_eq!(v.omega_zero, Some(true));
    assert_eq!(v.frob_iso, Some(true));
    assert_eq!(v.flatness, crate::frobenius::Flatness::Flat);
    let c = v.classification.unwrap();
    assert_eq!(c.summary, "formally étale, pre-pristine");
    assert_eq!(c.pristine, Some(true));
    assert!(v.witnesses.surjectivity_certificates.iter().all(Option::is_some));
}

#[test]
fn closed_immersion_is_unramified_only() {
    for p in [2, 3, 5] {
        let v = classify_src(&format!("prime {p}\nring R = [u]\nring A = R[] / (u)"), "A");
        assert_eq!(v.frob_surjective, Some(true));
        assert_eq!(v.frob_injective, Some(false));
        assert!(!v.witnesses.frobenius_kernel.is_empty());
        assert_eq!(v.classification.unwrap().summary, "formally unramified, not formally étale");
    }
}

#[test]
fn polynomial_ring_is_not_unramified() {
    let v = classify_src("prime 2\nring A = [x]", "A");
    assert_eq!(v.omega_zero, Some(false));
    assert_eq!(v.frob_surjective, Some(false));
    assert_eq!(v.witnesses.missing_generator.as_deref(), Some("x"));
    assert_eq!(v.classification.unwrap().summary, "not formally unramified");
}

#[test]
fn tiny_budget_gives_partial_verdict() {
    let src = "prime 3\nring R = [u]\nring A = R[x] / (x^3 - x - u)";
    let prog = load(src, &Budget::unlimited()).unwrap();
    let v = classify("A", &prog.map("A").unwrap(), 2, &Budget::new(3)).unwrap();
    assert!(v.budget_exhausted);
    assert!(v.classification.is_none());
}

#[test]
fn corpus_names_are_unique_and_sorted() {
    let cases = corpus();
    let names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(names, sorted);
    let maps = cases.iter().filter(|c| matches!(c.spec, CaseSpec::Map { .. })).count();
    assert!(maps >= 12);
}

#[test]
fn every_corpus_source_elaborates() {
    let budget = Budget::new(Budget::DEFAULT_STEPS);
    for case in corpus() {
        if !case.source.is_empty() {
            load(&case.source, &budget).unwrap_or_else(|e| panic!("{}: {e}", case.name));
        }
    }
}

#[test]
fn map_case_runs_and_passes() {
    let case = corpus().into_iter().find(|c| c.name == "artin-schreier/p=3").unwrap();
    let rep = run_case(&case, &RunOptions::default()).unwrap();
    assert_eq!(rep.status, Status::Pass, "{:#?}", rep.checks);
    assert!(rep.millis.is_none());
    assert!(!rep.lifts.is_empty());
}

#[test]
fn paired_root_transition_is_well_defined() {
    let f2 = PrimeField::new(2).unwrap();
    let budget = Budget::new(Budget::DEFAULT_STEPS);
    let theta = paired_root_transition(f2, 1, 2, &budget).unwrap();
    assert_eq!(theta.source().nvars(), 2);
    assert_eq!(theta.target().nvars(), 4);
    assert_eq!(paired_root_stage(f2, 2, 1).unwrap().nvars(), 4);
}

#[test]
fn family_notes_carry_the_label() {
    let opts = RunOptions {
        filter: Some(glob::Pattern::new("dyadic-root-tower/N=2").unwrap()),
        ..RunOptions::default()
    };
    let report = corpus_run(&opts).unwrap();
    assert_eq!(report.cases.len(), 1);
    let case = &report.cases[0];
    assert_eq!(case.status, Status::Pass, "{:#?}", case.checks);
    assert!(case.notes.iter().all(|n| n.starts_with(COLIMIT_LABEL)));
}

#[test]
fn self_check_finds_no_failures() {
    let budget = Budget::new(Budget::DEFAULT_STEPS);
    let prog = load("prime 5\nring A = [x, y] / (x^2 - y^3, x*y - 1)", &budget).unwrap();
    let sc = self_check_ring(prog.ring("A").unwrap(), 200, 7, &budget).unwrap();
    assert_eq!(sc.idempotence_failures + sc.difference_failures + sc.combination_failures, 0);
    assert!(sc.criterion_holds);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Ω = 0 exactly when the relative Frobenius is surjective; classify
    // raises KunzViolation otherwise, so success is the invariant.
    #[test]
    fn omega_and_surjectivity_agree(p in prop::sample::select(vec![2u64, 3, 5]), k in 1u64..5, c in 0i64..5) {
        let src = format!("prime {p}\nring R = [u]\nring A = R[x] / (x^{k} + {c}*x - u)");
        let v = classify_src(&src, "A");
        prop_assert_eq!(v.omega_zero, v.frob_surjective);
        prop_assert_eq!(v.iterates_coherent, Some(true));
    }
}
