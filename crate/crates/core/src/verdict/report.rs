//! Running cases and assembling the corpus report.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::corpus::{corpus, CaseSpec, CorpusCase, Expectation};
use super::families::run_family;
use super::selfcheck::self_check_ring;
use super::{classify, Verdict};
use crate::algebra::{tensor_over_base, AlgebraMap, Dimension, IdealHandle};
use crate::budget::Budget;
use crate::deform::{
    deformation_bank, enumerate_lifts, rational_points, section_count_vs_derivations, xi_uniqueness_check,
    ExtensionKind, XiOutcome, BANK_CANDIDATE_LIMIT,
};
use crate::dsl::{load, DslErrorKind, Program};
use crate::error::{Error, Result};
use crate::fpmodule::ModulePresentation;
use crate::frobenius::Flatness;
use crate::polycore::Poly;

pub const SCHEMA_VERSION: u32 = 1;
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Prefix of every note about a limit object that the engine does not build.
pub const COLIMIT_LABEL: &str = "colimit claim — not machine-checked";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    Map,
    Family,
    Stability,
    SelfCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotDecided,
}

/// One comparison of an observed value against a value fixed in advance.
/// A `null` observation means the budget ran out first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub expected: Value,
    pub observed: Value,
    pub pass: bool,
    pub basis: String,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, expected: Value, observed: Value, basis: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.into(),
            pass: expected == observed,
            expected,
            observed,
            basis: basis.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftRecord {
    pub label: String,
    pub kind: ExtensionKind,
    /// `None` when enumeration was cut off.
    pub lifts: Option<u64>,
    pub xi: Option<XiOutcome>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub kind: CaseKind,
    pub status: Status,
    pub verdict: Option<Verdict>,
    pub checks: Vec<CheckOutcome>,
    pub lifts: Vec<LiftRecord>,
    pub witnesses: BTreeMap<String, String>,
    pub notes: Vec<String>,
    pub error: Option<String>,
    pub budget_exhausted: bool,
    /// Wall time, recorded only on request so reports stay reproducible.
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunzRow {
    pub case: String,
    pub omega_zero: bool,
    pub frob_surjective: bool,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KunzTable {
    pub rows: Vec<KunzRow>,
    pub agreements: usize,
    pub disagreements: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub not_decided: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub schema_version: u32,
    pub engine_version: String,
    pub seed: u64,
    pub budget: u64,
    pub emax: u32,
    pub cases: Vec<CaseReport>,
    pub kunz: KunzTable,
    pub summary: Summary,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Step budget per case.
    pub budget: u64,
    pub emax: u32,
    pub seed: u64,
    pub timings: bool,
    pub filter: Option<glob::Pattern>,
    /// Run the deformation bank on map cases.
    pub lifts: bool,
    /// Check the Buchberger criterion on every emitted basis.
    pub verify: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: Budget::DEFAULT_STEPS,
            emax: 2,
            seed: 0,
            timings: false,
            filter: None,
            lifts: true,
            verify: true,
        }
    }
}

enum Failure {
    Kernel(Error),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Kernel(e)
    }
}

type Step<T> = std::result::Result<T, Failure>;

fn program(source: &str, budget: &Budget) -> Step<Program> {
    load(source, budget).map_err(|e| match e.kind {
        DslErrorKind::Kernel(k) => Failure::Kernel(k),
        _ => Failure::Other(format!("case source: {e}")),
    })
}

fn map_of(prog: &Program, name: &str) -> Step<AlgebraMap> {
    prog.map(name).ok_or_else(|| Failure::Other(format!("case source has no map or ring `{name}`")))
}

fn observe(v: &Verdict, field: &str) -> Value {
    match field {
        "omega_zero" => json!(v.omega_zero),
        "frob_surjective" => json!(v.frob_surjective),
        "frob_injective" => json!(v.frob_injective),
        "frob_iso" => json!(v.frob_iso),
        "flatness" => match v.flatness {
            Flatness::NotDecided => Value::Null,
            f => json!(f),
        },
        "summary" => json!(v.classification.as_ref().map(|c| c.summary.clone())),
        _ => Value::Null,
    }
}

fn compare(expected: &[Expectation], v: &Verdict, prefix: &str, rep: &mut CaseReport) {
    for e in expected {
        rep.checks.push(CheckOutcome::new(
            format!("{prefix}{}", e.field),
            e.value.clone(),
            observe(v, &e.field),
            e.basis.clone(),
        ));
    }
    rep.checks.push(CheckOutcome::new(
        format!("{prefix}iterates_coherent"),
        json!(true),
        json!(v.iterates_coherent),
        "iso for one Frobenius iterate is iso for all",
    ));
}

fn classify_into(
    id: &str,
    alpha: &AlgebraMap,
    expected: &[Expectation],
    opts: &RunOptions,
    budget: &Budget,
    rep: &mut CaseReport,
) -> Result<Verdict> {
    let v = classify(id, alpha, opts.emax, budget)?;
    compare(expected, &v, "", rep);
    rep.budget_exhausted |= v.budget_exhausted;
    rep.verdict = Some(v.clone());
    Ok(v)
}

/// Classifies an input of a stability case and records whether it is iso.
fn input_iso(label: &str, alpha: &AlgebraMap, opts: &RunOptions, budget: &Budget, rep: &mut CaseReport) -> Result<()> {
    let v = classify(label, alpha, opts.emax, budget)?;
    rep.budget_exhausted |= v.budget_exhausted;
    rep.checks.push(CheckOutcome::new(
        format!("{label}: frob_iso"),
        json!(true),
        json!(v.frob_iso),
        "the input is étale",
    ));
    Ok(())
}

fn counted<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_budget() => Ok(None),
        Err(e) => Err(e),
    }
}

fn lift_checks(alpha: &AlgebraMap, v: &Verdict, budget: &Budget, rep: &mut CaseReport) -> Result<()> {
    let (Some(omega_zero), Some(surjective), Some(iso)) = (v.omega_zero, v.frob_surjective, v.frob_iso) else {
        return Ok(());
    };
    for entry in deformation_bank(alpha, budget)? {
        let lifts = counted(enumerate_lifts(alpha, &entry.ext, &entry.theta, budget))?.map(|l| l.len() as u64);
        let xi = if surjective {
            counted(xi_uniqueness_check(alpha, &entry.ext, &entry.theta, budget))?.map(|r| r.outcome)
        } else {
            None
        };
        rep.lifts.push(LiftRecord {
            label: entry.label,
            kind: entry.ext.kind(),
            lifts,
            xi,
        });
    }
    let counts: Vec<u64> = rep.lifts.iter().filter_map(|r| r.lifts).collect();
    if surjective {
        rep.checks.push(CheckOutcome::new(
            "lifts: at most one per extension",
            json!(true),
            json!(counts.iter().all(|&c| c <= 1)),
            "unramified maps lift uniquely when they lift",
        ));
        rep.checks.push(CheckOutcome::new(
            "lifts: forced by the Frobenius certificates",
            json!(true),
            json!(rep.lifts.iter().all(|r| r.xi != Some(XiOutcome::Fail))),
            "a lift of x is determined by the lift of x^p",
        ));
    }
    if iso {
        let square_zero: Vec<Option<u64>> = rep
            .lifts
            .iter()
            .filter(|r| r.kind == ExtensionKind::SquareZero)
            .map(|r| r.lifts)
            .collect();
        rep.checks.push(CheckOutcome::new(
            "lifts: exactly one per square-zero extension",
            json!(true),
            json!(square_zero.iter().flatten().all(|&c| c == 1)),
            "étale maps lift uniquely through square-zero extensions",
        ));
    }
    if !omega_zero {
        rep.checks.push(CheckOutcome::new(
            "lifts: some extension has two lifts",
            json!(true),
            json!(counts.iter().any(|&c| c >= 2)),
            "a nonzero derivation moves a lift",
        ));
    }
    adjunction_checks(alpha, budget, rep)
}

/// Sections of `Ξ(A, M)` against derivations into `M`, for `M = A/𝔪` at a
/// rational point and `M = A` when small enough.
fn adjunction_checks(alpha: &AlgebraMap, budget: &Budget, rep: &mut CaseReport) -> Result<()> {
    let a = alpha.target();
    let Dimension::Finite(dim) = a.fp_dimension(budget)? else {
        return Ok(());
    };
    let n = a.nvars();
    let p = a.characteristic() as u64;
    let mut modules: Vec<(String, ModulePresentation, usize)> = Vec::new();
    if let Some(pt) = rational_points(a, 1).first() {
        let gens: Vec<Poly> = (0..n).map(|i| &a.var(i) - &a.constant(pt[i] as i64)).collect();
        let m = ModulePresentation::cyclic(&IdealHandle::new(a, &gens, budget)?);
        modules.push(("A/m".into(), m, 1));
    }
    modules.push(("A".into(), ModulePresentation::free(a, 1), dim));
    for (label, m, mdim) in modules {
        let small = p.checked_pow((n * mdim) as u32).is_some_and(|k| k <= BANK_CANDIDATE_LIMIT);
        if !small {
            continue;
        }
        let Some((sections, derivations)) = counted(section_count_vs_derivations(alpha, &m, budget))? else {
            continue;
        };
        rep.checks.push(CheckOutcome::new(
            format!("sections of Xi(A,{label}) = derivations"),
            json!(derivations),
            json!(sections),
            "sections of the trivial extension are derivations",
        ));
    }
    Ok(())
}

fn execute(case: &CorpusCase, opts: &RunOptions, budget: &Budget, rep: &mut CaseReport) -> Step<()> {
    match &case.spec {
        CaseSpec::Map { map } => {
            let prog = program(&case.source, budget)?;
            let alpha = map_of(&prog, map)?;
            let v = classify_into(&case.name, &alpha, &case.expected, opts, budget, rep)?;
            if opts.lifts && !v.budget_exhausted {
                lift_checks(&alpha, &v, budget, rep)?;
            }
        }
        CaseSpec::Family { family, map } => {
            let out = run_family(*family, budget)?;
            rep.checks.extend(out.checks);
            rep.witnesses = out.witnesses;
            rep.notes = out.notes;
            if let Some(map) = map {
                let prog = program(&case.source, budget)?;
                let alpha = map_of(&prog, map)?;
                classify_into(&case.name, &alpha, &case.expected, opts, budget, rep)?;
            }
        }
        CaseSpec::BaseChange { map, along } => {
            let prog = program(&case.source, budget)?;
            let (f, g) = (map_of(&prog, map)?, map_of(&prog, along)?);
            input_iso(map, &f, opts, budget, rep)?;
            let t = tensor_over_base(&f, &g)?;
            rep.witnesses.insert("base change".into(), t.ring.describe());
            classify_into(&case.name, &t.right, &case.expected, opts, budget, rep)?;
        }
        CaseSpec::Composition { first, second } => {
            let prog = program(&case.source, budget)?;
            let (f, g) = (map_of(&prog, first)?, map_of(&prog, second)?);
            input_iso(first, &f, opts, budget, rep)?;
            input_iso(second, &g, opts, budget, rep)?;
            let h = f.then(&g, budget)?;
            classify_into(&case.name, &h, &case.expected, opts, budget, rep)?;
        }
        CaseSpec::SelfCheck { ring, count } => {
            let prog = program(&case.source, budget)?;
            let r = prog
                .ring(ring)
                .ok_or_else(|| Failure::Other(format!("case source has no ring `{ring}`")))?;
            let sc = self_check_ring(r, *count, case_seed(opts.seed, &case.name), budget)?;
            rep.checks.extend(sc.outcomes());
            rep.witnesses.insert("ring".into(), r.describe());
        }
    }
    Ok(())
}

/// Seed for one case, independent of which other cases are selected.
fn case_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
        ^ seed
}

fn status(rep: &CaseReport) -> Status {
    if rep.error.is_some() || rep.checks.iter().any(|c| !c.pass && !c.observed.is_null()) {
        Status::Fail
    } else if rep.budget_exhausted || rep.checks.iter().any(|c| !c.pass) {
        Status::NotDecided
    } else {
        Status::Pass
    }
}

/// Runs one case with a fresh budget. Engine inconsistencies (a Kunz
/// violation or a basis failing the Buchberger criterion) are returned as
/// errors; every other failure is recorded in the report.
pub fn run_case(case: &CorpusCase, opts: &RunOptions) -> Result<CaseReport> {
    let start = Instant::now();
    let budget = Budget::new(opts.budget).with_verification(opts.verify);
    let mut rep = CaseReport {
        name: case.name.clone(),
        kind: case.kind(),
        status: Status::Pass,
        verdict: None,
        checks: Vec::new(),
        lifts: Vec::new(),
        witnesses: BTreeMap::new(),
        notes: Vec::new(),
        error: None,
        budget_exhausted: false,
        millis: None,
    };
    match execute(case, opts, &budget, &mut rep) {
        Ok(()) => {}
        Err(Failure::Kernel(e)) if e.is_budget() => rep.budget_exhausted = true,
        Err(Failure::Kernel(e @ (Error::KunzViolation { .. } | Error::CriterionViolated))) => return Err(e),
        Err(Failure::Kernel(e)) => rep.error = Some(e.to_string()),
        Err(Failure::Other(msg)) => rep.error = Some(msg),
    }
    rep.status = status(&rep);
    if opts.timings {
        rep.millis = Some(start.elapsed().as_millis() as u64);
    }
    Ok(rep)
}

pub fn kunz_crosscheck(cases: &[CaseReport]) -> KunzTable {
    let rows: Vec<KunzRow> = cases
        .iter()
        .filter_map(|c| {
            let v = c.verdict.as_ref()?;
            let (omega_zero, frob_surjective) = (v.omega_zero?, v.frob_surjective?);
            Some(KunzRow {
                case: c.name.clone(),
                omega_zero,
                frob_surjective,
                agree: omega_zero == frob_surjective,
            })
        })
        .collect();
    let agreements = rows.iter().filter(|r| r.agree).count();
    KunzTable {
        disagreements: rows.len() - agreements,
        agreements,
        rows,
    }
}

/// Runs every selected case in parallel; the report lists cases by name.
pub fn corpus_run(opts: &RunOptions) -> Result<CorpusReport> {
    let cases: Vec<CorpusCase> = corpus()
        .into_iter()
        .filter(|c| opts.filter.as_ref().is_none_or(|p| p.matches(&c.name)))
        .collect();
    let mut reports = cases
        .par_iter()
        .map(|c| run_case(c, opts))
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let summary = Summary {
        total: reports.len(),
        pass: count(Status::Pass),
        fail: count(Status::Fail),
        not_decided: count(Status::NotDecided),
    };
    Ok(CorpusReport {
        schema_version: SCHEMA_VERSION,
        engine_version: ENGINE_VERSION.to_string(),
        seed: opts.seed,
        budget: opts.budget,
        emax: opts.emax,
        kunz: kunz_crosscheck(&reports),
        cases: reports,
        summary,
    })
}
