//! Evaluation of `check` directives from a `.kz` source.
//!
//! `omega` and `classify` report; `frobenius` asserts the requested
//! property; `kunz` asserts that `Ω = 0` and Frobenius surjectivity agree;
//! `lifts` asserts that lift counts match the unramified and étale verdicts.

use serde::Serialize;
use serde_json::{json, Value};

use super::report::Status;
use super::classify;
use crate::algebra::AlgebraMap;
use crate::budget::Budget;
use crate::deform::{deformation_bank, enumerate_lifts, ExtensionKind};
use crate::differentials::omega;
use crate::dsl::ast::{CheckDirective, CheckKind, FrobeniusMode, LiftExtension};
use crate::dsl::Program;
use crate::error::{Error, Result};
use crate::fpmodule::module_is_zero;
use crate::frobenius::{build_frobenius, frobenius_injective, frobenius_surjective};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DirectiveReport {
    pub check: String,
    pub target: String,
    pub status: Status,
    pub result: Value,
}

fn lift_counts(alpha: &AlgebraMap, ext: LiftExtension, budget: &Budget) -> Result<Vec<(String, ExtensionKind, u64)>> {
    let mut out = Vec::new();
    for entry in deformation_bank(alpha, budget)? {
        let keep = match ext {
            LiftExtension::Bank => true,
            LiftExtension::Dual => entry.label.starts_with("dual"),
            LiftExtension::PInfinitesimal => entry.label.starts_with("pinf"),
        };
        if keep {
            let n = enumerate_lifts(alpha, &entry.ext, &entry.theta, budget)?.len() as u64;
            out.push((entry.label, entry.ext.kind(), n));
        }
    }
    Ok(out)
}

fn evaluate(alpha: &AlgebraMap, target: &str, kind: &CheckKind, budget: &Budget) -> Result<(bool, Value)> {
    Ok(match kind {
        CheckKind::Omega => {
            let om = omega(alpha, budget)?;
            let zero = module_is_zero(&om.module, budget)?;
            let generators: Vec<String> =
                om.rows.iter().map(|&i| format!("d{}", alpha.target().var_names()[i])).collect();
            (
                true,
                json!({ "omega_zero": zero, "generators": generators, "relations": om.module.relations().len() }),
            )
        }
        CheckKind::Frobenius { e, mode } => {
            let fd = build_frobenius(alpha, *e, budget)?;
            let names = fd.b.var_names().to_vec();
            let mut result = json!({ "e": e });
            let mut ok = true;
            if matches!(mode, FrobeniusMode::Surjective | FrobeniusMode::Iso) {
                let s = frobenius_surjective(&fd, budget)?;
                ok &= s.surjective;
                result["surjective"] = json!(s.surjective);
                result["missing_generator"] = json!(s.missing().map(|i| alpha.target().var_names()[i].clone()));
            }
            if matches!(mode, FrobeniusMode::Injective | FrobeniusMode::Iso) {
                let inj = frobenius_injective(&fd, budget)?;
                ok &= inj.injective;
                result["injective"] = json!(inj.injective);
                result["kernel"] = json!(inj.kernel.gens().iter().map(|g| g.format_with(&names)).collect::<Vec<_>>());
            }
            (ok, result)
        }
        CheckKind::Kunz => {
            let om = omega(alpha, budget)?;
            let zero = module_is_zero(&om.module, budget)?;
            let surjective = frobenius_surjective(&build_frobenius(alpha, 1, budget)?, budget)?.surjective;
            if zero != surjective {
                return Err(Error::KunzViolation {
                    map: target.to_string(),
                    omega_zero: zero,
                    frob_surjective: surjective,
                });
            }
            (true, json!({ "omega_zero": zero, "frob_surjective": surjective }))
        }
        CheckKind::Classify { emax } => {
            let v = classify(target, alpha, *emax, budget)?;
            if v.budget_exhausted {
                return Err(Error::BudgetExceeded { limit: budget.limit() });
            }
            (true, json!(v))
        }
        CheckKind::Lifts { ext } => {
            let v = classify(target, alpha, 1, budget)?;
            let (Some(unramified), Some(etale)) = (v.omega_zero, v.frob_iso) else {
                return Err(Error::BudgetExceeded { limit: budget.limit() });
            };
            let counts = lift_counts(alpha, *ext, budget)?;
            let ok = (!unramified || counts.iter().all(|c| c.2 <= 1))
                && (!etale || counts.iter().filter(|c| c.1 == ExtensionKind::SquareZero).all(|c| c.2 == 1));
            let rows: Vec<Value> = counts
                .iter()
                .map(|(label, kind, n)| json!({ "extension": label, "kind": kind, "lifts": n }))
                .collect();
            (ok, json!({ "unramified": unramified, "etale": etale, "extensions": rows }))
        }
    })
}

/// Runs one directive with its own budget. Budget exhaustion is reported
/// as not decided; a Kunz violation is returned as an error.
pub fn run_directive(prog: &Program, directive: &CheckDirective, steps: u64) -> Result<DirectiveReport> {
    let target = directive.target.text.clone();
    let alpha = prog
        .map(&target)
        .ok_or_else(|| Error::mismatch(format!("no map or ring named `{target}`")))?;
    let budget = Budget::new(steps).with_verification(true);
    let (status, result) = match evaluate(&alpha, &target, &directive.kind, &budget) {
        Ok((true, r)) => (Status::Pass, r),
        Ok((false, r)) => (Status::Fail, r),
        Err(e) if e.is_budget() => (Status::NotDecided, json!({ "budget": steps })),
        Err(e) => return Err(e),
    };
    Ok(DirectiveReport {
        check: directive.kind.keyword().to_string(),
        target,
        status,
        result,
    })
}
