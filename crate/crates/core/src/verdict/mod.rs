//! Classification of a map from its differentials and relative Frobenius,
//! the corpus of worked cases and the machine-readable report.

mod corpus;
mod directive;
mod families;
mod report;
mod selfcheck;

use serde::Serialize;

use crate::algebra::AlgebraMap;
use crate::budget::Budget;
use crate::differentials::omega;
use crate::fpmodule::module_is_zero;
use crate::error::{Error, Result};
use crate::frobenius::{
    build_frobenius, frobenius_injective, frobenius_surjective, restricted_flatness, Flatness, FlatnessLimits,
};

pub use corpus::{corpus, CaseSpec, CorpusCase, Expectation, Family, SELF_CHECK_COUNT};
pub use directive::{run_directive, DirectiveReport};
pub use families::{paired_root_stage, paired_root_transition};
pub use report::{
    corpus_run, kunz_crosscheck, run_case, CaseKind, CaseReport, CheckOutcome, CorpusReport, KunzRow, KunzTable,
    LiftRecord, RunOptions, Status, Summary, COLIMIT_LABEL, ENGINE_VERSION, SCHEMA_VERSION,
};
pub use selfcheck::{self_check_ring, SelfCheck};

/// Labels derived from the decided fields of a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub formally_unramified: bool,
    pub formally_etale: bool,
    pub pre_pristine: bool,
    /// Pre-pristine and flat; `None` when flatness is not decided.
    pub pristine: Option<bool>,
    pub summary: String,
}

impl Classification {
    pub fn from_fields(omega_zero: bool, frob_iso: bool, flatness: Flatness) -> Self {
        let pristine = match (frob_iso, flatness) {
            (false, _) | (_, Flatness::NotFlat) => Some(false),
            (true, Flatness::Flat) => Some(true),
            (true, Flatness::NotDecided) => None,
        };
        let summary = if frob_iso {
            "formally étale, pre-pristine".to_string()
        } else if omega_zero {
            "formally unramified, not formally étale".to_string()
        } else {
            "not formally unramified".to_string()
        };
        Classification {
            formally_unramified: omega_zero,
            formally_etale: frob_iso,
            pre_pristine: frob_iso,
            pristine,
            summary,
        }
    }
}

/// Certificates and kernels behind a verdict, printed in the variables of
/// `A ⊗_R F_*R` (the `A` copy then the primed copy of `R`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    /// For each variable of `A`, a preimage under the relative Frobenius.
    pub surjectivity_certificates: Vec<Option<String>>,
    /// First variable of `A` outside the image, if any.
    pub missing_generator: Option<String>,
    /// Generators of the kernel of the relative Frobenius.
    pub frobenius_kernel: Vec<String>,
    /// Generators and relations of the presentation of `Ω_{A/R}`.
    pub omega_shape: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterateSummary {
    pub e: u32,
    pub surjective: bool,
    pub injective: bool,
}

/// Outcome of `classify`. Fields are `None` when the budget ran out before
/// they were decided.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub map_id: String,
    pub omega_zero: Option<bool>,
    pub frob_surjective: Option<bool>,
    pub frob_injective: Option<bool>,
    pub frob_iso: Option<bool>,
    pub flatness: Flatness,
    pub iterates: Vec<IterateSummary>,
    /// The iso verdict agrees for every computed iterate.
    pub iterates_coherent: Option<bool>,
    pub classification: Option<Classification>,
    pub witnesses: Witnesses,
    pub budget_exhausted: bool,
    pub steps: u64,
}

impl Verdict {
    fn empty(map_id: String) -> Self {
        Verdict {
            map_id,
            omega_zero: None,
            frob_surjective: None,
            frob_injective: None,
            frob_iso: None,
            flatness: Flatness::NotDecided,
            iterates: Vec::new(),
            iterates_coherent: None,
            classification: None,
            witnesses: Witnesses::default(),
            budget_exhausted: false,
            steps: 0,
        }
    }
}

/// Runs the differential and Frobenius engines on `alpha`. A budget overrun
/// yields a partial verdict; disagreement between `Ω = 0` and surjectivity
/// of the relative Frobenius is a `KunzViolation`.
pub fn classify(map_id: &str, alpha: &AlgebraMap, e_max: u32, budget: &Budget) -> Result<Verdict> {
    let mut v = Verdict::empty(map_id.to_string());
    let outcome = fill(&mut v, alpha, e_max.max(1), budget);
    v.steps = budget.used();
    match outcome {
        Ok(()) => Ok(v),
        Err(Error::BudgetExceeded { .. }) => {
            v.budget_exhausted = true;
            Ok(v)
        }
        Err(e) => Err(e),
    }
}

fn fill(v: &mut Verdict, alpha: &AlgebraMap, e_max: u32, budget: &Budget) -> Result<()> {
    let om = omega(alpha, budget)?;
    v.witnesses.omega_shape = Some((om.module.free_rank(), om.module.relations().len()));
    let omega_zero = module_is_zero(&om.module, budget)?;
    v.omega_zero = Some(omega_zero);
    let fd = build_frobenius(alpha, 1, budget)?;
    let names = fd.b.var_names().to_vec();
    let surj = frobenius_surjective(&fd, budget)?;
    v.frob_surjective = Some(surj.surjective);
    v.witnesses.surjectivity_certificates = surj
        .certificates
        .iter()
        .map(|c| c.as_ref().map(|p| p.format_with(&names)))
        .collect();
    v.witnesses.missing_generator = surj.missing().map(|i| alpha.target().var_names()[i].clone());
    if omega_zero != surj.surjective {
        return Err(Error::KunzViolation {
            map: v.map_id.clone(),
            omega_zero,
            frob_surjective: surj.surjective,
        });
    }
    let inj = frobenius_injective(&fd, budget)?;
    v.frob_injective = Some(inj.injective);
    v.witnesses.frobenius_kernel = inj.kernel.gens().iter().map(|g| g.format_with(&names)).collect();
    let iso = surj.surjective && inj.injective;
    v.frob_iso = Some(iso);
    v.iterates.push(IterateSummary {
        e: 1,
        surjective: surj.surjective,
        injective: inj.injective,
    });
    for e in 2..=e_max {
        let fd = build_frobenius(alpha, e, budget)?;
        let surjective = frobenius_surjective(&fd, budget)?.surjective;
        let injective = frobenius_injective(&fd, budget)?.injective;
        v.iterates.push(IterateSummary { e, surjective, injective });
    }
    v.iterates_coherent = Some(v.iterates.iter().all(|r| (r.surjective && r.injective) == iso));
    v.flatness = restricted_flatness(alpha, &FlatnessLimits::default(), budget)?;
    v.classification = Some(Classification::from_fields(omega_zero, iso, v.flatness));
    Ok(())
}

#[cfg(test)]
mod tests;
