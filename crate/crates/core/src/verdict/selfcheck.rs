//! Randomized consistency checks of normal forms and ideal membership.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::report::CheckOutcome;
use crate::algebra::{RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::Result;
use crate::polycore::{Monomial, Poly};

/// Failure counts over `instances` random polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelfCheck {
    pub instances: usize,
    /// `NF(NF(f)) != NF(f)`.
    pub idempotence_failures: usize,
    /// `f - NF(f)` not recognized as a member of the ideal.
    pub difference_failures: usize,
    /// A random combination of the relations with nonzero normal form.
    pub combination_failures: usize,
    pub criterion_holds: bool,
}

impl SelfCheck {
    pub fn outcomes(&self) -> Vec<CheckOutcome> {
        vec![
            CheckOutcome::new(
                "normal form is idempotent",
                json!(0),
                json!(self.idempotence_failures),
                "a normal form has no reducible term",
            ),
            CheckOutcome::new(
                "f - NF(f) lies in the ideal",
                json!(0),
                json!(self.difference_failures),
                "reduction subtracts multiples of ideal elements",
            ),
            CheckOutcome::new(
                "combinations of relations reduce to zero",
                json!(0),
                json!(self.combination_failures),
                "the ideal contains every combination of its generators",
            ),
            CheckOutcome::new(
                "Buchberger criterion",
                json!(true),
                json!(self.criterion_holds),
                "every S-polynomial of a Gröbner basis reduces to zero",
            ),
        ]
    }
}

fn random_poly(rng: &mut ChaCha8Rng, ring: &RingPresentation, max_terms: usize, max_exp: u32) -> Poly {
    let n = ring.nvars();
    let p = ring.characteristic() as i64;
    let terms = (0..rng.gen_range(0..=max_terms)).map(|_| {
        let exps = (0..n).map(|_| rng.gen_range(0..=max_exp)).collect();
        (Monomial::from_exponents(exps), rng.gen_range(0..p))
    });
    Poly::from_terms(ring.field(), n, RESIDUE_ORDER, terms.collect::<Vec<_>>())
}

pub fn self_check_ring(ring: &RingPresentation, count: usize, seed: u64, budget: &Budget) -> Result<SelfCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gb = ring.groebner(RESIDUE_ORDER, budget)?;
    let criterion_holds = match gb.verify(budget) {
        Ok(()) => true,
        Err(e) if e.is_budget() => return Err(e),
        Err(_) => false,
    };
    let mut out = SelfCheck {
        instances: count,
        idempotence_failures: 0,
        difference_failures: 0,
        combination_failures: 0,
        criterion_holds,
    };
    for _ in 0..count {
        let f = random_poly(&mut rng, ring, 4, 3);
        let nf = ring.reduce(&f, budget)?;
        if ring.reduce(&nf, budget)? != nf {
            out.idempotence_failures += 1;
        }
        if !gb.contains(&(&f - &nf), budget)? {
            out.difference_failures += 1;
        }
        let mut combo = ring.zero();
        for rel in ring.relations() {
            combo = &combo + &(&random_poly(&mut rng, ring, 2, 2) * rel);
        }
        if !ring.is_zero(&combo, budget)? {
            out.combination_failures += 1;
        }
    }
    Ok(out)
}
