//! Restricted flatness: a module-finite algebra, presented as a module over
//! its base, is flat iff every Fitting ideal is idempotent.

use serde::Serialize;

use crate::algebra::{AlgebraMap, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fpmodule::{fitting_ideal, ModulePresentation};
use crate::groebner::{groebner_basis, ModuleVector};
use crate::polycore::{Monomial, MonomialOrder, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flatness {
    Flat,
    NotFlat,
    NotDecided,
}

/// Size limits for the Fitting-ideal route.
#[derive(Clone, Copy, Debug)]
pub struct FlatnessLimits {
    pub max_generators: usize,
    pub max_relations: usize,
    pub steps: u64,
}

impl Default for FlatnessLimits {
    fn default() -> Self {
        FlatnessLimits {
            max_generators: 4,
            max_relations: 10,
            steps: 200_000,
        }
    }
}

/// `A` as a module over the source of `phi`, when it is module-finite and
/// within `limits`; generators are the returned monomials of `A`.
pub fn module_finite_presentation(
    phi: &AlgebraMap,
    limits: &FlatnessLimits,
    budget: &Budget,
) -> Result<Option<(ModulePresentation, Vec<Monomial>)>> {
    let (r, a) = (phi.source(), phi.target());
    let f = a.field();
    let (na, nr) = (a.nvars(), r.nvars());
    // graph ideal in F_p[a, w], a-block dominant
    let n = na + nr;
    let order = MonomialOrder::Block { split: na };
    let a_pos: Vec<usize> = (0..na).collect();
    let w_pos: Vec<usize> = (na..n).collect();
    let mut graph: Vec<Poly> = a.relations().iter().map(|g| g.embed(n, &a_pos, order)).collect();
    graph.extend(r.relations().iter().map(|g| g.embed(n, &w_pos, order)));
    for (j, img) in phi.images().iter().enumerate() {
        let w = Poly::var(f, n, order, na + j);
        graph.push(&w - &img.embed(n, &a_pos, order));
    }
    let gb = groebner_basis(f, n, &graph, order, budget)?;
    if gb.is_unit() {
        // the zero ring is the zero module
        return Ok(Some((ModulePresentation::free(r, 0), Vec::new())));
    }
    let pure: Vec<Monomial> = gb
        .leading_monomials()
        .into_iter()
        .filter(|m| m.support().all(|i| i < na))
        .collect();
    let mut bound = vec![None; na];
    for m in &pure {
        if let Some(i) = m.pure_power_of() {
            let e = m.exponent(i);
            bound[i] = Some(bound[i].map_or(e, |b: u32| b.min(e)));
        }
    }
    if bound.iter().any(Option::is_none) {
        return Ok(None);
    }
    let bound: Vec<u32> = bound.into_iter().map(Option::unwrap).collect();
    let mut gens: Vec<Monomial> = Vec::new();
    let mut ex = vec![0u32; na];
    'outer: loop {
        let mut full = ex.clone();
        full.extend(std::iter::repeat_n(0, nr));
        let m = Monomial::from_exponents(full);
        if !pure.iter().any(|l| l.divides(&m)) {
            gens.push(Monomial::from_exponents(ex.clone()));
            if gens.len() > limits.max_generators {
                return Ok(None);
            }
        }
        for k in 0..na {
            ex[k] += 1;
            if ex[k] < bound[k] {
                continue 'outer;
            }
            ex[k] = 0;
        }
        break;
    }
    let ng = gens.len();
    // kernel of F_p[w, e] -> A[ε]/(ε²), w ↦ φ, e_k ↦ m_k ε
    let total = na + 1 + nr + ng;
    let split = na + 1;
    let order = MonomialOrder::Block { split };
    let a_pos: Vec<usize> = (0..na).collect();
    let eps = Poly::var(f, total, order, na);
    let mut ideal: Vec<Poly> = a.relations().iter().map(|g| g.embed(total, &a_pos, order)).collect();
    ideal.push(eps.pow(2));
    let w_in = |j: usize| split + j;
    let e_in = |k: usize| split + nr + k;
    ideal.extend(
        r.relations()
            .iter()
            .map(|g| g.embed(total, &(0..nr).map(w_in).collect::<Vec<_>>(), order)),
    );
    for (j, img) in phi.images().iter().enumerate() {
        let w = Poly::var(f, total, order, w_in(j));
        ideal.push(&w - &img.embed(total, &a_pos, order));
    }
    for (k, m) in gens.iter().enumerate() {
        let e = Poly::var(f, total, order, e_in(k));
        let mut ex = m.exponents().to_vec();
        ex.resize(total, 0);
        let mk = Poly::monomial(f, order, Monomial::from_exponents(ex), 1);
        ideal.push(&e - &(&mk * &eps));
    }
    let kgb = groebner_basis(f, total, &ideal, order, budget)?;
    let keep: Vec<usize> = (split..total).collect();
    let mut columns: Vec<ModuleVector> = Vec::new();
    for g in kgb.generators() {
        if g.support().iter().any(|&i| i < split) {
            continue;
        }
        let g = g.restrict(&keep, RESIDUE_ORDER).expect("eliminated");
        let edeg: Vec<u32> = g
            .terms()
            .iter()
            .map(|(m, _)| (nr..nr + ng).map(|i| m.exponent(i)).sum())
            .collect();
        match edeg.first() {
            Some(0) => {
                let c = g.restrict(&(0..nr).collect::<Vec<_>>(), RESIDUE_ORDER).expect("e-free");
                for k in 0..ng {
                    let mut comps = vec![r.zero(); ng];
                    comps[k] = c.clone();
                    columns.push(ModuleVector::new(comps)?);
                }
            }
            Some(1) => {
                let mut comps = vec![r.zero(); ng];
                for (m, c) in g.terms() {
                    let k = (0..ng).find(|&k| m.exponent(nr + k) == 1).expect("degree one");
                    let ex = m.exponents()[..nr].to_vec();
                    let term = Poly::monomial(r.field(), RESIDUE_ORDER, Monomial::from_exponents(ex), *c as i64);
                    comps[k] = &comps[k] + &term;
                }
                columns.push(ModuleVector::new(comps)?);
            }
            _ => {}
        }
    }
    // reduce over R and drop duplicates and zero columns
    let mut reduced: Vec<ModuleVector> = Vec::new();
    for col in columns {
        let comps = col
            .components()
            .iter()
            .map(|c| r.reduce(c, budget))
            .collect::<Result<Vec<_>>>()?;
        let v = ModuleVector::new(comps)?;
        if !v.is_zero() && !reduced.contains(&v) {
            reduced.push(v);
        }
    }
    if reduced.len() > limits.max_relations {
        return Ok(None);
    }
    Ok(Some((ModulePresentation::new(r, ng, reduced)?, gens)))
}

/// Flatness of a finitely presented module: all Fitting ideals idempotent.
pub fn module_is_flat(m: &ModulePresentation, budget: &Budget) -> Result<bool> {
    for j in 0..=m.free_rank() {
        let fitt = fitting_ideal(m, j, budget)?;
        if fitt.is_zero() || fitt.is_unit(budget)? {
            continue;
        }
        let sq = fitt.product(&fitt, budget)?;
        if !fitt.subset(&sq, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Flatness of `phi` in the module-finite case, `NotDecided` otherwise or
/// when the separate step allowance runs out.
pub fn restricted_flatness(phi: &AlgebraMap, limits: &FlatnessLimits, budget: &Budget) -> Result<Flatness> {
    let sub = budget.fresh(limits.steps);
    let outcome = (|| -> Result<Flatness> {
        match module_finite_presentation(phi, limits, &sub)? {
            None => Ok(Flatness::NotDecided),
            Some((m, _)) => Ok(if module_is_flat(&m, &sub)? {
                Flatness::Flat
            } else {
                Flatness::NotFlat
            }),
        }
    })();
    budget.charge(sub.used().min(sub.limit()))?;
    match outcome {
        Err(Error::BudgetExceeded { .. }) => Ok(Flatness::NotDecided),
        other => other,
    }
}

/// Convenience for tests: is the ring module-finite over its base?
pub fn is_module_finite(phi: &AlgebraMap, budget: &Budget) -> Result<bool> {
    let limits = FlatnessLimits {
        max_generators: usize::MAX,
        max_relations: usize::MAX,
        steps: u64::MAX,
    };
    Ok(module_finite_presentation(phi, &limits, budget)?.is_some())
}
