use std::sync::{Arc, OnceLock};

use super::{Dimension, RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, GroebnerBasis};
use crate::polycore::Poly;

/// Ideal of a presented ring, stored by reduced nonzero generators.
#[derive(Clone, Debug)]
pub struct IdealHandle {
    ambient: RingPresentation,
    gens: Vec<Poly>,
    gb: OnceLock<Arc<GroebnerBasis>>,
}

impl IdealHandle {
    pub fn new(ambient: &RingPresentation, gens: &[Poly], budget: &Budget) -> Result<Self> {
        let mut reduced: Vec<Poly> = Vec::new();
        for g in gens {
            let r = ambient.reduce(g, budget)?;
            if !r.is_zero() && !reduced.contains(&r) {
                reduced.push(r);
            }
        }
        Ok(IdealHandle {
            ambient: ambient.clone(),
            gens: reduced,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ambient: &RingPresentation) -> Self {
        IdealHandle {
            ambient: ambient.clone(),
            gens: Vec::new(),
            gb: OnceLock::new(),
        }
    }

    /// `(x_i : i ∈ vars)`.
    pub fn of_variables(ambient: &RingPresentation, vars: &[usize], budget: &Budget) -> Result<Self> {
        let gens: Vec<Poly> = vars.iter().map(|&i| ambient.var(i)).collect();
        Self::new(ambient, &gens, budget)
    }

    pub fn ambient(&self) -> &RingPresentation {
        &self.ambient
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Gröbner basis of the preimage `I_A + (gens)` in the polynomial ring.
    pub fn groebner(&self, budget: &Budget) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb.clone());
        }
        let mut all: Vec<Poly> = self.ambient.relations().to_vec();
        all.extend(self.gens.iter().cloned());
        let gb = Arc::new(groebner_basis(
            self.ambient.field(),
            self.ambient.nvars(),
            &all,
            RESIDUE_ORDER,
            budget,
        )?);
        Ok(self.gb.get_or_init(|| gb).clone())
    }

    pub fn normal_form(&self, f: &Poly, budget: &Budget) -> Result<Poly> {
        let f = self.ambient.check_element(f)?;
        self.groebner(budget)?.normal_form(&f, budget)
    }

    pub fn contains(&self, f: &Poly, budget: &Budget) -> Result<bool> {
        Ok(self.normal_form(f, budget)?.is_zero())
    }

    /// The zero ideal of the ambient ring.
    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self, budget: &Budget) -> Result<bool> {
        Ok(self.groebner(budget)?.is_unit())
    }

    fn check_same(&self, other: &IdealHandle) -> Result<()> {
        if self.ambient.same_ring(&other.ambient) {
            Ok(())
        } else {
            Err(Error::mismatch("ideals of different rings"))
        }
    }

    pub fn subset(&self, other: &IdealHandle, budget: &Budget) -> Result<bool> {
        self.check_same(other)?;
        for g in &self.gens {
            if !other.contains(g, budget)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals(&self, other: &IdealHandle, budget: &Budget) -> Result<bool> {
        Ok(self.subset(other, budget)? && other.subset(self, budget)?)
    }

    pub fn sum(&self, other: &IdealHandle, budget: &Budget) -> Result<IdealHandle> {
        self.check_same(other)?;
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        IdealHandle::new(&self.ambient, &gens, budget)
    }

    pub fn product(&self, other: &IdealHandle, budget: &Budget) -> Result<IdealHandle> {
        self.check_same(other)?;
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a * b);
            }
        }
        IdealHandle::new(&self.ambient, &gens, budget)
    }

    /// `I^[q]` with `q = p^e`, generated by the q-th powers of the generators.
    pub fn frobenius_power(&self, e: u32, budget: &Budget) -> Result<IdealHandle> {
        let gens = self
            .gens
            .iter()
            .map(|g| g.pow_p(e))
            .collect::<Result<Vec<_>>>()?;
        IdealHandle::new(&self.ambient, &gens, budget)
    }

    /// `A/I` with the same variables and base.
    pub fn quotient_ring(&self, name: impl Into<String>) -> Result<RingPresentation> {
        self.ambient.quotient(name, &self.gens)
    }

    /// F_p-dimension of `A/I`.
    pub fn colength(&self, budget: &Budget) -> Result<Dimension> {
        Ok(match self.groebner(budget)?.standard_monomials() {
            crate::groebner::Staircase::Finite(ms) => Dimension::Finite(ms.len()),
            crate::groebner::Staircase::Infinite => Dimension::Infinite,
        })
    }
}
