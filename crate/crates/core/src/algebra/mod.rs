//! Finitely presented F_p-algebras, maps between them, ideals, tensor
//! products over a base, kernels of ring maps and subalgebra membership.

mod ideal;
mod map;
mod ops;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{groebner_basis, GroebnerBasis, Staircase};
use crate::polycore::{Monomial, MonomialOrder, Poly, PrimeField};

pub use ideal::IdealHandle;
pub use map::AlgebraMap;
pub use ops::{ring_map_kernel, subalgebra_membership, tensor_over_base, Subalgebra, SubalgebraTest, TensorProduct};

/// Default monomial order for residues.
pub const RESIDUE_ORDER: MonomialOrder = MonomialOrder::Grevlex;

/// F_p-dimension of a ring or module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl Dimension {
    pub fn finite(self) -> Option<usize> {
        match self {
            Dimension::Finite(d) => Some(d),
            Dimension::Infinite => None,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::Finite(d) => write!(f, "{d}"),
            Dimension::Infinite => write!(f, "infinite"),
        }
    }
}

#[derive(Clone)]
struct Base {
    ring: RingPresentation,
    images: Vec<Poly>,
}

struct RingData {
    name: String,
    field: PrimeField,
    vars: Vec<String>,
    relations: Vec<Poly>,
    base: Option<Base>,
    fiber: Vec<usize>,
    gb_cache: Mutex<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

/// `F_p[x_1..x_n]/I` together with a structure map from a declared base.
///
/// Cheap to clone; immutable after construction apart from the write-once
/// Gröbner cache.
#[derive(Clone)]
pub struct RingPresentation {
    inner: Arc<RingData>,
}

impl fmt::Debug for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl RingPresentation {
    /// `F_p[vars]/(relations)` over the prime field.
    pub fn new(
        name: impl Into<String>,
        field: PrimeField,
        vars: Vec<String>,
        relations: Vec<Poly>,
    ) -> Result<Self> {
        let n = vars.len();
        let relations = relations
            .into_iter()
            .map(|r| {
                if r.field() != field || r.nvars() != n {
                    Err(Error::mismatch("relation outside the ring's polynomial ambient"))
                } else {
                    Ok(r.with_order(RESIDUE_ORDER))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(name.into(), field, vars, relations, None, (0..n).collect()))
    }

    pub fn polynomial_ring(name: impl Into<String>, field: PrimeField, vars: &[&str]) -> Self {
        Self::new(name, field, vars.iter().map(|s| s.to_string()).collect(), Vec::new())
            .expect("no relations")
    }

    /// The prime field itself, as a ring with no variables.
    pub fn prime_field(field: PrimeField) -> Self {
        Self::new(format!("F{}", field.characteristic()), field, Vec::new(), Vec::new())
            .expect("no relations")
    }

    fn assemble(
        name: String,
        field: PrimeField,
        vars: Vec<String>,
        relations: Vec<Poly>,
        base: Option<Base>,
        fiber: Vec<usize>,
    ) -> Self {
        RingPresentation {
            inner: Arc::new(RingData {
                name,
                field,
                vars,
                relations,
                base,
                fiber,
                gb_cache: Mutex::new(HashMap::new()),
            }),
        }
    }

    /// Same presentation with a structure map from `base` given by `images`
    /// (one per base variable) and the recorded fiber variables.
    pub fn with_base(
        &self,
        base: &RingPresentation,
        images: Vec<Poly>,
        fiber: Vec<usize>,
        budget: &Budget,
    ) -> Result<Self> {
        if base.field() != self.field() {
            return Err(Error::IncompatibleBase("base over a different prime".into()));
        }
        if fiber.iter().any(|&i| i >= self.nvars()) {
            return Err(Error::mismatch("fiber variable out of range"));
        }
        let map = AlgebraMap::check_map(images, base, self, budget)?;
        let d = &self.inner;
        Ok(Self::assemble(
            d.name.clone(),
            d.field,
            d.vars.clone(),
            d.relations.clone(),
            Some(Base {
                ring: base.clone(),
                images: map.images().to_vec(),
            }),
            fiber,
        ))
    }

    pub fn renamed(&self, name: impl Into<String>) -> Self {
        let d = &self.inner;
        Self::assemble(
            name.into(),
            d.field,
            d.vars.clone(),
            d.relations.clone(),
            d.base.clone(),
            d.fiber.clone(),
        )
    }

    /// `A/(extra)`, keeping variables, base and fiber data.
    pub fn quotient(&self, name: impl Into<String>, extra: &[Poly]) -> Result<Self> {
        let d = &self.inner;
        let mut relations = d.relations.clone();
        for r in extra {
            if r.field() != d.field || r.nvars() != self.nvars() {
                return Err(Error::mismatch("quotient relation outside the ambient"));
            }
            relations.push(r.with_order(RESIDUE_ORDER));
        }
        Ok(Self::assemble(
            name.into(),
            d.field,
            d.vars.clone(),
            relations,
            d.base.clone(),
            d.fiber.clone(),
        ))
    }

    pub fn name(&self) -> &str {
        &self.inner.name
    }

    pub fn field(&self) -> PrimeField {
        self.inner.field
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.field.characteristic()
    }

    pub fn nvars(&self) -> usize {
        self.inner.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.inner.vars
    }

    pub fn relations(&self) -> &[Poly] {
        &self.inner.relations
    }

    /// Variables not coming from the base.
    pub fn fiber_vars(&self) -> &[usize] {
        &self.inner.fiber
    }

    pub fn base(&self) -> Option<&RingPresentation> {
        self.inner.base.as_ref().map(|b| &b.ring)
    }

    /// Structure map from the declared base (or from F_p).
    pub fn structure_map(&self) -> AlgebraMap {
        match &self.inner.base {
            Some(b) => AlgebraMap::new_unchecked(b.ring.clone(), self.clone(), b.images.clone()),
            None => AlgebraMap::new_unchecked(
                RingPresentation::prime_field(self.field()),
                self.clone(),
                Vec::new(),
            ),
        }
    }

    /// Same object: identical allocation or identical presentation data.
    pub fn same_ring(&self, other: &RingPresentation) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.field() == other.field()
                && self.nvars() == other.nvars()
                && self.relations() == other.relations())
    }

    pub fn zero(&self) -> Poly {
        Poly::zero(self.field(), self.nvars(), RESIDUE_ORDER)
    }

    pub fn one(&self) -> Poly {
        Poly::one(self.field(), self.nvars(), RESIDUE_ORDER)
    }

    pub fn constant(&self, c: i64) -> Poly {
        Poly::constant(self.field(), self.nvars(), RESIDUE_ORDER, c)
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(self.field(), self.nvars(), RESIDUE_ORDER, i)
    }

    pub fn var_by_name(&self, name: &str) -> Option<Poly> {
        self.inner.vars.iter().position(|v| v == name).map(|i| self.var(i))
    }

    pub fn monomial(&self, m: Monomial) -> Poly {
        Poly::monomial(self.field(), RESIDUE_ORDER, m, 1)
    }

    /// Polynomial in this ring's ambient, checked.
    pub fn check_element(&self, f: &Poly) -> Result<Poly> {
        if f.field() != self.field() || f.nvars() != self.nvars() {
            return Err(Error::mismatch(format!(
                "element does not live in the ambient of `{}`",
                self.name()
            )));
        }
        Ok(f.with_order(RESIDUE_ORDER))
    }

    /// Reduced Gröbner basis of the defining ideal, cached per order.
    pub fn groebner(&self, order: MonomialOrder, budget: &Budget) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.inner.gb_cache.lock().unwrap().get(&order) {
            return Ok(gb.clone());
        }
        let gb = Arc::new(groebner_basis(
            self.field(),
            self.nvars(),
            &self.inner.relations,
            order,
            budget,
        )?);
        let mut cache = self.inner.gb_cache.lock().unwrap();
        Ok(cache.entry(order).or_insert(gb).clone())
    }

    /// Canonical residue representative.
    pub fn reduce(&self, f: &Poly, budget: &Budget) -> Result<Poly> {
        let f = self.check_element(f)?;
        if self.relations().iter().all(Poly::is_zero) {
            return Ok(f);
        }
        self.groebner(RESIDUE_ORDER, budget)?.normal_form(&f, budget)
    }

    pub fn is_zero(&self, f: &Poly, budget: &Budget) -> Result<bool> {
        Ok(self.reduce(f, budget)?.is_zero())
    }

    pub fn equal(&self, a: &Poly, b: &Poly, budget: &Budget) -> Result<bool> {
        self.is_zero(&(a - b), budget)
    }

    pub fn is_zero_ring(&self, budget: &Budget) -> Result<bool> {
        Ok(self.groebner(RESIDUE_ORDER, budget)?.is_unit())
    }

    /// Monomials forming an F_p-basis of the ring.
    pub fn standard_monomials(&self, budget: &Budget) -> Result<Staircase> {
        Ok(self.groebner(RESIDUE_ORDER, budget)?.standard_monomials())
    }

    pub fn fp_dimension(&self, budget: &Budget) -> Result<Dimension> {
        Ok(match self.standard_monomials(budget)? {
            Staircase::Finite(ms) => Dimension::Finite(ms.len()),
            Staircase::Infinite => Dimension::Infinite,
        })
    }

    /// Standard monomial basis of an Artinian ring, ascending.
    pub fn fp_basis(&self, budget: &Budget) -> Result<Vec<Monomial>> {
        match self.standard_monomials(budget)? {
            Staircase::Finite(ms) => Ok(ms),
            Staircase::Infinite => Err(Error::NotArtinian),
        }
    }

    /// Coordinates of a residue in the given standard monomial basis.
    pub fn coordinates(&self, f: &Poly, basis: &[Monomial], budget: &Budget) -> Result<Vec<u32>> {
        let r = self.reduce(f, budget)?;
        let mut out = vec![0u32; basis.len()];
        for (m, c) in r.terms() {
            let k = basis
                .iter()
                .position(|b| b == m)
                .ok_or_else(|| Error::mismatch("monomial outside the supplied basis"))?;
            out[k] = *c;
        }
        Ok(out)
    }

    /// `f(images)` reduced in this ring, for `f` with one variable per image.
    pub fn substitute(&self, f: &Poly, images: &[Poly], budget: &Budget) -> Result<Poly> {
        if f.nvars() != images.len() {
            return Err(Error::mismatch(format!(
                "{} images for {} variables",
                images.len(),
                f.nvars()
            )));
        }
        if f.field() != self.field() {
            return Err(Error::mismatch("substitution across different primes"));
        }
        let images = images
            .iter()
            .map(|g| self.reduce(g, budget))
            .collect::<Result<Vec<_>>>()?;
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|g| vec![self.one(), g.clone()])
            .collect();
        let mut acc = self.zero();
        for (m, c) in f.terms() {
            let mut t = self.constant(*c as i64);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 || t.is_zero() {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let last = powers[i].last().unwrap();
                    let next = self.reduce(&(last * &images[i]), budget)?;
                    powers[i].push(next);
                }
                t = self.reduce(&(&t * &powers[i][e]), budget)?;
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Human-readable element.
    pub fn format(&self, f: &Poly) -> String {
        f.format_with(&self.inner.vars)
    }

    pub fn describe(&self) -> String {
        let d = &self.inner;
        let rels: Vec<String> = d.relations.iter().map(|r| self.format(r)).collect();
        let mut s = format!("{} = F{}[{}]", d.name, d.field.characteristic(), d.vars.join(", "));
        if !rels.is_empty() {
            s.push_str(&format!(" / ({})", rels.join(", ")));
        }
        s
    }
}
