//! Gröbner bases for ideals and for submodules of free modules, normal forms,
//! elimination and standard monomials.

mod engine;

use std::cmp::Ordering;

use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::polycore::{Monomial, MonomialOrder, Poly, PrimeField};

use engine::{Engine, Term, Vector};

/// Which basis vector counts as largest in a position-over-term order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PositionPriority {
    /// `e_0 > e_1 > ...`
    FirstHighest,
    /// `e_0 < e_1 < ...`
    LastHighest,
}

/// Position-over-term order on `F_p[x]^g`. For rank one it is just the
/// monomial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TermOrder {
    pub monomial: MonomialOrder,
    pub position: PositionPriority,
}

impl TermOrder {
    pub fn pot(monomial: MonomialOrder) -> Self {
        TermOrder {
            monomial,
            position: PositionPriority::FirstHighest,
        }
    }

    pub fn cmp_terms(&self, pa: usize, ma: &Monomial, pb: usize, mb: &Monomial) -> Ordering {
        let by_pos = match self.position {
            PositionPriority::FirstHighest => pb.cmp(&pa),
            PositionPriority::LastHighest => pa.cmp(&pb),
        };
        by_pos.then_with(|| self.monomial.cmp(ma, mb))
    }
}

/// Finite staircase or the marker for an unbounded one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Staircase {
    Finite(Vec<Monomial>),
    Infinite,
}

/// Reduced Gröbner basis of an ideal of `F_p[x_1..x_n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    field: PrimeField,
    nvars: usize,
    order: MonomialOrder,
    generators: Vec<Poly>,
    reduced: bool,
}

fn poly_to_vector(p: Poly) -> Vector {
    p.into_terms()
        .into_iter()
        .map(|(mono, coeff)| Term { pos: 0, mono, coeff })
        .collect()
}

fn vector_to_poly(field: PrimeField, nvars: usize, order: MonomialOrder, v: Vector) -> Poly {
    Poly::from_sorted_terms(
        field,
        nvars,
        order,
        v.into_iter().map(|t| (t.mono, t.coeff)).collect(),
    )
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
///
/// Generators are re-sorted into `order`; they must share field and variable
/// count. `nvars`/`field` are taken from the first generator, or from the
/// explicit fallbacks when `gens` is empty.
pub fn groebner_basis(
    field: PrimeField,
    nvars: usize,
    gens: &[Poly],
    order: MonomialOrder,
    budget: &Budget,
) -> Result<GroebnerBasis> {
    for g in gens {
        if g.field() != field || g.nvars() != nvars {
            return Err(Error::mismatch("generators do not share an ambient ring"));
        }
    }
    let engine = Engine {
        field,
        order: TermOrder::pot(order),
        budget,
        rank_one: true,
    };
    let vectors: Vec<Vector> = gens
        .iter()
        .map(|g| poly_to_vector(g.with_order(order)))
        .collect();
    let basis = engine.groebner(vectors)?;
    Ok(GroebnerBasis {
        field,
        nvars,
        order,
        generators: basis
            .into_iter()
            .map(|v| vector_to_poly(field, nvars, order, v))
            .collect(),
        reduced: true,
    })
}

impl GroebnerBasis {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// The ideal is the whole ring.
    pub fn is_unit(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.leading_monomial().is_some_and(Monomial::is_one))
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.generators.is_empty()
    }

    fn engine<'a>(&self, budget: &'a Budget) -> Engine<'a> {
        Engine {
            field: self.field,
            order: TermOrder::pot(self.order),
            budget,
            rank_one: true,
        }
    }

    fn basis_vectors(&self) -> Vec<Vector> {
        self.generators
            .iter()
            .map(|g| poly_to_vector(g.clone()))
            .collect()
    }

    pub fn normal_form(&self, f: &Poly, budget: &Budget) -> Result<Poly> {
        if f.field() != self.field || f.nvars() != self.nvars || f.order() != self.order {
            return Err(Error::mismatch(
                "normal form needs a polynomial in the basis ambient and order",
            ));
        }
        if self.is_unit() {
            return Ok(Poly::zero(self.field, self.nvars, self.order));
        }
        let r = self
            .engine(budget)
            .reduce(poly_to_vector(f.clone()), &self.basis_vectors())?;
        Ok(vector_to_poly(self.field, self.nvars, self.order, r))
    }

    pub fn contains(&self, f: &Poly, budget: &Budget) -> Result<bool> {
        Ok(self.normal_form(f, budget)?.is_zero())
    }

    /// Checks that every S-polynomial reduces to zero.
    pub fn verify(&self, budget: &Budget) -> Result<()> {
        self.engine(budget).verify(&self.basis_vectors())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators
            .iter()
            .filter_map(|g| g.leading_monomial().cloned())
            .collect()
    }

    /// Monomials outside the leading-term ideal, ascending.
    pub fn standard_monomials(&self) -> Staircase {
        let mut leads: Vec<Monomial> = self.leading_monomials();
        staircase(self.nvars, &mut leads, self.order)
    }
}

fn staircase(nvars: usize, leads: &mut [Monomial], order: MonomialOrder) -> Staircase {
    if leads.iter().any(Monomial::is_one) {
        return Staircase::Finite(Vec::new());
    }
    let mut bound = vec![u32::MAX; nvars];
    for m in leads.iter() {
        if let Some(i) = m.pure_power_of() {
            bound[i] = bound[i].min(m.exponent(i));
        }
    }
    if bound.contains(&u32::MAX) {
        return Staircase::Infinite;
    }
    let mut out = Vec::new();
    let mut ex = vec![0u32; nvars];
    loop {
        let m = Monomial::from_exponents(ex.clone());
        if !leads.iter().any(|l| l.divides(&m)) {
            out.push(m);
        }
        // odometer
        let mut k = 0;
        loop {
            if k == nvars {
                out.sort_by(|a, b| order.cmp(a, b));
                return Staircase::Finite(out);
            }
            ex[k] += 1;
            if ex[k] < bound[k] {
                break;
            }
            ex[k] = 0;
            k += 1;
        }
    }
}

/// Generators of `(gens) ∩ F_p[kept variables]`, returned in the original
/// ambient and order of the inputs.
pub fn eliminate(
    field: PrimeField,
    nvars: usize,
    gens: &[Poly],
    drop_vars: &[usize],
    budget: &Budget,
) -> Result<Vec<Poly>> {
    let mut dropped = vec![false; nvars];
    for &i in drop_vars {
        if i >= nvars {
            return Err(Error::mismatch(format!("variable {i} out of range")));
        }
        dropped[i] = true;
    }
    // permutation: dropped variables first
    let mut perm = vec![0usize; nvars];
    let mut inverse = Vec::with_capacity(nvars);
    for i in (0..nvars).filter(|&i| dropped[i]) {
        perm[i] = inverse.len();
        inverse.push(i);
    }
    let split = inverse.len();
    for i in (0..nvars).filter(|&i| !dropped[i]) {
        perm[i] = inverse.len();
        inverse.push(i);
    }
    let order = MonomialOrder::Block { split };
    let moved: Vec<Poly> = gens.iter().map(|g| g.embed(nvars, &perm, order)).collect();
    let gb = groebner_basis(field, nvars, &moved, order, budget)?;
    let target_order = gens.first().map_or(MonomialOrder::Grevlex, Poly::order);
    let mut out: Vec<Poly> = gb
        .generators()
        .iter()
        .filter(|g| g.support().iter().all(|&i| i >= split))
        .map(|g| g.embed(nvars, &inverse, target_order))
        .collect();
    out.sort_by(|a, b| {
        let (la, lb) = (a.leading_monomial(), b.leading_monomial());
        match (la, lb) {
            (Some(x), Some(y)) => target_order.cmp(x, y),
            _ => Ordering::Equal,
        }
    });
    Ok(out)
}

/// Element of the free module `F_p[x]^g`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleVector {
    components: Vec<Poly>,
}

impl ModuleVector {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        if let Some(first) = components.first() {
            if components.iter().any(|c| !c.same_ambient(first)) {
                return Err(Error::mismatch("module vector components differ in ambient"));
            }
        }
        Ok(ModuleVector { components })
    }

    pub fn unit(field: PrimeField, nvars: usize, order: MonomialOrder, rank: usize, i: usize) -> Self {
        let components = (0..rank)
            .map(|k| {
                if k == i {
                    Poly::one(field, nvars, order)
                } else {
                    Poly::zero(field, nvars, order)
                }
            })
            .collect();
        ModuleVector { components }
    }

    pub fn zero(field: PrimeField, nvars: usize, order: MonomialOrder, rank: usize) -> Self {
        ModuleVector {
            components: vec![Poly::zero(field, nvars, order); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn scale_by(&self, f: &Poly) -> ModuleVector {
        ModuleVector {
            components: self.components.iter().map(|c| c * f).collect(),
        }
    }

    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        ModuleVector {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn with_order(&self, order: MonomialOrder) -> ModuleVector {
        ModuleVector {
            components: self.components.iter().map(|c| c.with_order(order)).collect(),
        }
    }

    fn to_vector(&self) -> Vector {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(pos, c)| {
                c.terms().iter().map(move |(m, coeff)| Term {
                    pos,
                    mono: m.clone(),
                    coeff: *coeff,
                })
            })
            .collect()
    }

    fn from_vector(
        field: PrimeField,
        nvars: usize,
        order: MonomialOrder,
        rank: usize,
        v: Vector,
    ) -> ModuleVector {
        let mut comps: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); rank];
        for t in v {
            comps[t.pos].push((t.mono, t.coeff));
        }
        ModuleVector {
            components: comps
                .into_iter()
                .map(|terms| Poly::from_sorted_terms(field, nvars, order, terms))
                .collect(),
        }
    }
}

/// Reduced Gröbner basis of a submodule of `F_p[x]^g` in a position-over-term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleGroebnerBasis {
    field: PrimeField,
    nvars: usize,
    rank: usize,
    order: TermOrder,
    generators: Vec<ModuleVector>,
    vectors: Vec<Vector>,
}

pub fn module_groebner_basis(
    field: PrimeField,
    nvars: usize,
    rank: usize,
    gens: &[ModuleVector],
    order: TermOrder,
    budget: &Budget,
) -> Result<ModuleGroebnerBasis> {
    for g in gens {
        if g.rank() != rank
            || g.components.iter().any(|c| c.field() != field || c.nvars() != nvars)
        {
            return Err(Error::mismatch("module generators do not share an ambient"));
        }
    }
    let engine = Engine {
        field,
        order,
        budget,
        rank_one: false,
    };
    let vectors: Vec<Vector> = gens
        .iter()
        .map(|g| {
            let mut v = g.with_order(order.monomial).to_vector();
            engine.sort(&mut v);
            v
        })
        .collect();
    let basis = engine.groebner(vectors)?;
    Ok(ModuleGroebnerBasis {
        field,
        nvars,
        rank,
        order,
        generators: basis
            .iter()
            .map(|v| ModuleVector::from_vector(field, nvars, order.monomial, rank, v.clone()))
            .collect(),
        vectors: basis,
    })
}

impl ModuleGroebnerBasis {
    pub fn generators(&self) -> &[ModuleVector] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    fn engine<'a>(&self, budget: &'a Budget) -> Engine<'a> {
        Engine {
            field: self.field,
            order: self.order,
            budget,
            rank_one: false,
        }
    }

    pub fn normal_form(&self, v: &ModuleVector, budget: &Budget) -> Result<ModuleVector> {
        if v.rank() != self.rank
            || v
                .components
                .iter()
                .any(|c| c.field() != self.field || c.nvars() != self.nvars)
        {
            return Err(Error::mismatch("vector outside the module ambient"));
        }
        let engine = self.engine(budget);
        let mut vec = v.with_order(self.order.monomial).to_vector();
        engine.sort(&mut vec);
        let r = engine.reduce(vec, &self.vectors)?;
        Ok(ModuleVector::from_vector(
            self.field,
            self.nvars,
            self.order.monomial,
            self.rank,
            r,
        ))
    }

    pub fn contains(&self, v: &ModuleVector, budget: &Budget) -> Result<bool> {
        Ok(self.normal_form(v, budget)?.is_zero())
    }

    pub fn verify(&self, budget: &Budget) -> Result<()> {
        self.engine(budget).verify(&self.vectors)
    }

    /// Standard terms `(position, monomial)` of the quotient, or `None` when
    /// some position has an unbounded staircase.
    pub fn standard_terms(&self) -> Option<Vec<(usize, Monomial)>> {
        let mut out = Vec::new();
        for pos in 0..self.rank {
            let mut leads: Vec<Monomial> = self
                .vectors
                .iter()
                .filter(|v| v[0].pos == pos)
                .map(|v| v[0].mono.clone())
                .collect();
            match staircase(self.nvars, &mut leads, self.order.monomial) {
                Staircase::Finite(ms) => out.extend(ms.into_iter().map(|m| (pos, m))),
                Staircase::Infinite => return None,
            }
        }
        Some(out)
    }
}
