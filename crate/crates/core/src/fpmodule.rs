//! Finitely presented modules over presented rings.

use std::sync::{Arc, OnceLock};

use crate::algebra::{Dimension, IdealHandle, RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{module_groebner_basis, ModuleGroebnerBasis, ModuleVector, TermOrder};
use crate::linalg::Matrix;
use crate::polycore::{Monomial, Poly};

/// Cokernel of the matrix whose columns are `relations`, over `ring`.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    ring: RingPresentation,
    free_rank: usize,
    relations: Vec<ModuleVector>,
    gb: OnceLock<Arc<ModuleGroebnerBasis>>,
}

/// Generators of `N + I·A^g` over the polynomial ring.
fn lifted_generators(ring: &RingPresentation, rank: usize, gens: &[ModuleVector]) -> Vec<ModuleVector> {
    let mut all: Vec<ModuleVector> = gens.to_vec();
    for rel in ring.relations() {
        if rel.is_zero() {
            continue;
        }
        for i in 0..rank {
            let e = ModuleVector::unit(ring.field(), ring.nvars(), RESIDUE_ORDER, rank, i);
            all.push(e.scale_by(rel));
        }
    }
    all
}

fn check_vector(ring: &RingPresentation, rank: usize, v: &ModuleVector) -> Result<ModuleVector> {
    if v.rank() != rank {
        return Err(Error::mismatch(format!(
            "vector of rank {} in a free module of rank {rank}",
            v.rank()
        )));
    }
    let comps = v
        .components()
        .iter()
        .map(|c| ring.check_element(c))
        .collect::<Result<Vec<_>>>()?;
    ModuleVector::new(comps)
}

/// Is `v` in the submodule of `A^g` generated by `gens`?
pub fn submodule_membership(
    ring: &RingPresentation,
    v: &ModuleVector,
    gens: &[ModuleVector],
    budget: &Budget,
) -> Result<bool> {
    let rank = v.rank();
    let v = check_vector(ring, rank, v)?;
    let gens = gens
        .iter()
        .map(|g| check_vector(ring, rank, g))
        .collect::<Result<Vec<_>>>()?;
    let all = lifted_generators(ring, rank, &gens);
    let gb = module_groebner_basis(
        ring.field(),
        ring.nvars(),
        rank,
        &all,
        TermOrder::pot(RESIDUE_ORDER),
        budget,
    )?;
    gb.contains(&v, budget)
}

impl ModulePresentation {
    pub fn new(ring: &RingPresentation, free_rank: usize, relations: Vec<ModuleVector>) -> Result<Self> {
        let relations = relations
            .iter()
            .map(|r| check_vector(ring, free_rank, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModulePresentation {
            ring: ring.clone(),
            free_rank,
            relations,
            gb: OnceLock::new(),
        })
    }

    pub fn free(ring: &RingPresentation, rank: usize) -> Self {
        Self::new(ring, rank, Vec::new()).expect("no relations")
    }

    /// The cyclic module `A/I`.
    pub fn cyclic(ideal: &IdealHandle) -> Self {
        let ring = ideal.ambient();
        let rels = ideal
            .gens()
            .iter()
            .map(|g| ModuleVector::new(vec![g.clone()]).unwrap())
            .collect();
        Self::new(ring, 1, rels).expect("ideal generators live in the ring")
    }

    /// Presentation from the columns of a `g × k` matrix given row-wise.
    pub fn from_matrix(ring: &RingPresentation, rows: &[Vec<Poly>]) -> Result<Self> {
        let g = rows.len();
        let k = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::mismatch("ragged presentation matrix"));
        }
        let cols = (0..k)
            .map(|c| ModuleVector::new(rows.iter().map(|r| r[c].clone()).collect()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, g, cols)
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn relations(&self) -> &[ModuleVector] {
        &self.relations
    }

    /// Matrix entry (row `i`, column `k`).
    pub fn entry(&self, i: usize, k: usize) -> &Poly {
        &self.relations[k].components()[i]
    }

    pub fn unit_vector(&self, i: usize) -> ModuleVector {
        ModuleVector::unit(self.ring.field(), self.ring.nvars(), RESIDUE_ORDER, self.free_rank, i)
    }

    /// Gröbner basis of the relation module lifted to the polynomial ring.
    pub fn groebner(&self, budget: &Budget) -> Result<Arc<ModuleGroebnerBasis>> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb.clone());
        }
        let all = lifted_generators(&self.ring, self.free_rank, &self.relations);
        let gb = Arc::new(module_groebner_basis(
            self.ring.field(),
            self.ring.nvars(),
            self.free_rank,
            &all,
            TermOrder::pot(RESIDUE_ORDER),
            budget,
        )?);
        Ok(self.gb.get_or_init(|| gb).clone())
    }

    pub fn normal_form(&self, v: &ModuleVector, budget: &Budget) -> Result<ModuleVector> {
        let v = check_vector(&self.ring, self.free_rank, v)?;
        self.groebner(budget)?.normal_form(&v, budget)
    }

    /// `v` is zero in the module.
    pub fn is_zero_element(&self, v: &ModuleVector, budget: &Budget) -> Result<bool> {
        Ok(self.normal_form(v, budget)?.is_zero())
    }

    /// Standard terms forming an F_p-basis of the module.
    pub fn fp_basis(&self, budget: &Budget) -> Result<Vec<(usize, Monomial)>> {
        self.groebner(budget)?.standard_terms().ok_or(Error::NotArtinian)
    }

    pub fn fp_dimension(&self, budget: &Budget) -> Result<Dimension> {
        Ok(match self.groebner(budget)?.standard_terms() {
            Some(ts) => Dimension::Finite(ts.len()),
            None => Dimension::Infinite,
        })
    }

    /// Coordinates of `v` in the basis returned by [`Self::fp_basis`].
    pub fn coordinates(
        &self,
        v: &ModuleVector,
        basis: &[(usize, Monomial)],
        budget: &Budget,
    ) -> Result<Vec<u32>> {
        let r = self.normal_form(v, budget)?;
        let mut out = vec![0u32; basis.len()];
        for (pos, comp) in r.components().iter().enumerate() {
            for (m, c) in comp.terms() {
                let k = basis
                    .iter()
                    .position(|(bp, bm)| *bp == pos && bm == m)
                    .ok_or_else(|| Error::mismatch("term outside the module basis"))?;
                out[k] = *c;
            }
        }
        Ok(out)
    }

    /// Element of the module from a coordinate vector.
    pub fn element(&self, coords: &[u32], basis: &[(usize, Monomial)]) -> ModuleVector {
        let f = self.ring.field();
        let mut comps = vec![self.ring.zero(); self.free_rank];
        for (&c, (pos, m)) in coords.iter().zip(basis) {
            if c != 0 {
                comps[*pos] = &comps[*pos] + &Poly::monomial(f, RESIDUE_ORDER, m.clone(), c as i64);
            }
        }
        ModuleVector::new(comps).expect("components share the ring ambient")
    }

    /// Apply a ring element to a module vector.
    pub fn scale(&self, v: &ModuleVector, a: &Poly, budget: &Budget) -> Result<ModuleVector> {
        let comps = v
            .components()
            .iter()
            .map(|c| self.ring.reduce(&(c * a), budget))
            .collect::<Result<Vec<_>>>()?;
        ModuleVector::new(comps)
    }
}

/// Is every unit vector in the relation submodule?
pub fn module_is_zero(m: &ModulePresentation, budget: &Budget) -> Result<bool> {
    for i in 0..m.free_rank() {
        if !m.is_zero_element(&m.unit_vector(i), budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Determinant by cofactor expansion along the first row, reduced in `ring`.
fn determinant(ring: &RingPresentation, m: &[Vec<Poly>], budget: &Budget) -> Result<Poly> {
    let n = m.len();
    match n {
        0 => return Ok(ring.one()),
        1 => return ring.reduce(&m[0][0], budget),
        _ => {}
    }
    let mut acc = ring.zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        budget.charge(1)?;
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != c)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let sub = determinant(ring, &minor, budget)?;
        let term = ring.reduce(&(&m[0][c] * &sub), budget)?;
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(acc)
}

/// `Fitt_j(M)`: the ideal of `(g − j)`-minors.
pub fn fitting_ideal(m: &ModulePresentation, j: usize, budget: &Budget) -> Result<IdealHandle> {
    let ring = m.ring();
    let g = m.free_rank();
    if j >= g {
        return IdealHandle::new(ring, &[ring.one()], budget);
    }
    let size = g - j;
    let k = m.relations().len();
    if size > k {
        return Ok(IdealHandle::zero(ring));
    }
    let mut minors = Vec::new();
    for rows in choose(g, size) {
        for cols in choose(k, size) {
            let sub: Vec<Vec<Poly>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| m.entry(r, c).clone()).collect())
                .collect();
            minors.push(determinant(ring, &sub, budget)?);
        }
    }
    IdealHandle::new(ring, &minors, budget)
}

/// `Fitt_{r−1} = 0` and `Fitt_r = (1)`.
pub fn module_is_projective_of_rank(m: &ModulePresentation, r: usize, budget: &Budget) -> Result<bool> {
    if r > 0 && !fitting_ideal(m, r - 1, budget)?.is_zero() {
        return Ok(false);
    }
    fitting_ideal(m, r, budget)?.is_unit(budget)
}

/// F_p-dimension of an Artinian module by dense linear algebra, without
/// module Gröbner bases.
pub fn dense_fp_dimension(m: &ModulePresentation, budget: &Budget) -> Result<usize> {
    let ring = m.ring();
    let basis = ring.fp_basis(budget)?;
    let g = m.free_rank();
    let n = basis.len();
    let mut rows = Vec::new();
    for rel in m.relations() {
        for b in &basis {
            let mult = ring.monomial(b.clone());
            let mut row = Vec::with_capacity(g * n);
            for comp in rel.components() {
                row.extend(ring.coordinates(&(comp * &mult), &basis, budget)?);
            }
            rows.push(row);
        }
    }
    let rank = Matrix::from_rows(ring.field(), g * n, rows).rank();
    Ok(g * n - rank)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::polycore::PrimeField;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn b() -> Budget {
        Budget::default().with_verification(true)
    }

    fn etale_loc() -> RingPresentation {
        let free = RingPresentation::polynomial_ring("A", fp(3), &["u", "v", "x"]);
        let (u, v, x) = (free.var(0), free.var(1), free.var(2));
        free.quotient("A", &[&(&u * &v) - &free.one(), &x.pow(2) - &u]).unwrap()
    }

    fn vec1(p: Poly) -> ModuleVector {
        ModuleVector::new(vec![p]).unwrap()
    }

    #[test]
    fn membership_examples() {
        let f2x = RingPresentation::polynomial_ring("P", fp(2), &["x"]);
        let e1 = vec1(f2x.one());
        assert!(submodule_membership(&f2x, &e1, std::slice::from_ref(&e1), &b()).unwrap());
        assert!(!submodule_membership(&f2x, &e1, &[vec1(f2x.var(0))], &b()).unwrap());

        let a = etale_loc();
        let two_x = a.var(2).scale(2);
        assert!(submodule_membership(&a, &vec1(a.one()), &[vec1(two_x)], &b()).unwrap());
    }

    #[test]
    fn zero_module_examples() {
        let f2x = RingPresentation::polynomial_ring("P", fp(2), &["x"]);
        let m = ModulePresentation::new(&f2x, 1, vec![vec1(f2x.one())]).unwrap();
        assert!(module_is_zero(&m, &b()).unwrap());
        assert!(!module_is_zero(&ModulePresentation::free(&f2x, 1), &b()).unwrap());
        let a = etale_loc();
        let m = ModulePresentation::new(&a, 1, vec![vec1(a.var(2).scale(2))]).unwrap();
        assert!(module_is_zero(&m, &b()).unwrap());
    }

    #[test]
    fn fitting_examples() {
        let r = RingPresentation::polynomial_ring("R", fp(2), &["u"]);
        let u = r.var(0);
        let m = ModulePresentation::from_matrix(&r, &[vec![u.clone()]]).unwrap();
        assert_eq!(fitting_ideal(&m, 0, &b()).unwrap().gens(), std::slice::from_ref(&u));

        let free2 = ModulePresentation::free(&r, 2);
        assert!(fitting_ideal(&free2, 1, &b()).unwrap().is_zero());
        assert!(fitting_ideal(&free2, 2, &b()).unwrap().is_unit(&b()).unwrap());

        let diag = ModulePresentation::from_matrix(
            &r,
            &[vec![u.clone(), r.zero()], vec![r.zero(), u.clone()]],
        )
        .unwrap();
        assert_eq!(fitting_ideal(&diag, 0, &b()).unwrap().gens(), &[u.pow(2)]);
        assert_eq!(fitting_ideal(&diag, 1, &b()).unwrap().gens(), std::slice::from_ref(&u));
    }

    #[test]
    fn projectivity_examples() {
        let r = RingPresentation::polynomial_ring("R", fp(2), &["u"]);
        assert!(module_is_projective_of_rank(&ModulePresentation::free(&r, 2), 2, &b()).unwrap());
        let m = ModulePresentation::from_matrix(&r, &[vec![r.var(0)]]).unwrap();
        assert!(!module_is_projective_of_rank(&m, 0, &b()).unwrap());
        assert!(!module_is_projective_of_rank(&m, 1, &b()).unwrap());

        let loc = RingPresentation::polynomial_ring("L", fp(2), &["u", "v"]);
        let loc = loc.quotient("L", &[&(&loc.var(0) * &loc.var(1)) - &loc.one()]).unwrap();
        let m = ModulePresentation::from_matrix(&loc, &[vec![loc.var(0)]]).unwrap();
        assert!(module_is_projective_of_rank(&m, 0, &b()).unwrap());
    }

    fn small_ring(p: u64) -> RingPresentation {
        let free = RingPresentation::polynomial_ring("A", fp(p), &["x", "y"]);
        free.quotient("A", &[free.var(0).pow(3), free.var(1).pow(2), &free.var(0) * &free.var(1)])
            .unwrap()
    }

    fn entry() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
        prop::collection::vec((0u32..3, 0u32..2, -2i64..3), 0..3)
    }

    fn to_poly(p: u64, t: &[(u32, u32, i64)]) -> Poly {
        Poly::from_terms(
            fp(p),
            2,
            RESIDUE_ORDER,
            t.iter().map(|&(i, j, c)| (Monomial::from_exponents(vec![i, j]), c)),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn zero_test_and_dimension_match_dense_oracle(
            p in prop::sample::select(vec![2u64, 3]),
            g in 1usize..3,
            cols in prop::collection::vec(prop::collection::vec(entry(), 2), 0..3),
        ) {
            let a = small_ring(p);
            let rels: Vec<ModuleVector> = cols.iter()
                .map(|c| ModuleVector::new(c.iter().take(g).map(|t| to_poly(p, t)).collect()).unwrap())
                .collect();
            let m = ModulePresentation::new(&a, g, rels).unwrap();
            let bud = b();
            let dense = dense_fp_dimension(&m, &bud).unwrap();
            prop_assert_eq!(m.fp_dimension(&bud).unwrap(), Dimension::Finite(dense));
            prop_assert_eq!(module_is_zero(&m, &bud).unwrap(), dense == 0);
        }

        #[test]
        fn fitting_ideals_are_monotone_and_invariant(
            p in prop::sample::select(vec![2u64, 3]),
            cols in prop::collection::vec(prop::collection::vec(entry(), 2), 1..3),
            c in 1i64..3,
            factor in entry(),
        ) {
            let r = RingPresentation::polynomial_ring("R", fp(p), &["x", "y"]);
            let rows: Vec<Vec<Poly>> = (0..2)
                .map(|i| cols.iter().map(|col| to_poly(p, &col[i])).collect())
                .collect();
            let m = ModulePresentation::from_matrix(&r, &rows).unwrap();
            let bud = b();
            let fitts: Vec<IdealHandle> = (0..3).map(|j| fitting_ideal(&m, j, &bud).unwrap()).collect();
            for j in 0..2 {
                prop_assert!(fitts[j].subset(&fitts[j + 1], &bud).unwrap());
            }
            // row operation: row0 += factor * row1; row scaling by a unit
            let c = if p == 2 { 1 } else { c as u32 };
            let f = to_poly(p, &factor);
            let mut rows2: Vec<Vec<Poly>> = vec![
                rows[0].iter().zip(&rows[1]).map(|(a, b2)| a + &(&f * b2)).collect(),
                rows[1].iter().map(|a| a.scale(c)).collect(),
            ];
            // column operation: col_last += factor * col_0
            let last = rows2[0].len() - 1;
            if last > 0 {
                for row in rows2.iter_mut() {
                    row[last] = &row[last] + &(&f * &row[0]);
                }
            }
            let m2 = ModulePresentation::from_matrix(&r, &rows2).unwrap();
            for (j, fitt) in fitts.iter().enumerate().take(3) {
                prop_assert!(fitting_ideal(&m2, j, &bud).unwrap().equals(fitt, &bud).unwrap());
                prop_assert_eq!(
                    module_is_projective_of_rank(&m2, j, &bud).unwrap(),
                    module_is_projective_of_rank(&m, j, &bud).unwrap()
                );
            }
        }
    }
}
