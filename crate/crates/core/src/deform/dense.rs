//! Finite-dimensional algebras as F_p-vector spaces with a multiplication
//! table, for fast evaluation during brute-force enumeration.

use crate::algebra::RingPresentation;
use crate::budget::Budget;
use crate::error::Result;
use crate::polycore::{Monomial, Poly, PrimeField};

pub(crate) struct DenseAlgebra {
    pub field: PrimeField,
    pub basis: Vec<Monomial>,
    /// `table[i * d + j]` = sparse coordinates of `basis[i] * basis[j]`.
    table: Vec<Vec<(usize, u32)>>,
    one: Vec<u32>,
}

impl DenseAlgebra {
    pub fn new(ring: &RingPresentation, budget: &Budget) -> Result<Self> {
        let basis = ring.fp_basis(budget)?;
        let d = basis.len();
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let prod = ring.monomial(basis[i].mul(&basis[j]));
                let coords = ring.coordinates(&prod, &basis, budget)?;
                table.push(
                    coords
                        .into_iter()
                        .enumerate()
                        .filter(|(_, c)| *c != 0)
                        .collect(),
                );
            }
        }
        let one = if d == 0 {
            Vec::new()
        } else {
            ring.coordinates(&ring.one(), &basis, budget)?
        };
        Ok(DenseAlgebra {
            field: ring.field(),
            basis,
            table,
            one,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let f = self.field;
        let d = self.dim();
        let mut out = vec![0u32; d];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = f.mul(x, y);
                for &(k, t) in &self.table[i * d + j] {
                    out[k] = f.add(out[k], f.mul(c, t));
                }
            }
        }
        out
    }

    /// `f(values)` for a polynomial with one variable per value.
    pub fn eval(&self, f: &Poly, values: &[Vec<u32>]) -> Vec<u32> {
        let fld = self.field;
        let d = self.dim();
        let mut powers: Vec<Vec<Vec<u32>>> = values.iter().map(|v| vec![self.one.clone(), v.clone()]).collect();
        let mut acc = vec![0u32; d];
        for (m, c) in f.terms() {
            let mut t: Vec<u32> = self.one.iter().map(|&x| fld.mul(x, *c)).collect();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = self.mul(powers[i].last().unwrap(), &values[i]);
                    powers[i].push(next);
                }
                t = self.mul(&t, &powers[i][e]);
                if t.iter().all(|&x| x == 0) {
                    break;
                }
            }
            for k in 0..d {
                acc[k] = fld.add(acc[k], t[k]);
            }
        }
        acc
    }

    pub fn to_poly(&self, ring: &RingPresentation, coords: &[u32]) -> Poly {
        let mut out = ring.zero();
        for (m, &c) in self.basis.iter().zip(coords) {
            if c != 0 {
                out = &out + &ring.monomial(m.clone()).scale(c);
            }
        }
        out
    }
}
