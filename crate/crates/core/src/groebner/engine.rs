//! Buchberger's algorithm on sparse module vectors. Ideals are rank-one modules.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::polycore::{Monomial, PrimeField};

use super::TermOrder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub pos: usize,
    pub mono: Monomial,
    pub coeff: u32,
}

pub(crate) type Vector = Vec<Term>;

pub(crate) struct Engine<'a> {
    pub field: PrimeField,
    pub order: TermOrder,
    pub budget: &'a Budget,
    /// Product criterion is only valid for ideals.
    pub rank_one: bool,
}

impl<'a> Engine<'a> {
    #[inline]
    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        self.order.cmp_terms(a.pos, &a.mono, b.pos, &b.mono)
    }

    pub fn sort(&self, v: &mut Vector) {
        v.sort_by(|a, b| self.cmp(b, a));
        // collect duplicates
        let f = self.field;
        let mut out: Vector = Vec::with_capacity(v.len());
        for t in v.drain(..) {
            match out.last_mut() {
                Some(last) if last.pos == t.pos && last.mono == t.mono => {
                    last.coeff = f.add(last.coeff, t.coeff);
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff != 0);
        *v = out;
    }

    fn make_monic(&self, v: &mut Vector) {
        if let Some(lead) = v.first() {
            let inv = self.field.inv(lead.coeff).expect("nonzero lead");
            for t in v.iter_mut() {
                t.coeff = self.field.mul(t.coeff, inv);
            }
        }
    }

    /// `a - c * shift * b`, both descending.
    fn sub_scaled(&self, a: &[Term], b: &[Term], c: u32, shift: &Monomial) -> Vector {
        let f = self.field;
        let negc = f.neg(c);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Term> = b.first().map(|t| Term {
            pos: t.pos,
            mono: t.mono.mul(shift),
            coeff: f.mul(t.coeff, negc),
        });
        while i < a.len() {
            let Some(tb) = bj.as_ref() else { break };
            match self.cmp(&a[i], tb) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(bj.take().unwrap());
                    j += 1;
                    bj = b.get(j).map(|t| Term {
                        pos: t.pos,
                        mono: t.mono.mul(shift),
                        coeff: f.mul(t.coeff, negc),
                    });
                }
                Ordering::Equal => {
                    let s = f.add(a[i].coeff, tb.coeff);
                    if s != 0 {
                        out.push(Term {
                            pos: a[i].pos,
                            mono: a[i].mono.clone(),
                            coeff: s,
                        });
                    }
                    i += 1;
                    j += 1;
                    bj = b.get(j).map(|t| Term {
                        pos: t.pos,
                        mono: t.mono.mul(shift),
                        coeff: f.mul(t.coeff, negc),
                    });
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        if let Some(t) = bj {
            out.push(t);
            for t in &b[j + 1..] {
                out.push(Term {
                    pos: t.pos,
                    mono: t.mono.mul(shift),
                    coeff: f.mul(t.coeff, negc),
                });
            }
        }
        out
    }

    /// Index of the first basis element whose leading term divides `t`.
    fn find_divisor(&self, t: &Term, basis: &[Vector], skip: Option<usize>) -> Option<usize> {
        basis.iter().enumerate().position(|(k, g)| {
            Some(k) != skip && {
                let lead = &g[0];
                lead.pos == t.pos && lead.mono.divides(&t.mono)
            }
        })
    }

    /// Full reduction of `f` by a monic `basis`.
    pub fn reduce(&self, f: Vector, basis: &[Vector]) -> Result<Vector> {
        self.reduce_skipping(f, basis, None)
    }

    fn reduce_skipping(&self, mut f: Vector, basis: &[Vector], skip: Option<usize>) -> Result<Vector> {
        let mut i = 0;
        while i < f.len() {
            if let Some(k) = self.find_divisor(&f[i], basis, skip) {
                self.budget.charge(1)?;
                let g = &basis[k];
                let c = f[i].coeff;
                let shift = g[0].mono.quotient_of(&f[i].mono).expect("divides");
                let tail = self.sub_scaled(&f[i + 1..], &g[1..], c, &shift);
                f.truncate(i);
                f.extend(tail);
            } else {
                i += 1;
            }
        }
        Ok(f)
    }

    fn s_vector(&self, a: &Vector, b: &Vector) -> Vector {
        let lcm = a[0].mono.lcm(&b[0].mono);
        let sa = a[0].mono.quotient_of(&lcm).unwrap();
        let sb = b[0].mono.quotient_of(&lcm).unwrap();
        let lhs: Vector = a[1..]
            .iter()
            .map(|t| Term {
                pos: t.pos,
                mono: t.mono.mul(&sa),
                coeff: t.coeff,
            })
            .collect();
        self.sub_scaled(&lhs, &b[1..], 1, &sb)
    }

    /// Reduced Gröbner basis of the module generated by `gens`, sorted
    /// ascending by leading term.
    pub fn groebner(&self, gens: Vec<Vector>) -> Result<Vec<Vector>> {
        let mut basis: Vec<Vector> = Vec::new();
        let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> = BinaryHeap::new();

        let add = |basis: &mut Vec<Vector>,
                       heap: &mut BinaryHeap<Reverse<(u64, usize, usize)>>,
                       v: Vector| {
            let k = basis.len();
            for (i, g) in basis.iter().enumerate() {
                if g[0].pos == v[0].pos {
                    let deg = g[0].mono.lcm(&v[0].mono).degree();
                    heap.push(Reverse((deg, k, i)));
                }
            }
            basis.push(v);
        };

        for mut g in gens {
            self.sort(&mut g);
            let mut r = self.reduce(g, &basis)?;
            if r.is_empty() {
                continue;
            }
            self.make_monic(&mut r);
            if r[0].mono.is_one() && self.rank_one {
                return Ok(vec![r]);
            }
            add(&mut basis, &mut heap, r);
        }

        while let Some(Reverse((_, j, i))) = heap.pop() {
            let (a, b) = (&basis[i], &basis[j]);
            if self.rank_one && a[0].mono.is_coprime(&b[0].mono) {
                continue;
            }
            let lcm = a[0].mono.lcm(&b[0].mono);
            let pos = a[0].pos;
            let chain = basis.iter().enumerate().any(|(k, g)| {
                k != i
                    && k != j
                    && g[0].pos == pos
                    && g[0].mono.divides(&lcm)
                    && g[0].mono.lcm(&a[0].mono) != lcm
                    && g[0].mono.lcm(&b[0].mono) != lcm
            });
            if chain {
                continue;
            }
            let s = self.s_vector(a, b);
            let mut r = self.reduce(s, &basis)?;
            if r.is_empty() {
                continue;
            }
            self.make_monic(&mut r);
            if r[0].mono.is_one() && self.rank_one {
                return Ok(vec![r]);
            }
            add(&mut basis, &mut heap, r);
        }

        let reduced = self.interreduce(basis)?;
        if self.budget.verifies() {
            self.verify(&reduced)?;
        }
        Ok(reduced)
    }

    fn interreduce(&self, basis: Vec<Vector>) -> Result<Vec<Vector>> {
        // drop elements whose leading term is divisible by another (earlier wins on ties)
        let mut keep: Vec<Vector> = Vec::new();
        for (k, g) in basis.iter().enumerate() {
            let redundant = basis.iter().enumerate().any(|(l, h)| {
                l != k
                    && h[0].pos == g[0].pos
                    && h[0].mono.divides(&g[0].mono)
                    && (h[0].mono != g[0].mono || l < k)
            });
            if !redundant {
                keep.push(g.clone());
            }
        }
        let mut out = Vec::with_capacity(keep.len());
        for k in 0..keep.len() {
            let g = &keep[k];
            let lead = g[0].clone();
            let tail = self.reduce_skipping(g[1..].to_vec(), &keep, Some(k))?;
            let mut v = Vec::with_capacity(tail.len() + 1);
            v.push(lead);
            v.extend(tail);
            self.make_monic(&mut v);
            out.push(v);
        }
        out.sort_by(|a, b| self.cmp(&a[0], &b[0]));
        Ok(out)
    }

    /// Every S-vector of `basis` reduces to zero.
    pub fn verify(&self, basis: &[Vector]) -> Result<()> {
        for j in 0..basis.len() {
            for i in 0..j {
                if basis[i][0].pos != basis[j][0].pos {
                    continue;
                }
                let s = self.s_vector(&basis[i], &basis[j]);
                if !self.reduce(s, basis)?.is_empty() {
                    return Err(Error::CriterionViolated);
                }
            }
        }
        Ok(())
    }
}
