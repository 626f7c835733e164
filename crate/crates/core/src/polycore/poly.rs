use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::PrimeField;
use super::monomial::Monomial;
use super::order::MonomialOrder;
use crate::error::{Error, Result};

/// Sparse polynomial over `F_p`.
///
/// Terms are stored descending under `order` with nonzero coefficients.
/// Changing the order is explicit via [`Poly::with_order`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    nvars: usize,
    order: MonomialOrder,
    terms: Vec<(Monomial, u32)>,
}

impl Poly {
    pub fn zero(field: PrimeField, nvars: usize, order: MonomialOrder) -> Self {
        Poly {
            field,
            nvars,
            order,
            terms: Vec::new(),
        }
    }

    pub fn constant(field: PrimeField, nvars: usize, order: MonomialOrder, c: i64) -> Self {
        let c = field.from_i64(c);
        let mut p = Self::zero(field, nvars, order);
        if c != 0 {
            p.terms.push((Monomial::one(nvars), c));
        }
        p
    }

    pub fn one(field: PrimeField, nvars: usize, order: MonomialOrder) -> Self {
        Self::constant(field, nvars, order, 1)
    }

    pub fn var(field: PrimeField, nvars: usize, order: MonomialOrder, index: usize) -> Self {
        Poly {
            field,
            nvars,
            order,
            terms: vec![(Monomial::var(nvars, index), 1)],
        }
    }

    pub fn monomial(
        field: PrimeField,
        order: MonomialOrder,
        mono: Monomial,
        coeff: i64,
    ) -> Self {
        let nvars = mono.nvars();
        Self::from_terms(field, nvars, order, vec![(mono, coeff)])
    }

    /// Collects like terms, reduces coefficients and sorts by `order`.
    pub fn from_terms(
        field: PrimeField,
        nvars: usize,
        order: MonomialOrder,
        terms: impl IntoIterator<Item = (Monomial, i64)>,
    ) -> Self {
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial has the wrong number of variables");
            let c = field.from_i64(c);
            let e = acc.entry(m).or_insert(0);
            *e = field.add(*e, c);
        }
        Self::from_map(field, nvars, order, acc)
    }

    fn from_map(
        field: PrimeField,
        nvars: usize,
        order: MonomialOrder,
        acc: HashMap<Monomial, u32>,
    ) -> Self {
        let mut terms: Vec<(Monomial, u32)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            field,
            nvars,
            order,
            terms,
        }
    }

    /// Build from already sorted, nonzero terms.
    pub(crate) fn from_sorted_terms(
        field: PrimeField,
        nvars: usize,
        order: MonomialOrder,
        terms: Vec<(Monomial, u32)>,
    ) -> Self {
        debug_assert!(terms.iter().all(|(_, c)| *c != 0));
        debug_assert!(terms
            .windows(2)
            .all(|w| order.cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        Poly {
            field,
            nvars,
            order,
            terms,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    #[inline]
    pub fn terms(&self) -> &[(Monomial, u32)] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<(Monomial, u32)> {
        self.terms
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<u32> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, u32)> {
        self.terms.first().map(|(m, c)| (m, *c))
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for (m, _) in &self.terms {
            for i in m.support() {
                used[i] = true;
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn same_ambient(&self, other: &Poly) -> bool {
        self.field == other.field && self.nvars == other.nvars && self.order == other.order
    }

    fn check_ambient(&self, other: &Poly) -> Result<()> {
        if self.same_ambient(other) {
            Ok(())
        } else {
            Err(Error::mismatch(format!(
                "(p={}, n={}, {:?}) vs (p={}, n={}, {:?})",
                self.field.characteristic(),
                self.nvars,
                self.order,
                other.field.characteristic(),
                other.nvars,
                other.order
            )))
        }
    }

    /// Re-sort under another monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Poly {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            field: self.field,
            nvars: self.nvars,
            order,
            terms,
        }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let f = self.field;
        let order = self.order;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let sign = |c: u32| if negate_other { f.neg(c) } else { c };
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match order.cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), *ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), sign(*cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(*ca, sign(*cb));
                    if c != 0 {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(other.terms[j..].iter().map(|(m, c)| (m.clone(), sign(*c))));
        Poly {
            field: f,
            nvars: self.nvars,
            order,
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_ambient(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_ambient(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.field, self.nvars, self.order));
        }
        let f = self.field;
        let mut acc: HashMap<Monomial, u32> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let e = acc.entry(ma.mul(mb)).or_insert(0);
                *e = f.add(*e, f.mul(*ca, *cb));
            }
        }
        Ok(Self::from_map(f, self.nvars, self.order, acc))
    }

    pub fn scale(&self, c: u32) -> Poly {
        let c = c % self.field.characteristic();
        if c == 0 {
            return Poly::zero(self.field, self.nvars, self.order);
        }
        Poly {
            field: self.field,
            nvars: self.nvars,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(*a, c)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Poly {
        Poly {
            field: self.field,
            nvars: self.nvars,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.mul(mono), *c)).collect(),
        }
    }

    pub fn make_monic(&self) -> Poly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(self.field.inv(c).expect("nonzero leading coefficient")),
        }
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field, self.nvars, self.order);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^(p^e)`. Frobenius fixes `F_p`, so this maps each monomial to its
    /// `p^e`-th power and keeps the coefficient.
    pub fn pow_p(&self, e: u32) -> Result<Poly> {
        let p = self.field.characteristic() as u64;
        let q = p
            .checked_pow(e)
            .ok_or(Error::DegreeOverflow(u64::MAX))?;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| m.checked_pow(q).map(|m| (m, *c)))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::DegreeOverflow(q))?;
        // monomial orders are multiplicative, so the term order is preserved
        Ok(Poly {
            field: self.field,
            nvars: self.nvars,
            order: self.order,
            terms,
        })
    }

    pub fn partial_derivative(&self, index: usize) -> Result<Poly> {
        if index >= self.nvars {
            return Err(Error::mismatch(format!(
                "variable index {index} out of range for {} variables",
                self.nvars
            )));
        }
        let f = self.field;
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(index);
            if e == 0 {
                return None;
            }
            let c = f.mul(*c, f.from_u64(e as u64));
            if c == 0 {
                return None;
            }
            let mut ex = m.exponents().to_vec();
            ex[index] -= 1;
            Some((Monomial::from_exponents(ex), c as i64))
        });
        Ok(Poly::from_terms(f, self.nvars, self.order, terms))
    }

    /// Substitute `images[i]` for variable `i`. All images share one ambient.
    pub fn compose(&self, images: &[Poly]) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::mismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        let Some(first) = images.first() else {
            // no variables: the polynomial is a constant
            return Err(Error::mismatch("compose of a constant needs a target; use compose_into"));
        };
        for img in images {
            first.check_ambient(img)?;
            if img.field != self.field {
                return Err(Error::mismatch("images over a different field"));
            }
        }
        self.compose_into(images, first.nvars, first.order)
    }

    /// Like [`Poly::compose`] but with an explicit target ambient, which is
    /// needed when there are no variables to substitute.
    pub fn compose_into(
        &self,
        images: &[Poly],
        nvars: usize,
        order: MonomialOrder,
    ) -> Result<Poly> {
        if images.len() != self.nvars {
            return Err(Error::mismatch(format!(
                "{} images for {} variables",
                images.len(),
                self.nvars
            )));
        }
        for img in images {
            if img.field != self.field || img.nvars != nvars || img.order != order {
                return Err(Error::mismatch("substitution images live in another ambient"));
            }
        }
        let f = self.field;
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|g| vec![Poly::one(f, nvars, order), g.clone()])
            .collect();
        let mut acc = Poly::zero(f, nvars, order);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(f, nvars, order, *c as i64);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
                if t.is_zero() {
                    break;
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Move into a larger (or permuted) ambient: variable `i` becomes `var_map[i]`.
    pub fn embed(&self, nvars: usize, var_map: &[usize], order: MonomialOrder) -> Poly {
        assert_eq!(var_map.len(), self.nvars);
        let terms = self.terms.iter().map(|(m, c)| {
            let mut ex = vec![0u32; nvars];
            for (i, &e) in m.exponents().iter().enumerate() {
                ex[var_map[i]] += e;
            }
            (Monomial::from_exponents(ex), *c as i64)
        });
        Poly::from_terms(self.field, nvars, order, terms)
    }

    /// Drop to a smaller ambient, keeping variables listed in `keep` (in that
    /// order). Returns `None` if a dropped variable occurs.
    pub fn restrict(&self, keep: &[usize], order: MonomialOrder) -> Option<Poly> {
        let mut pos = vec![None; self.nvars];
        for (k, &i) in keep.iter().enumerate() {
            pos[i] = Some(k);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut ex = vec![0u32; keep.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    ex[pos[i]?] = e;
                }
            }
            terms.push((Monomial::from_exponents(ex), *c as i64));
        }
        Some(Poly::from_terms(self.field, keep.len(), order, terms))
    }

    /// Human-readable form with the given variable names, coefficients
    /// printed as centered representatives.
    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let s = self.field.signed(*c);
            let (neg, mag) = (s < 0, s.unsigned_abs());
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&mag.to_string());
            } else if mag == 1 {
                out.push_str(&m.format_with(names));
            } else {
                out.push_str(&format!("{mag}*{}", m.format_with(names)));
            }
        }
        out
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "Poly({})", self.format_with(&names))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.checked_add(rhs).expect("polynomial ambient mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.checked_sub(rhs).expect("polynomial ambient mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.checked_mul(rhs).expect("polynomial ambient mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(self.field.neg(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: MonomialOrder = MonomialOrder::Grevlex;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn xvar(p: u64, n: usize, i: usize) -> Poly {
        Poly::var(f(p), n, G, i)
    }

    #[test]
    fn freshmans_dream_char_two() {
        let (x, y) = (xvar(2, 2, 0), xvar(2, 2, 1));
        let s = &x + &y;
        let sq = &s * &s;
        assert_eq!(sq, &(&x * &x) + &(&y * &y));
    }

    #[test]
    fn zero_absorbs() {
        let x = xvar(5, 1, 0);
        let z = Poly::zero(f(5), 1, G);
        assert!((&x * &z).is_zero());
    }

    #[test]
    fn cube_of_x_plus_one_mod_three() {
        // (x+1)^3 = x^3 + 3x^2 + 3x + 1 = x^3 + 1 mod 3
        let one = Poly::one(f(3), 1, G);
        let x = xvar(3, 1, 0);
        let c = (&x + &one).pow(3);
        let expected = &x.pow(3) + &one;
        assert_eq!(c, expected);
        assert_eq!((&x + &one).pow_p(1).unwrap(), expected);
    }

    #[test]
    fn derivative_examples() {
        let x = xvar(2, 1, 0);
        assert!(x.pow(2).partial_derivative(0).unwrap().is_zero());

        // d/dx (x^3 - x - t) in F_3[t, x] = -1
        let t = xvar(3, 2, 0);
        let x = xvar(3, 2, 1);
        let g = &(&x.pow(3) - &x) - &t;
        assert_eq!(
            g.partial_derivative(1).unwrap(),
            Poly::constant(f(3), 2, G, 2)
        );

        // d/du (uv - 1) = v
        let u = xvar(3, 2, 0);
        let v = xvar(3, 2, 1);
        let h = &(&u * &v) - &Poly::one(f(3), 2, G);
        assert_eq!(h.partial_derivative(0).unwrap(), v);
        assert!(h.partial_derivative(2).is_err());
    }

    #[test]
    fn mismatched_ambient_is_an_error() {
        let a = xvar(3, 1, 0);
        let b = xvar(3, 2, 0);
        assert!(matches!(a.checked_add(&b), Err(Error::AmbientMismatch(_))));
        let c = xvar(5, 1, 0);
        assert!(matches!(a.checked_mul(&c), Err(Error::AmbientMismatch(_))));
    }

    #[test]
    fn compose_substitutes() {
        // f(u) = u^2 + 1, u -> x + y over F_5
        let u = xvar(5, 1, 0);
        let fu = &u.pow(2) + &Poly::one(f(5), 1, G);
        let x = xvar(5, 2, 0);
        let y = xvar(5, 2, 1);
        let got = fu.compose(&[&x + &y]).unwrap();
        let want = &(&(&x.pow(2) + (&(&x * &y).scale(2))) + &y.pow(2)) + &Poly::one(f(5), 2, G);
        assert_eq!(got, want);
    }

    #[test]
    fn formatting() {
        let names = vec!["x".to_string(), "y".to_string()];
        let x = xvar(3, 2, 0);
        let y = xvar(3, 2, 1);
        let p = &(&x.pow(2) - &y) - &Poly::one(f(3), 2, G);
        assert_eq!(p.format_with(&names), "x^2 - y - 1");
    }
}
