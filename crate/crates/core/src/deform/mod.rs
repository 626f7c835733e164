//! Square-zero and p-infinitesimal extensions, trivial extensions `Ξ(A, M)`
//! and brute-force enumeration of lifts along them.

mod bank;
mod dense;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{AlgebraMap, Dimension, IdealHandle, RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::differentials::derivation_space_dimension;
use crate::error::{Error, Result};
use crate::fpmodule::ModulePresentation;
use crate::frobenius::{build_frobenius, frobenius_surjective};
use crate::linalg::Matrix;
use crate::polycore::Poly;

pub use bank::{deformation_bank, rational_points, BankEntry, BANK_CANDIDATE_LIMIT};
use dense::DenseAlgebra;

/// Default cap on the number of enumerated candidates.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtensionKind {
    /// `I² = 0`.
    SquareZero,
    /// `I^[p] = 0`.
    PInfinitesimal,
}

/// A finite-dimensional `R`-algebra `C` with an ideal `I` of the declared
/// kind, the quotient `C → C/I` and the structure map `R → C`.
#[derive(Clone, Debug)]
pub struct SquareZeroExtension {
    ring: RingPresentation,
    ideal: IdealHandle,
    kind: ExtensionKind,
    quotient: AlgebraMap,
    base_map: AlgebraMap,
}

impl SquareZeroExtension {
    pub fn new(
        ring: &RingPresentation,
        ideal_gens: &[Poly],
        kind: ExtensionKind,
        base_map: AlgebraMap,
        budget: &Budget,
    ) -> Result<Self> {
        if !base_map.target().same_ring(ring) {
            return Err(Error::mismatch("base map does not land in the extension ring"));
        }
        if ring.fp_dimension(budget)? == Dimension::Infinite {
            return Err(Error::NotArtinian);
        }
        let ideal = IdealHandle::new(ring, ideal_gens, budget)?;
        let holds = match kind {
            ExtensionKind::SquareZero => ideal.product(&ideal, budget)?.is_zero(),
            ExtensionKind::PInfinitesimal => ideal.frobenius_power(1, budget)?.is_zero(),
        };
        if !holds {
            return Err(Error::InvalidDeformation(match kind {
                ExtensionKind::SquareZero => "ideal does not square to zero".into(),
                ExtensionKind::PInfinitesimal => "ideal has nonzero Frobenius power".into(),
            }));
        }
        let residue = ideal.quotient_ring(format!("{}/I", ring.name()))?;
        let quotient = AlgebraMap::check_map(
            (0..ring.nvars()).map(|i| residue.var(i)).collect(),
            ring,
            &residue,
            budget,
        )?;
        Ok(SquareZeroExtension {
            ring: ring.clone(),
            ideal,
            kind,
            quotient,
            base_map,
        })
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealHandle {
        &self.ideal
    }

    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }

    pub fn quotient(&self) -> &AlgebraMap {
        &self.quotient
    }

    /// `C/I`.
    pub fn residue(&self) -> &RingPresentation {
        self.quotient.target()
    }

    pub fn base_map(&self) -> &AlgebraMap {
        &self.base_map
    }
}

/// `Ξ(A, M) = A ⊕ M` with `M·M = 0`, one carrier variable per generator of `M`.
#[derive(Clone, Debug)]
pub struct TrivialExtension {
    pub a: RingPresentation,
    pub m: ModulePresentation,
    pub carrier: RingPresentation,
    /// The ideal of `M`-coordinates.
    pub ideal: IdealHandle,
    pub projection: AlgebraMap,
    pub zero_section: AlgebraMap,
}

impl TrivialExtension {
    /// Positions of the `M`-variables in the carrier.
    pub fn module_vars(&self) -> std::ops::Range<usize> {
        self.a.nvars()..self.carrier.nvars()
    }
}

pub fn trivial_extension(a: &RingPresentation, m: &ModulePresentation, budget: &Budget) -> Result<TrivialExtension> {
    if !m.ring().same_ring(a) {
        return Err(Error::mismatch("module over a different ring"));
    }
    let (n, g) = (a.nvars(), m.free_rank());
    let total = n + g;
    let field = a.field();
    let a_pos: Vec<usize> = (0..n).collect();
    let mvar = |k: usize| Poly::var(field, total, RESIDUE_ORDER, n + k);
    let mut names = a.var_names().to_vec();
    for k in 0..g {
        let mut s = format!("m{k}");
        while names.contains(&s) {
            s.push('\'');
        }
        names.push(s);
    }
    let mut rels: Vec<Poly> = a.relations().iter().map(|r| r.embed(total, &a_pos, RESIDUE_ORDER)).collect();
    for v in m.relations() {
        let mut lin = Poly::zero(field, total, RESIDUE_ORDER);
        for (k, c) in v.components().iter().enumerate() {
            lin = &lin + &(&c.embed(total, &a_pos, RESIDUE_ORDER) * &mvar(k));
        }
        rels.push(lin);
    }
    for i in 0..g {
        for j in i..g {
            rels.push(&mvar(i) * &mvar(j));
        }
    }
    let plain = RingPresentation::new(format!("Xi({})", a.name()), field, names, rels)?;
    let carrier = match a.base() {
        Some(base) => {
            let images = a
                .structure_map()
                .images()
                .iter()
                .map(|f| f.embed(total, &a_pos, RESIDUE_ORDER))
                .collect();
            let mut fiber = a.fiber_vars().to_vec();
            fiber.extend(n..total);
            plain.with_base(base, images, fiber, budget)?
        }
        None => plain,
    };
    let ideal = IdealHandle::of_variables(&carrier, &(n..total).collect::<Vec<_>>(), budget)?;
    let mut proj = (0..n).map(|i| a.var(i)).collect::<Vec<_>>();
    proj.extend((0..g).map(|_| a.zero()));
    let projection = AlgebraMap::check_map(proj, &carrier, a, budget)?;
    let zero_section = AlgebraMap::check_map((0..n).map(|i| carrier.var(i)).collect(), a, &carrier, budget)?;
    Ok(TrivialExtension {
        a: a.clone(),
        m: m.clone(),
        carrier,
        ideal,
        projection,
        zero_section,
    })
}

/// Number of candidates `enumerate_lifts` would inspect.
pub fn candidate_count(alpha: &AlgebraMap, ext: &SquareZeroExtension, budget: &Budget) -> Result<Option<u64>> {
    let dense = DenseAlgebra::new(ext.ring(), budget)?;
    let ideal_basis = ideal_basis(&dense, ext, budget)?;
    let p = ext.ring().characteristic() as u64;
    let exp = (alpha.target().nvars() * ideal_basis.len()) as u32;
    Ok(p.checked_pow(exp))
}

fn ideal_basis(dense: &DenseAlgebra, ext: &SquareZeroExtension, budget: &Budget) -> Result<Vec<Vec<u32>>> {
    let c = ext.ring();
    let mut rows = Vec::new();
    for b in &dense.basis {
        for g in ext.ideal().gens() {
            let prod = &c.monomial(b.clone()) * g;
            rows.push(c.coordinates(&prod, &dense.basis, budget)?);
        }
    }
    let mut mat = Matrix::from_rows(dense.field, dense.dim(), rows);
    let rank = mat.rref().len();
    Ok((0..rank).map(|r| mat.row(r).to_vec()).collect())
}

pub fn enumerate_lifts(
    alpha: &AlgebraMap,
    ext: &SquareZeroExtension,
    theta: &AlgebraMap,
    budget: &Budget,
) -> Result<Vec<AlgebraMap>> {
    enumerate_lifts_with_limit(alpha, ext, theta, ENUMERATION_LIMIT, budget)
}

/// All `R`-algebra maps `ϑ: A → C` with `quotient ∘ ϑ = θ`, sorted by
/// candidate index (coset coordinates, first variable most significant).
pub fn enumerate_lifts_with_limit(
    alpha: &AlgebraMap,
    ext: &SquareZeroExtension,
    theta: &AlgebraMap,
    limit: u64,
    budget: &Budget,
) -> Result<Vec<AlgebraMap>> {
    let a = alpha.target();
    if !theta.source().same_ring(a) {
        return Err(Error::mismatch("θ does not start at the target of α"));
    }
    if !theta.target().same_ring(ext.residue()) {
        return Err(Error::mismatch("θ does not land in C/I"));
    }
    if !alpha.source().same_ring(ext.base_map().source()) {
        return Err(Error::IncompatibleBase("α and the extension have different bases".into()));
    }
    let down = ext.base_map().then(ext.quotient(), budget)?;
    if !alpha.then(theta, budget)?.agrees_with(&down, budget)? {
        return Err(Error::IncompatibleBase("θ ∘ α differs from the base map modulo I".into()));
    }
    let c = ext.ring();
    let field = c.field();
    let dense = DenseAlgebra::new(c, budget)?;
    let iota = ideal_basis(&dense, ext, budget)?;
    let n = a.nvars();
    let slots = n * iota.len();
    let p = field.characteristic() as u64;
    let count = p
        .checked_pow(slots as u32)
        .filter(|&k| k <= limit)
        .ok_or(Error::BudgetExceeded { limit })?;
    let reps: Vec<Vec<u32>> = theta
        .images()
        .iter()
        .map(|f| c.coordinates(f, &dense.basis, budget))
        .collect::<Result<_>>()?;
    let targets: Vec<Vec<u32>> = ext
        .base_map()
        .images()
        .iter()
        .map(|f| c.coordinates(f, &dense.basis, budget))
        .collect::<Result<_>>()?;
    let relations = a.relations();
    let structure = alpha.images();
    let d = dense.dim();
    let values_of = |k: u64| -> Vec<Vec<u32>> {
        let mut digits = vec![0u32; slots];
        let mut rest = k;
        for s in (0..slots).rev() {
            digits[s] = (rest % p) as u32;
            rest /= p;
        }
        (0..n)
            .map(|i| {
                let mut v = reps[i].clone();
                for (l, row) in iota.iter().enumerate() {
                    let coef = digits[i * iota.len() + l];
                    if coef != 0 {
                        for t in 0..d {
                            v[t] = field.add(v[t], field.mul(coef, row[t]));
                        }
                    }
                }
                v
            })
            .collect()
    };
    let accepted: Vec<u64> = (0..count)
        .into_par_iter()
        .filter(|&k| {
            let vals = values_of(k);
            relations.iter().all(|r| dense.eval(r, &vals).iter().all(|&x| x == 0))
                && structure.iter().zip(&targets).all(|(s, t)| dense.eval(s, &vals) == *t)
        })
        .collect();
    accepted
        .into_iter()
        .map(|k| {
            let images = values_of(k).iter().map(|v| dense.to_poly(c, v)).collect();
            AlgebraMap::check_map(images, a, c, budget)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum XiOutcome {
    Pass,
    Fail,
    /// Frobenius is not surjective; reported as a control.
    Control,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct XiReport {
    pub applicable: bool,
    pub lift_count: usize,
    /// Every enumerated lift equals the lift forced by the surjectivity
    /// certificates, evaluated on `θ(x)^p` and the base images.
    pub lifts_match_forced: bool,
    pub outcome: XiOutcome,
}

/// Uniqueness of lifts along a p-infinitesimal extension when the relative
/// Frobenius is surjective: each variable is a polynomial in `x^p` and the
/// base, and `(c + i)^p = c^p` for `i ∈ I`, so a lift is determined by `θ`.
pub fn xi_uniqueness_check(
    alpha: &AlgebraMap,
    ext: &SquareZeroExtension,
    theta: &AlgebraMap,
    budget: &Budget,
) -> Result<XiReport> {
    let lifts = enumerate_lifts(alpha, ext, theta, budget)?;
    let fd = build_frobenius(alpha, 1, budget)?;
    let report = frobenius_surjective(&fd, budget)?;
    if !report.surjective {
        return Ok(XiReport {
            applicable: false,
            lift_count: lifts.len(),
            lifts_match_forced: false,
            outcome: XiOutcome::Control,
        });
    }
    let c = ext.ring();
    let mut values: Vec<Poly> = theta
        .images()
        .iter()
        .map(|f| c.reduce(&c.check_element(f)?.pow(c.characteristic() as u64), budget))
        .collect::<Result<_>>()?;
    values.extend(ext.base_map().images().iter().cloned());
    let forced: Vec<Poly> = report
        .certificates
        .iter()
        .map(|cert| c.substitute(cert.as_ref().expect("surjective"), &values, budget))
        .collect::<Result<_>>()?;
    let mut lifts_match_forced = true;
    for lift in &lifts {
        for (img, f) in lift.images().iter().zip(&forced) {
            if !c.equal(img, f, budget)? {
                lifts_match_forced = false;
            }
        }
    }
    let pass = lifts.len() <= 1 && lifts_match_forced;
    Ok(XiReport {
        applicable: true,
        lift_count: lifts.len(),
        lifts_match_forced,
        outcome: if pass { XiOutcome::Pass } else { XiOutcome::Fail },
    })
}

/// `(#sections of Ξ(A, M) → A over R, p^dim Der_R(A, M))`.
pub fn section_count_vs_derivations(
    alpha: &AlgebraMap,
    m: &ModulePresentation,
    budget: &Budget,
) -> Result<(u64, u64)> {
    let a = alpha.target();
    let xi = trivial_extension(a, m, budget)?;
    let base_map = alpha.then(&xi.zero_section, budget)?;
    let ext = SquareZeroExtension::new(&xi.carrier, xi.ideal.gens(), ExtensionKind::SquareZero, base_map, budget)?;
    let residue = ext.residue();
    let theta = AlgebraMap::check_map((0..a.nvars()).map(|i| residue.var(i)).collect(), a, residue, budget)?;
    let sections = enumerate_lifts(alpha, &ext, &theta, budget)?.len() as u64;
    let dim = derivation_space_dimension(alpha, m, budget)?;
    let p = a.characteristic() as u64;
    let expected = p.checked_pow(dim as u32).ok_or(Error::DegreeOverflow(dim as u64))?;
    Ok((sections, expected))
}

#[cfg(test)]
mod tests;
