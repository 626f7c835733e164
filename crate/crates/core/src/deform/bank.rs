//! A fixed, generated family of extensions for each map, anchored at the
//! rational points of its target.

use super::{
    candidate_count, enumerate_lifts, trivial_extension, ExtensionKind, SquareZeroExtension,
};
use crate::algebra::{AlgebraMap, Dimension, IdealHandle, RingPresentation};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fpmodule::ModulePresentation;
use crate::polycore::{Poly, PrimeField};

/// Entries whose enumeration would exceed this many candidates are skipped.
pub const BANK_CANDIDATE_LIMIT: u64 = 100_000;
const MAX_POINTS: usize = 3;
const MAX_POINT_SEARCH: u64 = 1 << 16;
const MAX_CARRIER_DIM: usize = 64;

#[derive(Clone, Debug)]
pub struct BankEntry {
    pub label: String,
    pub ext: SquareZeroExtension,
    pub theta: AlgebraMap,
}

fn eval_at(f: &Poly, point: &[u32]) -> u32 {
    let field = f.field();
    let mut acc = 0;
    for (m, c) in f.terms() {
        let mut t = *c;
        for (i, &e) in m.exponents().iter().enumerate() {
            t = field.mul(t, field.pow(point[i], e as u64));
        }
        acc = field.add(acc, t);
    }
    acc
}

/// Up to `limit` points of `A` over F_p, lexicographic; empty when the
/// search space is too large.
pub fn rational_points(a: &RingPresentation, limit: usize) -> Vec<Vec<u32>> {
    let p = a.characteristic() as u64;
    let n = a.nvars();
    let total = match p.checked_pow(n as u32) {
        Some(t) if t <= MAX_POINT_SEARCH => t,
        _ => return Vec::new(),
    };
    let mut out = Vec::new();
    for k in 0..total {
        let mut pt = vec![0u32; n];
        let mut rest = k;
        for i in (0..n).rev() {
            pt[i] = (rest % p) as u32;
            rest /= p;
        }
        if a.relations().iter().all(|r| eval_at(r, &pt) == 0) {
            out.push(pt);
            if out.len() == limit {
                break;
            }
        }
    }
    out
}

fn point_label(pt: &[u32]) -> String {
    let parts: Vec<String> = pt.iter().map(u32::to_string).collect();
    format!("({})", parts.join(","))
}

fn truncated(field: PrimeField, name: &str, vars: &[&str], rels: impl Fn(&[Poly]) -> Vec<Poly>) -> RingPresentation {
    let plain = RingPresentation::polynomial_ring(name, field, vars);
    let xs: Vec<Poly> = (0..vars.len()).map(|i| plain.var(i)).collect();
    RingPresentation::new(name, field, vars.iter().map(|s| s.to_string()).collect(), rels(&xs))
        .expect("relations in the ambient")
}

fn not_well_defined<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::NotWellDefined { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

struct Builder<'a> {
    alpha: &'a AlgebraMap,
    budget: &'a Budget,
    entries: Vec<BankEntry>,
}

impl Builder<'_> {
    /// Adds the entry when the base map and θ are well defined, compatible
    /// and the enumeration is small enough.
    fn push(
        &mut self,
        label: String,
        c: &RingPresentation,
        ideal: &[Poly],
        kind: ExtensionKind,
        base_images: Vec<Poly>,
        theta_images: Vec<Poly>,
    ) -> Result<Option<BankEntry>> {
        let budget = self.budget;
        let Some(base_map) = not_well_defined(AlgebraMap::check_map(base_images, self.alpha.source(), c, budget))?
        else {
            return Ok(None);
        };
        let ext = match SquareZeroExtension::new(c, ideal, kind, base_map, budget) {
            Ok(e) => e,
            Err(Error::InvalidDeformation(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let Some(theta) = not_well_defined(AlgebraMap::check_map(
            theta_images.iter().map(|f| f.with_order(crate::algebra::RESIDUE_ORDER)).collect(),
            self.alpha.target(),
            ext.residue(),
            budget,
        ))?
        else {
            return Ok(None);
        };
        let down = ext.base_map().then(ext.quotient(), budget)?;
        if !self.alpha.then(&theta, budget)?.agrees_with(&down, budget)? {
            return Ok(None);
        }
        match candidate_count(self.alpha, &ext, budget)? {
            Some(k) if k <= BANK_CANDIDATE_LIMIT => {}
            _ => return Ok(None),
        }
        let entry = BankEntry { label, ext, theta };
        self.entries.push(entry.clone());
        Ok(Some(entry))
    }
}

/// First nonzero `δ` (lexicographic) with `u ↦ u0 + δ·e` well defined on
/// the base, as images in `c` whose first variable is `e`.
fn tilt(alpha: &AlgebraMap, c: &RingPresentation, u0: &[u32], budget: &Budget) -> Result<Option<Vec<Poly>>> {
    let r = alpha.source();
    let k = r.nvars();
    let p = r.characteristic() as u64;
    let total = match p.checked_pow(k as u32) {
        Some(t) if t <= 4096 => t,
        _ => return Ok(None),
    };
    for idx in 1..total {
        let mut delta = vec![0u32; k];
        let mut rest = idx;
        for j in (0..k).rev() {
            delta[j] = (rest % p) as u32;
            rest /= p;
        }
        let images: Vec<Poly> = (0..k)
            .map(|j| &c.constant(u0[j] as i64) + &c.var(0).scale(delta[j]))
            .collect();
        if not_well_defined(AlgebraMap::check_map(images.clone(), r, c, budget))?.is_some() {
            return Ok(Some(images));
        }
    }
    Ok(None)
}

/// Dual numbers, `F_p[ε]/(ε^p)`, a two-dimensional square-zero ideal and
/// `F_p[ε]/(ε³)` at up to three rational points, plus `Ξ(A, A/𝔪)` and
/// `Ξ(A, A)` for Artinian `A`. Entries over budget are skipped.
pub fn deformation_bank(alpha: &AlgebraMap, budget: &Budget) -> Result<Vec<BankEntry>> {
    let a = alpha.target();
    let field = a.field();
    let p = a.characteristic() as u64;
    let n = a.nvars();
    let mut b = Builder {
        alpha,
        budget,
        entries: Vec::new(),
    };
    let dual = truncated(field, "F_p[e]/(e^2)", &["e"], |x| vec![x[0].pow(2)]);
    let pinf = truncated(field, "F_p[e]/(e^p)", &["e"], |x| vec![x[0].pow(p)]);
    let xi2 = truncated(field, "F_p[e1,e2]/(e1,e2)^2", &["e1", "e2"], |x| {
        vec![x[0].pow(2), &x[0] * &x[1], x[1].pow(2)]
    });
    let cube = truncated(field, "F_p[e]/(e^3)", &["e"], |x| vec![x[0].pow(3)]);
    let artinian = a.fp_dimension(budget)?;
    for pt in rational_points(a, MAX_POINTS) {
        let at = point_label(&pt);
        let u0: Vec<u32> = alpha.images().iter().map(|f| eval_at(f, &pt)).collect();
        let consts = |c: &RingPresentation, vals: &[u32]| -> Vec<Poly> {
            vals.iter().map(|&v| c.constant(v as i64)).collect()
        };
        let e = dual.var(0);
        let mut first_dual = b
            .push(format!("dual@{at}"), &dual, std::slice::from_ref(&e), ExtensionKind::SquareZero, consts(&dual, &u0), consts(&dual, &pt))?;
        let tilted = tilt(alpha, &dual, &u0, budget)?;
        if let Some(images) = &tilted {
            if let Some(entry) = b.push(
                format!("dual-tilted@{at}"),
                &dual,
                std::slice::from_ref(&e),
                ExtensionKind::SquareZero,
                images.clone(),
                consts(&dual, &pt),
            )? {
                first_dual = Some(entry);
            }
        }
        let pe = pinf.var(0);
        b.push(format!("pinf@{at}"), &pinf, std::slice::from_ref(&pe), ExtensionKind::PInfinitesimal, consts(&pinf, &u0), consts(&pinf, &pt))?;
        if let Some(images) = tilt(alpha, &pinf, &u0, budget)? {
            b.push(format!("pinf-tilted@{at}"), &pinf, &[pe], ExtensionKind::PInfinitesimal, images, consts(&pinf, &pt))?;
        }
        let xi2_base: Vec<Poly> = match &tilted {
            // e ↦ e1 keeps the tilt well defined
            Some(images) => images.iter().map(|f| f.embed(2, &[0], f.order())).collect(),
            None => consts(&xi2, &u0),
        };
        b.push(
            format!("xi2@{at}"),
            &xi2,
            &[xi2.var(0), xi2.var(1)],
            ExtensionKind::SquareZero,
            xi2_base,
            consts(&xi2, &pt),
        )?;
        if let Some(entry) = first_dual {
            let lifts = enumerate_lifts(alpha, &entry.ext, &entry.theta, budget)?;
            if let Some(lift) = lifts.first() {
                b.push(
                    format!("cube@{at}"),
                    &cube,
                    &[cube.var(0).pow(2)],
                    ExtensionKind::SquareZero,
                    entry.ext.base_map().images().to_vec(),
                    lift.images().to_vec(),
                )?;
            }
        }
        if let Dimension::Finite(dim) = artinian {
            if dim < MAX_CARRIER_DIM {
                let gens: Vec<Poly> = (0..n).map(|i| &a.var(i) - &a.constant(pt[i] as i64)).collect();
                let m = ModulePresentation::cyclic(&IdealHandle::new(a, &gens, budget)?);
                push_xi(&mut b, format!("Xi(A,A/m)@{at}"), &m)?;
            }
        }
    }
    if let Dimension::Finite(dim) = artinian {
        let fits = p.checked_pow((n * dim) as u32).is_some_and(|k| k <= BANK_CANDIDATE_LIMIT);
        if 2 * dim <= MAX_CARRIER_DIM && fits {
            push_xi(&mut b, "Xi(A,A)".into(), &ModulePresentation::free(a, 1))?;
        }
    }
    Ok(b.entries)
}

fn push_xi(b: &mut Builder<'_>, label: String, m: &ModulePresentation) -> Result<()> {
    let budget = b.budget;
    let a = b.alpha.target();
    let xi = trivial_extension(a, m, budget)?;
    let base = b.alpha.then(&xi.zero_section, budget)?;
    let theta: Vec<Poly> = (0..a.nvars()).map(|i| xi.carrier.var(i)).collect();
    b.push(label, &xi.carrier, xi.ideal.gens(), ExtensionKind::SquareZero, base.images().to_vec(), theta)?;
    Ok(())
}
