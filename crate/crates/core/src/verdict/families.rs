//! Finite stages of the root-tower families. Every check here is about a
//! single stage or a single transition; statements about the colimit are
//! recorded as notes only.

use std::collections::BTreeMap;

use serde_json::json;

use super::report::{CheckOutcome, COLIMIT_LABEL};
use crate::algebra::{ring_map_kernel, AlgebraMap, IdealHandle, RingPresentation, Subalgebra};
use crate::budget::Budget;
use crate::error::Result;
use crate::frobenius::{build_frobenius, frobenius_injective};
use crate::linalg::Matrix;
use crate::polycore::{Poly, PrimeField};

/// Parameters of a family stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `F_3[t^{1/2^N}]` with the ideal generated by the top root.
    DyadicRoot { n: u32 },
    /// `F_p[t^{1/p^N}]` with the ideal generated by the top root.
    PRoot { p: u64, n: u32 },
    /// Stage `i` of the paired-root tower, truncated at root level `N`.
    PairedRoot { p: u64, i: u32, n: u32 },
    /// `F_p(t) ⊂ F_p(t^{1/p^N})` on polynomial models.
    FieldPBasis { p: u64, n: u32 },
}

#[derive(Clone, Debug, Default)]
pub struct FamilyOutcome {
    pub checks: Vec<CheckOutcome>,
    pub witnesses: BTreeMap<String, String>,
    pub notes: Vec<String>,
}

fn line(field: PrimeField, name: &str, var: &str) -> RingPresentation {
    RingPresentation::polynomial_ring(name, field, &[var])
}

pub fn run_family(family: Family, budget: &Budget) -> Result<FamilyOutcome> {
    match family {
        Family::DyadicRoot { n } => dyadic_root(n, budget),
        Family::PRoot { p, n } => p_root(p, n, budget),
        Family::PairedRoot { p, i, n } => paired_root(p, i, n, budget),
        Family::FieldPBasis { p, n } => field_pbasis(p, n, budget),
    }
}

fn dyadic_root(n: u32, budget: &Budget) -> Result<FamilyOutcome> {
    let field = PrimeField::new(3)?;
    let r = line(field, "R", "s");
    let s = r.var(0);
    let a = IdealHandle::new(&r, std::slice::from_ref(&s), budget)?;
    let a3 = a.frobenius_power(1, budget)?;
    let mut out = FamilyOutcome::default();
    out.checks.push(CheckOutcome::new(
        "dim R/a^[3]",
        json!(3),
        json!(a3.colength(budget)?.finite()),
        "R/(s^3) has basis 1, s, s^2",
    ));
    out.checks.push(CheckOutcome::new(
        "dim R/a",
        json!(1),
        json!(a.colength(budget)?.finite()),
        "R/(s) = F_3",
    ));
    let kernel_witness = a3.normal_form(&s, budget)?;
    out.checks.push(CheckOutcome::new(
        "R/a^[3] -> R/a is not injective",
        json!(true),
        json!(a.contains(&s, budget)? && !kernel_witness.is_zero()),
        "s lies in a but not in (s^3)",
    ));
    out.witnesses.insert("kernel".into(), r.format(&kernel_witness));
    let a2 = a.product(&a, budget)?;
    out.checks.push(CheckOutcome::new(
        "a^2 = a",
        json!(false),
        json!(a2.equals(&a, budget)?),
        "s is not a multiple of s^2",
    ));
    let prev = line(field, "R_prev", "s'");
    let level = AlgebraMap::check_map(vec![s.pow(2)], &prev, &r, budget)?;
    let image = level.apply(&prev.var(0), budget)?;
    out.checks.push(CheckOutcome::new(
        "previous root lies in a^2",
        json!(true),
        json!(a2.contains(&image, budget)?),
        "the previous root is s^2",
    ));
    let t = s.pow(1u64 << n);
    out.checks.push(CheckOutcome::new(
        "t lies in a^[3]",
        json!((1u64 << n) >= 3),
        json!(a3.contains(&t, budget)?),
        "t = s^(2^N) and (s^3) contains s^k exactly for k >= 3",
    ));
    let roots: Vec<Vec<u32>> = (0..=n)
        .map(|k| {
            let quotient = a3.quotient_ring("R/a^[3]")?;
            let basis = quotient.fp_basis(budget)?;
            quotient.coordinates(&s.pow(1u64 << (n - k)), &basis, budget)
        })
        .collect::<Result<_>>()?;
    out.checks.push(CheckOutcome::new(
        "rank of the roots t^(1/2^k) in R/a^[3]",
        json!((n + 1).min(2)),
        json!(Matrix::from_rows(field, 3, roots).rank()),
        "the roots are s^(2^(N-k)); only s and s^2 survive modulo s^3",
    ));
    out.notes.push(format!(
        "{COLIMIT_LABEL}: along the tower every generator of a is a square of the next one, so a = a^2 in the limit while R/a^[3] keeps dimension 3 at every stage"
    ));
    Ok(out)
}

/// Degree in `X` of the monic generator of the kernel of
/// `F_p[T, X] -> R`, `T ↦ t`, `X ↦ w`.
fn minimal_degree_over(r: &RingPresentation, t: &Poly, w: &Poly, budget: &Budget) -> Result<Option<u64>> {
    let src = RingPresentation::polynomial_ring("F_p[T,X]", r.field(), &["T", "X"]);
    let phi = AlgebraMap::check_map(vec![t.clone(), w.clone()], &src, r, budget)?;
    let kernel = ring_map_kernel(&phi, budget)?;
    let gb = kernel.groebner(budget)?;
    Ok(gb
        .generators()
        .iter()
        .filter_map(|g| g.terms().iter().map(|(m, _)| m.exponent(1) as u64).max())
        .filter(|&d| d > 0)
        .min())
}

fn p_root(p: u64, n: u32, budget: &Budget) -> Result<FamilyOutcome> {
    let field = PrimeField::new(p)?;
    let r = line(field, "R", "s");
    let s = r.var(0);
    let a = IdealHandle::new(&r, std::slice::from_ref(&s), budget)?;
    let ap = a.frobenius_power(1, budget)?;
    let nf = ap.normal_form(&s, budget)?;
    let mut out = FamilyOutcome::default();
    out.checks.push(CheckOutcome::new(
        "a^[p] != a",
        json!(true),
        json!(!nf.is_zero()),
        "s is not a multiple of s^p",
    ));
    out.witnesses.insert("outside a^[p]".into(), r.format(&nf));
    let q = p.pow(n);
    let degree = minimal_degree_over(&r, &s.pow(q), &s, budget)?;
    out.checks.push(CheckOutcome::new(
        "witness degree over level 0",
        json!(q),
        json!(degree),
        "s is a root of X^(p^N) - t, irreducible over F_p(t) by Eisenstein at t",
    ));
    out.notes.push(format!(
        "{COLIMIT_LABEL}: in the perfection the ideal is its own Frobenius power, while at each finite stage the witness s survives"
    ));
    Ok(out)
}

/// `F_p[y_1, ..., y_{2^i}] / (y_j^{p^N})`.
pub fn paired_root_stage(field: PrimeField, i: u32, n: u32) -> Result<RingPresentation> {
    let k = 1usize << i;
    let names: Vec<String> = (1..=k).map(|j| format!("y{j}")).collect();
    let q = (field.characteristic() as u64).pow(n);
    let rels = (0..k)
        .map(|j| Poly::var(field, k, crate::algebra::RESIDUE_ORDER, j).pow(q))
        .collect();
    RingPresentation::new(format!("A_{i},{n}"), field, names, rels)
}

/// Stage `i` to stage `i + 1`, `y_j ↦ y_{2j-1} y_{2j}`.
pub fn paired_root_transition(field: PrimeField, i: u32, n: u32, budget: &Budget) -> Result<AlgebraMap> {
    let src = paired_root_stage(field, i, n)?;
    let dst = paired_root_stage(field, i + 1, n)?;
    let images = (0..src.nvars()).map(|j| &dst.var(2 * j) * &dst.var(2 * j + 1)).collect();
    AlgebraMap::check_map(images, &src, &dst, budget)
}

/// Level map `A_{i,N-1} -> A_{i,N}`, `y ↦ y^p`.
fn level_map(field: PrimeField, i: u32, n: u32, budget: &Budget) -> Result<AlgebraMap> {
    let src = paired_root_stage(field, i, n - 1)?;
    let dst = paired_root_stage(field, i, n)?;
    let p = field.characteristic() as u64;
    let images = (0..dst.nvars()).map(|j| dst.var(j).pow(p)).collect();
    AlgebraMap::check_map(images, &src, &dst, budget)
}

fn paired_root(p: u64, i: u32, n: u32, budget: &Budget) -> Result<FamilyOutcome> {
    let field = PrimeField::new(p)?;
    let a = paired_root_stage(field, i, n)?;
    let mut out = FamilyOutcome::default();
    let y = a.var(0);
    let r = y.pow(p.pow(n - 1));
    let r_nf = a.reduce(&r, budget)?;
    out.checks.push(CheckOutcome::new(
        "lowest root is nonzero",
        json!(true),
        json!(!r_nf.is_zero()),
        "y^(p^(N-1)) is a standard monomial of the stage",
    ));
    out.checks.push(CheckOutcome::new(
        "lowest root has zero p-th power",
        json!(true),
        json!(a.is_zero(&r.pow(p), budget)?),
        "y^(p^N) is a relation",
    ));
    let fd = build_frobenius(&a.structure_map(), 1, budget)?;
    let inj = frobenius_injective(&fd, budget)?;
    out.checks.push(CheckOutcome::new(
        "Frobenius of the stage is injective",
        json!(false),
        json!(inj.injective),
        "y^(p^(N-1)) is a nonzero element killed by Frobenius",
    ));
    if let Some(g) = inj.kernel.gens().first() {
        out.witnesses.insert("frobenius kernel".into(), g.format_with(fd.b.var_names()));
    }
    // The image of the relative Frobenius is generated by the y_j^p.
    let sub = Subalgebra::new(&a, fd.psi.images(), budget)?;
    let mut interior = true;
    for j in 0..a.nvars() {
        for k in 1..=n {
            interior &= sub.test(&a.var(j).pow(p.pow(k)), budget)?.member;
        }
    }
    out.checks.push(CheckOutcome::new(
        "interior roots lie in the Frobenius image",
        json!(true),
        json!(interior),
        "y_j^(p^k) = (y_j^(p^(k-1)))^p for k >= 1",
    ));
    out.checks.push(CheckOutcome::new(
        "top root lies in the Frobenius image",
        json!(false),
        json!(sub.test(&y, budget)?.member),
        "every element of F_p[y^p] has no linear term in y_1",
    ));
    let theta = match paired_root_transition(field, i, n, budget) {
        Ok(theta) => theta,
        Err(e) if !e.is_budget() => {
            out.checks.push(CheckOutcome::new(
                "transition is well defined",
                json!(true),
                json!(false),
                "(y_{2j-1} y_{2j})^(p^N) = 0 in the next stage",
            ));
            out.witnesses.insert("transition".into(), e.to_string());
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.checks.push(CheckOutcome::new(
        "transition is well defined",
        json!(true),
        json!(true),
        "(y_{2j-1} y_{2j})^(p^N) = 0 in the next stage",
    ));
    out.witnesses.insert(
        "transition".into(),
        theta.images().iter().map(|f| theta.target().format(f)).collect::<Vec<_>>().join(", "),
    );
    if n >= 2 {
        let down = paired_root_transition(field, i, n - 1, budget)?;
        let one = level_map(field, i, n, budget)?.then(&theta, budget)?;
        let other = down.then(&level_map(field, i + 1, n, budget)?, budget)?;
        out.checks.push(CheckOutcome::new(
            "transition commutes with the level maps",
            json!(true),
            json!(one.agrees_with(&other, budget)?),
            "both composites send y_j to (y_{2j-1} y_{2j})^p",
        ));
    }
    out.notes.push(format!(
        "{COLIMIT_LABEL}: the colimit over i and N is perfect, and its Frobenius is not injective on the finite stages shown here"
    ));
    Ok(out)
}

fn field_pbasis(p: u64, n: u32, budget: &Budget) -> Result<FamilyOutcome> {
    let field = PrimeField::new(p)?;
    let k = line(field, "K", "t");
    let l = line(field, "L", "s");
    let s = l.var(0);
    let alpha = AlgebraMap::check_map(vec![s.pow(p.pow(n))], &k, &l, budget)?;
    let fd = build_frobenius(&alpha, 1, budget)?;
    let image = Subalgebra::new(&l, fd.psi.images(), budget)?;
    let target = Subalgebra::new(&l, &[s.pow(p)], budget)?;
    let mut out = FamilyOutcome::default();
    out.checks.push(CheckOutcome::new(
        "s^p lies in the image",
        json!(true),
        json!(image.test(&s.pow(p), budget)?.member),
        "s^p is the image of the copy of s",
    ));
    let mut inside = true;
    for g in fd.psi.images() {
        inside &= target.test(g, budget)?.member;
    }
    out.checks.push(CheckOutcome::new(
        "image lies in F_p[s^p]",
        json!(true),
        json!(inside),
        "the generators map to s^p and s^(p^N)",
    ));
    let missing = image.test(&s, budget)?;
    out.checks.push(CheckOutcome::new(
        "s lies in the image",
        json!(false),
        json!(missing.member),
        "F_p[s^p] has no element of degree 1",
    ));
    out.witnesses.insert("p-basis".into(), "s".into());
    out.notes.push(format!(
        "{COLIMIT_LABEL}: on fraction fields s is a p-basis of L over K, so the relative Frobenius image is L^p(K)"
    ));
    Ok(out)
}
