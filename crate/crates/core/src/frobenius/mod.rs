//! The e-th relative Frobenius `A ⊗_R F^e_*R → F^e_*A` as presented-ring
//! data, with surjectivity, injectivity and isomorphism tests.

mod flatness;

use serde::Serialize;

use crate::algebra::{ring_map_kernel, AlgebraMap, IdealHandle, RingPresentation, Subalgebra, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::polycore::{Monomial, Poly};

pub use flatness::{
    is_module_finite, module_finite_presentation, module_is_flat, restricted_flatness, Flatness, FlatnessLimits,
};

/// `B = A ⊗_R F^e_*R` with variables `z` (copy of `A`) then `r′` (copy of
/// `R`), and `psi: B → A`, `z_i ↦ z_i^q`, `r′_j ↦ φ_j`.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub e: u32,
    pub q: u64,
    pub alpha: AlgebraMap,
    pub b: RingPresentation,
    pub psi: AlgebraMap,
}

fn primed(names: &[String], taken: &[String]) -> Vec<String> {
    let mut used = taken.to_vec();
    names
        .iter()
        .map(|n| {
            let mut s = format!("{n}'");
            while used.contains(&s) {
                s.push('\'');
            }
            used.push(s.clone());
            s
        })
        .collect()
}

pub fn build_frobenius(alpha: &AlgebraMap, e: u32, budget: &Budget) -> Result<FrobeniusData> {
    if e == 0 {
        return Err(Error::mismatch("Frobenius iterate needs e >= 1"));
    }
    let (r, a) = (alpha.source(), alpha.target());
    let p = a.characteristic() as u64;
    let q = p.checked_pow(e).ok_or(Error::DegreeOverflow(e as u64))?;
    let (na, nr) = (a.nvars(), r.nvars());
    let n = na + nr;
    let z_pos: Vec<usize> = (0..na).collect();
    let r_pos: Vec<usize> = (na..n).collect();
    let mut rels: Vec<Poly> = a.relations().iter().map(|g| g.embed(n, &z_pos, RESIDUE_ORDER)).collect();
    rels.extend(r.relations().iter().map(|g| g.embed(n, &r_pos, RESIDUE_ORDER)));
    for (j, phi) in alpha.images().iter().enumerate() {
        let rj = Poly::var(a.field(), n, RESIDUE_ORDER, na + j);
        rels.push(&phi.embed(n, &z_pos, RESIDUE_ORDER) - &rj.pow_p(e)?);
    }
    let mut vars = a.var_names().to_vec();
    vars.extend(primed(r.var_names(), a.var_names()));
    let plain = RingPresentation::new(format!("{}_F{e}", a.name()), a.field(), vars, rels)?;
    let r_copy = r.renamed(format!("F{e}*{}", r.name()));
    let b = plain.with_base(&r_copy, r_pos.iter().map(|&i| plain.var(i)).collect(), z_pos, budget)?;
    let mut images: Vec<Poly> = (0..na).map(|i| a.var(i).pow_p(e)).collect::<Result<_>>()?;
    images.extend(alpha.images().iter().cloned());
    let psi = AlgebraMap::check_map(images, &b, a, budget)?;
    Ok(FrobeniusData {
        e,
        q,
        alpha: alpha.clone(),
        b,
        psi,
    })
}

/// Surjectivity verdict with one certificate per variable of `A`. A
/// certificate is a polynomial in the images of `psi` (in variable order).
#[derive(Clone, Debug)]
pub struct SurjectivityReport {
    pub surjective: bool,
    pub certificates: Vec<Option<Poly>>,
}

impl SurjectivityReport {
    /// First variable of `A` outside the image.
    pub fn missing(&self) -> Option<usize> {
        self.certificates.iter().position(Option::is_none)
    }
}

fn image_subalgebra(fd: &FrobeniusData, budget: &Budget) -> Result<Subalgebra> {
    Subalgebra::new(fd.psi.target(), fd.psi.images(), budget)
}

/// Is `A = α(R)[A^q]`? Decided on the ring generators of `A`.
pub fn frobenius_surjective(fd: &FrobeniusData, budget: &Budget) -> Result<SurjectivityReport> {
    let a = fd.psi.target();
    let sub = image_subalgebra(fd, budget)?;
    let mut certificates = Vec::with_capacity(a.nvars());
    for i in 0..a.nvars() {
        let t = sub.test(&a.var(i), budget)?;
        certificates.push(t.certificate);
    }
    Ok(SurjectivityReport {
        surjective: certificates.iter().all(Option::is_some),
        certificates,
    })
}

/// Surjectivity decided on the module generators `z^v`, `0 ≤ v_i < q`.
pub fn frobenius_surjective_on_box(fd: &FrobeniusData, budget: &Budget) -> Result<bool> {
    let a = fd.psi.target();
    let sub = image_subalgebra(fd, budget)?;
    for m in fstar_module_generators(fd) {
        if !sub.test(&a.monomial(m), budget)?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Substituting each certificate into the images of `psi` gives back the
/// corresponding variable of `A`.
pub fn replay_certificates(fd: &FrobeniusData, report: &SurjectivityReport, budget: &Budget) -> Result<bool> {
    let a = fd.psi.target();
    for (i, cert) in report.certificates.iter().enumerate() {
        if let Some(c) = cert {
            let v = a.substitute(c, fd.psi.images(), budget)?;
            if !a.equal(&v, &a.var(i), budget)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct InjectivityReport {
    pub injective: bool,
    pub kernel: IdealHandle,
}

pub fn frobenius_injective(fd: &FrobeniusData, budget: &Budget) -> Result<InjectivityReport> {
    let kernel = ring_map_kernel(&fd.psi, budget)?;
    Ok(InjectivityReport {
        injective: kernel.is_zero(),
        kernel,
    })
}

pub fn frobenius_iso(fd: &FrobeniusData, budget: &Budget) -> Result<bool> {
    Ok(frobenius_surjective(fd, budget)?.surjective && frobenius_injective(fd, budget)?.injective)
}

/// `z^v` for `0 ≤ v_i < q`, in odometer order (first variable fastest).
/// Generates `F^e_*A` as a module over `B`; not pruned.
pub fn fstar_module_generators(fd: &FrobeniusData) -> Vec<Monomial> {
    let n = fd.psi.target().nvars();
    let q = fd.q as u32;
    let mut out = Vec::new();
    let mut ex = vec![0u32; n];
    loop {
        out.push(Monomial::from_exponents(ex.clone()));
        let mut k = 0;
        loop {
            if k == n {
                return out;
            }
            ex[k] += 1;
            if ex[k] < q {
                break;
            }
            ex[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterateRow {
    pub e: u32,
    pub surjective: bool,
    pub injective: bool,
    pub iso: bool,
    /// Flatness of `F^e_*A` over `B`, restricted route.
    pub fstar_flatness: Flatness,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IterateReport {
    pub rows: Vec<IterateRow>,
    /// The iso verdict does not depend on `e`.
    pub coherent: bool,
}

pub fn iterate_consistency(alpha: &AlgebraMap, e_max: u32, budget: &Budget) -> Result<IterateReport> {
    let mut rows = Vec::new();
    for e in 1..=e_max {
        let fd = build_frobenius(alpha, e, budget)?;
        let surjective = frobenius_surjective(&fd, budget)?.surjective;
        let injective = frobenius_injective(&fd, budget)?.injective;
        let fstar_flatness = restricted_flatness(&fd.psi, &FlatnessLimits::default(), budget)?;
        rows.push(IterateRow {
            e,
            surjective,
            injective,
            iso: surjective && injective,
            fstar_flatness,
        });
    }
    let coherent = rows.windows(2).all(|w| w[0].iso == w[1].iso);
    Ok(IterateReport { rows, coherent })
}

/// Dense oracle for Artinian `A`: dimension of the image of `psi`, by
/// closing the span of `1` under multiplication with the images.
pub fn dense_image_dimension(fd: &FrobeniusData, budget: &Budget) -> Result<(usize, usize)> {
    let a = fd.psi.target();
    let basis = a.fp_basis(budget)?;
    let d = basis.len();
    let mut span: Vec<Vec<u32>> = Vec::new();
    let mut frontier = vec![a.one()];
    let rank_of = |rows: &Vec<Vec<u32>>| Matrix::from_rows(a.field(), d, rows.clone()).rank();
    while let Some(f) = frontier.pop() {
        let coords = a.coordinates(&f, &basis, budget)?;
        let mut trial = span.clone();
        trial.push(coords);
        if rank_of(&trial) == span.len() {
            continue;
        }
        span = trial;
        for g in fd.psi.images() {
            frontier.push(a.reduce(&(&f * g), budget)?);
        }
    }
    Ok((span.len(), d))
}
