use super::{AlgebraMap, Base, IdealHandle, RingPresentation, RESIDUE_ORDER};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::groebner::{eliminate, groebner_basis, GroebnerBasis};
use crate::polycore::{MonomialOrder, Poly};

/// `A ⊗_R C` with its two coprojections. Its declared base is `C`.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub ring: RingPresentation,
    pub left: AlgebraMap,
    pub right: AlgebraMap,
}

fn fresh_names(taken: &[String], wanted: &[String]) -> Vec<String> {
    let mut used: Vec<String> = taken.to_vec();
    wanted
        .iter()
        .map(|w| {
            let mut name = w.clone();
            while used.contains(&name) {
                name.push('\'');
            }
            used.push(name.clone());
            name
        })
        .collect()
}

/// Tensor product of `alpha: R -> A` and `beta: R -> C` over `R`.
pub fn tensor_over_base(alpha: &AlgebraMap, beta: &AlgebraMap) -> Result<TensorProduct> {
    if !alpha.source().same_ring(beta.source()) {
        return Err(Error::IncompatibleBase(format!(
            "`{}` and `{}` have different sources",
            alpha.target().name(),
            beta.target().name()
        )));
    }
    let (a, c) = (alpha.target(), beta.target());
    let (na, nc) = (a.nvars(), c.nvars());
    let n = na + nc;
    let left_pos: Vec<usize> = (0..na).collect();
    let right_pos: Vec<usize> = (na..n).collect();
    let mut relations: Vec<Poly> = Vec::new();
    relations.extend(a.relations().iter().map(|r| r.embed(n, &left_pos, RESIDUE_ORDER)));
    relations.extend(c.relations().iter().map(|r| r.embed(n, &right_pos, RESIDUE_ORDER)));
    for (ia, ic) in alpha.images().iter().zip(beta.images()) {
        let glue = &ia.embed(n, &left_pos, RESIDUE_ORDER) - &ic.embed(n, &right_pos, RESIDUE_ORDER);
        if !glue.is_zero() {
            relations.push(glue);
        }
    }
    let mut vars = a.var_names().to_vec();
    vars.extend(fresh_names(a.var_names(), c.var_names()));
    let name = format!("{}(x){}", a.name(), c.name());
    let plain = RingPresentation::new(name.clone(), a.field(), vars.clone(), relations.clone())?;
    let right_images: Vec<Poly> = (na..n).map(|i| plain.var(i)).collect();
    let ring = RingPresentation::assemble(
        name,
        a.field(),
        vars,
        plain.relations().to_vec(),
        Some(Base {
            ring: c.clone(),
            images: right_images.clone(),
        }),
        left_pos.clone(),
    );
    let left = AlgebraMap::new_unchecked(a.clone(), ring.clone(), left_pos.iter().map(|&i| ring.var(i)).collect());
    let right = AlgebraMap::new_unchecked(c.clone(), ring.clone(), right_images);
    Ok(TensorProduct { ring, left, right })
}

/// Kernel of `phi: B -> A` as an ideal of `B`.
pub fn ring_map_kernel(phi: &AlgebraMap, budget: &Budget) -> Result<IdealHandle> {
    let (b, a) = (phi.source(), phi.target());
    let (na, nb) = (a.nvars(), b.nvars());
    let n = na + nb;
    let a_pos: Vec<usize> = (0..na).collect();
    let b_pos: Vec<usize> = (na..n).collect();
    let mut gens: Vec<Poly> = a
        .relations()
        .iter()
        .map(|r| r.embed(n, &a_pos, RESIDUE_ORDER))
        .collect();
    for (j, img) in phi.images().iter().enumerate() {
        let bj = Poly::var(a.field(), n, RESIDUE_ORDER, na + j);
        gens.push(&bj - &img.embed(n, &a_pos, RESIDUE_ORDER));
    }
    let elim = eliminate(a.field(), n, &gens, &a_pos, budget)?;
    let kernel: Vec<Poly> = elim
        .iter()
        .map(|g| g.restrict(&b_pos, RESIDUE_ORDER).expect("eliminated variables are absent"))
        .collect();
    IdealHandle::new(b, &kernel, budget)
}

/// Outcome of a subalgebra membership test. The certificate is a polynomial
/// in one variable per generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubalgebraTest {
    pub member: bool,
    pub certificate: Option<Poly>,
}

/// The F_p-subalgebra of a presented ring generated by given elements,
/// prepared for repeated membership queries.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    target: RingPresentation,
    ngens: usize,
    gb: GroebnerBasis,
}

impl Subalgebra {
    pub fn new(target: &RingPresentation, gens: &[Poly], budget: &Budget) -> Result<Self> {
        let n = target.nvars();
        let m = gens.len();
        let total = n + m;
        let order = MonomialOrder::Block { split: n };
        let keep: Vec<usize> = (0..n).collect();
        let mut ideal: Vec<Poly> = target
            .relations()
            .iter()
            .map(|r| r.embed(total, &keep, order))
            .collect();
        for (l, g) in gens.iter().enumerate() {
            let g = target.check_element(g)?;
            let w = Poly::var(target.field(), total, order, n + l);
            ideal.push(&w - &g.embed(total, &keep, order));
        }
        let gb = groebner_basis(target.field(), total, &ideal, order, budget)?;
        Ok(Subalgebra {
            target: target.clone(),
            ngens: m,
            gb,
        })
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    pub fn test(&self, probe: &Poly, budget: &Budget) -> Result<SubalgebraTest> {
        let n = self.target.nvars();
        let total = n + self.ngens;
        let keep: Vec<usize> = (0..n).collect();
        let probe = self.target.check_element(probe)?;
        let lifted = probe.embed(total, &keep, self.gb.order());
        let nf = self.gb.normal_form(&lifted, budget)?;
        let w_pos: Vec<usize> = (n..total).collect();
        match nf.restrict(&w_pos, RESIDUE_ORDER) {
            Some(cert) => Ok(SubalgebraTest {
                member: true,
                certificate: Some(cert),
            }),
            None => Ok(SubalgebraTest {
                member: false,
                certificate: None,
            }),
        }
    }
}

/// Is `probe` in the subalgebra of `target` generated by `gens`?
pub fn subalgebra_membership(
    target: &RingPresentation,
    gens: &[Poly],
    probe: &Poly,
    budget: &Budget,
) -> Result<SubalgebraTest> {
    Subalgebra::new(target, gens, budget)?.test(probe, budget)
}
