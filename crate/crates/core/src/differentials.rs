//! Kähler differentials `Ω_{A/R}` as the cokernel of a jacobian, and the
//! dimension of the derivation space `Hom_A(Ω_{A/R}, M)`.

use serde::Serialize;

use crate::algebra::{AlgebraMap, Dimension};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fpmodule::{module_is_zero, ModulePresentation};
use crate::groebner::ModuleVector;
use crate::linalg::Matrix;
use crate::polycore::Poly;

/// Which presentation of `Ω_{A/R}` was built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaForm {
    /// Base variables map to distinct variables of `A`; differentiate only
    /// in the remaining (fiber) variables.
    Fiber,
    /// All variables of `A`, with the differentials of the base images
    /// added as relations.
    General,
}

/// `Ω_{A/R}` with the data it was built from.
#[derive(Clone, Debug)]
pub struct OmegaPresentation {
    pub module: ModulePresentation,
    /// Variable of `A` behind each generator `dx_i`.
    pub rows: Vec<usize>,
    pub form: OmegaForm,
}

impl OmegaPresentation {
    /// Relation columns; entry `i` of column `j` is `∂f_j/∂x_{rows[i]}`.
    pub fn jacobian(&self) -> &[ModuleVector] {
        self.module.relations()
    }
}

fn gradient(alpha: &AlgebraMap, f: &Poly, rows: &[usize], budget: &Budget) -> Result<ModuleVector> {
    let a = alpha.target();
    let comps = rows
        .iter()
        .map(|&i| a.reduce(&f.partial_derivative(i)?, budget))
        .collect::<Result<Vec<_>>>()?;
    ModuleVector::new(comps)
}

/// Fiber-variable presentation, available when the base variables map to
/// distinct variables of the target.
pub fn omega_fiber(alpha: &AlgebraMap, budget: &Budget) -> Result<Option<OmegaPresentation>> {
    let Some(base_pos) = alpha.base_variable_positions() else {
        return Ok(None);
    };
    let a = alpha.target();
    let rows: Vec<usize> = (0..a.nvars()).filter(|i| !base_pos.contains(i)).collect();
    let cols = a
        .relations()
        .iter()
        .map(|f| gradient(alpha, f, &rows, budget))
        .collect::<Result<Vec<_>>>()?;
    let module = ModulePresentation::new(a, rows.len(), cols)?;
    Ok(Some(OmegaPresentation {
        module,
        rows,
        form: OmegaForm::Fiber,
    }))
}

/// Presentation over all variables of `A`, valid for any structure map.
pub fn omega_general(alpha: &AlgebraMap, budget: &Budget) -> Result<OmegaPresentation> {
    let a = alpha.target();
    let rows: Vec<usize> = (0..a.nvars()).collect();
    let mut cols = a
        .relations()
        .iter()
        .map(|f| gradient(alpha, f, &rows, budget))
        .collect::<Result<Vec<_>>>()?;
    for img in alpha.images() {
        cols.push(gradient(alpha, img, &rows, budget)?);
    }
    let module = ModulePresentation::new(a, rows.len(), cols)?;
    Ok(OmegaPresentation {
        module,
        rows,
        form: OmegaForm::General,
    })
}

/// `Ω_{A/R}`, in fiber form when possible.
pub fn omega(alpha: &AlgebraMap, budget: &Budget) -> Result<OmegaPresentation> {
    match omega_fiber(alpha, budget)? {
        Some(o) => Ok(o),
        None => omega_general(alpha, budget),
    }
}

pub fn omega_is_zero(alpha: &AlgebraMap, budget: &Budget) -> Result<bool> {
    module_is_zero(&omega(alpha, budget)?.module, budget)
}

/// `dim_{F_p} Hom_A(Ω_{A/R}, M)` for Artinian `A` and `M`.
pub fn derivation_space_dimension(
    alpha: &AlgebraMap,
    m: &ModulePresentation,
    budget: &Budget,
) -> Result<usize> {
    let a = alpha.target();
    if !m.ring().same_ring(a) {
        return Err(Error::mismatch("module over a different ring"));
    }
    if a.fp_dimension(budget)? == Dimension::Infinite {
        return Err(Error::NotArtinian);
    }
    let om = omega(alpha, budget)?;
    let basis = m.fp_basis(budget)?;
    let d = basis.len();
    let n = om.rows.len();
    let cols = om.jacobian();
    // (m_i) ↦ (Σ_i J_ij m_i)_j from M^n to M^{#cols}
    let mut matrix = Matrix::zeros(a.field(), cols.len() * d, n * d);
    for i in 0..n {
        for (k, _) in basis.iter().enumerate() {
            let mut unit = vec![0u32; d];
            unit[k] = 1;
            let mi = m.element(&unit, &basis);
            for (j, col) in cols.iter().enumerate() {
                let img = m.scale(&mi, &col.components()[i], budget)?;
                let coords = m.coordinates(&img, &basis, budget)?;
                for (r, v) in coords.into_iter().enumerate() {
                    matrix.set(j * d + r, i * d + k, v);
                }
            }
        }
    }
    Ok(n * d - matrix.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{IdealHandle, RingPresentation};
    use crate::polycore::PrimeField;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn b() -> Budget {
        Budget::default().with_verification(true)
    }

    fn over_fp(name: &str, p: u64, vars: &[&str], rels: impl Fn(&RingPresentation) -> Vec<Poly>) -> AlgebraMap {
        let free = RingPresentation::polynomial_ring(name, fp(p), vars);
        let rels = rels(&free);
        free.quotient(name, &rels).unwrap().structure_map()
    }

    /// `F_p[u] → F_p[u, fiber...]/(rels)`, `u ↦ u`.
    fn over_line(p: u64, fiber: &[&str], rels: impl Fn(&RingPresentation) -> Vec<Poly>) -> AlgebraMap {
        let r = RingPresentation::polynomial_ring("R", fp(p), &["u"]);
        let mut vars = vec!["u"];
        vars.extend_from_slice(fiber);
        let free = RingPresentation::polynomial_ring("A", fp(p), &vars);
        let rels = rels(&free);
        let a = free.quotient("A", &rels).unwrap();
        AlgebraMap::check_map(vec![a.var(0)], &r, &a, &b()).unwrap()
    }

    #[test]
    fn omega_examples() {
        let poly = over_fp("A", 2, &["x"], |_| vec![]);
        let om = omega(&poly, &b()).unwrap();
        assert_eq!(om.module.free_rank(), 1);
        assert!(om.jacobian().is_empty());
        assert!(!omega_is_zero(&poly, &b()).unwrap());

        let as_map = over_line(3, &["x"], |a| vec![&(&a.var(1).pow(3) - &a.var(1)) - &a.var(0)]);
        let om = omega(&as_map, &b()).unwrap();
        assert_eq!(om.form, OmegaForm::Fiber);
        assert_eq!(om.jacobian()[0].components(), &[as_map.target().constant(2)]);
        assert!(omega_is_zero(&as_map, &b()).unwrap());

        for p in [2u64, 3, 5] {
            let insep = over_line(p, &["x"], |a| vec![&a.var(1).pow(p) - &a.var(0)]);
            let om = omega(&insep, &b()).unwrap();
            assert!(om.jacobian()[0].is_zero());
            assert!(!omega_is_zero(&insep, &b()).unwrap());
        }
    }

    #[test]
    fn omega_zero_examples() {
        let r = RingPresentation::polynomial_ring("R", fp(3), &["u"]);
        assert!(omega_is_zero(&AlgebraMap::identity(&r), &b()).unwrap());
        let dual = over_fp("D", 2, &["x"], |a| vec![a.var(0).pow(2)]);
        assert!(!omega_is_zero(&dual, &b()).unwrap());
        for p in [2u64, 3] {
            let closed = over_line(p, &[], |a| vec![a.var(0)]);
            let om = omega(&closed, &b()).unwrap();
            assert_eq!(om.module.free_rank(), 0);
            assert!(omega_is_zero(&closed, &b()).unwrap());
        }
    }

    fn residue_field_module(alpha: &AlgebraMap) -> ModulePresentation {
        let a = alpha.target();
        let vars: Vec<usize> = (0..a.nvars()).collect();
        ModulePresentation::cyclic(&IdealHandle::of_variables(a, &vars, &b()).unwrap())
    }

    #[test]
    fn derivation_dimension_examples() {
        let dual = over_fp("D", 2, &["x"], |a| vec![a.var(0).pow(2)]);
        assert_eq!(derivation_space_dimension(&dual, &residue_field_module(&dual), &b()).unwrap(), 1);

        let f3 = RingPresentation::prime_field(fp(3));
        let id = AlgebraMap::identity(&f3);
        let m = ModulePresentation::free(&f3, 1);
        assert_eq!(derivation_space_dimension(&id, &m, &b()).unwrap(), 0);

        let cube = over_fp("C", 3, &["x"], |a| vec![a.var(0).pow(3)]);
        assert_eq!(derivation_space_dimension(&cube, &residue_field_module(&cube), &b()).unwrap(), 1);

        let line = over_fp("L", 3, &["x"], |_| vec![]);
        let m = ModulePresentation::free(line.target(), 1);
        assert_eq!(derivation_space_dimension(&line, &m, &b()), Err(Error::NotArtinian));
    }

    #[test]
    fn fiber_and_general_forms_agree() {
        let cases = vec![
            over_line(3, &["x"], |a| vec![&(&a.var(1).pow(3) - &a.var(1)) - &a.var(0)]),
            over_line(2, &["x"], |a| vec![&a.var(1).pow(2) - &a.var(0).pow(3)]),
            over_line(5, &["x"], |a| vec![&a.var(1).pow(2) - &a.var(0)]),
            over_line(3, &["x"], |a| vec![&a.var(1).pow(3) - &a.var(0), a.var(0).pow(2)]),
            over_line(2, &["x", "y"], |a| vec![&(&a.var(1) * &a.var(2)) - &a.var(0), a.var(1).pow(2)]),
            over_line(3, &[], |a| vec![a.var(0).pow(2)]),
        ];
        for alpha in cases {
            let fiber = omega_fiber(&alpha, &b()).unwrap().unwrap();
            let general = omega_general(&alpha, &b()).unwrap();
            let z1 = module_is_zero(&fiber.module, &b()).unwrap();
            let z2 = module_is_zero(&general.module, &b()).unwrap();
            assert_eq!(z1, z2, "{alpha:?}");
            assert_eq!(
                fiber.module.fp_dimension(&b()).unwrap(),
                general.module.fp_dimension(&b()).unwrap(),
                "{alpha:?}"
            );
        }
    }

    #[test]
    fn unramified_passes_to_quotients() {
        // R -> A unramified implies R -> A/b unramified
        let alpha = over_line(3, &["x"], |a| vec![&(&a.var(1).pow(3) - &a.var(1)) - &a.var(0)]);
        assert!(omega_is_zero(&alpha, &b()).unwrap());
        let a = alpha.target();
        for extra in [a.var(1), &a.var(0) - &a.one(), a.var(1).pow(2)] {
            let q = a.quotient("Q", &[extra]).unwrap();
            let beta = AlgebraMap::check_map(vec![q.var(0)], alpha.source(), &q, &b()).unwrap();
            assert!(omega_is_zero(&beta, &b()).unwrap());
        }
    }
}
