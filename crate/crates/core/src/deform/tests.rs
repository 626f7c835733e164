use proptest::prelude::*;

use super::*;
use crate::differentials::omega_is_zero;
use crate::frobenius::frobenius_iso;
use crate::polycore::PrimeField;

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn b() -> Budget {
    Budget::default().with_verification(true)
}

fn ring(name: &str, p: u64, vars: &[&str], rels: impl Fn(&[Poly]) -> Vec<Poly>) -> RingPresentation {
    let free = RingPresentation::polynomial_ring(name, fp(p), vars);
    let xs: Vec<Poly> = (0..vars.len()).map(|i| free.var(i)).collect();
    RingPresentation::new(name, fp(p), vars.iter().map(|s| s.to_string()).collect(), rels(&xs)).unwrap()
}

fn one(v: &Poly) -> Poly {
    Poly::one(v.field(), v.nvars(), v.order())
}

fn over_fp(a: &RingPresentation) -> AlgebraMap {
    a.structure_map()
}

fn over_line(p: u64, fiber: &[&str], rels: impl Fn(&[Poly]) -> Vec<Poly>) -> AlgebraMap {
    let r = RingPresentation::polynomial_ring("R", fp(p), &["u"]);
    let mut vars = vec!["u"];
    vars.extend_from_slice(fiber);
    let a = ring("A", p, &vars, rels);
    AlgebraMap::check_map(vec![a.var(0)], &r, &a, &b()).unwrap()
}

fn artin_schreier() -> AlgebraMap {
    over_line(3, &["x"], |v| vec![&(&v[1].pow(3) - &v[1]) - &v[0]])
}

fn dual(p: u64) -> RingPresentation {
    ring("D", p, &["e"], |v| vec![v[0].pow(2)])
}

fn ext(c: &RingPresentation, ideal: &[Poly], kind: ExtensionKind, base: &RingPresentation, images: Vec<Poly>) -> SquareZeroExtension {
    let base_map = AlgebraMap::check_map(images, base, c, &b()).unwrap();
    SquareZeroExtension::new(c, ideal, kind, base_map, &b()).unwrap()
}

fn theta(alpha: &AlgebraMap, e: &SquareZeroExtension, images: Vec<Poly>) -> AlgebraMap {
    AlgebraMap::check_map(images, alpha.target(), e.residue(), &b()).unwrap()
}

fn same_ideal(x: &RingPresentation, expected: &[Poly]) -> bool {
    let free = RingPresentation::polynomial_ring("P", x.field(), &x.var_names().iter().map(String::as_str).collect::<Vec<_>>());
    let lhs = IdealHandle::new(&free, x.relations(), &b()).unwrap();
    let rhs = IdealHandle::new(&free, expected, &b()).unwrap();
    lhs.equals(&rhs, &b()).unwrap()
}

#[test]
fn trivial_extension_examples() {
    for p in [2, 3, 5] {
        let f = RingPresentation::prime_field(fp(p));
        let xi = trivial_extension(&f, &ModulePresentation::free(&f, 1), &b()).unwrap();
        let e = xi.carrier.var(0);
        assert!(same_ideal(&xi.carrier, &[e.pow(2)]));
        assert_eq!(xi.carrier.fp_dimension(&b()).unwrap(), Dimension::Finite(2));
    }

    let a = ring("A", 3, &["x"], |v| vec![v[0].pow(3)]);
    let xi = trivial_extension(&a, &ModulePresentation::free(&a, 0), &b()).unwrap();
    assert!(same_ideal(&xi.carrier, a.relations()));
    assert_eq!(xi.carrier.nvars(), a.nvars());

    let a = ring("A", 2, &["x"], |v| vec![v[0].pow(2)]);
    let m = ModulePresentation::cyclic(&IdealHandle::new(&a, &[a.var(0)], &b()).unwrap());
    let xi = trivial_extension(&a, &m, &b()).unwrap();
    let (x, e) = (xi.carrier.var(0), xi.carrier.var(1));
    assert!(same_ideal(&xi.carrier, &[x.pow(2), e.pow(2), &x * &e]));
    assert_eq!(xi.carrier.var_names(), ["x", "m0"]);
}

#[test]
fn trivial_extension_splits() {
    let a = ring("A", 3, &["x", "y"], |v| vec![v[0].pow(2), &v[0] * &v[1], v[1].pow(3)]);
    let m = ModulePresentation::free(&a, 2);
    let xi = trivial_extension(&a, &m, &b()).unwrap();
    let back = xi.zero_section.then(&xi.projection, &b()).unwrap();
    assert!(back.agrees_with(&AlgebraMap::identity(&a), &b()).unwrap());
    assert!(xi.ideal.product(&xi.ideal, &b()).unwrap().is_zero());
    assert_eq!(xi.module_vars(), 2..4);
}

#[test]
fn extension_kind_is_checked() {
    let f3 = RingPresentation::prime_field(fp(3));
    let c = ring("C", 3, &["e"], |v| vec![v[0].pow(3)]);
    let base = AlgebraMap::check_map(vec![], &f3, &c, &b()).unwrap();
    let err = SquareZeroExtension::new(&c, &[c.var(0)], ExtensionKind::SquareZero, base.clone(), &b()).unwrap_err();
    assert!(matches!(err, Error::InvalidDeformation(_)));
    let ok = SquareZeroExtension::new(&c, &[c.var(0)], ExtensionKind::PInfinitesimal, base.clone(), &b()).unwrap();
    assert_eq!(ok.residue().fp_dimension(&b()).unwrap(), Dimension::Finite(1));
    let ok = SquareZeroExtension::new(&c, &[c.var(0).pow(2)], ExtensionKind::SquareZero, base, &b());
    assert!(ok.is_ok());

    let line = RingPresentation::polynomial_ring("L", fp(3), &["e"]);
    let base = AlgebraMap::check_map(vec![], &f3, &line, &b()).unwrap();
    let err = SquareZeroExtension::new(&line, &[], ExtensionKind::SquareZero, base, &b()).unwrap_err();
    assert_eq!(err, Error::NotArtinian);
}

#[test]
fn lift_examples() {
    let f2 = RingPresentation::prime_field(fp(2));
    let d = dual(2);
    let id = AlgebraMap::identity(&f2);
    let e = ext(&d, &[d.var(0)], ExtensionKind::SquareZero, &f2, vec![]);
    let t = theta(&id, &e, vec![]);
    assert_eq!(enumerate_lifts(&id, &e, &t, &b()).unwrap().len(), 1);

    let line = RingPresentation::polynomial_ring("A", fp(2), &["x"]);
    let alpha = over_fp(&line);
    let t = theta(&alpha, &e, vec![e.residue().zero()]);
    let lifts = enumerate_lifts(&alpha, &e, &t, &b()).unwrap();
    assert_eq!(lifts.len(), 2);
    assert!(lifts[0].images()[0].is_zero());
    assert_eq!(lifts[1].images()[0], d.var(0));

    let alpha = artin_schreier();
    let d = dual(3);
    let e = ext(&d, &[d.var(0)], ExtensionKind::SquareZero, alpha.source(), vec![d.zero()]);
    let t = theta(&alpha, &e, vec![e.residue().zero(), e.residue().zero()]);
    let lifts = enumerate_lifts(&alpha, &e, &t, &b()).unwrap();
    assert_eq!(lifts.len(), 1);
    assert!(lifts[0].images().iter().all(Poly::is_zero));
}

#[test]
fn incompatible_base_and_budget() {
    let alpha = artin_schreier();
    let d = dual(3);
    let e = ext(&d, &[d.var(0)], ExtensionKind::SquareZero, alpha.source(), vec![d.one()]);
    let t = theta(&alpha, &e, vec![e.residue().zero(), e.residue().zero()]);
    assert!(matches!(enumerate_lifts(&alpha, &e, &t, &b()), Err(Error::IncompatibleBase(_))));

    let line = RingPresentation::polynomial_ring("A", fp(2), &["x", "y", "z"]);
    let alpha = over_fp(&line);
    let c = ring("C", 2, &["e"], |v| vec![v[0].pow(4)]);
    let f2 = RingPresentation::prime_field(fp(2));
    let e = ext(&c, &[c.var(0).pow(2)], ExtensionKind::SquareZero, &f2, vec![]);
    let t = theta(&alpha, &e, vec![e.residue().zero(); 3]);
    let err = enumerate_lifts_with_limit(&alpha, &e, &t, 32, &b()).unwrap_err();
    assert_eq!(err, Error::BudgetExceeded { limit: 32 });
    assert_eq!(enumerate_lifts(&alpha, &e, &t, &b()).unwrap().len(), 64);
}

#[test]
fn xi_examples() {
    let alpha = artin_schreier();
    let d = dual(3);
    let e = ext(&d, &[d.var(0)], ExtensionKind::SquareZero, alpha.source(), vec![d.zero()]);
    let t = theta(&alpha, &e, vec![e.residue().zero(), e.residue().zero()]);
    let r = xi_uniqueness_check(&alpha, &e, &t, &b()).unwrap();
    assert_eq!((r.lift_count, r.outcome), (1, XiOutcome::Pass));
    assert!(r.lifts_match_forced);

    for p in [2, 3] {
        let immersion = over_line(p, &[], |v| vec![v[0].clone()]);
        let c = ring("C", p, &["e"], |v| vec![v[0].pow(p)]);
        for base in [c.zero(), c.var(0)] {
            let e = ext(&c, &[c.var(0)], ExtensionKind::PInfinitesimal, immersion.source(), vec![base]);
            let t = theta(&immersion, &e, vec![e.residue().zero()]);
            let r = xi_uniqueness_check(&immersion, &e, &t, &b()).unwrap();
            assert!(r.lift_count <= 1);
            assert_eq!(r.outcome, XiOutcome::Pass);
        }
    }

    let line = RingPresentation::polynomial_ring("A", fp(2), &["x"]);
    let alpha = over_fp(&line);
    let d = dual(2);
    let f2 = RingPresentation::prime_field(fp(2));
    let e = ext(&d, &[d.var(0)], ExtensionKind::SquareZero, &f2, vec![]);
    let t = theta(&alpha, &e, vec![e.residue().zero()]);
    let r = xi_uniqueness_check(&alpha, &e, &t, &b()).unwrap();
    assert_eq!((r.applicable, r.lift_count, r.outcome), (false, 2, XiOutcome::Control));
}

#[test]
fn section_examples() {
    let a = ring("A", 2, &["x"], |v| vec![v[0].pow(2)]);
    let m = ModulePresentation::cyclic(&IdealHandle::new(&a, &[a.var(0)], &b()).unwrap());
    assert_eq!(section_count_vs_derivations(&over_fp(&a), &m, &b()).unwrap(), (2, 2));

    let f3 = RingPresentation::prime_field(fp(3));
    let m = ModulePresentation::free(&f3, 1);
    assert_eq!(section_count_vs_derivations(&AlgebraMap::identity(&f3), &m, &b()).unwrap(), (1, 1));

    let a = ring("A", 3, &["x"], |v| vec![v[0].pow(3)]);
    let m = ModulePresentation::cyclic(&IdealHandle::new(&a, &[a.var(0)], &b()).unwrap());
    assert_eq!(section_count_vs_derivations(&over_fp(&a), &m, &b()).unwrap(), (3, 3));
}

#[test]
fn rational_points_of_small_rings() {
    let a = ring("A", 3, &["x"], |v| vec![&v[0].pow(3) - &v[0]]);
    assert_eq!(rational_points(&a, 5), vec![vec![0], vec![1], vec![2]]);
    let a = ring("A", 2, &["x"], |v| vec![&(&v[0].pow(2) + &v[0]) + &one(&v[0])]);
    assert!(rational_points(&a, 5).is_empty());
}

fn bank_maps() -> Vec<AlgebraMap> {
    vec![
        artin_schreier(),
        over_line(2, &[], |v| vec![v[0].clone()]),
        over_fp(&ring("A", 2, &["x"], |_| vec![])),
        over_fp(&ring("A", 2, &["x"], |v| vec![v[0].pow(2)])),
        over_fp(&ring("A", 3, &["x"], |v| vec![&v[0].pow(3) - &v[0]])),
        over_fp(&ring("A", 3, &["x", "y"], |v| vec![v[0].pow(2), v[1].pow(3)])),
        over_line(2, &["x"], |v| vec![&v[1].pow(2) - &v[0].pow(3)]),
        over_line(3, &["x"], |v| vec![&v[1].pow(3) - &v[0]]),
        over_line(5, &["x"], |v| vec![&v[1].pow(2) - &v[0]]),
        over_line(3, &["v"], |v| vec![&(&v[0] * &v[1]) - &one(&v[0])]),
    ]
}

#[test]
fn bank_agrees_with_differentials() {
    for alpha in bank_maps() {
        let bank = deformation_bank(&alpha, &b()).unwrap();
        assert!(!bank.is_empty(), "{alpha:?}");
        let fd = build_frobenius(&alpha, 1, &b()).unwrap();
        let surjective = frobenius_surjective(&fd, &b()).unwrap().surjective;
        let iso = frobenius_iso(&fd, &b()).unwrap();
        let mut witness = false;
        for entry in &bank {
            let n = enumerate_lifts(&alpha, &entry.ext, &entry.theta, &b()).unwrap().len();
            witness |= n >= 2;
            if surjective {
                assert!(n <= 1, "{} on {alpha:?}", entry.label);
            }
            if iso && entry.ext.kind() == ExtensionKind::SquareZero {
                assert_eq!(n, 1, "{} on {alpha:?}", entry.label);
            }
        }
        assert_eq!(witness, !omega_is_zero(&alpha, &b()).unwrap(), "{alpha:?}");
    }
}

#[test]
fn bank_is_deterministic() {
    let alpha = over_line(2, &["x"], |v| vec![&v[1].pow(2) - &v[0].pow(3)]);
    let labels = |bank: Vec<BankEntry>| bank.into_iter().map(|e| e.label).collect::<Vec<_>>();
    let first = labels(deformation_bank(&alpha, &b()).unwrap());
    assert_eq!(first, labels(deformation_bank(&alpha, &b()).unwrap()));
    assert!(first.iter().any(|l| l.starts_with("pinf")));
    assert!(first.iter().any(|l| l.starts_with("cube")));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sections_match_derivations(
        p in prop::sample::select(vec![2u64, 3]),
        ex in 1u32..4,
        ey in 1u32..3,
        mixed in any::<bool>(),
        free in any::<bool>(),
    ) {
        let a = ring("A", p, &["x", "y"], |v| {
            let mut rels = vec![v[0].pow(ex as u64 + 1), v[1].pow(ey as u64 + 1)];
            if mixed {
                rels.push(&v[0] * &v[1]);
            }
            rels
        });
        let m = if free {
            ModulePresentation::free(&a, 1)
        } else {
            ModulePresentation::cyclic(&IdealHandle::new(&a, &[a.var(0), a.var(1)], &b()).unwrap())
        };
        let alpha = over_fp(&a);
        let dim = match a.fp_dimension(&b()).unwrap() { Dimension::Finite(d) => d, _ => unreachable!() };
        let m_dim = if free { dim } else { 1 };
        prop_assume!((p as f64).powi((2 * m_dim) as i32) <= 1e5);
        let (sections, expected) = section_count_vs_derivations(&alpha, &m, &b()).unwrap();
        prop_assert_eq!(sections, expected);
    }

    #[test]
    fn lifts_differ_by_derivations(p in prop::sample::select(vec![2u64, 3, 5]), k in 1u32..4) {
        // A = F_p[x]/(x^k) at the origin: lifts are x ↦ cε, and (cε)^k = 0
        // for every c when k ≥ 2 while k = 1 forces c = 0
        let a = ring("A", p, &["x"], |v| vec![v[0].pow(k as u64)]);
        let alpha = over_fp(&a);
        let d = dual(p);
        let f = RingPresentation::prime_field(fp(p));
        let e = ext(&d, &[d.var(0)], ExtensionKind::SquareZero, &f, vec![]);
        let t = theta(&alpha, &e, vec![e.residue().zero()]);
        let n = enumerate_lifts(&alpha, &e, &t, &b()).unwrap().len() as u64;
        prop_assert_eq!(n, if k >= 2 { p } else { 1 });
    }
}
