//! Exact arithmetic for sparse multivariate polynomials over a prime field.

mod field;
mod monomial;
mod order;
mod poly;

pub use field::PrimeField;
pub use monomial::Monomial;
pub use order::MonomialOrder;
pub use poly::Poly;

#[cfg(test)]
mod properties {
    use std::cmp::Ordering;

    use proptest::prelude::*;

    use super::*;

    const NVARS: usize = 3;

    fn field() -> impl Strategy<Value = PrimeField> {
        prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| PrimeField::new(p).unwrap())
    }

    fn mono() -> impl Strategy<Value = Monomial> {
        prop::collection::vec(0u32..4, NVARS).prop_map(Monomial::from_exponents)
    }

    fn poly_in(f: PrimeField, order: MonomialOrder) -> impl Strategy<Value = Poly> {
        prop::collection::vec((mono(), -10i64..10), 0..5)
            .prop_map(move |t| Poly::from_terms(f, NVARS, order, t))
    }

    fn order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::Grevlex),
            Just(MonomialOrder::Lex),
            (0usize..=NVARS).prop_map(|split| MonomialOrder::Block { split }),
        ]
    }

    fn triple() -> impl Strategy<Value = (Poly, Poly, Poly)> {
        (field(), order()).prop_flat_map(|(f, o)| (poly_in(f, o), poly_in(f, o), poly_in(f, o)))
    }

    proptest! {
        #[test]
        fn ring_axioms((a, b, c) in triple()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn frobenius_is_termwise((a, _, _) in triple(), e in 1u32..3) {
            let q = a.field().characteristic() as u64;
            let q = q.pow(e);
            let termwise = Poly::from_terms(
                a.field(),
                NVARS,
                a.order(),
                a.terms().iter().map(|(m, c)| (m.checked_pow(q).unwrap(), *c as i64)),
            );
            prop_assert_eq!(a.pow_p(e).unwrap(), termwise.clone());
            if q <= 9 {
                prop_assert_eq!(a.pow(q), termwise);
            }
        }

        #[test]
        fn leibniz((a, b, _) in triple(), i in 0usize..NVARS) {
            let lhs = (&a * &b).partial_derivative(i).unwrap();
            let rhs = &(&a * &b.partial_derivative(i).unwrap()) + &(&b * &a.partial_derivative(i).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn orders_are_monomial_orders(o in order(), u in mono(), v in mono(), w in mono()) {
            let one = Monomial::one(NVARS);
            prop_assert_ne!(o.cmp(&one, &u), Ordering::Greater);
            let uv = o.cmp(&u, &v);
            prop_assert_eq!(o.cmp(&u.mul(&w), &v.mul(&w)), uv);
            prop_assert_eq!(o.cmp(&v, &u), uv.reverse());
            if uv == Ordering::Equal {
                prop_assert_eq!(&u, &v);
            }
        }

        #[test]
        fn reorder_round_trip((a, _, _) in triple(), o in order()) {
            let back = a.with_order(o).with_order(a.order());
            prop_assert_eq!(back, a);
        }
    }
}
