use proptest::prelude::*;
use umbral::operator::{leibniz_check, normal_form, op_from_normal_form, pincherle_derivative};
use umbral::{NormalForm, OperatorMatrix, Polynomial, Rational, Scalar, TruncatedSeries};

fn small() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=4).prop_map(|(n, d)| Rational::ratio(n, d))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    small().prop_filter("nonzero", |r| !r.is_zero())
}

/// Generators `c1 t + c2 t^2 + c3 t^3` with `c1 != 0`.
fn generator(order: usize) -> impl Strategy<Value = TruncatedSeries<Rational>> {
    (nonzero(), small(), small()).prop_map(move |(a, b, c)| TruncatedSeries::generator(&[a, b, c], order))
}

fn sparse_nf(max: usize) -> impl Strategy<Value = NormalForm<Rational>> {
    prop::collection::vec((0..=max, 0..=max, small()), 1..5).prop_map(NormalForm::from_entries)
}

fn poly3() -> impl Strategy<Value = Polynomial<Rational>> {
    prop::collection::vec(small(), 1..5).prop_map(Polynomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn compose_is_associative(f in generator(7), g in generator(7), h in generator(7)) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_round_trip(f in generator(9)) {
        let g = f.comp_inverse().unwrap();
        prop_assert_eq!(f.compose(&g).unwrap(), TruncatedSeries::var(9));
        prop_assert_eq!(g.compose(&f).unwrap(), TruncatedSeries::var(9));
    }

    #[test]
    fn pow_scalar_is_additive(f in generator(7), a in small(), b in small()) {
        let u = &TruncatedSeries::one(7) + &f;
        let lhs = &u.pow_scalar(&a).unwrap() * &u.pow_scalar(&b).unwrap();
        prop_assert_eq!(lhs, u.pow_scalar(&(a + b)).unwrap());
    }

    #[test]
    fn pincherle_is_a_derivation(a in sparse_nf(2), b in sparse_nf(2)) {
        let (u, v) = (op_from_normal_form(&a, 14), op_from_normal_form(&b, 14));
        let lhs = pincherle_derivative(&u.compose(&v).unwrap()).unwrap();
        let rhs = pincherle_derivative(&u).unwrap().compose(&v).unwrap()
            .add(&u.compose(&pincherle_derivative(&v).unwrap()).unwrap());
        let agreement = lhs.compare(&rhs);
        prop_assert!(agreement.holds(), "{:?}", agreement);
        prop_assert!(agreement.window >= 8);
    }

    #[test]
    fn transform_is_an_involution(a in sparse_nf(4)) {
        prop_assert_eq!(a.l_transform().l_transform(), a);
    }

    #[test]
    fn transform_reverses_products(a in sparse_nf(2), b in sparse_nf(2)) {
        let op = |nf: &NormalForm<Rational>| op_from_normal_form(nf, 12);
        let ab = normal_form(&op(&a).compose(&op(&b)).unwrap(), 4).unwrap();
        let ba = normal_form(&op(&b.l_transform()).compose(&op(&a.l_transform())).unwrap(), 4).unwrap();
        let lhs: Vec<_> = ab.l_transform().entries().map(|(j, k, c)| (j, k, c.clone())).collect();
        let rhs: Vec<_> = ba.entries().map(|(j, k, c)| (j, k, c.clone())).collect();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form_round_trip(a in sparse_nf(3)) {
        let u = op_from_normal_form(&a, 10);
        let back = op_from_normal_form(&normal_form(&u, 10).unwrap(), 10);
        prop_assert!(back.compare(&u).holds());
        let entries: Vec<_> = normal_form(&u, 3).unwrap().entries().map(|(j, k, c)| (j, k, c.clone())).collect();
        let orig: Vec<_> = a.entries().map(|(j, k, c)| (j, k, c.clone())).collect();
        prop_assert_eq!(entries, orig);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn leibniz_rule(a in sparse_nf(3), p in poly3()) {
        let u: OperatorMatrix<Rational> = op_from_normal_form(&a, 12);
        let agreement = leibniz_check(&u, &p).unwrap();
        prop_assert!(agreement.holds(), "{:?}", agreement);
    }
}
