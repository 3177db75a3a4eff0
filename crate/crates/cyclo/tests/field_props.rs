use cyclo::{sqrt_in_cyclotomic, CycScalar, Rat};
use proptest::prelude::*;

fn scalar(order: u32) -> impl Strategy<Value = CycScalar> {
    let phi = cyclo::euler_phi(order);
    prop::collection::vec((-20i64..20, 1i64..6), phi)
        .prop_map(move |v| CycScalar::from_coeffs(order, v.into_iter().map(|(n, d)| Rat::new(n, d)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms_q_zeta12(a in scalar(12), b in scalar(12), c in scalar(12)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn division_inverts_multiplication(a in scalar(8), b in scalar(8)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(&(&a / &b) * &b, a);
    }

    #[test]
    fn lift_is_a_ring_homomorphism(a in scalar(6), b in scalar(6)) {
        let la = a.lift(24).unwrap();
        let lb = b.lift(24).unwrap();
        prop_assert_eq!((&a * &b).lift(24).unwrap(), &la * &lb);
        prop_assert_eq!((&a + &b).lift(24).unwrap(), &la + &lb);
        prop_assert_eq!(la.project(6).unwrap().unwrap(), a);
    }

    #[test]
    fn sqrt_of_a_square_squares_back(a in scalar(5)) {
        prop_assume!(!a.is_zero());
        let sq = &a * &a;
        let s = sqrt_in_cyclotomic(&sq, 5).unwrap();
        prop_assert_eq!(&s * &s, sq);
    }

    #[test]
    fn sqrt_of_rationals(n in -60i64..60, d in 1i64..30) {
        prop_assume!(n != 0);
        let r = CycScalar::rat(n, d);
        let s = sqrt_in_cyclotomic(&r, (8 * n.abs() * d) as u32).unwrap();
        prop_assert_eq!(&s * &s, r);
    }
}
