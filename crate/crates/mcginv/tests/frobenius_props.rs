use cyclo::CycScalar;
use linmap::{LinMap, SpaceShape};
use mcginv::bimod::braiding;
use mcginv::examples::{automorphism_from_group_aut, double_sweedler, drinfeld_double_cyclic};
use mcginv::frobenius::FrobeniusF;
use mcginv::ribbon::RibbonData;
use proptest::prelude::*;

fn z(k: usize) -> RibbonData {
    drinfeld_double_cyclic(k).unwrap().ribbon().unwrap()
}

/// `C(a⊗b) = λ(S(e_b) e_a)` written out from the cointegral.
fn copairing_oracle(rd: &RibbonData) -> Vec<CycScalar> {
    let h = &rd.base;
    let n = h.n;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            out.push(rd.eval_lambda(&h.mul(&h.antipode(&h.basis(b)), &h.basis(a))));
        }
    }
    out
}

#[test]
fn copairing_matches_closed_form() {
    for rd in [z(2), z(3), double_sweedler().unwrap().ribbon().unwrap()] {
        let f = FrobeniusF::build(&rd, None).unwrap();
        let c = &f.delta * &f.eta;
        assert_eq!(c.column(0), copairing_oracle(&rd), "{}", rd.base.name);
    }
}

#[test]
fn frobenius_structure_verifies_on_cyclic_doubles() {
    for rd in [z(2), z(3)] {
        let f = FrobeniusF::build(&rd, None).unwrap();
        let rep = f.verify(&rd);
        assert!(rep.passed(), "{}", rep.summary());
    }
}

#[test]
fn special_scalar_is_the_product_of_the_copairing() {
    // m(C)(y) = λ(S(y1) y2) must be a multiple of ε, and that multiple is the
    // specialness scalar.
    for rd in [z(2), z(3)] {
        let h = &rd.base;
        let n = h.n;
        let w: Vec<CycScalar> = (0..n)
            .map(|y| {
                let mut acc = CycScalar::zero(1);
                for (a, b, c) in h.cop_basis(y) {
                    acc += &(c * &rd.eval_lambda(&h.mul(&h.antipode(&h.basis(*a)), &h.basis(*b))));
                }
                acc
            })
            .collect();
        let eps = LinMap::vector(h.h(), (0..n).map(|i| h.eps.get(0, i)).collect());
        let c = LinMap::vector(h.h(), w).ratio_to(&eps).expect("m(C) proportional to the unit");
        let f = FrobeniusF::build(&rd, None).unwrap();
        assert_eq!(f.special_scalar(), Some(c.clone()));
        assert!(!c.is_zero());
    }
}

#[test]
fn unit_then_counit_is_the_counit_of_the_integral() {
    let rd = z(2);
    let f = FrobeniusF::build(&rd, None).unwrap();
    let v = (&f.eps * &f.eta).as_scalar().unwrap();
    assert_eq!(v, CycScalar::int(2));
    assert_eq!(v, rd.base.counit(&rd.big_lambda));
}

#[test]
fn product_absorbs_the_monodromy() {
    for rd in [z(2), z(3)] {
        let f = FrobeniusF::build(&rd, None).unwrap();
        let c = braiding(&rd, &f.bimod, &f.bimod, false).unwrap();
        let ci = braiding(&rd, &f.bimod, &f.bimod, true).unwrap();
        assert_eq!(&f.m * &(&c * &c), f.m);
        assert_eq!(&f.m * &ci, f.m);
        assert_eq!(&c * &ci, LinMap::identity(f.bimod.shape.pow(2)));
    }
}

#[test]
fn form_is_plainly_symmetric_when_the_pivot_is_trivial() {
    for rd in [z(2), z(3)] {
        assert!(rd.t == rd.base.one());
        let g = FrobeniusF::build(&rd, None).unwrap().form();
        assert_eq!(g, g.transpose());
    }
}

#[test]
fn inversion_twisted_coregular_verifies() {
    let rd = z(3);
    let w = automorphism_from_group_aut(3, 2).unwrap();
    let fw = FrobeniusF::build(&rd, Some(&w)).unwrap();
    let rep = fw.verify(&rd);
    assert!(rep.passed(), "{}", rep.summary());
    let f = FrobeniusF::build(&rd, None).unwrap();
    assert_eq!(fw.m, f.m);
    assert_eq!(fw.bimod.left, f.bimod.left);
    assert_ne!(fw.bimod.right, f.bimod.right);
}

#[test]
fn identity_automorphism_changes_nothing() {
    let rd = z(2);
    let w = automorphism_from_group_aut(2, 1).unwrap();
    assert_eq!(w, LinMap::id(4));
    let fw = FrobeniusF::build(&rd, Some(&w)).unwrap();
    assert_eq!(fw.bimod.right, FrobeniusF::build(&rd, None).unwrap().bimod.right);
}

#[test]
fn non_automorphism_is_rejected() {
    let rd = z(3);
    let mut rows = LinMap::id(9).to_rows();
    rows.swap(0, 1);
    let w = LinMap::from_rows(SpaceShape::flat(9), SpaceShape::flat(9), rows);
    assert!(FrobeniusF::build(&rd, Some(&w)).is_err());
}

fn small() -> impl Strategy<Value = Vec<CycScalar>> {
    prop::collection::vec((-3i64..4).prop_map(CycScalar::int), 9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn frobenius_relation_on_vectors(x in small(), y in small()) {
        let rd = z(3);
        let f = FrobeniusF::build(&rd, None).unwrap();
        let sh = f.bimod.shape.clone();
        let xy = LinMap::vector(sh.pow(2), mcginv::hopf::tensor(&x, &y));
        let id = LinMap::identity(sh);
        let lhs = &(&f.delta * &f.m) * &xy;
        let rhs = &(&f.m.kron(&id) * &id.kron(&f.delta)) * &xy;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn form_is_nondegenerate_on_nonzero_vectors(x in small()) {
        prop_assume!(x.iter().any(|c| !c.is_zero()));
        let rd = z(3);
        let g = FrobeniusF::build(&rd, None).unwrap().form();
        prop_assert!(g.apply_vec(&x).iter().any(|c| !c.is_zero()));
    }
}
