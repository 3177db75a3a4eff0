use cyclo::CycScalar;
use linmap::{LinMap, SpaceShape};
use mcginv::bimod::{braiding, dual, duality_morphisms, hom_space, tensor, twist, Side};
use mcginv::examples::{automorphism_from_group_aut, double_sweedler, drinfeld_double_cyclic};
use mcginv::mcg::*;
use mcginv::McgError;
use rand::{Rng, SeedableRng};

fn ctx(k: usize) -> McgContext {
    McgContext::new(drinfeld_double_cyclic(k).unwrap().ribbon().unwrap(), None).unwrap()
}

fn random_map(cod: SpaceShape, dom: SpaceShape, seed: u64) -> LinMap {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    LinMap::from_fn(cod, dom, |_, _| {
        if rng.gen_bool(0.3) {
            CycScalar::int(rng.gen_range(-3..4))
        } else {
            CycScalar::zero(1)
        }
    })
}

#[test]
fn chain_pictures_agree() {
    let h4 = McgContext::new(double_sweedler().unwrap().ribbon().unwrap(), None).unwrap();
    for c in [ctx(2), ctx(3), h4] {
        let [a, b, p, q] = c.cor11_paths();
        assert_eq!(a, b, "{}", c.rd.base.name);
        assert_eq!(a, p, "{}", c.rd.base.name);
        assert_eq!(a, q, "{}", c.rd.base.name);
    }
}

#[test]
fn construction_paths_agree() {
    let c = ctx(2);
    let idf = LinMap::identity(c.f.bimod.shape.clone());
    // Corr_{1,1,1} from Corr_{1,1,0} by the unit property
    let c110 = c.corr(1, 1, 0);
    let c111 = c.corr(1, 1, 1);
    let via_unit = &c.f.m * &c110.kron(&idf);
    assert_eq!(c111, via_unit.reshape(c111.cod().clone(), c111.dom().clone()).unwrap());
    for g in 1..=3 {
        assert_eq!(c.corr_g11(g), c.corr_g11_product(g), "g = {g}");
    }
    // Corr_{g,p,q} from the product form and multiple (co)products
    for (g, p, q) in [(1, 2, 1), (2, 1, 2), (1, 3, 0)] {
        let idk = LinMap::identity(c.k.bimod.shape.pow(g));
        let alt = &(&c.f.multi_coproduct(p) * &c.corr_g11_product(g)) * &idk.kron(&c.f.multi_product(q));
        let corr = c.corr(g, p, q);
        assert_eq!(corr, alt.reshape(corr.cod().clone(), corr.dom().clone()).unwrap(), "({g},{p},{q})");
    }
}

#[test]
fn genus_zero_correlators() {
    let c = ctx(2);
    let c00 = c.cor(0, 0);
    assert_eq!(c00.as_scalar(), Some(CycScalar::int(2)));
    let c02 = c.cor(0, 2);
    let want = &c.f.delta * &c.f.eta;
    assert_eq!(c02, want.reshape(c02.cod().clone(), c02.dom().clone()).unwrap());
    let (rep, res) = invariance_suite(&c, 0, 3, &SuiteOptions::default());
    assert!(rep.passed(), "{}", rep.summary());
    assert_eq!(res.len(), 2 + 3);
}

#[test]
fn cor10_is_nonzero() {
    for c in [ctx(2), ctx(3)] {
        let cor = c.cor(1, 0);
        assert!(!cor.is_zero(), "{}", c.rd.base.name);
        assert_eq!((cor.rows(), cor.cols()), (1, c.k.dim()));
    }
}

#[test]
fn invariance_on_small_cases() {
    let c = ctx(2);
    for (g, n) in [(1, 1), (2, 2)] {
        let (rep, res) = invariance_suite(&c, g, n, &SuiteOptions::default());
        assert!(rep.passed(), "{}", rep.summary());
        assert!(res.iter().all(|r| r.status == "pass" && r.deviation == "0"));
    }
    let (_, res) = invariance_suite(&c, 2, 2, &SuiteOptions::default());
    let labels: Vec<_> = res.iter().map(|r| r.label.as_str()).collect();
    for want in ["a_2", "e_2", "t_1,1", "t_1,2", "ω_1"] {
        assert!(labels.contains(&want), "{want} missing");
    }
}

#[test]
fn factored_equals_dense_at_genus_one() {
    for c in [ctx(2), ctx(3)] {
        for n in 0..=2 {
            let objs = vec![c.f.bimod.clone(); n];
            let cod = c.f.bimod.shape.pow(n);
            let targets = [c.cor(1, n), random_map(cod, c.k.bimod.shape.clone(), n as u64)];
            for gen in generators(1, n) {
                let a = c.action(gen, 1, &objs).unwrap();
                for f in &targets {
                    assert_eq!(a.apply(f).unwrap(), a.apply_dense(f).unwrap(), "{} on {}", gen.label(), c.rd.base.name);
                }
            }
        }
    }
}

#[test]
fn inverse_actions_compose_to_identity() {
    let c = ctx(2);
    let (g, n) = (2, 2);
    let objs = vec![c.f.bimod.clone(); n];
    let f = random_map(c.f.bimod.shape.pow(n), c.k.bimod.shape.pow(g), 7);
    for gen in generators(g, n) {
        let Ok(inv) = c.inverse_action(gen, g, &objs) else {
            continue;
        };
        let a = c.action(gen, g, &objs).unwrap();
        assert_eq!(inv.apply(&a.apply(&f).unwrap()).unwrap(), f, "{}", gen.label());
        assert_eq!(a.apply(&inv.apply(&f).unwrap()).unwrap(), f, "{}", gen.label());
    }
}

#[test]
fn braid_twice_is_the_monodromy() {
    let c = ctx(3);
    let objs = vec![c.f.bimod.clone(); 2];
    let f = random_map(c.f.bimod.shape.pow(2), c.k.bimod.shape.clone(), 3);
    let a = c.action(Generator::Braid(1), 1, &objs).unwrap();
    let twice = a.apply(&a.apply(&f).unwrap()).unwrap();
    let cc = braiding(&c.rd, &c.f.bimod, &c.f.bimod, false).unwrap();
    assert_eq!(twice, &(&cc * &cc) * &f);
}

#[test]
fn boundary_twist_acts_trivially() {
    let c = ctx(2);
    let objs = vec![c.f.bimod.clone(); 2];
    let f = random_map(c.f.bimod.shape.pow(2), c.k.bimod.shape.clone(), 11);
    for i in 1..=2 {
        let a = c.action(Generator::BoundaryTwist(i), 1, &objs).unwrap();
        assert_eq!(a.apply(&f).unwrap(), f);
    }
}

/// `t_{1,1}` at `g = 1`, `n = 2`, composed densely: with `Y = F` and
/// `M = 𝔔_{^∨Y} ∘ (T_K ⊗ θ_{^∨Y})`,
/// `t(f) = (id_X ⊗ d̃_Y ⊗ id_Y) ∘ (((f ⊗ id_{^∨Y}) ∘ M) ⊗ id_Y) ∘ (id_K ⊗ b̃_Y)`.
fn t11_oracle(c: &McgContext, f: &LinMap) -> LinMap {
    let rd = &c.rd;
    let y = &c.f.bimod;
    let ly = dual(rd, y, Side::Left);
    let dy = y.dim();
    let idk = LinMap::identity(c.k.bimod.shape.clone());
    let idx = LinMap::id(dy);
    let idy = LinMap::id(dy);
    let idly = LinMap::id(dy);
    let m = &c.k.qb(rd, &ly) * &c.k.t.kron(&twist(rd, &ly));
    let m = m.reshape(SpaceShape::flat(c.k.dim() * dy), SpaceShape::flat(c.k.dim() * dy)).unwrap();
    let fk = f.reshape(SpaceShape::flat(dy * dy), SpaceShape::flat(c.k.dim())).unwrap();
    let core = &fk.kron(&idly) * &m;
    let (_, _, bt, dt) = duality_morphisms(y);
    let out = &(&idx.kron(&dt).kron(&idy) * &core.kron(&idy)) * &idk.kron(&bt);
    out.reshape(f.cod().clone(), f.dom().clone()).unwrap()
}

#[test]
fn t11_matches_dense_oracle() {
    let c = ctx(2);
    let objs = vec![c.f.bimod.clone(); 2];
    let a = c.action(Generator::T(1, 1), 1, &objs).unwrap();
    for seed in 0..3 {
        let f = random_map(c.f.bimod.shape.pow(2), c.k.bimod.shape.clone(), seed);
        assert_eq!(a.apply(&f).unwrap(), t11_oracle(&c, &f));
    }
    let cor = c.cor(1, 2);
    assert_eq!(t11_oracle(&c, &cor), cor);
}

#[test]
fn non_invariant_intertwiner_is_caught() {
    let c = ctx(2);
    let cor = c.cor(1, 1);
    let basis = hom_space(&c.k.bimod, &c.f.bimod).unwrap();
    assert!(basis.len() > 1);
    let objs = vec![c.f.bimod.clone()];
    let mut caught = 0;
    for b in &basis {
        let b = b.reshape(cor.cod().clone(), cor.dom().clone()).unwrap();
        if b.ratio_to(&cor).is_some() {
            continue;
        }
        let moved = generators(1, 1).into_iter().any(|gen| c.action(gen, 1, &objs).unwrap().apply(&b).unwrap() != b);
        caught += moved as usize;
    }
    assert!(caught > 0);
}

#[test]
fn out_of_range_indices_are_rejected() {
    let c = ctx(2);
    let objs = vec![c.f.bimod.clone(); 2];
    for gen in [Generator::Braid(2), Generator::BoundaryTwist(3), Generator::S(2), Generator::A(1), Generator::T(2, 1)] {
        assert!(matches!(c.action(gen, 1, &objs), Err(McgError::IndexOutOfRange(_))), "{}", gen.label());
    }
}

#[test]
fn actions_are_linear() {
    let c = ctx(2);
    let objs = vec![c.f.bimod.clone(); 2];
    let (cod, dom) = (c.f.bimod.shape.pow(2), c.k.bimod.shape.pow(2));
    let f = random_map(cod.clone(), dom.clone(), 21);
    let g = random_map(cod, dom, 22);
    let (a, b) = (CycScalar::int(3), CycScalar::int(-2));
    let comb = f.scale(&a).try_add(&g.scale(&b)).unwrap();
    for gen in generators(2, 2) {
        let act = c.action(gen, 2, &objs).unwrap();
        let lhs = act.apply(&comb).unwrap();
        let rhs = act.apply(&f).unwrap().scale(&a).try_add(&act.apply(&g).unwrap().scale(&b)).unwrap();
        assert_eq!(lhs, rhs, "{}", gen.label());
    }
}

#[test]
fn pq_transport_round_trip_and_invariance() {
    let c = ctx(2);
    let c111 = c.corr(1, 1, 1);
    let t = c.pq_transport(&c111, 1, 1, 1).unwrap();
    assert_eq!(c.pq_transport_inverse(&t, 1, 1, 1).unwrap(), c111);
    let objs = c.pq_objects(1, 1);
    let ffd = tensor(&c.rd.base, &objs[0], &objs[1]).unwrap();
    assert!(c.k.bimod.is_intertwiner(&ffd, &t));
    // S_1 directly on the domain leg of K versus through φ
    let idf = LinMap::identity(c.f.bimod.shape.clone());
    let direct = &c111 * &c.k.s.kron(&idf);
    let direct = direct.reshape(c111.cod().clone(), c111.dom().clone()).unwrap();
    let transported = c.pq_apply(Generator::S(1), &c111, 1, 1, 1).unwrap();
    assert_eq!(direct, transported);
    assert_eq!(direct, c111);
    for (g, p, q) in [(1, 1, 1), (1, 2, 1), (2, 1, 1)] {
        let (rep, _) = pq_invariance_suite(&c, g, p, q, &SuiteOptions::default());
        assert!(rep.passed(), "{}", rep.summary());
    }
}

#[test]
fn flipped_normalization_keeps_invariance() {
    let rd = drinfeld_double_cyclic(2).unwrap().ribbon().unwrap();
    let flipped = McgContext::new(rd.with_flipped_sign(), None).unwrap();
    let plain = ctx(2);
    for (g, n) in [(1, 1), (2, 1)] {
        let (rep, _) = invariance_suite(&flipped, g, n, &SuiteOptions::default());
        assert!(rep.passed(), "{}", rep.summary());
        let r = flipped.cor(g, n).ratio_to(&plain.cor(g, n)).unwrap();
        assert!(r == CycScalar::int(1) || r == CycScalar::int(-1), "({g},{n}): {r:?}");
    }
}

#[test]
fn twisted_correlators_by_inversion() {
    let rd = drinfeld_double_cyclic(3).unwrap().ribbon().unwrap();
    let w = automorphism_from_group_aut(3, 2).unwrap();
    let winv = linmap::inverse(&w).unwrap();
    let plain = McgContext::new(rd.clone(), None).unwrap();
    let twisted = McgContext::new(rd, Some(&w)).unwrap();
    for (g, n) in [(1, 0), (1, 1), (2, 1)] {
        let want = McgContext::twisted_from_plain(&plain, &winv, g, n).unwrap();
        assert_eq!(twisted.cor(g, n), want, "({g},{n})");
        let (rep, _) = invariance_suite(&twisted, g, n, &SuiteOptions::default());
        assert!(rep.passed(), "{}", rep.summary());
    }
    assert_ne!(twisted.cor(1, 1), plain.cor(1, 1));
}

#[test]
fn sampling_is_seeded() {
    let c = ctx(2);
    let opts = SuiteOptions { budget: 1, seed: 5, samples: 1 };
    let (rep, a) = invariance_suite(&c, 2, 2, &opts);
    let (_, b) = invariance_suite(&c, 2, 2, &opts);
    assert!(rep.passed(), "{}", rep.summary());
    let la: Vec<_> = a.iter().map(|r| r.label.clone()).collect();
    let lb: Vec<_> = b.iter().map(|r| r.label.clone()).collect();
    assert_eq!(la, lb);
    assert!(la.len() < generators(2, 2).len());
}
