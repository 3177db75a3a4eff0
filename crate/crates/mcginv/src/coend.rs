//! The handle Hopf algebra `K = H* ⊗ H*` in `H`-bimodules and its explicit
//! operators. Elements are functionals `κ(a⊗b)` on `H⊗H`, stored on one flat
//! leg of dimension `n²` with coordinate `a·n + b`.
//!
//! ```text
//! (h·κ)(a⊗b) = κ(S(h1) a h2 ⊗ b)      (κ·h)(a⊗b) = κ(a ⊗ h2 b S^-1(h1))
//! T_K κ      = κ(v · ⊗ · v^-1)
//! S_K(α⊗β)   = α(Q'1) λ(S(Q'2) ·) ⊗ β(Q1) λ(· S^-1(Q2))
//! 𝒬(κ⊗κ')    = κ(·Q'1 ⊗ Q1·) ⊗ κ'(S(Q'2)· ⊗ ·S^-1(Q2))
//! 𝔔_Y(κ⊗y)   = κ(·Q'1 ⊗ Q1·) ⊗ Q'2 y Q2
//! ρ^K_Y      = (ε_K ⊗ id)∘𝔔_Y,  i.e. α⊗β⊗y ↦ f_{Q'}(α) y f_Q(β)
//! ε_K(κ)     = κ(1⊗1)
//! ```
//!
//! The dinatural family is `ι_X(ξ⊗x)(a⊗b) = ξ(a x b)`; the coaction on `X`
//! is `x ↦ Σ e_i ⊗ ι(e^i⊗x)`.

use cyclo::CycScalar;
use linmap::{inverse, LinMap, SpaceShape};

use crate::bimod::{tensor, Bimodule};
use crate::hopf::HopfData;
use crate::report::Report;
use crate::ribbon::RibbonData;
use crate::McgError;

#[derive(Clone, Debug)]
pub struct HandleK {
    pub bimod: Bimodule,
    pub t: LinMap,
    pub t_inv: LinMap,
    pub s: LinMap,
    pub s_inv: LinMap,
    pub eps: LinMap,
}

/// `κ ↦ κ∘(f⊗g)` on `(H⊗H)*`.
fn pullback(f: &LinMap, g: &LinMap) -> LinMap {
    let n = f.rows();
    f.transpose().kron(&g.transpose()).reshape(SpaceShape::flat(n * n), SpaceShape::flat(n * n)).unwrap()
}

/// `Σ_pq z_pq F(p) ⊗ G(q)`.
fn sum2(n: usize, z: &[CycScalar], f: impl Fn(usize) -> LinMap, g: impl Fn(usize) -> LinMap) -> LinMap {
    let mut acc: Option<LinMap> = None;
    for (pq, c) in z.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = f(pq / n).kron(&g(pq % n)).scale(c);
        acc = Some(match acc {
            None => term,
            Some(a) => a.try_add(&term).unwrap(),
        });
    }
    acc.expect("nonzero two-leg element")
}

fn coad_left(h: &HopfData, c: usize) -> LinMap {
    let mut m = LinMap::zero(h.h(), h.h());
    for (b, d, k) in h.cop_basis(c) {
        let term = (&h.lmul(&h.antipode(&h.basis(*b))) * &h.rmul(&h.basis(*d))).scale(k);
        m = m.try_add(&term).unwrap();
    }
    m
}

fn coad_right(h: &HopfData, c: usize) -> LinMap {
    let mut m = LinMap::zero(h.h(), h.h());
    for (b, d, k) in h.cop_basis(c) {
        let term = (&h.lmul(&h.basis(*d)) * &h.rmul(&h.antipode_inv(&h.basis(*b)))).scale(k);
        m = m.try_add(&term).unwrap();
    }
    m
}

/// The bimodule `K` alone.
pub fn handle_bimodule(h: &HopfData) -> Bimodule {
    let n = h.n;
    let id = LinMap::identity(h.h());
    let left = (0..n).map(|c| pullback(&coad_left(h, c), &id)).collect();
    let right = (0..n).map(|c| pullback(&id, &coad_right(h, c))).collect();
    Bimodule { name: "K".into(), n, shape: SpaceShape::flat(n * n), left, right }
}

fn flat_sq(f: LinMap, d: usize) -> LinMap {
    f.reshape(SpaceShape::flat(d), SpaceShape::flat(d)).unwrap()
}

impl HandleK {
    pub fn build(rd: &RibbonData) -> Result<HandleK, McgError> {
        rd.require_factorizable()?;
        let h = &rd.base;
        let n = h.n;
        let bimod = handle_bimodule(h);
        let t = pullback(&h.lmul(&rd.v), &h.rmul(&rd.vinv));
        let t_inv = pullback(&h.lmul(&rd.vinv), &h.rmul(&rd.v));
        // α ↦ α(Q'1) λ(S(Q'2) ·) and β ↦ β(Q1) λ(· S^-1(Q2))
        let lam_l: Vec<Vec<CycScalar>> =
            (0..n).map(|q| (&rd.lambda_map() * &h.lmul(&h.antipode(&h.basis(q)))).to_rows().remove(0)).collect();
        let lam_r: Vec<Vec<CycScalar>> =
            (0..n).map(|s| (&rd.lambda_map() * &h.rmul(&h.antipode_inv(&h.basis(s)))).to_rows().remove(0)).collect();
        let half = |z: &[CycScalar], lam: &[Vec<CycScalar>]| {
            LinMap::from_fn(h.h(), h.h(), |a, p| {
                let mut acc = CycScalar::zero(1);
                for q in 0..n {
                    let c = &z[p * n + q];
                    if !c.is_zero() {
                        acc += &(c * &lam[q][a]);
                    }
                }
                acc
            })
        };
        let a = half(&rd.qinv, &lam_l);
        let b = half(&rd.q, &lam_r);
        let s = flat_sq(a.kron(&b), n * n);
        let s_inv = inverse(&s).map_err(|_| McgError::Singular("S_K".into()))?;
        let one = h.one();
        let eps = LinMap::covector(SpaceShape::flat(n * n), crate::hopf::tensor(&one, &one));
        Ok(HandleK { bimod, t, t_inv, s, s_inv, eps })
    }

    pub fn dim(&self) -> usize {
        self.bimod.dim()
    }

    /// `𝒬: K⊗K -> K⊗K`.
    pub fn qq(&self, rd: &RibbonData) -> LinMap {
        let h = &rd.base;
        let n = h.n;
        let id = LinMap::identity(h.h());
        let a = sum2(
            n,
            &rd.qinv,
            |p| pullback(&h.rmul(&h.basis(p)), &id),
            |q| pullback(&h.lmul(&h.antipode(&h.basis(q))), &id),
        );
        let b = sum2(
            n,
            &rd.q,
            |r| pullback(&id, &h.lmul(&h.basis(r))),
            |s| pullback(&id, &h.rmul(&h.antipode_inv(&h.basis(s)))),
        );
        let d = self.dim() * self.dim();
        let kk = SpaceShape::flat(self.dim()).pow(2);
        (&flat_sq(a, d) * &flat_sq(b, d)).reshape(kk.clone(), kk).unwrap()
    }

    /// Partial monodromy `𝔔_Y: K⊗Y -> K⊗Y`.
    pub fn qb(&self, rd: &RibbonData, y: &Bimodule) -> LinMap {
        let h = &rd.base;
        let n = h.n;
        let id = LinMap::identity(h.h());
        let a = sum2(n, &rd.qinv, |p| pullback(&h.rmul(&h.basis(p)), &id), |q| y.left[q].clone());
        let b = sum2(n, &rd.q, |r| pullback(&id, &h.lmul(&h.basis(r))), |s| y.right[s].clone());
        let d = self.dim() * y.dim();
        let shape = SpaceShape::flat(self.dim()).concat(&y.shape);
        (&flat_sq(a, d) * &flat_sq(b, d)).reshape(shape.clone(), shape).unwrap()
    }

    /// `ρ^K_Y: K⊗Y -> Y` from the Drinfeld maps.
    pub fn rho(&self, rd: &RibbonData, y: &Bimodule) -> LinMap {
        let n = rd.n();
        let dy = y.dim();
        let lefts: Vec<LinMap> = (0..n).map(|a| y.act_left(&rd.f_qinv.column(a))).collect();
        let rights: Vec<LinMap> = (0..n).map(|b| y.act_right(&rd.f_q.column(b))).collect();
        let mut t = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let m = &lefts[a] * &rights[b];
                for (i, j, x) in m.triplets() {
                    t.push((i, (a * n + b) * dy + j, x.clone()));
                }
            }
        }
        LinMap::from_triplets(y.shape.clone(), SpaceShape::flat(n * n).concat(&y.shape), t)
    }

    /// Coaction `X -> X⊗K`, `x ↦ Σ e_i ⊗ (a⊗b ↦ e^i(a x b))`.
    pub fn coaction(&self, rd: &RibbonData, x: &Bimodule) -> LinMap {
        let n = rd.n();
        let nn = n * n;
        let mut t = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let m = &x.left[a] * &x.right[b];
                for (i, j, c) in m.triplets() {
                    t.push((i * nn + a * n + b, j, c.clone()));
                }
            }
        }
        LinMap::from_triplets(x.shape.concat(&SpaceShape::flat(nn)), x.shape.clone(), t)
    }

    /// Hopf pairing `ω(κ, κ') = κ'((f_{Q'} ⊗ f_Q) κ)` as a covector on `K⊗K`.
    pub fn pairing(&self, rd: &RibbonData) -> LinMap {
        let n = rd.n();
        let nn = n * n;
        let f = rd.f_qinv.kron(&rd.f_q);
        let mut t = Vec::new();
        for k in 0..nn {
            for (i, c) in f.col(k) {
                t.push((0, k * nn + i, c.clone()));
            }
        }
        LinMap::from_triplets(SpaceShape::scalar(), SpaceShape::flat(nn).pow(2), t)
    }

    /// Scalars `(c1, c2)` with `(S T)^3 = c1 S^2` and `S^2 T = c2 T S^2`.
    pub fn sl2z_scalars(&self) -> (Option<CycScalar>, Option<CycScalar>) {
        let st = &self.s * &self.t;
        let s2 = &self.s * &self.s;
        let c1 = (&(&st * &st) * &st).ratio_to(&s2);
        let c2 = (&s2 * &self.t).ratio_to(&(&self.t * &s2));
        (c1, c2)
    }

    /// Bimodule axioms, invertibility, intertwiner properties and the
    /// relations tying the operators together.
    pub fn verify(&self, rd: &RibbonData) -> Report {
        let h = &rd.base;
        let mut rep = Report::new("handle algebra K");
        rep.merge("bimodule", crate::bimod::verify_bimodule(h, &self.bimod));
        let id = LinMap::identity(self.bimod.shape.clone());
        let k = &self.bimod;
        rep.eq("S_K S_K^-1 = id", &(&self.s * &self.s_inv), &id);
        rep.eq("S_K^-1 S_K = id", &(&self.s_inv * &self.s), &id);
        rep.eq("T_K T_K^-1 = id", &(&self.t * &self.t_inv), &id);
        rep.flag("T_K intertwines", k.is_intertwiner(k, &self.t), None);
        rep.flag("S_K intertwines", k.is_intertwiner(k, &self.s), None);
        let kk = tensor(h, k, k).unwrap();
        let qq = self.qq(rd);
        rep.flag("𝒬 intertwines", kk.is_intertwiner(&kk, &qq), None);
        // S_K = (ε_K ⊗ id)∘𝒬∘(id ⊗ Λ_K) with Λ_K = λ⊗λ
        let lam_k = LinMap::vector(k.shape.clone(), crate::hopf::tensor(&rd.lambda, &rd.lambda));
        let via_qq = &(&self.eps.kron(&id) * &qq) * &id.kron(&lam_k);
        rep.eq("S_K from 𝒬, counit and integral", &via_qq, &self.s);
        let (c1, c2) = self.sl2z_scalars();
        rep.flag("(S T)^3 proportional to S^2", c1.is_some(), c1.map(|c| c.to_string()));
        rep.flag("S^2 T proportional to T S^2", c2.is_some(), c2.map(|c| c.to_string()));
        rep
    }

    /// Checks on `𝔔_Y`, `ρ^K_Y` and the coaction for one bimodule `Y`.
    pub fn verify_on(&self, rd: &RibbonData, y: &Bimodule) -> Report {
        let h = &rd.base;
        let mut rep = Report::new(format!("K acting on {}", y.name));
        let ky = tensor(h, &self.bimod, y).unwrap();
        let qb = self.qb(rd, y);
        let rho = self.rho(rd, y);
        let idy = LinMap::identity(y.shape.clone());
        rep.flag("𝔔 intertwines", ky.is_intertwiner(&ky, &qb), None);
        rep.flag("ρ^K intertwines", ky.is_intertwiner(y, &rho), None);
        rep.eq("ρ^K = (ε_K ⊗ id)∘𝔔", &(&self.eps.kron(&idy) * &qb), &rho);
        let counit: Vec<CycScalar> = (0..h.n).map(|i| h.eps.get(0, i)).collect();
        let unit_k = LinMap::vector(self.bimod.shape.clone(), crate::hopf::tensor(&counit, &counit));
        rep.eq("ρ^K(ε⊗ε ⊗ -) = id", &(&rho * &unit_k.kron(&idy)), &idy);
        let delta = self.coaction(rd, y);
        let yk = tensor(h, y, &self.bimod).unwrap();
        rep.flag("coaction intertwines", y.is_intertwiner(&yk, &delta), None);
        rep.eq("coaction is counital", &(&idy.kron(&self.eps) * &delta), &idy);
        // ρ^K(κ⊗y) = (id ⊗ ω(κ, -))(δ(y))
        let omega = self.pairing(rd);
        let dk = self.dim();
        let flip = LinMap::flip(dk, y.dim()).reshape(y.shape.concat(&self.bimod.shape), self.bimod.shape.concat(&y.shape)).unwrap();
        let omega_op = &omega * &LinMap::flip(dk, dk).reshape(SpaceShape::flat(dk).pow(2), SpaceShape::flat(dk).pow(2)).unwrap();
        let paired = &(&idy.kron(&omega_op) * &delta.kron(&LinMap::identity(self.bimod.shape.clone()))) * &flip;
        rep.eq("action is the coaction paired through the Hopf pairing", &paired, &rho);
        rep
    }
}
