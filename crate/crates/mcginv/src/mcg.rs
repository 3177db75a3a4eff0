//! Correlators `Cor_{g,n}`, `Corr_{g,p,q}` and the action of the mapping
//! class group generators on `Hom(K^{⊗g}, X_1 ⊗ .. ⊗ X_n)`.
//!
//! Handle slot `k` of a generator refers to tensor leg `g - k` of `K^{⊗g}`
//! (legs counted from zero on the left). Pre-composition generators are
//! applied as factored operators and never materialized on `K^{⊗g}`.

use std::time::Instant;

use cyclo::CycScalar;
use linmap::{FactoredOp, LinMap, SpaceShape};
use serde::Serialize;

use crate::bimod::{braiding, dual, tensor, tensor_power, twist, twist_inverse, Bimodule, Side};
use crate::coend::HandleK;
use crate::frobenius::FrobeniusF;
use crate::hopf::zeros;
use crate::report::Report;
use crate::ribbon::RibbonData;
use crate::McgError;

/// Everything a correlator needs: ribbon data, `F` (or `F^ω`) and `K`.
#[derive(Clone, Debug)]
pub struct McgContext {
    pub rd: RibbonData,
    pub f: FrobeniusF,
    pub k: HandleK,
}

/// A mapping class group generator with its (1-based) indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Generator {
    Braid(usize),
    BoundaryTwist(usize),
    S(usize),
    A(usize),
    B(usize),
    D(usize),
    E(usize),
    T(usize, usize),
}

impl Generator {
    pub fn label(&self) -> String {
        match self {
            Generator::Braid(i) => format!("ω_{i}"),
            Generator::BoundaryTwist(i) => format!("R_{i}"),
            Generator::S(k) => format!("S_{k}"),
            Generator::A(m) => format!("a_{m}"),
            Generator::B(m) => format!("b_{m}"),
            Generator::D(m) => format!("d_{m}"),
            Generator::E(m) => format!("e_{m}"),
            Generator::T(j, k) => format!("t_{j},{k}"),
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match *self {
            Generator::T(j, k) => vec![j, k],
            Generator::Braid(i)
            | Generator::BoundaryTwist(i)
            | Generator::S(i)
            | Generator::A(i)
            | Generator::B(i)
            | Generator::D(i)
            | Generator::E(i) => vec![i],
        }
    }

    fn check(&self, g: usize, n: usize) -> Result<(), McgError> {
        let ok = match *self {
            Generator::Braid(i) => i >= 1 && i < n,
            Generator::BoundaryTwist(i) => i >= 1 && i <= n,
            Generator::S(k) | Generator::B(k) | Generator::D(k) => k >= 1 && k <= g,
            Generator::A(m) | Generator::E(m) => m >= 2 && m <= g,
            Generator::T(j, k) => j >= 1 && j < n && k >= 1 && k <= g,
        };
        if ok {
            Ok(())
        } else {
            Err(McgError::IndexOutOfRange(format!("{} at g = {g}, n = {n}", self.label())))
        }
    }
}

/// Every generator with valid indices, in a fixed order.
pub fn generators(g: usize, n: usize) -> Vec<Generator> {
    let mut out = Vec::new();
    out.extend((1..n).map(Generator::Braid));
    out.extend((1..=n).map(Generator::BoundaryTwist));
    out.extend((1..=g).map(Generator::S));
    out.extend((2..=g).map(Generator::A));
    out.extend((1..=g).map(Generator::B));
    out.extend((1..=g).map(Generator::D));
    out.extend((2..=g).map(Generator::E));
    for j in 1..n {
        for k in 1..=g {
            out.push(Generator::T(j, k));
        }
    }
    out
}

fn concat_shapes(objs: &[Bimodule]) -> SpaceShape {
    objs.iter().fold(SpaceShape::scalar(), |acc, x| acc.concat(&x.shape))
}

fn dims(objs: &[Bimodule]) -> usize {
    objs.iter().map(Bimodule::dim).product()
}

/// How a generator acts on a morphism.
pub enum GeneratorAction {
    /// `f ↦ op ∘ f`.
    Post(FactoredOp),
    /// `f ↦ f ∘ op`.
    Pre(FactoredOp),
    /// The sandwich used by `t_{j,k}`; `op` acts on `K^{⊗g} ⊗ ^∨Y`.
    Sandwich { op: FactoredOp, left_dim: usize, y_dim: usize },
}

impl GeneratorAction {
    pub fn apply(&self, f: &LinMap) -> Result<LinMap, McgError> {
        self.run(f, false)
    }

    /// Same action through fully materialized matrices.
    pub fn apply_dense(&self, f: &LinMap) -> Result<LinMap, McgError> {
        self.run(f, true)
    }

    fn run(&self, f: &LinMap, dense: bool) -> Result<LinMap, McgError> {
        Ok(match self {
            GeneratorAction::Post(op) => {
                if dense {
                    let m = op.materialize()?;
                    (&m * &f.reshape(m.dom().clone(), f.dom().clone())?).reshape(f.cod().clone(), f.dom().clone())?
                } else {
                    op.apply(&f.reshape(op.input.clone(), f.dom().clone())?)?.reshape(f.cod().clone(), f.dom().clone())?
                }
            }
            GeneratorAction::Pre(op) => {
                if dense {
                    let m = op.materialize()?;
                    (&f.reshape(f.cod().clone(), m.cod().clone())? * &m).reshape(f.cod().clone(), f.dom().clone())?
                } else {
                    op.precompose(f)?.reshape(f.cod().clone(), f.dom().clone())?
                }
            }
            GeneratorAction::Sandwich { op, left_dim, y_dim } => {
                let (dl, dy) = (*left_dim, *y_dim);
                let fy = f.kron(&LinMap::id(dy));
                let fy = fy.reshape(SpaceShape::flat(fy.rows()), op.output()?)?;
                let n = if dense { &fy * &op.materialize()? } else { op.precompose(&fy)? };
                // rows (x, y, y') of N; contract y with y' and move the column
                // leg of ^∨Y to the output: t(f)[(x, i), g] = Σ_y N[(x, y, y), (g, i)]
                let dg = f.cols();
                let mut t = Vec::new();
                for col in 0..dg * dy {
                    let (gi, i) = (col / dy, col % dy);
                    for (r, c) in n.col(col) {
                        let (x, rest) = (r / (dy * dy), r % (dy * dy));
                        if rest / dy == rest % dy {
                            t.push((x * dy + i, gi, c.clone()));
                        }
                    }
                }
                let _ = dl;
                LinMap::from_triplets(f.cod().clone(), f.dom().clone(), t)
            }
        })
    }
}

impl McgContext {
    pub fn new(rd: RibbonData, omega: Option<&LinMap>) -> Result<McgContext, McgError> {
        let f = FrobeniusF::build(&rd, omega)?;
        let k = HandleK::build(&rd)?;
        Ok(McgContext { rd, f, k })
    }

    pub fn k_power(&self, g: usize) -> Bimodule {
        tensor_power(&self.rd.base, &self.k.bimod, g)
    }

    pub fn f_power(&self, n: usize) -> Bimodule {
        tensor_power(&self.rd.base, &self.f.bimod, n)
    }

    fn f_legs(&self, n: usize) -> SpaceShape {
        self.f.bimod.shape.pow(n)
    }

    /// `h: K⊗F -> F`, `κ⊗x ↦ m_F(ρ^K(κ ⊗ x_(1)) ⊗ x_(2))`, one handle of
    /// the categorical picture.
    pub fn handle_block(&self) -> LinMap {
        let rho = self.k.rho(&self.rd, &self.f.bimod);
        let idf = LinMap::identity(self.f.bimod.shape.clone());
        let idk = LinMap::identity(self.k.bimod.shape.clone());
        &(&self.f.m * &rho.kron(&idf)) * &idk.kron(&self.f.delta)
    }

    /// `Corr_{g,1,1}` by nesting the handle block, `κ_g` innermost.
    pub fn corr_g11(&self, g: usize) -> LinMap {
        let h = self.handle_block();
        let mut acc = LinMap::identity(self.f.bimod.shape.clone());
        for _ in 0..g {
            acc = &h * &LinMap::identity(self.k.bimod.shape.clone()).kron(&acc);
        }
        acc
    }

    /// `Corr_{g,1,1}(κ_1..κ_g ⊗ z) = c(κ_1) ⋯ c(κ_g) · z` with `c` the
    /// closed form of `Cor_{1,1}`.
    pub fn corr_g11_product(&self, g: usize) -> LinMap {
        let c = cor11_closed_q_lambda(&self.rd);
        let mut acc = LinMap::identity(self.f.bimod.shape.clone());
        for _ in 0..g {
            acc = &self.f.m * &c.kron(&acc);
        }
        acc
    }

    /// `Corr_{g,p,q} = Δ^{(p)} ∘ Corr_{g,1,1} ∘ (id ⊗ m^{(q)})`.
    pub fn corr(&self, g: usize, p: usize, q: usize) -> LinMap {
        let idk = LinMap::identity(self.k.bimod.shape.pow(g));
        let core = &self.f.multi_coproduct(p) * &self.corr_g11(g);
        let m = self.f.multi_product(q);
        let out = &core * &idk.kron(&m);
        let dom = self.k.bimod.shape.pow(g).concat(&self.f_legs(q));
        out.reshape(self.f_legs(p), dom).unwrap()
    }

    /// `Cor_{g,n}`; `Cor_{g,0} = ε_F ∘ Cor_{g,1}`.
    pub fn cor(&self, g: usize, n: usize) -> LinMap {
        if n == 0 {
            (&self.f.eps * &self.corr(g, 1, 0)).reshape(SpaceShape::scalar(), self.k.bimod.shape.pow(g)).unwrap()
        } else {
            self.corr(g, n, 0)
        }
    }

    /// The four expressions for `Cor_{1,1}`: the categorical composite, the
    /// monodromy/cointegral closed form, the form through `f_{Q^-1}` and the
    /// adjoint action, and the integral form.
    pub fn cor11_paths(&self) -> [LinMap; 4] {
        let cat = self.corr(1, 1, 0);
        [cat, cor11_closed_q_lambda(&self.rd), cor11_drinfeld_adjoint(&self.rd), cor11_integral(&self.rd)]
    }

    /// The action of `γ` on `Hom(K^{⊗g}, X_1⊗..⊗X_n)`.
    pub fn action(&self, gen: Generator, g: usize, objs: &[Bimodule]) -> Result<GeneratorAction, McgError> {
        let n = objs.len();
        gen.check(g, n)?;
        let rd = &self.rd;
        let h = &rd.base;
        let kk = &self.k;
        let kshape = self.k.bimod.shape.pow(g);
        let pre = |stages: Vec<(usize, LinMap)>| -> Result<GeneratorAction, McgError> {
            let mut op = FactoredOp::new(kshape.clone());
            for (leg, m) in stages {
                op = op.then(leg, m)?;
            }
            Ok(GeneratorAction::Pre(op))
        };
        match gen {
            Generator::Braid(i) => {
                let c = braiding(rd, &objs[i - 1], &objs[i], false)?;
                Ok(GeneratorAction::Post(FactoredOp::new(concat_shapes(objs)).then(i - 1, c)?))
            }
            Generator::BoundaryTwist(i) => {
                let th = twist(rd, &objs[i - 1]);
                Ok(GeneratorAction::Post(FactoredOp::new(concat_shapes(objs)).then(i - 1, th)?))
            }
            Generator::S(k) => pre(vec![(g - k, kk.s.clone())]),
            Generator::B(k) => {
                let m = &(&kk.s_inv * &kk.t) * &kk.s;
                pre(vec![(g - k, m)])
            }
            Generator::D(k) => pre(vec![(g - k, kk.t.clone())]),
            Generator::A(l) => {
                let qq = kk.qq(rd);
                pre(vec![(g - l, kk.t.clone()), (g - l + 1, kk.t.clone()), (g - l, qq)])
            }
            Generator::E(l) => {
                let rest = self.k_power(l - 1);
                let qb = kk.qb(rd, &rest);
                let th = twist(rd, &rest);
                pre(vec![(g - l, qb), (g - l, kk.t.clone()), (g - l + 1, th)])
            }
            Generator::T(j, k) => {
                let y = objs[j..].iter().skip(1).fold(objs[j].clone(), |acc, x| tensor(h, &acc, x).unwrap());
                let ly = dual(rd, &y, Side::Left);
                let w = tensor(h, &self.k_power(k - 1), &ly)?;
                let qb = kk.qb(rd, &w);
                let th = twist(rd, &w);
                let input = kshape.concat(&ly.shape);
                let op = FactoredOp::new(input)
                    .then(g - k, kk.t.clone())?
                    .then(g - k + 1, th)?
                    .then(g - k, qb)?;
                Ok(GeneratorAction::Sandwich { op, left_dim: dims(&objs[..j]), y_dim: y.dim() })
            }
        }
    }

    /// The action of `γ^-1`, for the generators acting by composition with
    /// an invertible local operator.
    pub fn inverse_action(&self, gen: Generator, g: usize, objs: &[Bimodule]) -> Result<GeneratorAction, McgError> {
        gen.check(g, objs.len())?;
        let rd = &self.rd;
        let kk = &self.k;
        let kshape = self.k.bimod.shape.pow(g);
        let one = |leg: usize, m: LinMap| -> Result<GeneratorAction, McgError> {
            Ok(GeneratorAction::Pre(FactoredOp::new(kshape.clone()).then(leg, m)?))
        };
        match gen {
            Generator::Braid(i) => {
                let c = braiding(rd, &objs[i - 1], &objs[i], true)?;
                Ok(GeneratorAction::Post(FactoredOp::new(concat_shapes(objs)).then(i - 1, c)?))
            }
            Generator::BoundaryTwist(i) => {
                let th = twist_inverse(rd, &objs[i - 1]);
                Ok(GeneratorAction::Post(FactoredOp::new(concat_shapes(objs)).then(i - 1, th)?))
            }
            Generator::S(k) => one(g - k, kk.s_inv.clone()),
            Generator::B(k) => one(g - k, &(&kk.s_inv * &kk.t_inv) * &kk.s),
            Generator::D(k) => one(g - k, kk.t_inv.clone()),
            _ => Err(McgError::IndexOutOfRange(format!("no inverse action for {}", gen.label()))),
        }
    }

    /// `Cor^ω_{g,n} = Cor_{g,n} ∘ (id_{H*} ⊗ (ω^-1)*)^{⊗g}`, from the
    /// untwisted context `plain`.
    pub fn twisted_from_plain(plain: &McgContext, omega_inv: &LinMap, g: usize, n: usize) -> Result<LinMap, McgError> {
        let w = LinMap::identity(plain.rd.base.h()).kron(&omega_inv.transpose());
        let w = w.reshape(plain.k.bimod.shape.clone(), plain.k.bimod.shape.clone())?;
        let mut op = FactoredOp::new(plain.k.bimod.shape.pow(g));
        for leg in 0..g {
            op = op.then(leg, w.clone())?;
        }
        let cor = plain.cor(g, n);
        Ok(op.precompose(&cor)?.reshape(cor.cod().clone(), cor.dom().clone())?)
    }
}

/// The isomorphism `φ: Hom(K^{⊗g} ⊗ F^{⊗q}, F^{⊗p}) -> Hom(K^{⊗g}, F^{⊗p} ⊗ (F^∨)^{⊗q})`
/// by right duality. `(F^{⊗q})^∨` is identified with `(F^∨)^{⊗q}` by reversing
/// the legs, so `φ(f)[(x, i_q..i_1), κ] = f[x, (κ, i_1..i_q)]`.
impl McgContext {
    /// Objects `[F; p] ++ [F^∨; q]` for the transported action.
    pub fn pq_objects(&self, p: usize, q: usize) -> Vec<Bimodule> {
        let fd = dual(&self.rd, &self.f.bimod, Side::Right);
        let mut objs = vec![self.f.bimod.clone(); p];
        objs.extend(std::iter::repeat(fd).take(q));
        objs
    }

    fn reverse_legs(&self, i: usize, q: usize) -> usize {
        let n = self.f.dim();
        let mut out = 0;
        let mut rest = i;
        for _ in 0..q {
            out = out * n + rest % n;
            rest /= n;
        }
        out
    }

    pub fn pq_transport(&self, f: &LinMap, g: usize, p: usize, q: usize) -> Result<LinMap, McgError> {
        let dy = self.f.dim().pow(q as u32);
        let dk = self.k.dim().pow(g as u32);
        if f.rows() != self.f.dim().pow(p as u32) || f.cols() != dk * dy {
            return Err(McgError::Format(format!("morphism is not K^{g} ⊗ F^{q} -> F^{p}")));
        }
        let t = f.triplets().map(|(x, c, v)| (x * dy + self.reverse_legs(c % dy, q), c / dy, v.clone()));
        Ok(LinMap::from_triplets(self.f_legs(p + q), self.k.bimod.shape.pow(g), t))
    }

    pub fn pq_transport_inverse(&self, t: &LinMap, g: usize, p: usize, q: usize) -> Result<LinMap, McgError> {
        let dy = self.f.dim().pow(q as u32);
        if t.rows() != self.f.dim().pow(p as u32) * dy || t.cols() != self.k.dim().pow(g as u32) {
            return Err(McgError::Format(format!("morphism is not K^{g} -> F^{p} ⊗ F^∨^{q}")));
        }
        let f = t.triplets().map(|(r, kg, v)| (r / dy, kg * dy + self.reverse_legs(r % dy, q), v.clone()));
        let dom = self.k.bimod.shape.pow(g).concat(&self.f_legs(q));
        Ok(LinMap::from_triplets(self.f_legs(p), dom, f))
    }

    /// `π^{Y,X}(γ)(f) = φ^-1(π(γ)(φ(f)))` with `X = F^{⊗p}`, `Y = F^{⊗q}`.
    pub fn pq_apply(&self, gen: Generator, f: &LinMap, g: usize, p: usize, q: usize) -> Result<LinMap, McgError> {
        let objs = self.pq_objects(p, q);
        let t = self.pq_transport(f, g, p, q)?;
        let moved = self.action(gen, g, &objs)?.apply(&t)?;
        self.pq_transport_inverse(&moved, g, p, q)
    }
}

/// `Cor_{1,1}(α⊗β)(y) = α(Q'1) β(Q1) λ(S(y1) S(Q'2) y2 S^-1(Q2))`.
pub fn cor11_closed_q_lambda(rd: &RibbonData) -> LinMap {
    let h = &rd.base;
    let n = h.n;
    // w[q][y] = S(y1) S(e_q) y2
    let mut ad: Vec<Vec<Vec<CycScalar>>> = vec![vec![Vec::new(); n]; n];
    for (q, row) in ad.iter_mut().enumerate() {
        let sq = h.antipode(&h.basis(q));
        for (y, slot) in row.iter_mut().enumerate() {
            let mut acc = zeros(n);
            for (a, b, c) in h.cop_basis(y) {
                let t = h.mul(&h.mul(&h.antipode(&h.basis(*a)), &sq), &h.basis(*b));
                acc = crate::hopf::add(&acc, &crate::hopf::scale(&t, c));
            }
            *slot = acc;
        }
    }
    let sinv: Vec<_> = (0..n).map(|s| h.antipode_inv(&h.basis(s))).collect();
    // val[q][s][y] = λ(w[q][y] S^-1(e_s))
    let mut t = Vec::new();
    for y in 0..n {
        let mut val = vec![vec![CycScalar::zero(1); n]; n];
        for q in 0..n {
            for s in 0..n {
                val[q][s] = rd.eval_lambda(&h.mul(&ad[q][y], &sinv[s]));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let mut acc = CycScalar::zero(1);
                for q in 0..n {
                    let qa = &rd.qinv[a * n + q];
                    if qa.is_zero() {
                        continue;
                    }
                    for s in 0..n {
                        let qb = &rd.q[b * n + s];
                        if !qb.is_zero() && !val[q][s].is_zero() {
                            acc += &(&(qa * qb) * &val[q][s]);
                        }
                    }
                }
                if !acc.is_zero() {
                    t.push((y, a * n + b, acc));
                }
            }
        }
    }
    LinMap::from_triplets(h.h(), SpaceShape::flat(n * n), t)
}

/// `Cor_{1,1}(α⊗β)(y) = λ(S(f_{Q'}(S^-1(y) ▷ α)) S^-1(f_Q(β)))` with `▷` the
/// coadjoint action.
pub fn cor11_drinfeld_adjoint(rd: &RibbonData) -> LinMap {
    let h = &rd.base;
    let n = h.n;
    let coad = rd.coadjoint_action();
    let right: Vec<_> = (0..n).map(|b| h.antipode_inv(&rd.f_q.column(b))).collect();
    let mut t = Vec::new();
    for y in 0..n {
        let hy = h.antipode_inv(&h.basis(y));
        for a in 0..n {
            // S^-1(y) ▷ e^a
            let mut xi = zeros(n);
            for (c, hc) in hy.iter().enumerate() {
                if !hc.is_zero() {
                    xi = crate::hopf::add(&xi, &crate::hopf::scale(&coad.column(c * n + a), hc));
                }
            }
            let left = h.antipode(&rd.f_qinv.apply_vec(&xi));
            for (b, r) in right.iter().enumerate() {
                let v = rd.eval_lambda(&h.mul(&left, r));
                if !v.is_zero() {
                    t.push((y, a * n + b, v));
                }
            }
        }
    }
    LinMap::from_triplets(h.h(), SpaceShape::flat(n * n), t)
}

/// `Cor_{1,1}(α⊗β)(y) = α(Λ1 S^-1(y1)) β(S(Λ2) y2)`.
pub fn cor11_integral(rd: &RibbonData) -> LinMap {
    let h = &rd.base;
    let n = h.n;
    let dl = h.cop(&rd.big_lambda);
    let legs: Vec<_> = rd.rows2(&dl).into_iter().map(|(a, row)| (h.basis(a), h.antipode(&row))).collect();
    let mut t = Vec::new();
    for y in 0..n {
        let mut acc = zeros(n * n);
        for (y1, y2, c) in h.cop_basis(y) {
            let s1 = h.antipode_inv(&h.basis(*y1));
            let b2 = h.basis(*y2);
            for (l1, sl2) in &legs {
                let a = h.mul(l1, &s1);
                let b = h.mul(sl2, &b2);
                acc = crate::hopf::add(&acc, &crate::hopf::scale(&crate::hopf::tensor(&a, &b), c));
            }
        }
        for (ab, c) in acc.into_iter().enumerate() {
            if !c.is_zero() {
                t.push((y, ab, c));
            }
        }
    }
    LinMap::from_triplets(h.h(), SpaceShape::flat(n * n), t)
}

/// Outcome of one generator check.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorResult {
    pub label: String,
    pub indices: Vec<usize>,
    pub status: String,
    pub deviation: String,
    pub millis: u128,
}

fn first_dev(a: &LinMap, b: &LinMap) -> String {
    match a.first_difference(b) {
        None => "0".into(),
        Some((i, j, x, y)) => format!("({i}, {j}): {x} vs {y}"),
    }
}

/// Budget on `dim(K)^g` above which `t_{j,k}` and `e_m` are sampled.
pub const DEFAULT_BUDGET: usize = 10_000;

/// Options for [`invariance_suite`].
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub budget: usize,
    pub seed: u64,
    pub samples: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { budget: DEFAULT_BUDGET, seed: 0, samples: 2 }
    }
}

/// Checks `action(γ)(Cor_{g,n}) = Cor_{g,n}` for every generator, plus the
/// structural identities used along the way.
pub fn invariance_suite(ctx: &McgContext, g: usize, n: usize, opts: &SuiteOptions) -> (Report, Vec<GeneratorResult>) {
    let mut rep = Report::new(format!("invariance of Cor_{{{g},{n}}} over {}", ctx.rd.base.name));
    let cor = ctx.cor(g, n);
    let objs: Vec<Bimodule> = vec![ctx.f.bimod.clone(); n];
    let results = run_generators(ctx, &mut rep, g, n, opts, &cor, |gen| ctx.action(gen, g, &objs)?.apply(&cor));
    let kg = ctx.k_power(g);
    let fin = ctx.f_power(n);
    rep.flag("Cor is an intertwiner", kg.is_intertwiner(&fin, &cor), None);
    rep.eq("twist naturality", &(&cor * &twist(&ctx.rd, &kg)), &(&twist(&ctx.rd, &fin) * &cor));
    if g >= 2 {
        let ks = ctx.k.bimod.shape.pow(g);
        let rd = &ctx.rd;
        let pre = |m: LinMap| -> Result<LinMap, McgError> {
            Ok(FactoredOp::new(ks.clone()).then(0, m)?.precompose(&cor)?.reshape(cor.cod().clone(), cor.dom().clone())?)
        };
        for (name, m) in [
            ("Cor absorbs the partial monodromy of K past K^{g-1}", ctx.k.qb(rd, &ctx.k_power(g - 1))),
            ("Cor absorbs the monodromy of K past K", ctx.k.qq(rd)),
        ] {
            match pre(m) {
                Ok(x) => rep.eq(name, &x, &cor),
                Err(e) => {
                    rep.flag(name, false, Some(e.to_string()));
                    false
                }
            };
        }
    }
    (rep, results)
}

/// Invariance of `Corr_{g,p,q}` under the action transported through the
/// right-duality isomorphism.
pub fn pq_invariance_suite(
    ctx: &McgContext,
    g: usize,
    p: usize,
    q: usize,
    opts: &SuiteOptions,
) -> (Report, Vec<GeneratorResult>) {
    let mut rep = Report::new(format!("invariance of Corr_{{{g},{p},{q}}} over {}", ctx.rd.base.name));
    let corr = ctx.corr(g, p, q);
    let results = run_generators(ctx, &mut rep, g, p + q, opts, &corr, |gen| ctx.pq_apply(gen, &corr, g, p, q));
    match ctx.pq_transport(&corr, g, p, q) {
        Ok(t) => {
            let back = ctx.pq_transport_inverse(&t, g, p, q);
            rep.flag("transport round trip", back.as_ref().is_ok_and(|b| *b == corr), None);
            let objs = ctx.pq_objects(p, q);
            let target = objs[1..].iter().fold(objs[0].clone(), |acc, x| tensor(&ctx.rd.base, &acc, x).unwrap());
            rep.flag("transported Corr is an intertwiner", ctx.k_power(g).is_intertwiner(&target, &t), None);
        }
        Err(e) => rep.flag("transport", false, Some(e.to_string())),
    }
    (rep, results)
}

fn run_generators(
    ctx: &McgContext,
    rep: &mut Report,
    g: usize,
    n: usize,
    opts: &SuiteOptions,
    target: &LinMap,
    act: impl Fn(Generator) -> Result<LinMap, McgError>,
) -> Vec<GeneratorResult> {
    let big = ctx.k.dim().saturating_pow(g as u32) > opts.budget;
    let mut gens = generators(g, n);
    if big {
        gens = sample_heavy(gens, opts);
        rep.flag("budget: t and e generators sampled", true, Some(format!("dim(K)^g > {}", opts.budget)));
    }
    let mut results = Vec::new();
    for gen in gens {
        let start = Instant::now();
        let (status, dev) = match act(gen) {
            Ok(m) if m == *target => ("pass", "0".to_string()),
            Ok(m) => ("fail", first_dev(&m, target)),
            Err(e) => ("error", e.to_string()),
        };
        rep.flag(format!("invariance under {}", gen.label()), status == "pass", (status != "pass").then(|| dev.clone()));
        results.push(GeneratorResult {
            label: gen.label(),
            indices: gen.indices(),
            status: status.into(),
            deviation: dev,
            millis: start.elapsed().as_millis(),
        });
    }
    results
}

fn sample_heavy(gens: Vec<Generator>, opts: &SuiteOptions) -> Vec<Generator> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut rng = rand::rngs::StdRng::seed_from_u64(opts.seed);
    let (heavy, mut light): (Vec<_>, Vec<_>) =
        gens.into_iter().partition(|g| matches!(g, Generator::T(..) | Generator::E(_)));
    let picked: Vec<_> = heavy.choose_multiple(&mut rng, opts.samples).cloned().collect();
    light.extend(heavy.into_iter().filter(|g| picked.contains(g)));
    light
}
