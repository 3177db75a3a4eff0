//! Finite-dimensional Hopf algebras given by structure constants.

use cyclo::CycScalar;
use linmap::{inverse, LinMap, SpaceShape};

use crate::report::Report;
use crate::McgError;

pub type Elem = Vec<CycScalar>;

pub fn zeros(n: usize) -> Elem {
    vec![CycScalar::zero(1); n]
}

pub fn add(a: &[CycScalar], b: &[CycScalar]) -> Elem {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[CycScalar], c: &CycScalar) -> Elem {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero(a: &[CycScalar]) -> bool {
    a.iter().all(CycScalar::is_zero)
}

/// `a ⊗ b` as a coordinate vector of length `len(a) * len(b)`.
pub fn tensor(a: &[CycScalar], b: &[CycScalar]) -> Elem {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// Structure constants `(m, η, Δ, ε, S)` of a Hopf algebra `H` with basis
/// `e_0 .. e_{n-1}`.
#[derive(Clone, Debug)]
pub struct HopfData {
    pub name: String,
    /// Cyclotomic order the structure constants live in.
    pub order: u32,
    pub n: usize,
    pub m: LinMap,
    pub eta: LinMap,
    pub delta: LinMap,
    pub eps: LinMap,
    pub s: LinMap,
    pub s_inv: Option<LinMap>,
    prod: Vec<Vec<(usize, CycScalar)>>,
    copr: Vec<Vec<(usize, usize, CycScalar)>>,
}

fn check_shape(name: &str, f: &LinMap, rows: usize, cols: usize) -> Result<(), McgError> {
    if f.rows() != rows || f.cols() != cols {
        return Err(McgError::ShapeMismatch(format!(
            "{name} is {}x{}, expected {rows}x{cols}",
            f.rows(),
            f.cols()
        )));
    }
    Ok(())
}

impl HopfData {
    pub fn new(
        name: impl Into<String>,
        order: u32,
        m: LinMap,
        eta: LinMap,
        delta: LinMap,
        eps: LinMap,
        s: LinMap,
    ) -> Result<HopfData, McgError> {
        let n = eta.rows();
        check_shape("product", &m, n, n * n)?;
        check_shape("unit", &eta, n, 1)?;
        check_shape("coproduct", &delta, n * n, n)?;
        check_shape("counit", &eps, 1, n)?;
        check_shape("antipode", &s, n, n)?;
        let h = SpaceShape::flat(n);
        let hh = SpaceShape::new(&[n, n]);
        let k = SpaceShape::scalar();
        let m = m.reshape(h.clone(), hh.clone())?;
        let eta = eta.reshape(h.clone(), k.clone())?;
        let delta = delta.reshape(hh, h.clone())?;
        let eps = eps.reshape(k, h.clone())?;
        let s = s.reshape(h.clone(), h)?;
        let prod = (0..n * n).map(|c| m.col(c).map(|(i, x)| (i, x.clone())).collect()).collect();
        let copr = (0..n)
            .map(|c| delta.col(c).map(|(r, x)| (r / n, r % n, x.clone())).collect())
            .collect();
        let s_inv = inverse(&s).ok();
        Ok(HopfData { name: name.into(), order, n, m, eta, delta, eps, s, s_inv, prod, copr })
    }

    pub fn h(&self) -> SpaceShape {
        SpaceShape::flat(self.n)
    }

    pub fn hh(&self) -> SpaceShape {
        SpaceShape::new(&[self.n, self.n])
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut v = zeros(self.n);
        v[i] = CycScalar::one(1);
        v
    }

    pub fn one(&self) -> Elem {
        self.eta.column(0)
    }

    /// Product of basis elements as a sparse list.
    pub fn prod_basis(&self, i: usize, j: usize) -> &[(usize, CycScalar)] {
        &self.prod[i * self.n + j]
    }

    /// Coproduct of a basis element as a sparse list of `(i, j, c)`.
    pub fn cop_basis(&self, i: usize) -> &[(usize, usize, CycScalar)] {
        &self.copr[i]
    }

    pub fn mul(&self, a: &[CycScalar], b: &[CycScalar]) -> Elem {
        let mut out = zeros(self.n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.prod_basis(i, j) {
                    out[*k] += &(&xy * c);
                }
            }
        }
        out
    }

    /// Product in `H ⊗ H`.
    pub fn mul2(&self, a: &[CycScalar], b: &[CycScalar]) -> Elem {
        let n = self.n;
        let mut out = zeros(n * n);
        for (ia, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (ib, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k1, c1) in self.prod_basis(ia / n, ib / n) {
                    let c = &xy * c1;
                    for (k2, c2) in self.prod_basis(ia % n, ib % n) {
                        out[k1 * n + k2] += &(&c * c2);
                    }
                }
            }
        }
        out
    }

    pub fn cop(&self, a: &[CycScalar]) -> Elem {
        let n = self.n;
        let mut out = zeros(n * n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, k, c) in self.cop_basis(i) {
                out[j * n + k] += &(x * c);
            }
        }
        out
    }

    pub fn counit(&self, a: &[CycScalar]) -> CycScalar {
        let mut acc = CycScalar::zero(1);
        for (i, x) in a.iter().enumerate() {
            if !x.is_zero() {
                acc += &(x * &self.eps.get(0, i));
            }
        }
        acc
    }

    pub fn antipode(&self, a: &[CycScalar]) -> Elem {
        self.s.apply_vec(a)
    }

    pub fn antipode_inv(&self, a: &[CycScalar]) -> Elem {
        self.s_inv.as_ref().expect("antipode is invertible").apply_vec(a)
    }

    pub fn s_inv(&self) -> &LinMap {
        self.s_inv.as_ref().expect("antipode is invertible")
    }

    /// Left multiplication `h ↦ x h`.
    pub fn lmul(&self, x: &[CycScalar]) -> LinMap {
        let cols = (0..self.n).map(|j| self.mul(x, &self.basis(j))).collect::<Vec<_>>();
        from_cols(self.h(), self.h(), cols)
    }

    /// Right multiplication `h ↦ h x`.
    pub fn rmul(&self, x: &[CycScalar]) -> LinMap {
        let cols = (0..self.n).map(|j| self.mul(&self.basis(j), x)).collect::<Vec<_>>();
        from_cols(self.h(), self.h(), cols)
    }

    /// Apply `f ⊗ g` to an element of `H ⊗ H`.
    pub fn apply2(&self, f: &LinMap, g: &LinMap, a: &[CycScalar]) -> Elem {
        f.kron(g).apply_vec(a)
    }

    pub fn flip2(&self, a: &[CycScalar]) -> Elem {
        let n = self.n;
        let mut out = zeros(n * n);
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = a[i * n + j].clone();
            }
        }
        out
    }

    /// Inverse of an element by solving `x a = 1`.
    pub fn inverse_elem(&self, a: &[CycScalar]) -> Option<Elem> {
        let la = self.rmul(a);
        let x = inverse(&la).ok()?.apply_vec(&self.one());
        (self.mul(a, &x) == self.one()).then_some(x)
    }

    /// Inverse in `H ⊗ H`.
    pub fn inverse_elem2(&self, a: &[CycScalar]) -> Option<Elem> {
        let n2 = self.n * self.n;
        let cols = (0..n2)
            .map(|j| {
                let mut e = zeros(n2);
                e[j] = CycScalar::one(1);
                self.mul2(&e, a)
            })
            .collect::<Vec<_>>();
        let ra = from_cols(self.hh(), self.hh(), cols);
        let one2 = tensor(&self.one(), &self.one());
        let x = inverse(&ra).ok()?.apply_vec(&one2);
        (self.mul2(a, &x) == one2).then_some(x)
    }

    /// Antipode inverse with the singular case as an error.
    pub fn antipode_inverse(&self) -> Result<LinMap, McgError> {
        inverse(&self.s).map_err(|_| McgError::Singular("antipode".into()))
    }

    pub fn verify_hopf(&self) -> Report {
        let mut r = Report::new(format!("Hopf axioms for {}", self.name));
        let n = self.n;
        let id = LinMap::identity(self.h());
        let k1 = LinMap::scalar(CycScalar::one(1));
        let m = &self.m;
        let d = &self.delta;
        r.eq("associativity", &(m * &m.kron(&id)), &(m * &id.kron(m)));
        r.eq("left unit", &(m * &self.eta.kron(&id)), &id);
        r.eq("right unit", &(m * &id.kron(&self.eta)), &id);
        r.eq("coassociativity", &(&d.kron(&id) * d), &(&id.kron(d) * d));
        r.eq("left counit", &(&self.eps.kron(&id) * d), &id);
        r.eq("right counit", &(&id.kron(&self.eps) * d), &id);
        let mid = LinMap::identity(self.h()).kron(&LinMap::flip(n, n)).kron(&id);
        let lhs = d * m;
        let rhs = &(&m.kron(m) * &mid) * &d.kron(d);
        r.eq("bialgebra compatibility", &lhs, &rhs);
        r.eq("counit multiplicative", &(&self.eps * m), &self.eps.kron(&self.eps));
        r.eq("coproduct of unit", &(d * &self.eta), &self.eta.kron(&self.eta));
        r.eq("counit of unit", &(&self.eps * &self.eta), &k1);
        let ee = &self.eta * &self.eps;
        r.eq("antipode left", &(&(m * &self.s.kron(&id)) * d), &ee);
        r.eq("antipode right", &(&(m * &id.kron(&self.s)) * d), &ee);
        r.flag("antipode invertible", self.s_inv.is_some(), None);
        let tau = LinMap::flip(n, n);
        r.eq("antipode anti-multiplicative", &(&self.s * m), &(&(m * &tau) * &self.s.kron(&self.s)));
        r.eq("antipode anti-comultiplicative", &(d * &self.s), &(&(&tau * &self.s.kron(&self.s)) * d));
        r
    }
}

pub fn from_cols(cod: SpaceShape, dom: SpaceShape, cols: Vec<Elem>) -> LinMap {
    let cols = cols
        .into_iter()
        .map(|c| c.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
        .collect();
    LinMap::from_columns(cod, dom, cols)
}

/// Builds `H` from a product table `e_i e_j = Σ c e_k`, coproduct table,
/// unit vector, counit vector and antipode matrix (all as closures).
pub fn from_tables(
    name: &str,
    order: u32,
    n: usize,
    prod: impl Fn(usize, usize) -> Vec<(usize, CycScalar)>,
    cop: impl Fn(usize) -> Vec<(usize, usize, CycScalar)>,
    unit: Elem,
    counit: Elem,
    antipode: impl Fn(usize) -> Vec<(usize, CycScalar)>,
) -> Result<HopfData, McgError> {
    let h = SpaceShape::flat(n);
    let hh = SpaceShape::new(&[n, n]);
    let mut mt = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for (k, c) in prod(i, j) {
                mt.push((k, i * n + j, c));
            }
        }
    }
    let m = LinMap::from_triplets(h.clone(), hh.clone(), mt);
    let mut dt = Vec::new();
    for i in 0..n {
        for (a, b, c) in cop(i) {
            dt.push((a * n + b, i, c));
        }
    }
    let delta = LinMap::from_triplets(hh, h.clone(), dt);
    let eta = LinMap::vector(h.clone(), unit);
    let eps = LinMap::covector(h.clone(), counit);
    let mut st = Vec::new();
    for i in 0..n {
        for (k, c) in antipode(i) {
            st.push((k, i, c));
        }
    }
    let s = LinMap::from_triplets(h.clone(), h, st);
    HopfData::new(name, order, m, eta, delta, eps, s)
}

/// Group algebra `k[Z/k]` with basis `g^0 .. g^{k-1}`.
pub fn cyclic_group_algebra(k: usize) -> HopfData {
    let one = || CycScalar::one(1);
    let mut unit = zeros(k);
    unit[0] = one();
    from_tables(
        &format!("k[Z/{k}]"),
        1,
        k,
        |i, j| vec![((i + j) % k, one())],
        |i| vec![(i, i, one())],
        unit,
        vec![one(); k],
        |i| vec![((k - i) % k, one())],
    )
    .expect("group algebra tables are consistent")
}
