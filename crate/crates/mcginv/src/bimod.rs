//! The ribbon category of `H`-bimodules, in the strict vector-space model.
//!
//! Conventions (`R' = R^-1`, `Q' = Q^-1`):
//!
//! ```text
//! h·(x⊗y) = h1 x ⊗ h2 y           (x⊗y)·h = x h1 ⊗ y h2
//! c(x⊗y)  = R'1 y R1 ⊗ R'2 x R2   c∘c(x⊗y) = Q'1 x Q1 ⊗ Q'2 y Q2
//! θ(x)    = v x v^-1
//! X^∨:  (hξ)(x) = ξ(S(h) x),    (ξh)(x) = ξ(x S^-1(h))
//! ^∨X:  (hξ)(x) = ξ(S^-1(h) x), (ξh)(x) = ξ(x S(h))
//! ```
//!
//! All four duality morphisms `d, b, d̃, b̃` are the plain vector-space
//! pairings; the pivot `x ↦ t x t` identifies `X` with `X^∨∨`.

use cyclo::CycScalar;
use linmap::{Echelon, LinMap, SpaceShape};

use crate::hopf::{Elem, HopfData};
use crate::report::Report;
use crate::ribbon::RibbonData;
use crate::McgError;

#[derive(Clone, Debug)]
pub struct Bimodule {
    pub name: String,
    /// Dimension of `H` the actions are indexed by.
    pub n: usize,
    pub shape: SpaceShape,
    /// `left[a]` is the action of the basis element `e_a` from the left.
    pub left: Vec<LinMap>,
    pub right: Vec<LinMap>,
}

/// A bimodule morphism; [`Bimodule::is_intertwiner`] checks the property.
#[derive(Clone, Debug)]
pub struct BimodMorphism {
    pub src: Bimodule,
    pub dst: Bimodule,
    pub map: LinMap,
}

/// `Σ_k x_k M_k` for a family of matrices indexed by the basis of `H`.
pub fn combine(ms: &[LinMap], x: &[CycScalar]) -> LinMap {
    let mut acc = LinMap::zero(ms[0].cod().clone(), ms[0].dom().clone());
    for (m, c) in ms.iter().zip(x) {
        if !c.is_zero() {
            acc = acc.try_add(&m.scale(c)).unwrap();
        }
    }
    acc
}

fn flat(m: &LinMap, shape: &SpaceShape) -> LinMap {
    m.reshape(shape.clone(), shape.clone()).unwrap()
}

impl Bimodule {
    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// Action of an arbitrary element from the left.
    pub fn act_left(&self, x: &[CycScalar]) -> LinMap {
        combine(&self.left, x)
    }

    pub fn act_right(&self, x: &[CycScalar]) -> LinMap {
        combine(&self.right, x)
    }

    /// `ρ: H ⊗ X -> X`.
    pub fn left_action_map(&self) -> LinMap {
        let d = self.dim();
        let mut t = Vec::new();
        for (a, m) in self.left.iter().enumerate() {
            for (i, j, x) in m.triplets() {
                t.push((i, a * d + j, x.clone()));
            }
        }
        LinMap::from_triplets(self.shape.clone(), SpaceShape::flat(self.n).concat(&self.shape), t)
    }

    /// `ρ̄: X ⊗ H -> X`.
    pub fn right_action_map(&self) -> LinMap {
        let n = self.n;
        let mut t = Vec::new();
        for (a, m) in self.right.iter().enumerate() {
            for (i, j, x) in m.triplets() {
                t.push((i, j * n + a, x.clone()));
            }
        }
        LinMap::from_triplets(self.shape.clone(), self.shape.concat(&SpaceShape::flat(n)), t)
    }

    pub fn same_context(&self, o: &Bimodule) -> Result<(), McgError> {
        if self.n != o.n {
            return Err(McgError::ContextMismatch(format!(
                "{} is over a {}-dimensional algebra, {} over {}",
                self.name, self.n, o.name, o.n
            )));
        }
        Ok(())
    }

    pub fn is_intertwiner(&self, dst: &Bimodule, f: &LinMap) -> bool {
        (0..self.n).all(|a| {
            f * &self.left[a] == &dst.left[a] * f && f * &self.right[a] == &dst.right[a] * f
        })
    }
}

/// The unit object: `k` with both actions given by the counit.
pub fn unit(h: &HopfData) -> Bimodule {
    let acts: Vec<LinMap> = (0..h.n).map(|a| LinMap::scalar(h.eps.get(0, a))).collect();
    Bimodule { name: "1".into(), n: h.n, shape: SpaceShape::scalar(), left: acts.clone(), right: acts }
}

/// `H*` with `(hξ)(y) = ξ(S(h) y)` and `(ξh)(y) = ξ(y S^-1(h))`.
pub fn coregular(h: &HopfData) -> Bimodule {
    let left = (0..h.n).map(|a| h.lmul(&h.antipode(&h.basis(a))).transpose()).collect();
    let right = (0..h.n).map(|a| h.rmul(&h.antipode_inv(&h.basis(a))).transpose()).collect();
    Bimodule { name: "F".into(), n: h.n, shape: h.h(), left, right }
}

/// `X ⊗ Y` with actions pulled back along the coproduct.
pub fn tensor(h: &HopfData, x: &Bimodule, y: &Bimodule) -> Result<Bimodule, McgError> {
    x.same_context(y)?;
    let shape = x.shape.concat(&y.shape);
    let build = |xs: &[LinMap], ys: &[LinMap]| -> Vec<LinMap> {
        (0..h.n)
            .map(|a| {
                let mut acc = LinMap::zero(shape.clone(), shape.clone());
                for (b, c, k) in h.cop_basis(a) {
                    acc = acc.try_add(&xs[*b].kron(&ys[*c]).scale(k)).unwrap();
                }
                acc
            })
            .collect()
    };
    Ok(Bimodule {
        name: format!("{}⊗{}", paren(&x.name), paren(&y.name)),
        n: h.n,
        left: build(&x.left, &y.left),
        right: build(&x.right, &y.right),
        shape,
    })
}

fn paren(s: &str) -> String {
    if s.contains('⊗') {
        format!("({s})")
    } else {
        s.to_string()
    }
}

/// `X^{⊗p}`; the unit object for `p = 0`.
pub fn tensor_power(h: &HopfData, x: &Bimodule, p: usize) -> Bimodule {
    let mut acc = unit(h);
    for i in 0..p {
        acc = if i == 0 { x.clone() } else { tensor(h, &acc, x).unwrap() };
    }
    acc
}

/// `Σ_{pq} z_pq A[p] ⊗ B[q]` for a two-leg element `z`.
fn two_leg(rd: &RibbonData, z: &Elem, a: &[LinMap], b: &[LinMap]) -> LinMap {
    let n = rd.n();
    let mut acc = LinMap::zero(a[0].cod().concat(b[0].cod()), a[0].dom().concat(b[0].dom()));
    for (pq, c) in z.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.try_add(&a[pq / n].kron(&b[pq % n]).scale(c)).unwrap();
        }
    }
    acc
}

/// `c_{X,Y}: X⊗Y -> Y⊗X`, or its inverse `Y⊗X -> X⊗Y`.
pub fn braiding(rd: &RibbonData, x: &Bimodule, y: &Bimodule, inverse: bool) -> Result<LinMap, McgError> {
    x.same_context(y)?;
    let (dx, dy) = (x.dim(), y.dim());
    let yx = y.shape.concat(&x.shape);
    let xy = x.shape.concat(&y.shape);
    if !inverse {
        // legs of Y⊗X: left action of R^-1, right action of R
        let a = two_leg(rd, &rd.rinv, &y.left, &x.left);
        let b = two_leg(rd, &rd.r, &y.right, &x.right);
        let flip = LinMap::flip(dx, dy).reshape(yx.clone(), xy)?;
        Ok(flat(&(&a * &b), &yx).compose(&flip)?)
    } else {
        let a = two_leg(rd, &rd.r, &y.left, &x.left);
        let b = two_leg(rd, &rd.rinv, &y.right, &x.right);
        let flip = LinMap::flip(dy, dx).reshape(xy, yx.clone())?;
        Ok(flip.compose(&flat(&(&b * &a), &yx))?)
    }
}

/// Which dual to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `X^∨` (right) or `^∨X` (left) on the flat dual space of `X`.
pub fn dual(rd: &RibbonData, x: &Bimodule, side: Side) -> Bimodule {
    let h = &rd.base;
    let (sl, sr): (&LinMap, &LinMap) = match side {
        Side::Right => (&h.s, h.s_inv()),
        Side::Left => (h.s_inv(), &h.s),
    };
    let left = (0..h.n).map(|a| x.act_left(&sl.column(a)).transpose()).collect();
    let right = (0..h.n).map(|a| x.act_right(&sr.column(a)).transpose()).collect();
    let name = match side {
        Side::Right => format!("{}^∨", paren(&x.name)),
        Side::Left => format!("^∨{}", paren(&x.name)),
    };
    Bimodule { name, n: h.n, shape: SpaceShape::flat(x.dim()), left, right }
}

/// `(b, d, b̃, d̃)` for `X`: `b: 1 -> X⊗X^∨`, `d: X^∨⊗X -> 1`,
/// `b̃: 1 -> ^∨X⊗X`, `d̃: X⊗^∨X -> 1`, all plain pairings.
pub fn duality_morphisms(x: &Bimodule) -> (LinMap, LinMap, LinMap, LinMap) {
    let d = x.dim();
    let sq = SpaceShape::new(&[d, d]);
    let k = SpaceShape::scalar();
    let one = || CycScalar::one(1);
    let b = LinMap::from_triplets(sq.clone(), k.clone(), (0..d).map(|i| (i * d + i, 0, one())));
    let ev = LinMap::from_triplets(k, sq, (0..d).map(|i| (0, i * d + i, one())));
    (b.clone(), ev.clone(), b, ev)
}

/// Pivot `π_X: X -> X^∨∨`, `x ↦ t x t`.
pub fn pivot(rd: &RibbonData, x: &Bimodule) -> LinMap {
    &x.act_left(&rd.t) * &x.act_right(&rd.t)
}

/// Twist `θ_X(x) = v x v^-1`.
pub fn twist(rd: &RibbonData, x: &Bimodule) -> LinMap {
    &x.act_left(&rd.v) * &x.act_right(&rd.vinv)
}

pub fn twist_inverse(rd: &RibbonData, x: &Bimodule) -> LinMap {
    &x.act_left(&rd.vinv) * &x.act_right(&rd.v)
}

/// Left/right module axioms and commutation of the two actions.
pub fn verify_bimodule(h: &HopfData, x: &Bimodule) -> Report {
    let mut rep = Report::new(format!("bimodule axioms for {}", x.name));
    let id = LinMap::identity(x.shape.clone());
    let one = h.one();
    rep.eq("left unit", &x.act_left(&one), &id);
    rep.eq("right unit", &x.act_right(&one), &id);
    let (mut lok, mut rok, mut cok) = (true, true, true);
    for a in 0..h.n {
        for b in 0..h.n {
            let ab = h.mul(&h.basis(a), &h.basis(b));
            lok &= &x.left[a] * &x.left[b] == x.act_left(&ab);
            rok &= &x.right[b] * &x.right[a] == x.act_right(&ab);
            cok &= &x.left[a] * &x.right[b] == &x.right[b] * &x.left[a];
        }
    }
    rep.flag("left action associative", lok, None);
    rep.flag("right action associative", rok, None);
    rep.flag("actions commute", cok, None);
    rep
}

/// Basis of `Hom(X, Y)` by elimination of the commutation constraints.
pub fn hom_space(x: &Bimodule, y: &Bimodule) -> Result<Vec<LinMap>, McgError> {
    x.same_context(y)?;
    let (dx, dy) = (x.dim(), y.dim());
    // unknown f[i][j] at index i*dx + j; constraint f A - B f = 0
    let mut e = Echelon::new(dx * dy);
    let pairs = x.left.iter().zip(&y.left).chain(x.right.iter().zip(&y.right));
    for (ax, by) in pairs {
        let arows = linmap::sparse_rows(&ax.transpose());
        let brows = linmap::sparse_rows(by);
        for i in 0..dy {
            for j in 0..dx {
                let mut row: Vec<(usize, CycScalar)> = Vec::new();
                // (f A)[i][j] = Σ_k f[i][k] A[k][j]
                for (k, a) in &arows[j] {
                    row.push((i * dx + k, a.clone()));
                }
                // (B f)[i][j] = Σ_k B[i][k] f[k][j]
                for (k, b) in &brows[i] {
                    row.push((k * dx + j, -b));
                }
                row.sort_by_key(|t| t.0);
                let mut merged: Vec<(usize, CycScalar)> = Vec::new();
                for (c, v) in row {
                    match merged.last_mut() {
                        Some((lc, lv)) if *lc == c => *lv += &v,
                        _ => merged.push((c, v)),
                    }
                }
                e.push(merged);
            }
        }
    }
    Ok(e.kernel()
        .into_iter()
        .map(|v| LinMap::from_fn(y.shape.clone(), x.shape.clone(), |i, j| v[i * dx + j].clone()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::drinfeld_double_cyclic;

    #[test]
    fn unit_hom_is_one_dimensional() {
        let rd = drinfeld_double_cyclic(2).unwrap().ribbon().unwrap();
        let u = unit(&rd.base);
        assert_eq!(hom_space(&u, &u).unwrap().len(), 1);
    }

    #[test]
    fn unit_is_neutral_for_tensor() {
        let rd = drinfeld_double_cyclic(2).unwrap().ribbon().unwrap();
        let f = coregular(&rd.base);
        let fu = tensor(&rd.base, &f, &unit(&rd.base)).unwrap();
        for a in 0..rd.n() {
            assert_eq!(fu.left[a], f.left[a]);
            assert_eq!(fu.right[a], f.right[a]);
        }
    }

    #[test]
    fn twist_of_coregular_is_trivial() {
        let rd = drinfeld_double_cyclic(3).unwrap().ribbon().unwrap();
        let f = coregular(&rd.base);
        assert_eq!(twist(&rd, &f), LinMap::identity(f.shape.clone()));
    }
}
