//! The coregular bimodule `F = H*` as a commutative symmetric Frobenius
//! algebra in `H`-bimodules, and its twists `F^ω`.
//!
//! ```text
//! m_F(ξ⊗ζ)(y) = ξ(y2) ζ(y1)     η_F = ε
//! ε_F(ξ) = ξ(Λ)                  Δ_F(ξ) = (m_F⊗id)(ξ ⊗ C)
//! ```
//!
//! where `C` is the copairing inverse to the form `κ = ε_F∘m_F`. In closed
//! form `C(a⊗b) = λ(S(b) a)`; a test checks the two agree.
//!
//! The form is symmetric up to the pivot: its Gram matrix equals the
//! transpose composed with `ξ ↦ t⁻¹·ξ·t⁻¹`. With `t = 1` this is plain symmetry.

use cyclo::CycScalar;
use linmap::{inverse, LinMap, SpaceShape};

use crate::bimod::{braiding, coregular, tensor, twist, verify_bimodule, Bimodule};
use crate::report::Report;
use crate::ribbon::{verify_ribbon_automorphism, RibbonData};
use crate::McgError;

#[derive(Clone, Debug)]
pub struct FrobeniusF {
    pub bimod: Bimodule,
    pub m: LinMap,
    pub eta: LinMap,
    pub delta: LinMap,
    pub eps: LinMap,
    pub omega: Option<LinMap>,
}

/// `m_F` as a map `F ⊗ F -> F`.
pub fn coregular_product(rd: &RibbonData) -> LinMap {
    let h = &rd.base;
    let n = h.n;
    let mut t = Vec::new();
    for y in 0..n {
        for (a, b, c) in h.cop_basis(y) {
            // ξ = e^b, ζ = e^a
            t.push((y, b * n + a, c.clone()));
        }
    }
    LinMap::from_triplets(h.h(), h.hh(), t)
}

impl FrobeniusF {
    /// Builds `F`, or `F^ω` when an automorphism is given.
    pub fn build(rd: &RibbonData, omega: Option<&LinMap>) -> Result<FrobeniusF, McgError> {
        let h = &rd.base;
        let n = h.n;
        let mut bimod = coregular(h);
        if let Some(w) = omega {
            let rep = verify_ribbon_automorphism(rd, w)?;
            if !rep.passed() {
                return Err(McgError::AutomorphismRejected(
                    rep.first_failure().map_or(String::new(), |c| c.name.clone()),
                ));
            }
            let right = (0..n).map(|a| bimod.act_right(&w.column(a))).collect();
            bimod = Bimodule { name: "F^ω".into(), right, ..bimod };
        }
        let m = coregular_product(rd);
        let eta = LinMap::vector(h.h(), (0..n).map(|i| h.eps.get(0, i)).collect());
        let eps = LinMap::covector(h.h(), rd.big_lambda.clone());
        let form = &(&eps * &m).reshape(SpaceShape::scalar(), SpaceShape::flat(n * n))?;
        let g = LinMap::from_fn(SpaceShape::flat(n), SpaceShape::flat(n), |i, j| form.get(0, i * n + j));
        let c = inverse(&g).map_err(|_| McgError::Singular("Frobenius form of F".into()))?;
        let copair = LinMap::vector(h.hh(), (0..n * n).map(|ij| c.get(ij / n, ij % n)).collect());
        // Δ(ξ) = (m ⊗ id)(ξ ⊗ C)
        let id = LinMap::identity(h.h());
        let delta = &m.kron(&id) * &id.kron(&copair);
        let delta = delta.reshape(h.hh(), h.h())?;
        Ok(FrobeniusF { bimod, m, eta, delta, eps, omega: omega.cloned() })
    }

    /// Gram matrix of `κ(ξ, ζ) = ε_F(m_F(ξ⊗ζ))`.
    pub fn form(&self) -> LinMap {
        let n = self.dim();
        let flat = (&self.eps * &self.m).reshape(SpaceShape::scalar(), SpaceShape::flat(n * n)).unwrap();
        LinMap::from_fn(SpaceShape::flat(n), SpaceShape::flat(n), |i, j| flat.get(0, i * n + j))
    }

    pub fn dim(&self) -> usize {
        self.bimod.dim()
    }

    /// `m^{(l)}: F^{⊗l} -> F`, left nested.
    pub fn multi_product(&self, l: usize) -> LinMap {
        match l {
            0 => self.eta.clone(),
            1 => LinMap::identity(self.bimod.shape.clone()),
            _ => {
                let mut acc = self.m.clone();
                for _ in 2..l {
                    acc = &self.m * &acc.kron(&LinMap::identity(self.bimod.shape.clone()));
                }
                acc
            }
        }
    }

    /// `Δ^{(l)}: F -> F^{⊗l}`.
    pub fn multi_coproduct(&self, l: usize) -> LinMap {
        match l {
            0 => self.eps.clone(),
            1 => LinMap::identity(self.bimod.shape.clone()),
            _ => {
                let mut acc = self.delta.clone();
                for _ in 2..l {
                    acc = &acc.kron(&LinMap::identity(self.bimod.shape.clone())) * &self.delta;
                }
                acc
            }
        }
    }

    /// Specialness scalar: `Some(c)` when `m∘Δ = c·id`.
    pub fn special_scalar(&self) -> Option<CycScalar> {
        (&self.m * &self.delta).ratio_to(&LinMap::identity(self.bimod.shape.clone()))
    }

    /// Algebra, coalgebra, Frobenius, commutativity, symmetry, trivial twist
    /// and intertwiner checks.
    pub fn verify(&self, rd: &RibbonData) -> Report {
        let h = &rd.base;
        let mut rep = Report::new(format!("Frobenius structure of {}", self.bimod.name));
        rep.merge("bimodule", verify_bimodule(h, &self.bimod));
        let id = LinMap::identity(self.bimod.shape.clone());
        let (m, d, eta, eps) = (&self.m, &self.delta, &self.eta, &self.eps);
        rep.eq("associativity", &(m * &m.kron(&id)), &(m * &id.kron(m)));
        rep.eq("left unit", &(m * &eta.kron(&id)), &id);
        rep.eq("right unit", &(m * &id.kron(eta)), &id);
        rep.eq("coassociativity", &(&d.kron(&id) * d), &(&id.kron(d) * d));
        rep.eq("left counit", &(&eps.kron(&id) * d), &id);
        rep.eq("right counit", &(&id.kron(eps) * d), &id);
        let dm = d * m;
        rep.eq("Frobenius property, left", &dm, &(&m.kron(&id) * &id.kron(d)));
        rep.eq("Frobenius property, right", &dm, &(&id.kron(m) * &d.kron(&id)));
        let ff = tensor(h, &self.bimod, &self.bimod).unwrap();
        let c = braiding(rd, &self.bimod, &self.bimod, false).unwrap();
        rep.eq("commutative", &(m * &c), m);
        rep.eq("cocommutative", &(&c * d), d);
        let g = self.form();
        let p = &self.bimod.act_left(&rd.tinv) * &self.bimod.act_right(&rd.tinv);
        rep.eq("symmetric form", &g, &(&p * &g.transpose()));
        rep.eq("trivial twist", &twist(rd, &self.bimod), &id);
        let unit = crate::bimod::unit(h);
        rep.flag("product intertwines", ff.is_intertwiner(&self.bimod, m), None);
        rep.flag("coproduct intertwines", self.bimod.is_intertwiner(&ff, d), None);
        rep.flag("unit intertwines", unit.is_intertwiner(&self.bimod, eta), None);
        rep.flag("counit intertwines", self.bimod.is_intertwiner(&unit, eps), None);
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::drinfeld_double_cyclic;

    #[test]
    fn multi_maps_low_orders() {
        let rd = drinfeld_double_cyclic(2).unwrap().ribbon().unwrap();
        let f = FrobeniusF::build(&rd, None).unwrap();
        assert_eq!(f.multi_product(0), f.eta);
        assert_eq!(f.multi_product(1), LinMap::id(4));
        assert_eq!(f.multi_coproduct(0), f.eps);
        let id = LinMap::id(4);
        let m3 = f.multi_product(3);
        assert_eq!(m3, &f.m * &id.kron(&f.m));
        let d2 = f.multi_coproduct(2);
        assert_eq!(&f.eps.kron(&id) * &d2, id);
    }
}
