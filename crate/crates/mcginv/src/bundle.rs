//! Algebra bundle JSON.
//!
//! ```text
//! {"name", "order", "dim",
//!  "product":   [[i, j, k, c], ..]   e_i e_j ∋ c e_k
//!  "coproduct": [[i, j, k, c], ..]   Δ(e_i) ∋ c e_j ⊗ e_k
//!  "unit", "counit": vectors, "antipode": matrix,
//!  "R": optional vector in H⊗H, "ribbon": optional vector in H}
//! ```

use std::path::Path;

use cyclo::CycScalar;
use linmap::LinMap;
use serde::{Deserialize, Serialize};

use crate::examples::Example;
use crate::hopf::{Elem, HopfData};
use crate::ribbon::RibbonData;
use crate::McgError;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Bundle {
    pub name: String,
    pub order: u32,
    pub dim: usize,
    pub product: Vec<(usize, usize, usize, CycScalar)>,
    pub coproduct: Vec<(usize, usize, usize, CycScalar)>,
    pub unit: Vec<CycScalar>,
    pub counit: Vec<CycScalar>,
    pub antipode: LinMap,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Vec<CycScalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ribbon: Option<Vec<CycScalar>>,
}

fn check_len(what: &str, v: &[CycScalar], len: usize) -> Result<(), McgError> {
    if v.len() != len {
        return Err(McgError::Format(format!("{what} has {} entries, expected {len}", v.len())));
    }
    Ok(())
}

impl Bundle {
    pub fn from_hopf(h: &HopfData, r: Option<&Elem>, v: Option<&Elem>) -> Bundle {
        let n = h.n;
        let mut product = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in h.prod_basis(i, j) {
                    product.push((i, j, *k, c.clone()));
                }
            }
        }
        let mut coproduct = Vec::new();
        for i in 0..n {
            for (j, k, c) in h.cop_basis(i) {
                coproduct.push((i, *j, *k, c.clone()));
            }
        }
        Bundle {
            name: h.name.clone(),
            order: h.order,
            dim: n,
            product,
            coproduct,
            unit: h.eta.column(0),
            counit: (0..n).map(|i| h.eps.get(0, i)).collect(),
            antipode: h.s.clone(),
            r: r.cloned(),
            ribbon: v.cloned(),
        }
    }

    pub fn from_example(ex: &Example) -> Bundle {
        Bundle::from_hopf(&ex.hopf, Some(&ex.r), ex.v.as_ref())
    }

    pub fn hopf(&self) -> Result<HopfData, McgError> {
        let n = self.dim;
        check_len("unit", &self.unit, n)?;
        check_len("counit", &self.counit, n)?;
        if self.antipode.rows() != n || self.antipode.cols() != n {
            return Err(McgError::Format(format!("antipode must be {n}x{n}")));
        }
        let bad = |t: &[usize]| t.iter().any(|&i| i >= n);
        if let Some(p) = self.product.iter().find(|p| bad(&[p.0, p.1, p.2])) {
            return Err(McgError::Format(format!("product entry ({}, {}, {}) out of range", p.0, p.1, p.2)));
        }
        if let Some(p) = self.coproduct.iter().find(|p| bad(&[p.0, p.1, p.2])) {
            return Err(McgError::Format(format!("coproduct entry ({}, {}, {}) out of range", p.0, p.1, p.2)));
        }
        let s = self.antipode.clone();
        crate::hopf::from_tables(
            &self.name,
            self.order,
            n,
            |i, j| self.product.iter().filter(|p| p.0 == i && p.1 == j).map(|p| (p.2, p.3.clone())).collect(),
            |i| self.coproduct.iter().filter(|p| p.0 == i).map(|p| (p.1, p.2, p.3.clone())).collect(),
            self.unit.clone(),
            self.counit.clone(),
            |i| s.col(i).map(|(k, c)| (k, c.clone())).collect(),
        )
    }

    /// Ribbon data; requires `"R"`.
    pub fn ribbon(&self) -> Result<RibbonData, McgError> {
        let h = self.hopf()?;
        let r = self.r.clone().ok_or_else(|| McgError::Format("bundle has no \"R\"".into()))?;
        check_len("R", &r, self.dim * self.dim)?;
        if let Some(v) = &self.ribbon {
            check_len("ribbon", v, self.dim)?;
        }
        RibbonData::new(h, r, self.ribbon.clone())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Bundle, McgError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Reads a matrix file (automorphisms and the like).
pub fn load_matrix(path: impl AsRef<Path>) -> Result<LinMap, McgError> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::drinfeld_double_cyclic;

    #[test]
    fn round_trip_preserves_structure_maps() {
        let ex = drinfeld_double_cyclic(3).unwrap();
        let b = Bundle::from_example(&ex);
        let back: Bundle = serde_json::from_str(&b.to_json_string()).unwrap();
        let h = back.hopf().unwrap();
        assert_eq!(h.m, ex.hopf.m);
        assert_eq!(h.delta, ex.hopf.delta);
        assert_eq!(h.s, ex.hopf.s);
        assert_eq!(back.r.as_ref(), Some(&ex.r));
    }

    #[test]
    fn out_of_range_product_entry_is_a_format_error() {
        let mut b = Bundle::from_example(&drinfeld_double_cyclic(2).unwrap());
        b.product.push((0, 0, 7, CycScalar::int(1)));
        assert!(matches!(b.hopf(), Err(McgError::Format(_))));
    }
}
