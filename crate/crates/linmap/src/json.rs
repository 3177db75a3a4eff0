//! Matrix JSON: `{"dom": [..], "cod": [..], "entries": [[row, col, scalar], ..]}`
//! or the same with `"dense": [[..], ..]` given as rows.

use cyclo::CycScalar;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::map::LinMap;
use crate::shape::SpaceShape;
use crate::LinError;

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dom: SpaceShape,
    cod: SpaceShape,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    entries: Option<Vec<(usize, usize, CycScalar)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dense: Option<Vec<Vec<CycScalar>>>,
}

impl LinMap {
    fn to_json_repr(&self) -> MatrixJson {
        MatrixJson {
            dom: self.dom().clone(),
            cod: self.cod().clone(),
            entries: Some(self.triplets().map(|(i, j, x)| (i, j, x.clone())).collect()),
            dense: None,
        }
    }

    fn from_json_repr(m: MatrixJson) -> Result<LinMap, LinError> {
        let (rows, cols) = (m.cod.dim(), m.dom.dim());
        match (m.entries, m.dense) {
            (Some(e), None) => {
                if let Some((i, j, _)) = e.iter().find(|(i, j, _)| *i >= rows || *j >= cols) {
                    return Err(LinError::Format(format!("entry ({i}, {j}) outside {rows}x{cols}")));
                }
                Ok(LinMap::from_triplets(m.cod, m.dom, e))
            }
            (None, Some(d)) => {
                if d.len() != rows || d.iter().any(|r| r.len() != cols) {
                    return Err(LinError::Format(format!("dense block is not {rows}x{cols}")));
                }
                Ok(LinMap::from_rows(m.cod, m.dom, d))
            }
            _ => Err(LinError::Format("exactly one of \"entries\" and \"dense\" is required".into())),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_repr()).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<LinMap, LinError> {
        let m: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| LinError::Format(e.to_string()))?;
        LinMap::from_json_repr(m)
    }
}

impl Serialize for LinMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<LinMap, D::Error> {
        let m = MatrixJson::deserialize(d)?;
        LinMap::from_json_repr(m).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_and_dense_forms_agree() {
        let sparse: LinMap = serde_json::from_str(
            r#"{"dom": [2], "cod": [2], "entries": [[0, 0, "1"], [1, 0, {"order": 3, "coeffs": ["0", "1"]}], [1, 1, "1/2"]]}"#,
        )
        .unwrap();
        let dense: LinMap = serde_json::from_str(
            r#"{"dom": [2], "cod": [2], "dense": [["1", "0"], [{"order": 3, "coeffs": ["0", "1"]}, "1/2"]]}"#,
        )
        .unwrap();
        assert_eq!(sparse, dense);
        let back: LinMap = serde_json::from_value(sparse.to_json()).unwrap();
        assert_eq!(back, dense);
    }

    #[test]
    fn out_of_range_entry_rejected() {
        let r: Result<LinMap, _> = serde_json::from_str(r#"{"dom": [1], "cod": [1], "entries": [[1, 0, "1"]]}"#);
        assert!(r.is_err());
    }
}
