//! JSON scalar literals: `"p/q"` or `{"order": M, "coeffs": ["p/q", ...]}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{euler_phi, CycScalar};
use crate::rat::Rat;
use crate::CycError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarLiteral {
    Rational(String),
    Integer(i64),
    Cyclotomic { order: u32, coeffs: Vec<String> },
}

impl ScalarLiteral {
    pub fn to_scalar(&self) -> Result<CycScalar, CycError> {
        let rat = |s: &str| s.parse::<Rat>().map_err(|e| CycError::BadLiteral(e.to_string()));
        match self {
            ScalarLiteral::Rational(s) => Ok(CycScalar::from_rat(rat(s)?, 1)),
            ScalarLiteral::Integer(n) => Ok(CycScalar::int(*n)),
            ScalarLiteral::Cyclotomic { order, coeffs } => {
                if *order == 0 || coeffs.len() != euler_phi(*order) {
                    return Err(CycError::BadLiteral(format!(
                        "order {order} needs {} coefficients, got {}",
                        if *order == 0 { 0 } else { euler_phi(*order) },
                        coeffs.len()
                    )));
                }
                let c = coeffs.iter().map(|s| rat(s)).collect::<Result<Vec<_>, _>>()?;
                Ok(CycScalar::from_coeffs(*order, c))
            }
        }
    }

    pub fn from_scalar(s: &CycScalar) -> ScalarLiteral {
        match s.as_rat() {
            Some(r) => ScalarLiteral::Rational(r.to_string()),
            None => ScalarLiteral::Cyclotomic {
                order: s.order(),
                coeffs: s.coeffs().iter().map(|c| c.to_string()).collect(),
            },
        }
    }
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ScalarLiteral::from_scalar(self).serialize(ser)
    }
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let lit = ScalarLiteral::deserialize(de)?;
        lit.to_scalar().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_json() {
        let vals = [
            CycScalar::rat(-3, 7),
            &CycScalar::zeta(8) + &CycScalar::rat(1, 2),
            CycScalar::zeta(12),
        ];
        for v in vals {
            let j = serde_json::to_string(&v).unwrap();
            let back: CycScalar = serde_json::from_str(&j).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn parses_both_forms() {
        let a: CycScalar = serde_json::from_str("\"5/2\"").unwrap();
        assert_eq!(a, CycScalar::rat(5, 2));
        let b: CycScalar = serde_json::from_str(r#"{"order":4,"coeffs":["0","1"]}"#).unwrap();
        assert_eq!(b, CycScalar::zeta(4));
        assert!(serde_json::from_str::<CycScalar>(r#"{"order":4,"coeffs":["1"]}"#).is_err());
    }
}
