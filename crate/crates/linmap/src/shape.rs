use std::fmt;

use serde::{Deserialize, Serialize};

/// Dimensions of the tensor factors of a space, in order.
///
/// The empty list is the ground field.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SpaceShape(pub Vec<usize>);

impl SpaceShape {
    pub fn new(factors: &[usize]) -> SpaceShape {
        assert!(factors.iter().all(|&d| d > 0), "zero-dimensional factor");
        SpaceShape(factors.to_vec())
    }

    pub fn scalar() -> SpaceShape {
        SpaceShape(Vec::new())
    }

    pub fn flat(d: usize) -> SpaceShape {
        SpaceShape(vec![d])
    }

    pub fn dim(&self) -> usize {
        self.0.iter().product()
    }

    pub fn legs(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &SpaceShape) -> SpaceShape {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        SpaceShape(v)
    }

    pub fn pow(&self, k: usize) -> SpaceShape {
        SpaceShape(self.0.iter().copied().cycle().take(self.0.len() * k).collect())
    }

    /// Product of the dimensions of legs `a..b`.
    pub fn span(&self, a: usize, b: usize) -> usize {
        self.0[a..b].iter().product()
    }
}

impl From<Vec<usize>> for SpaceShape {
    fn from(v: Vec<usize>) -> Self {
        SpaceShape(v)
    }
}

impl From<&[usize]> for SpaceShape {
    fn from(v: &[usize]) -> Self {
        SpaceShape(v.to_vec())
    }
}

impl fmt::Debug for SpaceShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SpaceShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "k");
        }
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}
