//! Exact linear maps between tensor-factored spaces.
//!
//! Everything is a [`LinMap`]: vectors are maps out of the ground field and
//! covectors maps into it. `f * g` is the composite `f ∘ g` and
//! [`LinMap::kron`] the tensor product, with the left factor as the most
//! significant index.

mod elim;
mod factored;
mod json;
mod map;
mod shape;

pub use elim::{annihilates, inverse, kernel_map, nullspace, rank, rank_bareiss, solve, sparse_rows, Echelon};
pub use factored::{FactoredOp, PlannedStage, Stage};
pub use map::{ColIter, LinMap};
pub use shape::SpaceShape;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("bad matrix: {0}")]
    Format(String),
}
