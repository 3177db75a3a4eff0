//! Exact arithmetic in cyclotomic fields `Q(zeta_M)`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^(phi(M)-1)` and
//! reduced modulo the M-th cyclotomic polynomial after every product, so equal
//! values always have equal coefficient vectors. Operands of different orders
//! are lifted to the lcm of the two orders.

mod field;
mod literal;
mod rat;
mod sqrt;

pub use field::{cyclotomic_poly, euler_phi, table, CycScalar, FieldTable};
pub use literal::ScalarLiteral;
pub use rat::{square_part, ParseRatError, Rat};
pub use sqrt::sqrt_in_cyclotomic;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("orders {0} and {1} differ and coercion is disabled")]
    OrderMismatch(u32, u32),
    #[error("order {to} is not a multiple of {from}")]
    NotAMultiple { from: u32, to: u32 },
    #[error("no square root of {value} up to order {max_order}")]
    NotFound { value: String, max_order: u32 },
    #[error("bad scalar literal: {0}")]
    BadLiteral(String),
}
