//! Classical modular polynomials: shipped tables, parsing and evaluation.

pub mod builtin;
pub mod table;

pub use builtin::{available, builtin, builtin_app, reduced, APP_MODULUS};
pub use table::{ModularPolynomialTable, ReducedTable};

use crate::arith::{Poly, Zn};
use crate::error::Result;

/// Phi_m(j, Y) over `ring`.
pub fn eval_partial(table: &ModularPolynomialTable, j: u64, ring: Zn) -> Result<Poly> {
    Ok(table.reduce(ring)?.eval_x(j))
}
