//! Integer, residue-ring, polynomial and lattice arithmetic.

pub mod fp;
pub mod int;
pub mod lattice;
pub mod poly;
pub mod zn;

pub use fp::{distinct_roots_fp, factor_poly_fp, poly_roots_fp};
pub use int::{crt, is_prime, is_prime_u64, kronecker, Integer};
pub use lattice::{gauss_sample_coset, lll, IntMatrix};
pub use poly::Poly;
pub use zn::Zn;

/// Monic gcd of two polynomials over Z/nZ; `FactorFound` when the Euclidean
/// algorithm hits a non-invertible leading coefficient.
pub fn poly_gcd_mod_n(f: &Poly, g: &Poly) -> crate::error::Result<Poly> {
    f.gcd(g)
}
