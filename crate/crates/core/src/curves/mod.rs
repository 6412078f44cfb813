//! Elliptic curves over Z/nZ: group law, point counting, division
//! polynomials, kernels, Velu isogenies and Elkies kernels.

pub mod curve;
pub mod divpoly;
pub mod elkies;
pub mod isogeny;

pub use curve::{count_points, curve_from_j, j_invariant, trace, Curve, Point};
pub use divpoly::{division_polynomial, DivPolys};
pub use isogeny::{frobenius_eigenvalue, kernel_polynomials, velu, ExplicitIsogeny, KernelPoly};
pub use elkies::{elkies_kernel, kernel_poly_mod_n};
