//! Trapdoor group with infeasible inversion over Z/NZ.

pub mod action;
pub mod encoding;
pub mod params;
pub mod serial;

pub use action::{crt2, Side};
pub use encoding::{
    common_gcd, comp, comp_with_ladders, convert, gcd_op, gcd_op_euclid, partial_convert, random_sam, sample_ladder, trap_sam, trap_sam_with,
    ComposableEncoding, Ladder, SampleOpts,
};
pub use params::{gen, GenConfig, PrimeRegistry, PublicParams, Trapdoor};
pub use serial::{from_document, to_document};
