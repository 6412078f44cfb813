//! Trapdoor group with infeasible inversion built from isogeny volcanoes
//! over RSA moduli, with the matching attacks and two applications.
//!
//! Everything here is a desk-scale functional model. Parameters are tiny
//! and every serialized artifact carries `demo_only: true`.

pub mod apps;
pub mod arith;
pub mod attacks;
pub mod classgroup;
pub mod curves;
pub mod error;
pub mod modpoly;
pub mod tgii;
pub mod volcano;

pub use error::{Error, Result};
