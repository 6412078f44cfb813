//! Directed transitive signatures and broadcast encryption on top of the
//! encoding, with the generation-set policies that keep the parallelogram
//! attack inapplicable.

pub mod be;
pub mod dts;
pub mod fdh;

use std::collections::BTreeSet;

use rand::Rng;

use crate::attacks::relation_rank;
use crate::classgroup::IdealClass;
use crate::error::{Error, Result};
use crate::tgii::{ComposableEncoding, Trapdoor};

pub use be::{be_dec, be_derive_key, be_enc, be_gen, be_key, be_setup, BeCiphertext, BeMaster, BePublic, BeUserKey};
pub use dts::{
    dts_cert, dts_comp, dts_compress, dts_gen, dts_sign, dts_ver, dts_ver_compressed, CompressedSignature,
    CompressedVerdict, DtsMaster, DtsPublic, DtsSignature, NodeCert,
};
pub use fdh::{fdh_keygen, FdhPublicKey, FdhSecretKey, Signer, Verifier};

/// Exponent vector of an encoding over `primes` (list lengths).
pub fn exponent_vector(enc: &ComposableEncoding, primes: &[u64]) -> Vec<i64> {
    primes
        .iter()
        .map(|l| {
            enc.degrees
                .iter()
                .position(|d| d == l)
                .map_or(0, |i| enc.lists[i].len() as i64)
        })
        .collect()
}

/// For identity relations given as signed sums of encodings: the rank of
/// their exponent vectors and the number of distinct primes they touch.
/// A published set stays safe from relation-lattice recovery while the
/// rank is below the prime count.
pub fn relation_hygiene(relations: &[Vec<(i64, &ComposableEncoding)>]) -> (usize, usize) {
    let primes: Vec<u64> = relations
        .iter()
        .flatten()
        .flat_map(|(_, e)| e.degrees.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vectors: Vec<Vec<i64>> = relations
        .iter()
        .map(|rel| {
            let mut v = vec![0i64; primes.len()];
            for (sign, e) in rel {
                for (x, y) in v.iter_mut().zip(exponent_vector(e, &primes)) {
                    *x += sign * y;
                }
            }
            v
        })
        .collect();
    (relation_rank(&vectors), primes.len())
}

/// A random class that is neither the identity nor in `avoid`. Two node or
/// user secrets that coincide would publish a trivial (empty) encoding.
pub(crate) fn secret_class<R: Rng>(td: &Trapdoor, avoid: &[IdealClass], rng: &mut R) -> Result<IdealClass> {
    for _ in 0..1000 {
        let x = td.random_class(rng);
        if !x.is_identity() && !avoid.contains(&x) {
            return Ok(x);
        }
    }
    Err(Error::Unsupported("class group too small for this many distinct secrets".into()))
}
