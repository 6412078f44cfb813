//! Textbook full-domain-hash RSA signatures for node certificates.
//!
//! Demo only: an 80-bit modulus, no padding beyond the hash.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer as _;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::arith::int::{biguint_to_int, is_prime};

/// A plain signature scheme.
pub trait Signer {
    fn sign(&self, msg: &[u8]) -> String;
}

pub trait Verifier {
    fn verify(&self, msg: &[u8], sig: &str) -> bool;
}

mod big {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdhPublicKey {
    #[serde(with = "big")]
    pub n: BigUint,
    #[serde(with = "big")]
    pub e: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdhSecretKey {
    #[serde(with = "big")]
    pub n: BigUint,
    #[serde(with = "big")]
    pub d: BigUint,
}

fn random_prime<R: Rng>(rng: &mut R, bits: u64) -> BigUint {
    loop {
        let mut c = rng.gen_biguint(bits);
        c.set_bit(bits - 1, true);
        c.set_bit(0, true);
        if is_prime(&biguint_to_int(&c)) {
            return c;
        }
    }
}

pub fn fdh_keygen<R: Rng>(rng: &mut R) -> (FdhPublicKey, FdhSecretKey) {
    let e = BigUint::from(65537u32);
    loop {
        let p = random_prime(rng, 40);
        let q = random_prime(rng, 40);
        if p == q {
            continue;
        }
        let phi = (&p - 1u32) * (&q - 1u32);
        let Some(d) = e.modinv(&phi) else { continue };
        let n = p * q;
        return (FdhPublicKey { n: n.clone(), e }, FdhSecretKey { n, d });
    }
}

fn hash_to_zn(n: &BigUint, msg: &[u8]) -> BigUint {
    let mut h = Shake256::default();
    h.update(b"tgii-fdh");
    h.update(msg);
    let mut out = vec![0u8; 2 * n.bits().div_ceil(8) as usize];
    h.finalize_xof().read(&mut out);
    BigUint::from_bytes_be(&out).mod_floor(n)
}

impl Signer for FdhSecretKey {
    fn sign(&self, msg: &[u8]) -> String {
        hash_to_zn(&self.n, msg).modpow(&self.d, &self.n).to_string()
    }
}

impl Verifier for FdhPublicKey {
    fn verify(&self, msg: &[u8], sig: &str) -> bool {
        let Ok(s) = sig.parse::<BigUint>() else {
            return false;
        };
        s < self.n && !s.is_one() && s.modpow(&self.e, &self.n) == hash_to_zn(&self.n, msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn sign_verify() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let (pk, sk) = fdh_keygen(&mut rng);
        let s = sk.sign(b"node 1");
        assert!(pk.verify(b"node 1", &s));
        assert!(!pk.verify(b"node 2", &s));
        assert!(!pk.verify(b"node 1", "12"));
        assert!(!pk.verify(b"node 1", "x"));
    }
}
