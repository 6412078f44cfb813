//! The residue ring Z/nZ for moduli below 2^63.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Z/nZ with elements stored canonically in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Zn {
    n: u64,
}

impl Zn {
    pub const MAX_MODULUS: u64 = 1 << 63;

    pub fn new(n: u64) -> Result<Self> {
        if n < 2 || n >= Self::MAX_MODULUS {
            return Err(Error::ModulusOutOfRange);
        }
        Ok(Zn { n })
    }

    pub fn from_big(n: &BigInt) -> Result<Self> {
        Self::new(n.to_u64().ok_or(Error::ModulusOutOfRange)?)
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn modulus_big(&self) -> BigInt {
        BigInt::from(self.n)
    }

    #[inline]
    pub fn elem(&self, v: u64) -> u64 {
        v % self.n
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.n as i64) as u64
    }

    pub fn from_big_elem(&self, v: &BigInt) -> u64 {
        let n = BigInt::from(self.n);
        let r = ((v % &n) + &n) % &n;
        r.to_u64().unwrap()
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.n {
            s - self.n
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.n - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.n - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.n <= u32::MAX as u64 {
            a * b % self.n
        } else {
            ((a as u128 * b as u128) % self.n as u128) as u64
        }
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.n;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn pow_big(&self, b: u64, e: &num_bigint::BigUint) -> u64 {
        let mut r = 1 % self.n;
        for i in (0..e.bits()).rev() {
            r = self.mul(r, r);
            if e.bit(i) {
                r = self.mul(r, b);
            }
        }
        r
    }

    /// Inverse, or the reason it does not exist. A residue sharing a proper
    /// factor with the modulus yields `FactorFound`.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.n;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.n as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 != 1 {
            return Err(Error::FactorFound(BigInt::from(r0 as u64)));
        }
        Ok(s0.rem_euclid(self.n as i128) as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_factor() {
        let r = Zn::new(14359).unwrap();
        for a in 1..500 {
            match r.inv(a) {
                Ok(b) => assert_eq!(r.mul(a, b), 1),
                Err(Error::FactorFound(d)) => {
                    assert!(d == BigInt::from(83) || d == BigInt::from(173))
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert_eq!(r.inv(83), Err(Error::FactorFound(BigInt::from(83))));
        assert_eq!(r.inv(0), Err(Error::DivisionByZero));
    }

    #[test]
    fn large_modulus() {
        let p = (1u64 << 61) - 1;
        let r = Zn::new(p).unwrap();
        let a = 1234567890123456789 % p;
        assert_eq!(r.mul(a, r.inv(a).unwrap()), 1);
        assert_eq!(r.pow(a, p - 1), 1);
    }
}
