//! Dense univariate polynomials over Z/nZ, lowest degree first.

use std::fmt;

use num_bigint::BigUint;

use super::zn::Zn;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Zn,
    c: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({:?} mod {})", self.c, self.ring.modulus())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                1 if a == 1 => write!(f, "x")?,
                1 => write!(f, "{a}*x")?,
                _ if a == 1 => write!(f, "x^{i}")?,
                _ => write!(f, "{a}*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(ring: Zn, mut c: Vec<u64>) -> Self {
        for v in c.iter_mut() {
            *v = ring.elem(*v);
        }
        let mut p = Poly { ring, c };
        p.trim();
        p
    }

    pub fn from_i64(ring: Zn, c: &[i64]) -> Self {
        Poly::new(ring, c.iter().map(|&v| ring.from_i64(v)).collect())
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn zero(ring: Zn) -> Self {
        Poly { ring, c: vec![] }
    }

    pub fn one(ring: Zn) -> Self {
        Poly::constant(ring, 1)
    }

    pub fn constant(ring: Zn, a: u64) -> Self {
        Poly::new(ring, vec![a])
    }

    pub fn x(ring: Zn) -> Self {
        Poly::new(ring, vec![0, 1])
    }

    /// x - a
    pub fn linear(ring: Zn, a: u64) -> Self {
        Poly::new(ring, vec![ring.neg(ring.elem(a)), 1])
    }

    pub fn from_roots(ring: Zn, roots: &[u64]) -> Self {
        roots
            .iter()
            .fold(Poly::one(ring), |acc, &r| acc.mul(&Poly::linear(ring, r)))
    }

    pub fn ring(&self) -> Zn {
        self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lc() == 1
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let r = self.ring;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| r.add(self.coeff(i), o.coeff(i))).collect();
        Poly::new(r, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let r = self.ring;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| r.sub(self.coeff(i), o.coeff(i))).collect();
        Poly::new(r, c)
    }

    pub fn neg(&self) -> Poly {
        let r = self.ring;
        Poly::new(r, self.c.iter().map(|&a| r.neg(a)).collect())
    }

    pub fn scale(&self, k: u64) -> Poly {
        let r = self.ring;
        let k = r.elem(k);
        Poly::new(r, self.c.iter().map(|&a| r.mul(a, k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.ring);
        }
        let r = self.ring;
        let n = r.modulus();
        let len = self.c.len() + o.c.len() - 1;
        let mut out = vec![0u64; len];
        if n <= u32::MAX as u64 {
            // products fit in 64 bits; accumulate in u128 and reduce once
            let mut acc = vec![0u128; len];
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.c.iter().enumerate() {
                    acc[i + j] += (a * b) as u128;
                }
            }
            for (o, a) in out.iter_mut().zip(acc) {
                *o = (a % n as u128) as u64;
            }
        } else {
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.c.iter().enumerate() {
                    out[i + j] = r.add(out[i + j], r.mul(a, b));
                }
            }
        }
        Poly::new(r, out)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    /// x^k * self
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { ring: self.ring, c }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let r = self.ring;
        let x = r.elem(x);
        self.c.iter().rev().fold(0, |acc, &a| r.add(r.mul(acc, x), a))
    }

    pub fn derivative(&self) -> Poly {
        let r = self.ring;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| r.mul(a, r.elem(i as u64)))
            .collect();
        Poly::new(r, c)
    }

    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv = self.ring.inv(self.lc())?;
        Ok(self.scale(inv))
    }

    /// Euclidean division. Fails when the divisor's leading coefficient is
    /// not a unit; over a composite modulus that failure is a factor.
    pub fn divrem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let r = self.ring;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        if self.c.len() < d.c.len() {
            return Ok((Poly::zero(r), self.clone()));
        }
        let inv = r.inv(d.lc())?;
        let mut rem = self.c.clone();
        let mut q = vec![0u64; self.c.len() - dd];
        for i in (dd..rem.len()).rev() {
            let t = r.mul(rem[i], inv);
            q[i - dd] = t;
            if t == 0 {
                continue;
            }
            for (j, &b) in d.c.iter().enumerate() {
                let k = i - dd + j;
                rem[k] = r.sub(rem[k], r.mul(t, b));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(r, q), Poly::new(r, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.divrem(d)?.1)
    }

    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, rem) = self.divrem(d)?;
        if !rem.is_zero() {
            return Err(Error::Degenerate("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn mulmod(&self, o: &Poly, m: &Poly) -> Result<Poly> {
        self.mul(o).rem(m)
    }

    pub fn powmod(&self, e: u64, m: &Poly) -> Result<Poly> {
        self.powmod_big(&BigUint::from(e), m)
    }

    pub fn powmod_big(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let base = self.rem(m)?;
        let mut acc = Poly::one(self.ring).rem(m)?;
        for i in (0..e.bits()).rev() {
            acc = acc.mulmod(&acc, m)?;
            if e.bit(i) {
                acc = acc.mulmod(&base, m)?;
            }
        }
        Ok(acc)
    }

    /// Monic gcd by the Euclidean algorithm. Over Z/NZ any non-invertible
    /// leading coefficient surfaces as `FactorFound`.
    pub fn gcd(&self, o: &Poly) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s*self + t*o = g, g monic.
    pub fn xgcd(&self, o: &Poly) -> Result<(Poly, Poly, Poly)> {
        let ring = self.ring;
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Poly::one(ring), Poly::zero(ring));
        let (mut t0, mut t1) = (Poly::zero(ring), Poly::one(ring));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return Ok((r0, s0, t0));
        }
        let inv = ring.inv(r0.lc())?;
        Ok((r0.scale(inv), s0.scale(inv), t0.scale(inv)))
    }

    /// Inverse of self modulo m.
    pub fn invmod(&self, m: &Poly) -> Result<Poly> {
        let (g, s, _) = self.xgcd(m)?;
        if !g.is_one() {
            return Err(Error::DivisionByZero);
        }
        s.rem(m)
    }

    /// Reduce the coefficients into a quotient ring Z/mZ with m | n.
    pub fn reduce(&self, ring: Zn) -> Poly {
        Poly::new(ring, self.c.clone())
    }
}
