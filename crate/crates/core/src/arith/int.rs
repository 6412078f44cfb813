//! Integer helpers: CRT, primality, Kronecker symbols, modular square roots.

use num_bigint::{BigInt, BigUint, ToBigInt};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision signed integer used for every scalar in the system.
pub type Integer = BigInt;

/// Chinese remaindering. Returns the unique `0 <= y < prod(moduli)` with
/// `y = residues[i] mod moduli[i]`.
pub fn crt(moduli: &[Integer], residues: &[Integer]) -> Result<Integer> {
    if moduli.len() != residues.len() {
        return Err(Error::Unsupported("crt: length mismatch".into()));
    }
    let mut m = Integer::one();
    let mut y = Integer::zero();
    for (mi, ri) in moduli.iter().zip(residues) {
        if mi <= &Integer::zero() {
            return Err(Error::ModuliNotCoprime);
        }
        let g = m.extended_gcd(mi);
        if !g.gcd.is_one() {
            return Err(Error::ModuliNotCoprime);
        }
        // y' = y + m * ((r - y) * m^{-1} mod mi)
        let t = ((ri - &y) * &g.x).mod_floor(mi);
        y += &m * t;
        m *= mi;
        y = y.mod_floor(&m);
    }
    Ok(y)
}

/// CRT followed by the symmetric lift into `(-M/2, M/2]`.
pub fn crt_symmetric(moduli: &[Integer], residues: &[Integer]) -> Result<Integer> {
    let y = crt(moduli, residues)?;
    let m: Integer = moduli.iter().product();
    if &y * 2 > m {
        Ok(y - m)
    } else {
        Ok(y)
    }
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn powmod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for big integers: exact for 64-bit values, strong probable
/// prime test to 32 fixed bases beyond that.
pub fn is_prime(n: &Integer) -> bool {
    if n.is_negative() {
        return false;
    }
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    let n = n.to_biguint().unwrap();
    let one = BigUint::one();
    let nm1 = &n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let small = small_primes(140);
    'witness: for a in small.iter().take(32) {
        let a = BigUint::from(*a);
        if (&n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, &n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % &n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes `<= bound` by a plain sieve.
pub fn small_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let n = bound as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut k = i * i;
            while k <= n {
                sieve[k] = false;
                k += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Trial-division factorisation, returns (prime, exponent) pairs ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Kronecker symbol (a|n) for any integer a and n.
pub fn kronecker(a: &Integer, n: &Integer) -> i32 {
    let mut a = a.clone();
    let mut n = n.clone();
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut res = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            res = -res;
        }
    }
    let two = Integer::from(2);
    let mut v = 0u32;
    while n.is_even() {
        n /= &two;
        v += 1;
    }
    if v > 0 {
        if a.is_even() {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.mod_floor(&Integer::from(8)).to_u32().unwrap();
            if r == 3 || r == 5 {
                res = -res;
            }
        }
    }
    // Jacobi symbol for odd positive n.
    a = a.mod_floor(&n);
    while !a.is_zero() {
        while a.is_even() {
            a /= &two;
            let r = n.mod_floor(&Integer::from(8)).to_u32().unwrap();
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&Integer::from(4)) == Integer::from(3)
            && n.mod_floor(&Integer::from(4)) == Integer::from(3)
        {
            res = -res;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        res
    } else {
        0
    }
}

pub fn kronecker_i64(a: i64, n: u64) -> i32 {
    kronecker(&Integer::from(a), &Integer::from(n))
}

/// Square root of `a` modulo an odd prime `p` (Tonelli-Shanks).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if powmod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(powmod_u64(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powmod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod_u64(z, q, p);
    let mut t = powmod_u64(a, q, p);
    let mut r = powmod_u64(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r)
}

/// Integer square root (floor) of a non-negative integer.
pub fn isqrt(n: &Integer) -> Integer {
    n.sqrt()
}

pub fn to_u64(n: &Integer) -> Option<u64> {
    n.to_u64()
}

pub fn big(v: i64) -> Integer {
    Integer::from(v)
}

pub fn biguint_to_int(v: &BigUint) -> Integer {
    v.to_bigint().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crt_examples() {
        let r = crt(&[big(83), big(173)], &[big(15), big(2)]).unwrap();
        assert_eq!(r, big(12631));
        let r = crt(&[big(5), big(7)], &[big(3), big(4)]).unwrap();
        assert_eq!(r, big(18));
        assert_eq!(
            crt(&[big(6), big(4)], &[big(1), big(1)]),
            Err(Error::ModuliNotCoprime)
        );
    }

    #[test]
    fn crt_matches_search() {
        for a in 0..5 {
            for b in 0..7 {
                let y = (0..35).find(|y| y % 5 == a && y % 7 == b).unwrap();
                assert_eq!(crt(&[big(5), big(7)], &[big(a), big(b)]).unwrap(), big(y));
            }
        }
    }

    #[test]
    fn primality() {
        let sieve = small_primes(10_000);
        for n in 0..10_000u64 {
            assert_eq!(is_prime_u64(n), sieve.binary_search(&n).is_ok(), "{n}");
        }
        assert!(is_prime(&"170141183460469231731687303715884105727".parse().unwrap()));
        assert!(!is_prime(&"170141183460469231731687303715884105729".parse().unwrap()));
    }

    #[test]
    fn kronecker_matches_euler() {
        for p in small_primes(200).into_iter().skip(1) {
            for a in -300i64..300 {
                let e = powmod_u64(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let want = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
                assert_eq!(kronecker_i64(a, p), want);
            }
        }
        assert_eq!(kronecker_i64(-251, 2), -1);
        assert_eq!(kronecker_i64(-251, 3), 1);
    }

    #[test]
    fn tonelli() {
        for p in [3u64, 5, 13, 17, 83, 97, 173, 257, 65537] {
            for a in 0..p.min(500) {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(mulmod(r, r, p), a);
                } else {
                    assert_eq!(powmod_u64(a, (p - 1) / 2, p), p - 1);
                }
            }
        }
    }
}
