//! Root finding and factorisation over prime fields (Cantor-Zassenhaus).

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::int::is_prime_u64;
use super::poly::Poly;
use super::zn::Zn;
use crate::error::{Error, Result};

const DEFAULT_SEED: u64 = 0x5eed_f00d;

fn check_prime(f: &Poly) -> Result<()> {
    let p = f.ring().modulus();
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.into()));
    }
    Ok(())
}

fn pth_root(f: &Poly) -> Poly {
    let p = f.ring().modulus() as usize;
    let c = f.coeffs().iter().step_by(p).copied().collect();
    Poly::new(f.ring(), c)
}

/// Square-free decomposition: pairs (g, m) with f = prod g^m, g square-free.
pub fn squarefree(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let f = f.monic()?;
    let mut out = vec![];
    sqf_rec(&f, 1, &mut out)?;
    Ok(out)
}

fn sqf_rec(f: &Poly, mult: usize, out: &mut Vec<(Poly, usize)>) -> Result<()> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(());
    }
    let p = f.ring().modulus() as usize;
    let df = f.derivative();
    if df.is_zero() {
        return sqf_rec(&pth_root(f), mult * p, out);
    }
    let mut c = f.gcd(&df)?;
    let mut w = f.div_exact(&c)?;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c)?;
        let z = w.div_exact(&y)?;
        if !z.is_one() {
            out.push((z, i * mult));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w)?;
    }
    if !c.is_one() {
        sqf_rec(&pth_root(&c), mult * p, out)?;
    }
    Ok(())
}

fn random_poly(ring: Zn, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let p = ring.modulus();
    Poly::new(ring, (0..deg).map(|_| rng.gen_range(0..p)).collect())
}

/// Split a square-free product of irreducibles all of degree d.
fn equal_degree(g: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) -> Result<()> {
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.clone());
        return Ok(());
    }
    let ring = g.ring();
    let p = ring.modulus();
    loop {
        let a = random_poly(ring, n, rng);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = t.mulmod(&t, g)?;
                acc = acc.add(&t);
            }
            acc
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            a.powmod_big(&e, g)?.sub(&Poly::one(ring))
        };
        let h = g.gcd(&b)?;
        let hd = h.degree().unwrap_or(0);
        if hd > 0 && hd < n {
            equal_degree(&h, d, rng, out)?;
            equal_degree(&g.div_exact(&h)?, d, rng, out)?;
            return Ok(());
        }
    }
}

fn sort_canonical(v: &mut [(Poly, usize)]) {
    // linear factors come out in ascending root order
    let key = |f: &Poly| {
        let r = f.ring();
        (f.degree(), f.coeffs().iter().map(|&c| r.neg(c)).collect::<Vec<_>>())
    };
    v.sort_by(|a, b| (key(&a.0), a.1).cmp(&(key(&b.0), b.1)));
}

/// Full factorisation into monic irreducibles with multiplicity, sorted by
/// degree then coefficients.
pub fn factor_poly_fp(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    factor_poly_fp_seeded(f, DEFAULT_SEED)
}

pub fn factor_poly_fp_seeded(f: &Poly, seed: u64) -> Result<Vec<(Poly, usize)>> {
    check_prime(f)?;
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = f.ring();
    let p = ring.modulus();
    let x = Poly::x(ring);
    let mut out = vec![];
    for (g, m) in squarefree(f)? {
        let mut rest = g;
        let mut h = x.clone();
        let mut d = 0;
        while rest.degree().unwrap_or(0) > 0 {
            d += 1;
            if 2 * d > rest.degree().unwrap() {
                out.push((rest.clone(), m));
                break;
            }
            h = h.powmod(p, &rest)?;
            let gd = rest.gcd(&h.sub(&x))?;
            if !gd.is_one() {
                let mut parts = vec![];
                equal_degree(&gd, d, &mut rng, &mut parts)?;
                out.extend(parts.into_iter().map(|q| (q, m)));
                rest = rest.div_exact(&gd)?;
                h = h.rem(&rest)?;
            }
        }
    }
    sort_canonical(&mut out);
    Ok(out)
}

/// All roots in F_p, repeated according to multiplicity, ascending.
pub fn poly_roots_fp(f: &Poly) -> Result<Vec<u64>> {
    poly_roots_fp_seeded(f, DEFAULT_SEED)
}

pub fn poly_roots_fp_seeded(f: &Poly, seed: u64) -> Result<Vec<u64>> {
    check_prime(f)?;
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = f.ring();
    let p = ring.modulus();
    let x = Poly::x(ring);
    let mut roots = vec![];
    if f.degree() == Some(0) {
        return Ok(roots);
    }
    for (g, m) in squarefree(f)? {
        let xp = x.powmod(p, &g)?;
        let lin = g.gcd(&xp.sub(&x))?;
        if lin.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mut parts = vec![];
        equal_degree(&lin, 1, &mut rng, &mut parts)?;
        for q in parts {
            let r = ring.neg(q.coeff(0));
            roots.extend(std::iter::repeat(r).take(m));
        }
    }
    roots.sort_unstable();
    Ok(roots)
}

/// Distinct roots only.
pub fn distinct_roots_fp(f: &Poly) -> Result<Vec<u64>> {
    let mut r = poly_roots_fp(f)?;
    r.dedup();
    Ok(r)
}
