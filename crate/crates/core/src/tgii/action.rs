//! The class group action on the crater over one prime factor of N.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{distinct_roots_fp, Zn};
use crate::classgroup::forms::prime_form_b;
use crate::classgroup::Discriminant;
use crate::curves::curve::trace_with_sign;
use crate::curves::isogeny::frobenius_eigenvalue_with_trace;
use crate::curves::{curve_from_j, elkies_kernel, j_invariant, kernel_polynomials, velu, Curve};
use crate::error::{Error, Result};
use crate::modpoly::reduced;

/// Frobenius data for one prime factor: t^2 - 4p = u^2 D with t = |trace|.
/// `sign` picks the square root of D that the orientation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Side {
    pub p: u64,
    pub t: i64,
    pub u: u64,
    pub sign: i8,
}

impl Side {
    /// Eigenvalue of Frobenius on the kernel of (l, (-b + sqrt D)/2) for a
    /// curve of signed trace `te`. Twisting negates Frobenius, hence the
    /// factor sign(te).
    pub fn eigenvalue(&self, l: u64, b: i64, te: i64) -> u64 {
        let num = self.t as i128 + self.sign as i128 * self.u as i128 * b as i128;
        let mu = num / 2 * te.signum() as i128;
        mu.rem_euclid(l as i128) as u64
    }

    /// j -> [(l, dir * b_l, .)] * j for a split prime l not dividing u.
    pub fn step(&self, d: &Discriminant, j: u64, l: u64, dir: i8) -> Result<u64> {
        let r = Zn::new(self.p)?;
        let table = reduced(l, r)?;
        let roots = distinct_roots_fp(&table.eval_x(j))?;
        match roots.len() {
            0 => return Err(Error::NotOnSurface),
            1 => return Ok(roots[0]),
            _ => {}
        }
        let b = prime_form_b(d, l)? as i64 * dir as i64;
        let c = curve_from_j(j, r)?;
        let mut rng = ChaCha8Rng::seed_from_u64(j.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ l);
        let te = trace_with_sign(&c, self.t, &mut rng)?;
        let mu = self.eigenvalue(l, b, te);
        let mut hit = None;
        for &w in &roots {
            let ev = match elkies_kernel(&table, j, w) {
                Ok((_, _, k)) => frobenius_eigenvalue_with_trace(&c, l, &k, te)?,
                Err(Error::Degenerate(_)) => eigenvalue_by_factoring(&c, l, w, te)?,
                Err(e) => return Err(e),
            };
            if ev == mu {
                if hit.is_some() {
                    return Err(Error::InconsistentKernel);
                }
                hit = Some(w);
            }
        }
        hit.ok_or(Error::InconsistentKernel)
    }

    /// `steps` applications of `step`, returning the visited j's (without
    /// the start).
    pub fn walk(&self, d: &Discriminant, j: u64, l: u64, dir: i8, steps: usize) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(steps);
        let mut cur = j;
        for _ in 0..steps {
            cur = self.step(d, cur, l, dir)?;
            out.push(cur);
        }
        Ok(out)
    }
}

fn eigenvalue_by_factoring(c: &Curve, l: u64, w: u64, te: i64) -> Result<u64> {
    for k in kernel_polynomials(c, l)? {
        if j_invariant(&velu(c, &k)?.target)? == w {
            return frobenius_eigenvalue_with_trace(c, l, &k, te);
        }
    }
    Err(Error::NotIsogenous(l))
}

/// x mod p, y mod q -> z mod pq.
pub fn crt2(x: u64, p: u64, y: u64, q: u64) -> Result<u64> {
    let rq = Zn::new(q)?;
    let k = rq.mul(rq.sub(rq.elem(y), rq.elem(x % p)), rq.inv(p % q)?);
    Ok(x % p + p * k)
}
