//! Elkies' kernel polynomial from a root of the modular polynomial, using
//! only ring operations so that it runs over Z/NZ without the factorisation.

use super::curve::{curve_from_j, Curve};
use super::isogeny::KernelPoly;
use crate::arith::{Poly, Zn};
use crate::error::{Error, Result};
use crate::modpoly::{reduced, ReducedTable};

fn inv(r: Zn, v: u64, what: &str) -> Result<u64> {
    match r.inv(v) {
        Ok(x) => Ok(x),
        Err(Error::DivisionByZero) => Err(Error::Degenerate(format!("{what} vanishes"))),
        Err(e) => Err(e),
    }
}

/// Laurent coefficients c_1 .. c_n of the Weierstrass function of
/// y^2 = x^3 + ax + b: p(z) = z^-2 + sum c_k z^2k.
fn wp_coeffs(r: Zn, a: u64, b: u64, n: usize) -> Result<Vec<u64>> {
    let mut c = vec![0u64; n + 1];
    if n >= 1 {
        c[1] = r.mul(r.neg(a), inv(r, 5, "5")?);
    }
    if n >= 2 {
        c[2] = r.mul(r.neg(b), inv(r, 7, "7")?);
    }
    for k in 3..=n {
        let mut s = 0;
        for i in 1..=k - 2 {
            s = r.add(s, r.mul(c[i], c[k - 1 - i]));
        }
        let den = ((k - 2) * (2 * k + 3)) as u64;
        c[k] = r.mul(r.mul(3, s), inv(r, r.elem(den), "recurrence denominator")?);
    }
    Ok(c)
}

/// Kernel polynomial of the normalised l-isogeny E(j1) -> E(j2), together
/// with both curves. Any failed inversion over a composite ring surfaces as
/// `FactorFound`.
pub fn elkies_kernel(table: &ReducedTable, j1: u64, j2: u64) -> Result<(Curve, Curve, KernelPoly)> {
    let r = table.ring();
    let l = table.level();
    if l % 2 == 0 || l < 3 {
        return Err(Error::Unsupported(format!("Elkies kernel for l = {l}")));
    }
    let (j1, j2) = (r.elem(j1), r.elem(j2));
    if table.eval(j1, j2) != 0 {
        return Err(Error::NotIsogenous(l));
    }
    let e = curve_from_j(j1, r)?;
    curve_from_j(j2, r)?;
    let (a, b) = (e.a, e.b);
    let lr = r.elem(l);
    let e4 = r.mul(r.neg(r.elem(48)), a);
    let e6 = r.mul(r.elem(864), b);
    let jp = r.mul(r.neg(r.mul(e6, j1)), inv(r, e4, "E4")?);
    let (dx, dy) = table.partials(j1, j2);
    let (dxx, dxy, dyy) = table.second_partials(j1, j2);
    let jtp = r.mul(r.neg(r.mul(jp, dx)), inv(r, r.mul(lr, dy), "dPhi/dY")?);
    let j2m = r.sub(j2, r.elem(1728));
    let e4t = r.mul(r.mul(jtp, jtp), inv(r, r.mul(j2, j2m), "j2 (j2 - 1728)")?);
    let e6t = r.neg(r.mul(
        r.mul(r.mul(jtp, jtp), jtp),
        inv(r, r.mul(r.mul(j2, j2), j2m), "j2^2 (j2 - 1728)")?,
    ));
    let num = r.add(
        r.add(r.mul(r.mul(jp, jp), dxx), r.mul(r.mul(r.mul(2, lr), r.mul(jp, jtp)), dxy)),
        r.mul(r.mul(r.mul(lr, lr), r.mul(jtp, jtp)), dyy),
    );
    let big_j = r.neg(r.mul(num, inv(r, r.mul(jp, dx), "j' dPhi/dX")?));
    let inv_e4t = inv(r, e4t, "E4 of the codomain")?;
    let inv_e6t = inv(r, e6t, "E6 of the codomain")?;
    let inv_e6 = inv(r, e6, "E6")?;
    let inv_e4 = inv(r, e4, "E4")?;
    let t2 = r.sub(r.mul(r.mul(e4, e4), inv_e6), r.mul(lr, r.mul(r.mul(e4t, e4t), inv_e6t)));
    let t3 = r.sub(r.mul(e6, inv_e4), r.mul(lr, r.mul(e6t, inv_e4t)));
    let half = inv(r, 2, "2")?;
    let p1 = r.add(
        r.add(r.mul(r.mul(lr, half), big_j), r.mul(r.mul(lr, inv(r, 4, "4")?), t2)),
        r.mul(r.mul(lr, inv(r, 3, "3")?), t3),
    );
    let l2 = r.mul(lr, lr);
    let l4 = r.mul(l2, l2);
    let l6 = r.mul(l4, l2);
    let at = r.neg(r.mul(r.mul(l4, e4t), inv(r, 48, "48")?));
    let bt = r.mul(r.mul(l6, e6t), inv(r, 864, "864")?);
    let target = Curve::new(r, at, bt)?;

    let d = (l as usize - 1) / 2;
    let c = wp_coeffs(r, a, b, d)?;
    let ct = wp_coeffs(r, at, bt, d)?;
    // P_k with p^(2k) = P_k(p): P_0 = x, P_{k+1} = 4F P_k'' + (6x^2 + 2a) P_k'
    let rhs4 = e.rhs_poly().scale(4);
    let dp = Poly::new(r, vec![r.mul(2, a), 0, 6]);
    let mut pk = Poly::x(r);
    let mut s = vec![0u64; d + 1];
    s[0] = r.elem(d as u64);
    if d >= 1 {
        s[1] = r.mul(p1, half);
    }
    let mut fact = vec![1u64; 2 * d + 2];
    for i in 1..fact.len() {
        fact[i] = r.mul(fact[i - 1], r.elem(i as u64));
    }
    for k in 1..d {
        pk = rhs4.mul(&pk.derivative().derivative()).add(&dp.mul(&pk.derivative()));
        let mut acc = r.mul(r.mul(fact[2 * k], half), r.sub(ct[k], c[k]));
        for (m, sm) in s.iter().enumerate().take(k + 1) {
            acc = r.sub(acc, r.mul(pk.coeff(m), *sm));
        }
        s[k + 1] = r.mul(acc, inv(r, fact[2 * k + 1], "factorial")?);
    }
    // Newton's identities
    let mut el = vec![0u64; d + 1];
    el[0] = 1;
    for k in 1..=d {
        let mut acc = 0u64;
        for i in 1..=k {
            let t = r.mul(el[k - i], s[i]);
            acc = if i % 2 == 1 { r.add(acc, t) } else { r.sub(acc, t) };
        }
        el[k] = r.mul(acc, inv(r, r.elem(k as u64), "Newton denominator")?);
    }
    let mut h = vec![0u64; d + 1];
    for k in 0..=d {
        h[d - k] = if k % 2 == 0 { el[k] } else { r.neg(el[k]) };
    }
    Ok((e, target, KernelPoly::new(l, Poly::new(r, h))?))
}

/// Elkies kernel over Z/nZ using the shipped Phi_l tables.
pub fn kernel_poly_mod_n(n: u64, l: u64, j1: u64, j2: u64) -> Result<(Curve, Curve, KernelPoly)> {
    let r = Zn::new(n)?;
    let table = reduced(l, r)?;
    elkies_kernel(&table, j1, j2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::distinct_roots_fp;
    use crate::curves::{j_invariant, kernel_polynomials, velu};

    #[test]
    fn matches_factorisation_over_fp() {
        for p in [83u64, 101, 173, 1009] {
            let r = Zn::new(p).unwrap();
            for l in [3u64, 5, 7] {
                let table = reduced(l, r).unwrap();
                for j in 2..p.min(60) {
                    let Ok(c) = curve_from_j(j, r) else { continue };
                    let roots = distinct_roots_fp(&table.eval_x(j)).unwrap();
                    for k in kernel_polynomials(&c, l).unwrap() {
                        let iso = velu(&c, &k).unwrap();
                        let jt = j_invariant(&iso.target).unwrap();
                        assert!(roots.contains(&jt));
                        if table.eval_x(j).derivative().eval(jt) == 0 {
                            continue;
                        }
                        match elkies_kernel(&table, j, jt) {
                            Ok((_, target, kk)) => {
                                assert_eq!(kk, k, "p={p} l={l} j={j}");
                                assert_eq!(j_invariant(&target).unwrap(), jt);
                            }
                            Err(Error::ForbiddenJ) | Err(Error::Degenerate(_)) => {}
                            Err(e) => panic!("p={p} l={l} j={j}: {e:?}"),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn toy_mod_n() {
        let (_, _, k) = kernel_poly_mod_n(14359, 3, 12631, 7601).unwrap();
        assert_eq!(k.degree(), 1);
        assert_eq!(kernel_poly_mod_n(14359, 3, 12631, 4096).unwrap_err(), Error::NotIsogenous(3));
    }
}
