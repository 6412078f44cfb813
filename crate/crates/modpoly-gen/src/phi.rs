//! Phi_l mod m for prime l, from q-expansions and power sums.
//!
//! The l+1 roots of Phi_l(X, j(q)) are j(q^l) and j(zeta^k q^(1/l)). The
//! power sums of the last l roots are l * U_l(j^m), which only needs the
//! coefficients of j^m at multiples of l. Newton's identities give their
//! elementary symmetric functions, multiplying by (X - j(q^l)) gives the
//! coefficients of Phi_l as q-series with poles of order at most l+1, and
//! those are rewritten as polynomials in j by peeling off leading poles.

use crate::series::{Fm, Laurent};

/// Coefficient matrix c[a][b] of X^a Y^b, reduced mod f.m.
/// Every prime factor of f.m must exceed l + 1.
pub fn phi_prime_mod(l: usize, f: Fm) -> Vec<Vec<u64>> {
    let li = l as i64;
    let top = li;
    let len = l * l + l + 2;
    let qj = f.qj(len);
    let mut pw: Vec<Vec<u64>> = Vec::with_capacity(l + 2);
    pw.push({
        let mut v = vec![0u64; len];
        v[0] = 1;
        v
    });
    for m in 1..=l {
        let next = f.mul_trunc(&pw[m - 1], &qj, len);
        pw.push(next);
    }
    pw.push(f.mul_trunc(&pw[l], &qj, l + 3));
    // coefficient of q^n in j^m
    let jm = |m: usize, n: i64| -> u64 {
        let idx = n + m as i64;
        if idx < 0 || idx as usize >= pw[m].len() {
            0
        } else {
            pw[m][idx as usize]
        }
    };
    let lf = (l as u64) % f.m;
    let psum: Vec<Laurent> = (0..=l)
        .map(|m| {
            let mut s = Laurent::zero(-1, top);
            if m > 0 {
                for n in -1..=top {
                    s.c[(n + 1) as usize] = f.mul(lf, jm(m, n * li));
                }
            }
            s
        })
        .collect();
    let mut e: Vec<Laurent> = Vec::with_capacity(l + 1);
    let mut e0 = Laurent::zero(-1, top);
    e0.c[1] = 1;
    e.push(e0);
    for i in 1..=l {
        let mut acc = Laurent::zero(-2, top);
        for k in 1..=i {
            let t = e[i - k].mul(&psum[k], &f, top);
            let t = if k % 2 == 1 { t } else { t.scale(f.m - 1, &f) };
            acc.add_assign(&t, &f);
        }
        assert_eq!(acc.get(-2), 0);
        let inv = f.inv(i as u64 % f.m);
        let mut ei = Laurent::zero(-1, top);
        for n in -1..=top {
            ei.c[(n + 1) as usize] = f.mul(acc.get(n), inv);
        }
        e.push(ei);
    }
    // j(q^l) to exponent `top`
    let mut jl = Laurent::zero(-li, top);
    let mut n = -1i64;
    while n * li <= top {
        jl.c[(n * li + li) as usize] = qj[(n + 1) as usize];
        n += 1;
    }
    // j^k as Laurent series from q^-k to q^0
    let jk: Vec<Laurent> = (0..=l + 1)
        .map(|k| {
            let ki = k as i64;
            let mut s = Laurent::zero(-ki, 0);
            for n in -ki..=0 {
                s.c[(n + ki) as usize] = jm(k, n);
            }
            s
        })
        .collect();
    let d = l + 1;
    let mut c = vec![vec![0u64; d + 1]; d + 1];
    for i in 0..=d {
        let mut big_e = Laurent::zero(-(d as i64), 0);
        if i <= l {
            for n in -1..=0 {
                let v = e[i].get(n);
                let idx = (n + d as i64) as usize;
                big_e.c[idx] = f.add(big_e.c[idx], v);
            }
        }
        if i >= 1 {
            let t = jl.mul(&e[i - 1], &f, 0);
            big_e.add_assign(&t, &f);
        }
        for k in (0..=d).rev() {
            let a = big_e.get(-(k as i64));
            if a == 0 {
                continue;
            }
            let t = jk[k].scale(f.m - a, &f);
            big_e.add_assign(&t, &f);
            let coeff = if i % 2 == 0 { a } else { f.sub(0, a) };
            c[d - i][k] = coeff;
        }
        assert!(big_e.c.iter().all(|&v| v == 0), "pole peeling failed");
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi2_known_coefficients() {
        let f = Fm { m: (1 << 61) - 1 };
        let c = phi_prime_mod(2, f);
        let s = |v: i64| f.from_i64(v);
        assert_eq!(c[3][0], 1);
        assert_eq!(c[0][3], 1);
        assert_eq!(c[2][2], s(-1));
        assert_eq!(c[2][1], s(1488));
        assert_eq!(c[2][0], s(-162000));
        assert_eq!(c[1][1], s(40773375));
        assert_eq!(c[1][0], s(8748000000));
        assert_eq!(c[0][0], s(-157464000000000));
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(c[a][b], c[b][a]);
            }
        }
    }
}
