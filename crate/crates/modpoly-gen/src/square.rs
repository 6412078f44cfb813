//! Phi_{l^2} mod a prime from Phi_l, via
//! Res_Z(Phi_l(x, Z), Phi_l(Z, y)) = (y - x)^(l+1) * Phi_{l^2}(x, y)
//! evaluated on a grid and interpolated.

use crate::series::Fm;

fn eval_row(c: &[Vec<u64>], x: u64, f: &Fm) -> Vec<u64> {
    // Phi(x, Z) as a polynomial in Z
    let d = c.len();
    let mut out = vec![0u64; d];
    let mut xp = 1u64;
    for row in c.iter() {
        for (b, &v) in row.iter().enumerate() {
            out[b] = f.add(out[b], f.mul(v, xp));
        }
        xp = f.mul(xp, x);
    }
    out
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem(a: &[u64], b: &[u64], f: &Fm) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() > db {
        let inv = f.inv(b[db]);
        for k in (db..r.len()).rev() {
            let t = f.mul(r[k], inv);
            if t == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                let idx = k - db + j;
                r[idx] = f.sub(r[idx], f.mul(t, bj));
            }
        }
        r.truncate(db);
    }
    trim(&mut r);
    r
}

/// Resultant of two polynomials over a prime field.
pub fn resultant(a: &[u64], b: &[u64], f: &Fm) -> u64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    let mut acc = 1u64;
    loop {
        if b.is_empty() || a.is_empty() {
            return 0;
        }
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return f.mul(acc, f.pow(b[0], da as u64));
        }
        let r = rem(&a, &b, f);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            acc = f.sub(0, acc);
        }
        acc = f.mul(acc, f.pow(b[db], (da - dr) as u64));
        a = b;
        b = r;
    }
}

/// Coefficients of the interpolating polynomial through (xs[i], ys[i]).
pub fn interpolate(xs: &[u64], ys: &[u64], f: &Fm) -> Vec<u64> {
    let n = xs.len();
    // Newton divided differences
    let mut dd = ys.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            let den = f.sub(xs[i], xs[i - k]);
            dd[i] = f.mul(num, f.inv(den));
        }
    }
    let mut out = vec![0u64; n];
    for i in (0..n).rev() {
        // out = out * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; n];
        for j in 0..n {
            if out[j] == 0 {
                continue;
            }
            if j + 1 < n {
                next[j + 1] = f.add(next[j + 1], out[j]);
            }
            next[j] = f.sub(next[j], f.mul(out[j], xs[i]));
        }
        next[0] = f.add(next[0], dd[i]);
        out = next;
    }
    out
}

/// c[a][b] of Phi_{l^2} mod the prime f.m, given Phi_l mod f.m.
pub fn phi_square_mod(l: usize, phi: &[Vec<u64>], f: Fm) -> Vec<Vec<u64>> {
    let d = l * (l + 1);
    let n = d + 1;
    let xs: Vec<u64> = (1..=n as u64).collect();
    let ys: Vec<u64> = (n as u64 + 1..=2 * n as u64).collect();
    let rows_y: Vec<Vec<u64>> = ys.iter().map(|&y| eval_row(phi, y, &f)).collect();
    // grid[i][k] = Phi_{l^2}(xs[i], ys[k])
    let mut by_x: Vec<Vec<u64>> = Vec::with_capacity(n);
    for &x in &xs {
        let fx = eval_row(phi, x, &f);
        let vals: Vec<u64> = ys
            .iter()
            .zip(&rows_y)
            .map(|(&y, gy)| {
                let r = resultant(&fx, gy, &f);
                let den = f.pow(f.sub(y, x), (l + 1) as u64);
                f.mul(r, f.inv(den))
            })
            .collect();
        by_x.push(interpolate(&ys, &vals, &f));
    }
    let mut c = vec![vec![0u64; n]; n];
    for b in 0..n {
        let col: Vec<u64> = by_x.iter().map(|r| r[b]).collect();
        let coeffs = interpolate(&xs, &col, &f);
        for a in 0..n {
            c[a][b] = coeffs[a];
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_of_linear_factors() {
        let f = Fm { m: 1_000_003 };
        // res((x-1)(x-2), x-3) = a(3) = 2
        let a = vec![2, f.m - 3, 1];
        let b = vec![f.m - 3, 1];
        assert_eq!(resultant(&a, &b, &f), 2);
    }

    #[test]
    fn interpolation_roundtrip() {
        let f = Fm { m: 1_000_003 };
        let poly = [5u64, 0, 7, 1];
        let xs: Vec<u64> = (10..14).collect();
        let ys: Vec<u64> = xs
            .iter()
            .map(|&x| poly.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c)))
            .collect();
        assert_eq!(interpolate(&xs, &ys, &f), poly.to_vec());
    }
}
