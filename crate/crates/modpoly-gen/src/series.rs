//! Truncated q-series over Z/mZ.

#[derive(Clone, Copy, Debug)]
pub struct Fm {
    pub m: u64,
}

impl Fm {
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.m as u128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.m - b
        }
    }

    #[cfg(test)]
    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.m as i64) as u64
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> u64 {
        let (mut r0, mut r1) = (self.m as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        assert_eq!(r0, 1, "{a} not invertible mod {}", self.m);
        s0.rem_euclid(self.m as i128) as u64
    }

    /// Truncated product of two power series, `len` output terms.
    pub fn mul_trunc(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let mut out = vec![0u64; len];
        if self.m < (1 << 32) {
            for (k, o) in out.iter_mut().enumerate() {
                let lo = k.saturating_sub(b.len().saturating_sub(1));
                let hi = k.min(a.len().saturating_sub(1));
                if lo > hi {
                    continue;
                }
                let mut acc: u128 = 0;
                for i in lo..=hi {
                    acc += (a[i] * b[k - i]) as u128;
                }
                *o = (acc % self.m as u128) as u64;
            }
        } else {
            for (i, &x) in a.iter().enumerate().take(len) {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate().take(len - i) {
                    out[i + j] = self.add(out[i + j], self.mul(x, y));
                }
            }
        }
        out
    }

    pub fn inv_series(&self, a: &[u64], len: usize) -> Vec<u64> {
        let i0 = self.inv(a[0]);
        let mut b = vec![0u64; len];
        b[0] = i0;
        for k in 1..len {
            let mut acc = 0u64;
            for i in 1..=k.min(a.len() - 1) {
                acc = self.add(acc, self.mul(a[i], b[k - i]));
            }
            b[k] = self.mul(self.sub(0, acc), i0);
        }
        b
    }

    /// q*j(q) to `len` terms.
    pub fn qj(&self, len: usize) -> Vec<u64> {
        let mut e4 = vec![0u64; len];
        e4[0] = 1;
        for (n, e) in e4.iter_mut().enumerate().skip(1) {
            let mut s = 0u64;
            for d in 1..=n {
                if n % d == 0 {
                    s = self.add(s, self.pow(d as u64 % self.m, 3));
                }
            }
            *e = self.mul(240, s);
        }
        // prod (1 - q^n) by the pentagonal number theorem
        let mut eta = vec![0u64; len];
        eta[0] = 1;
        for k in 1usize.. {
            let e1 = k * (3 * k - 1) / 2;
            if e1 >= len {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { self.m - 1 };
            eta[e1] = sign;
            let e2 = k * (3 * k + 1) / 2;
            if e2 < len {
                eta[e2] = sign;
            }
        }
        let mut eta24 = vec![0u64; len];
        eta24[0] = 1;
        let mut base = eta;
        let mut e = 24u32;
        while e > 0 {
            if e & 1 == 1 {
                eta24 = self.mul_trunc(&eta24, &base, len);
            }
            base = self.mul_trunc(&base, &base, len);
            e >>= 1;
        }
        let e4_3 = self.mul_trunc(&self.mul_trunc(&e4, &e4, len), &e4, len);
        self.mul_trunc(&e4_3, &self.inv_series(&eta24, len), len)
    }
}

/// Laurent series sum_{k} c[k] q^{start+k}, truncated at `start + c.len() - 1`.
#[derive(Clone, Debug)]
pub struct Laurent {
    pub start: i64,
    pub c: Vec<u64>,
}

impl Laurent {
    pub fn zero(start: i64, top: i64) -> Self {
        Laurent {
            start,
            c: vec![0; (top - start + 1).max(0) as usize],
        }
    }

    pub fn top(&self) -> i64 {
        self.start + self.c.len() as i64 - 1
    }

    pub fn get(&self, e: i64) -> u64 {
        if e < self.start || e > self.top() {
            0
        } else {
            self.c[(e - self.start) as usize]
        }
    }

    /// Product truncated at exponent `top`.
    pub fn mul(&self, o: &Laurent, f: &Fm, top: i64) -> Laurent {
        let start = self.start + o.start;
        let len = (top - start + 1).max(0) as usize;
        Laurent {
            start,
            c: f.mul_trunc(&self.c, &o.c, len),
        }
    }

    pub fn add_assign(&mut self, o: &Laurent, f: &Fm) {
        for e in o.start..=o.top() {
            if e >= self.start && e <= self.top() {
                let i = (e - self.start) as usize;
                self.c[i] = f.add(self.c[i], o.get(e));
            } else {
                assert_eq!(o.get(e), 0, "add_assign out of range");
            }
        }
    }

    pub fn scale(&self, k: u64, f: &Fm) -> Laurent {
        Laurent {
            start: self.start,
            c: self.c.iter().map(|&v| f.mul(v, k)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_coefficients() {
        let f = Fm { m: (1 << 61) - 1 };
        let s = f.qj(6);
        assert_eq!(&s[..4], &[1, 744, 196884, 21493760]);
        assert_eq!(s[4], 864299970);
        assert_eq!(s[5], 20245856256);
    }
}
