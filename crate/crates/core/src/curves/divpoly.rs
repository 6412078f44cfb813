//! Division polynomials with y eliminated.
//!
//! f_n = psi_n for odd n and f_n = psi_n / y for even n, so every f_n lies
//! in R[x]. With F = x^3 + ax + b:
//!   f_{2m+1} = F^2 f_{m+2} f_m^3 - f_{m-1} f_{m+1}^3      (m even)
//!   f_{2m+1} = f_{m+2} f_m^3 - F^2 f_{m-1} f_{m+1}^3      (m odd)
//!   f_{2m}   = f_m (f_{m+2} f_{m-1}^2 - f_{m-2} f_{m+1}^2) / 2

use super::curve::Curve;
use crate::arith::Poly;
use crate::error::Result;

/// f_0 .. f_n, optionally reduced modulo `m`.
#[derive(Debug, Clone)]
pub struct DivPolys {
    f: Vec<Poly>,
    rhs: Poly,
    m: Option<Poly>,
}

impl DivPolys {
    pub fn new(c: &Curve, n: usize, m: Option<&Poly>) -> Result<Self> {
        let r = c.ring();
        let (a, b) = (c.a, c.b);
        let red = |p: Poly| -> Result<Poly> {
            match m {
                Some(m) => p.rem(m),
                None => Ok(p),
            }
        };
        let rhs = red(c.rhs_poly())?;
        let f3 = Poly::new(
            r,
            vec![r.neg(r.mul(a, a)), r.mul(12, b), r.mul(6, a), 0, 3],
        );
        let f4 = Poly::new(
            r,
            vec![
                r.neg(r.add(r.mul(8, r.mul(b, b)), r.mul(r.mul(a, a), a))),
                r.neg(r.mul(4, r.mul(a, b))),
                r.neg(r.mul(5, r.mul(a, a))),
                r.mul(20, b),
                r.mul(5, a),
                0,
                1,
            ],
        )
        .scale(4);
        let mut f = vec![
            Poly::zero(r),
            Poly::one(r),
            Poly::constant(r, 2),
            red(f3)?,
            red(f4)?,
        ];
        f.truncate(n + 1);
        let inv2 = r.inv(2)?;
        let mul = |x: &Poly, y: &Poly| -> Result<Poly> { red(x.mul(y)) };
        let rhs2 = mul(&rhs, &rhs)?;
        for k in 5..=n {
            let mm = k / 2;
            let next = if k % 2 == 1 {
                let t1 = mul(&f[mm + 2], &mul(&f[mm], &mul(&f[mm], &f[mm])?)?)?;
                let cube = mul(&f[mm + 1], &mul(&f[mm + 1], &f[mm + 1])?)?;
                let t2 = mul(&f[mm - 1], &cube)?;
                if mm % 2 == 0 {
                    mul(&rhs2, &t1)?.sub(&t2)
                } else {
                    t1.sub(&mul(&rhs2, &t2)?)
                }
            } else {
                let t1 = mul(&f[mm + 2], &mul(&f[mm - 1], &f[mm - 1])?)?;
                let t2 = mul(&f[mm - 2], &mul(&f[mm + 1], &f[mm + 1])?)?;
                mul(&f[mm], &t1.sub(&t2))?.scale(inv2)
            };
            f.push(next);
        }
        Ok(DivPolys {
            f,
            rhs,
            m: m.cloned(),
        })
    }

    /// f_k with f_{-k} = -f_k.
    pub fn get(&self, k: i64) -> Poly {
        if k < 0 {
            self.f[(-k) as usize].neg()
        } else {
            self.f[k as usize].clone()
        }
    }

    pub fn rhs(&self) -> &Poly {
        &self.rhs
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn mul(&self, x: &Poly, y: &Poly) -> Result<Poly> {
        match &self.m {
            Some(m) => x.mulmod(y, m),
            None => Ok(x.mul(y)),
        }
    }
}

/// psi_l for odd l, psi_l / y for even l, as a polynomial in x.
pub fn division_polynomial(c: &Curve, l: usize) -> Result<Poly> {
    Ok(DivPolys::new(c, l.max(4), None)?.get(l as i64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Zn;
    use crate::curves::curve::count_points;

    #[test]
    fn degrees() {
        let r = Zn::new(1009).unwrap();
        let c = Curve::new(r, 3, 7).unwrap();
        for l in [3usize, 5, 7, 9, 11] {
            assert_eq!(division_polynomial(&c, l).unwrap().degree(), Some((l * l - 1) / 2));
        }
        for l in [4usize, 6, 8] {
            assert_eq!(division_polynomial(&c, l).unwrap().degree(), Some((l * l - 4) / 2));
        }
    }

    #[test]
    fn psi3_roots_are_three_torsion_x() {
        // over F_p, an x-root of psi_3 with rhs(x) a square gives a point of order 3
        let p = 1009u64;
        let r = Zn::new(p).unwrap();
        for a in 1..30u64 {
            let c = match Curve::new(r, a, 5) {
                Ok(c) => c,
                Err(_) => continue,
            };
            let psi = division_polynomial(&c, 3).unwrap();
            let n = count_points(&c).unwrap();
            for x in 0..p {
                let is_root = psi.eval(x) == 0;
                if let Some(y) = crate::arith::int::sqrt_mod_prime(c.rhs(x), p) {
                    let pt = crate::curves::Point::xy(x, y);
                    let three = c.mul(3, &pt).unwrap() == crate::curves::Point::Infinity;
                    assert_eq!(is_root, three, "a={a} x={x}");
                    if three {
                        assert_eq!(n % 3, 0);
                    }
                }
            }
        }
    }
}
