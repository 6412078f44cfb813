//! Kernel polynomials, Velu's formulas and Frobenius eigenvalues.

use serde::Serialize;

use super::curve::{trace, Curve, Point};
use super::divpoly::DivPolys;
use crate::arith::fp::factor_poly_fp;
use crate::arith::int::is_prime_u64;
use crate::arith::Poly;
use crate::error::{Error, Result};

/// Monic kernel polynomial of a cyclic l-isogeny: degree (l-1)/2 for odd l,
/// the linear factor x - x0 for l = 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelPoly {
    pub l: u64,
    pub h: Poly,
}

impl Serialize for KernelPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.l, self.h.ring().modulus(), self.h.coeffs()).serialize(s)
    }
}

impl KernelPoly {
    pub fn new(l: u64, h: Poly) -> Result<Self> {
        let want = if l == 2 { 1 } else { (l as usize - 1) / 2 };
        if h.degree() != Some(want) || !h.is_monic() {
            return Err(Error::Degenerate(format!("kernel polynomial for l={l} must be monic of degree {want}")));
        }
        Ok(KernelPoly { l, h })
    }

    pub fn degree(&self) -> usize {
        self.h.degree().unwrap_or(0)
    }

    /// Elementary symmetric functions s1, s2, s3 of the roots.
    fn power_data(&self) -> (u64, u64, u64) {
        let r = self.h.ring();
        let d = self.degree();
        let c = |k: usize| if k <= d { self.h.coeff(d - k) } else { 0 };
        (r.neg(c(1)), c(2), r.neg(c(3)))
    }
}

/// phi(x, y) = (f(x) / h(x)^2, y g(x) / h(x)^3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitIsogeny {
    pub source: Curve,
    pub target: Curve,
    pub kernel: KernelPoly,
    pub f: Poly,
    pub g: Poly,
    pub h: Poly,
}

impl ExplicitIsogeny {
    /// Image of a point; kernel points go to infinity. Over Z/NZ a
    /// non-invertible h(x) surfaces as `FactorFound`.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        let Point::Affine { x, y } = *p else {
            return Ok(Point::Infinity);
        };
        let r = self.source.ring();
        let hx = self.h.eval(x);
        let inv = match r.inv(hx) {
            Ok(v) => v,
            Err(Error::DivisionByZero) => return Ok(Point::Infinity),
            Err(e) => return Err(e),
        };
        let inv2 = r.mul(inv, inv);
        let nx = r.mul(self.f.eval(x), inv2);
        let ny = r.mul(r.mul(y, self.g.eval(x)), r.mul(inv2, inv));
        Ok(Point::xy(nx, ny))
    }
}

/// Velu's formulas in Kohel's kernel-polynomial form.
pub fn velu(c: &Curve, k: &KernelPoly) -> Result<ExplicitIsogeny> {
    let r = c.ring();
    if k.h.ring() != r {
        return Err(Error::Degenerate("kernel over a different ring".into()));
    }
    let (a, b) = (c.a, c.b);
    let h = k.h.clone();
    let (t, w) = if k.l == 2 {
        let x0 = r.neg(h.coeff(0));
        let t = r.add(r.mul(3, r.mul(x0, x0)), a);
        (t, r.mul(x0, t))
    } else {
        let d = r.elem(k.degree() as u64);
        let (s1, s2, s3) = k.power_data();
        let p2 = r.sub(r.mul(s1, s1), r.mul(2, s2));
        let t = r.add(r.mul(6, p2), r.mul(2, r.mul(a, d)));
        let p3 = r.add(r.sub(r.mul(r.mul(s1, s1), s1), r.mul(3, r.mul(s1, s2))), r.mul(3, s3));
        let w = r.add(r.add(r.mul(10, p3), r.mul(6, r.mul(a, s1))), r.mul(4, r.mul(b, d)));
        (t, w)
    };
    let target = Curve::new(r, r.sub(a, r.mul(5, t)), r.sub(b, r.mul(7, w)))?;
    let hp = h.derivative();
    let f = if k.l == 2 {
        Poly::x(r).mul(&h).mul(&h).add(&h.scale(t))
    } else {
        let s1 = k.power_data().0;
        let lin = Poly::new(r, vec![r.neg(r.mul(2, s1)), r.elem(k.l)]);
        let rhs = c.rhs_poly();
        let term1 = lin.mul(&h).mul(&h);
        let term2 = rhs.mul(&h.mul(&hp.derivative()).sub(&hp.mul(&hp))).scale(4);
        let term3 = rhs.derivative().mul(&h).mul(&hp).scale(2);
        term1.sub(&term2).sub(&term3)
    };
    let g = f.derivative().mul(&h).sub(&f.mul(&hp).scale(2));
    Ok(ExplicitIsogeny {
        source: *c,
        target,
        kernel: k.clone(),
        f,
        g,
        h,
    })
}

/// x([k]P) as an element of R = ring[x]/(m), for the generic point P.
fn mult_x(dp: &DivPolys, m: &Poly, k: i64) -> Result<Poly> {
    let x = Poly::x(m.ring()).rem(m)?;
    let fk = dp.get(k);
    let num = dp.mul(&dp.get(k - 1), &dp.get(k + 1))?;
    let den = dp.mul(&fk, &fk)?;
    let (num, den) = if k % 2 == 1 {
        (dp.mul(&num, dp.rhs())?, den)
    } else {
        (num, dp.mul(&den, dp.rhs())?)
    };
    Ok(x.sub(&dp.mul(&num, &den.invmod(m)?)?))
}

/// All F_p-rational kernel polynomials of cyclic l-subgroups, sorted.
pub fn kernel_polynomials(c: &Curve, l: u64) -> Result<Vec<KernelPoly>> {
    let r = c.ring();
    if !is_prime_u64(r.modulus()) {
        return Err(Error::NotPrime(r.modulus().into()));
    }
    if !is_prime_u64(l) {
        return Err(Error::NotPrime(l.into()));
    }
    let mut out: Vec<KernelPoly> = vec![];
    if l == 2 {
        for (g, _) in factor_poly_fp(&c.rhs_poly())? {
            if g.degree() == Some(1) {
                out.push(KernelPoly::new(2, g)?);
            }
        }
        return Ok(out);
    }
    let d = (l as usize - 1) / 2;
    let psi = DivPolys::new(c, (l as usize).max(4), None)?.get(l as i64);
    for (g, _) in factor_poly_fp(&psi)? {
        if g.degree().unwrap_or(0) > d {
            continue;
        }
        // h(X) = prod_{k=1..d} (X - x([k]P)) over F_p[x]/(g)
        let dp = DivPolys::new(c, d + 2, Some(&g))?;
        let mut h: Vec<Poly> = vec![Poly::one(r)];
        for k in 1..=d as i64 {
            let xk = mult_x(&dp, &g, k)?;
            let mut next = vec![Poly::zero(r); h.len() + 1];
            for (i, hi) in h.iter().enumerate() {
                next[i + 1] = next[i + 1].add(hi);
                next[i] = next[i].sub(&dp.mul(hi, &xk)?);
            }
            h = next;
        }
        if h.iter().all(|p| p.degree().unwrap_or(0) == 0) {
            let coeffs: Vec<u64> = h.iter().map(|p| p.coeff(0)).collect();
            let kp = KernelPoly::new(l, Poly::new(r, coeffs))?;
            if !out.contains(&kp) {
                out.push(kp);
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |k: &KernelPoly| k.h.coeffs().iter().rev().copied().collect::<Vec<_>>();
        key(a).cmp(&key(b))
    });
    Ok(out)
}

/// Eigenvalue mu of Frobenius on the kernel, with trace computed by
/// point counting.
pub fn frobenius_eigenvalue(c: &Curve, l: u64, k: &KernelPoly) -> Result<u64> {
    frobenius_eigenvalue_with_trace(c, l, k, trace(c)?)
}

/// Roots of X^2 - tX + p modulo l.
pub fn char_poly_roots(t: i64, p: u64, l: u64) -> Vec<u64> {
    let li = l as i64;
    let t = t.rem_euclid(li);
    let pm = (p % l) as i64;
    (0..li).filter(|&m| (m * m - t * m + pm).rem_euclid(li) == 0).map(|m| m as u64).collect()
}

/// Checks (x^p, y^p) = [mu](x, y) in F_p[x, y]/(h(x), y^2 - x^3 - ax - b).
pub fn frobenius_eigenvalue_with_trace(c: &Curve, l: u64, k: &KernelPoly, t: i64) -> Result<u64> {
    let r = c.ring();
    let p = r.modulus();
    let roots = char_poly_roots(t, p, l);
    if roots.is_empty() {
        return Err(Error::NotSplit(l));
    }
    if l == 2 {
        return Ok(roots[0]);
    }
    let h = &k.h;
    let top = *roots.iter().max().unwrap() as usize + 2;
    let dp = DivPolys::new(c, top.max(4), Some(h))?;
    let x = Poly::x(r).rem(h)?;
    let xp = x.powmod(p, h)?;
    let rhs = dp.rhs().clone();
    let f_half = rhs.powmod(p.div_ceil(2), h)?;
    for &mu in &roots {
        if eigen_check(&dp, h, &x, &xp, &rhs, &f_half, mu as i64)? {
            return Ok(mu);
        }
    }
    Err(Error::InconsistentKernel)
}

fn eigen_check(dp: &DivPolys, h: &Poly, x: &Poly, xp: &Poly, rhs: &Poly, f_half: &Poly, mu: i64) -> Result<bool> {
    let m = |a: &Poly, b: &Poly| a.mulmod(b, h);
    let fm = dp.get(mu);
    let (fm1, fp1) = (dp.get(mu - 1), dp.get(mu + 1));
    let (fm2, fp2) = (dp.get(mu - 2), dp.get(mu + 2));
    let fm_sq = m(&fm, &fm)?;
    let prod = m(&fm1, &fp1)?;
    let cube = m(&fm_sq, &fm)?;
    let diff = m(&fp2, &m(&fm1, &fm1)?)?.sub(&m(&fm2, &m(&fp1, &fp1)?)?);
    let (x_ok, y_ok) = if mu % 2 == 1 {
        // x^p f^2 = x f^2 - F f_{-} f_{+};  4 F^{(p+1)/2} f^3 = F (diff)
        let lhs = m(xp, &fm_sq)?;
        let rhs_x = m(x, &fm_sq)?.sub(&m(rhs, &prod)?);
        let ly = m(f_half, &cube)?.scale(4);
        let ry = m(rhs, &diff)?;
        (lhs == rhs_x, ly == ry)
    } else {
        // x^p F f^2 = x F f^2 - f_{-} f_{+};  4 F^{(p+3)/2} f^3 = diff
        let ff = m(rhs, &fm_sq)?;
        let lhs = m(xp, &ff)?;
        let rhs_x = m(x, &ff)?.sub(&prod);
        let ly = m(&m(f_half, rhs)?, &cube)?.scale(4);
        (lhs == rhs_x, ly == diff)
    };
    Ok(x_ok && y_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Zn;
    use crate::curves::curve::{curve_from_j, j_invariant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn toy_three_kernels() {
        let r = Zn::new(83).unwrap();
        let c = curve_from_j(15, r).unwrap();
        let ks = kernel_polynomials(&c, 3).unwrap();
        assert_eq!(ks.len(), 2);
        let mut js: Vec<u64> = ks.iter().map(|k| j_invariant(&velu(&c, k).unwrap().target).unwrap()).collect();
        js.sort();
        assert_eq!(js, vec![48, 71]);
        let mus: Vec<u64> = ks.iter().map(|k| frobenius_eigenvalue(&c, 3, k).unwrap()).collect();
        assert_ne!(mus[0], mus[1]);
        assert_eq!((mus[0] * mus[1]) % 3, 83 % 3);
    }

    #[test]
    fn velu_maps_points_to_target() {
        let r = Zn::new(1009).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        for j in 2..60u64 {
            let Ok(c) = curve_from_j(j, r) else { continue };
            for l in [2u64, 3, 5, 7] {
                for k in kernel_polynomials(&c, l).unwrap() {
                    let iso = velu(&c, &k).unwrap();
                    for _ in 0..5 {
                        let p = c.random_point(&mut rng).unwrap();
                        let q = iso.apply(&p).unwrap();
                        assert!(iso.target.contains(&q), "j={j} l={l}");
                        let p2 = c.random_point(&mut rng).unwrap();
                        let sum = iso.apply(&c.add(&p, &p2).unwrap()).unwrap();
                        let img = iso.target.add(&q, &iso.apply(&p2).unwrap()).unwrap();
                        assert_eq!(sum, img);
                    }
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn eigenvalues_multiply_to_p() {
        let r = Zn::new(1009).unwrap();
        for j in 2..40u64 {
            let Ok(c) = curve_from_j(j, r) else { continue };
            let t = trace(&c).unwrap();
            for l in [3u64, 5, 7] {
                let ks = kernel_polynomials(&c, l).unwrap();
                if ks.len() == 2 {
                    let a = frobenius_eigenvalue_with_trace(&c, l, &ks[0], t).unwrap();
                    let b = frobenius_eigenvalue_with_trace(&c, l, &ks[1], t).unwrap();
                    assert_eq!((a * b) % l, 1009 % l);
                    if (t as i128 * t as i128 - 4 * 1009) % l as i128 != 0 {
                        assert_ne!(a, b);
                    }
                }
            }
        }
    }
}
