//! Short Weierstrass curves over Z/nZ and their points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::int::{is_prime_u64, sqrt_mod_prime};
use crate::arith::{Poly, Zn};
use crate::error::{Error, Result};

/// y^2 = x^3 + a x + b over `ring`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Curve {
    ring: Zn,
    pub a: u64,
    pub b: u64,
}

impl Serialize for Curve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (self.ring.modulus(), self.a, self.b).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Curve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (n, a, b) = <(u64, u64, u64)>::deserialize(d)?;
        let ring = Zn::new(n).map_err(serde::de::Error::custom)?;
        Curve::new(ring, a, b).map_err(serde::de::Error::custom)
    }
}

/// 4a^3 + 27b^2
fn disc_part(r: Zn, a: u64, b: u64) -> u64 {
    let a3 = r.mul(r.mul(a, a), a);
    r.add(r.mul(4, a3), r.mul(27, r.mul(b, b)))
}

impl Curve {
    /// Fails with `SingularCurve` when 4a^3 + 27b^2 = 0, and with
    /// `FactorFound` when it is a non-unit.
    pub fn new(ring: Zn, a: u64, b: u64) -> Result<Self> {
        let (a, b) = (ring.elem(a), ring.elem(b));
        match ring.inv(disc_part(ring, a, b)) {
            Ok(_) => Ok(Curve { ring, a, b }),
            Err(Error::DivisionByZero) => Err(Error::SingularCurve),
            Err(e) => Err(e),
        }
    }

    pub fn ring(&self) -> Zn {
        self.ring
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus()
    }

    /// x^3 + a x + b as a polynomial.
    pub fn rhs_poly(&self) -> Poly {
        Poly::new(self.ring, vec![self.b, self.a, 0, 1])
    }

    pub fn rhs(&self, x: u64) -> u64 {
        let r = self.ring;
        let x2 = r.mul(x, x);
        r.add(r.mul(r.add(x2, self.a), x), self.b)
    }

    /// The quadratic twist by a non-residue `d`: y^2 = x^3 + d^2 a x + d^3 b.
    pub fn twist(&self, d: u64) -> Result<Curve> {
        let r = self.ring;
        let d2 = r.mul(d, d);
        Curve::new(r, r.mul(d2, self.a), r.mul(r.mul(d2, d), self.b))
    }

    /// Reduction of the coefficients into Z/mZ for m dividing the modulus.
    pub fn reduce(&self, ring: Zn) -> Result<Curve> {
        Curve::new(ring, self.a, self.b)
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => self.ring.mul(*y, *y) == self.rhs(*x),
        }
    }
}

/// a = 3j(1728 - j), b = 2j(1728 - j)^2.
pub fn curve_from_j(j: u64, ring: Zn) -> Result<Curve> {
    let r = ring;
    let j = r.elem(j);
    let k = r.sub(r.elem(1728), j);
    for v in [j, k] {
        match r.inv(v) {
            Ok(_) => {}
            Err(Error::DivisionByZero) => return Err(Error::ForbiddenJ),
            Err(e) => return Err(e),
        }
    }
    let a = r.mul(3, r.mul(j, k));
    let b = r.mul(2, r.mul(j, r.mul(k, k)));
    Curve::new(r, a, b)
}

/// j = 1728 * 4a^3 / (4a^3 + 27b^2).
pub fn j_invariant(c: &Curve) -> Result<u64> {
    let r = c.ring;
    let a3 = r.mul(r.mul(c.a, c.a), c.a);
    let num = r.mul(1728 % r.modulus(), r.mul(4, a3));
    r.div(num, disc_part(r, c.a, c.b))
}

/// Points in affine coordinates plus the point at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Point {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl Point {
    pub fn xy(x: u64, y: u64) -> Self {
        Point::Affine { x, y }
    }

    /// Projective coordinates (X:Y:Z).
    pub fn projective(&self) -> (u64, u64, u64) {
        match *self {
            Point::Infinity => (0, 1, 0),
            Point::Affine { x, y } => (x, y, 1),
        }
    }

    pub fn x(&self) -> Option<u64> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(*x),
        }
    }
}

impl Curve {
    pub fn neg(&self, p: &Point) -> Point {
        match *p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::xy(x, self.ring.neg(y)),
        }
    }

    /// Chord and tangent addition. Over a composite modulus a failed
    /// inversion is reported as `FactorFound`.
    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        let r = self.ring;
        let (x1, y1, x2, y2) = match (*p, *q) {
            (Point::Infinity, _) => return Ok(*q),
            (_, Point::Infinity) => return Ok(*p),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if r.add(y1, y2) == 0 {
                return Ok(Point::Infinity);
            }
            let num = r.add(r.mul(3, r.mul(x1, x1)), self.a);
            r.div(num, r.add(y1, y1))?
        } else {
            r.div(r.sub(y2, y1), r.sub(x2, x1))?
        };
        let x3 = r.sub(r.sub(r.mul(lambda, lambda), x1), x2);
        let y3 = r.sub(r.mul(lambda, r.sub(x1, x3)), y1);
        Ok(Point::xy(x3, y3))
    }

    pub fn double(&self, p: &Point) -> Result<Point> {
        self.add(p, p)
    }

    pub fn mul(&self, k: i64, p: &Point) -> Result<Point> {
        let base = if k < 0 { self.neg(p) } else { *p };
        let mut acc = Point::Infinity;
        let k = k.unsigned_abs();
        for i in (0..64 - k.leading_zeros()).rev() {
            acc = self.double(&acc)?;
            if (k >> i) & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn mul_u128(&self, k: u128, p: &Point) -> Result<Point> {
        let mut acc = Point::Infinity;
        for i in (0..128 - k.leading_zeros()).rev() {
            acc = self.double(&acc)?;
            if (k >> i) & 1 == 1 {
                acc = self.add(&acc, p)?;
            }
        }
        Ok(acc)
    }

    /// Uniform random affine point; prime modulus only.
    pub fn random_point<R: Rng>(&self, rng: &mut R) -> Result<Point> {
        let p = self.modulus();
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p.into()));
        }
        loop {
            let x = rng.gen_range(0..p);
            if let Some(y) = sqrt_mod_prime(self.rhs(x), p) {
                let y = if rng.gen::<bool>() { y } else { self.ring.neg(y) };
                return Ok(Point::xy(x, y));
            }
        }
    }
}

/// #E(F_p) by summing Legendre symbols; a quadratic-residue table keeps
/// this linear in p.
pub fn count_points(c: &Curve) -> Result<u64> {
    let p = c.modulus();
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.into()));
    }
    if p > 50_000_000 {
        return Err(Error::TooLarge);
    }
    let mut is_sq = vec![false; p as usize];
    for y in 0..p.div_ceil(2) {
        is_sq[((y as u128 * y as u128) % p as u128) as usize] = true;
    }
    let mut n: u64 = 1;
    for x in 0..p {
        let v = c.rhs(x);
        if v == 0 {
            n += 1;
        } else if is_sq[v as usize] {
            n += 2;
        }
    }
    let t = p as i128 + 1 - n as i128;
    assert!(t * t <= 4 * p as i128, "Hasse bound violated");
    Ok(n)
}

/// Trace of Frobenius p + 1 - #E(F_p).
pub fn trace(c: &Curve) -> Result<i64> {
    Ok(c.modulus() as i64 + 1 - count_points(c)? as i64)
}

/// Given that the trace is +t or -t, pick the sign by checking that
/// random points are killed by p + 1 - t.
pub fn trace_with_sign<R: Rng>(c: &Curve, t: i64, rng: &mut R) -> Result<i64> {
    let p = c.modulus() as i128;
    if t == 0 {
        return Ok(0);
    }
    let n_plus = (p + 1 - t as i128) as u128;
    let n_minus = (p + 1 + t as i128) as u128;
    for _ in 0..64 {
        let pt = c.random_point(rng)?;
        let a = c.mul_u128(n_plus, &pt)? == Point::Infinity;
        let b = c.mul_u128(n_minus, &pt)? == Point::Infinity;
        match (a, b) {
            (true, false) => return Ok(t),
            (false, true) => return Ok(-t),
            _ => {}
        }
    }
    // both orders annihilate every sampled point: fall back to counting
    trace(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn j_roundtrip() {
        let r = Zn::new(83).unwrap();
        let c = curve_from_j(15, r).unwrap();
        assert_eq!(j_invariant(&c).unwrap(), 15);
        assert_eq!(curve_from_j(0, r), Err(Error::ForbiddenJ));
        assert_eq!(curve_from_j(1728 % 83, r), Err(Error::ForbiddenJ));
        let e = Curve::new(r, 0, 1).unwrap();
        assert_eq!(j_invariant(&e).unwrap(), 0);
        assert_eq!(j_invariant(&c.twist(2).unwrap()).unwrap(), 15);
    }

    #[test]
    fn counts() {
        let r = Zn::new(83).unwrap();
        let c = curve_from_j(15, r).unwrap();
        let n = count_points(&c).unwrap();
        assert!(n == 75 || n == 93);
        let tw = c.twist(2).unwrap();
        assert_eq!(n + count_points(&tw).unwrap(), 2 * 83 + 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = 84 - n as i64;
        assert_eq!(trace_with_sign(&c, t.abs(), &mut rng).unwrap(), t);
    }

    #[test]
    fn group_law() {
        let r = Zn::new(1009).unwrap();
        let c = Curve::new(r, 7, 11).unwrap();
        let n = count_points(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let p = c.random_point(&mut rng).unwrap();
            let q = c.random_point(&mut rng).unwrap();
            let s = c.random_point(&mut rng).unwrap();
            assert!(c.contains(&p));
            let l = c.add(&c.add(&p, &q).unwrap(), &s).unwrap();
            let rr = c.add(&p, &c.add(&q, &s).unwrap()).unwrap();
            assert_eq!(l, rr);
            assert_eq!(c.add(&p, &q).unwrap(), c.add(&q, &p).unwrap());
            assert_eq!(c.add(&p, &c.neg(&p)).unwrap(), Point::Infinity);
            assert_eq!(c.mul(n as i64, &p).unwrap(), Point::Infinity);
        }
    }

    #[test]
    fn composite_inversion_yields_factor() {
        // [#E(F_83)]P hits infinity mod 83 but not mod 173
        let r = Zn::new(14359).unwrap();
        let c = curve_from_j(12631, r).unwrap();
        let (r83, r173) = (Zn::new(83).unwrap(), Zn::new(173).unwrap());
        let (c83, c173) = (c.reduce(r83).unwrap(), c.reduce(r173).unwrap());
        let n83 = count_points(&c83).unwrap();
        let mut found = false;
        for x in 1..83u64 {
            let (Some(y1), Some(y2)) = (sqrt_mod_prime(c83.rhs(x), 83), sqrt_mod_prime(c173.rhs(x), 173)) else {
                continue;
            };
            let y = crate::arith::crt(&[83.into(), 173.into()], &[y1.into(), y2.into()]).unwrap();
            let pt = Point::xy(x, y.try_into().unwrap());
            assert!(c.contains(&pt));
            if let Err(Error::FactorFound(f)) = c.mul(n83 as i64, &pt) {
                assert_eq!(f, 83.into());
                found = true;
                break;
            }
        }
        assert!(found);
    }
}
