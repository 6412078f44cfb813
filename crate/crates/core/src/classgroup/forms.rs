//! Discriminants, binary quadratic forms, and the class group law.

use std::fmt;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::int::{is_prime_u64, kronecker, Integer};
use crate::error::{Error, Result};

/// D = (prod f_i)^2 * D0 with D0 fundamental.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "DiscRepr", try_from = "DiscRepr")]
pub struct Discriminant {
    d0: Integer,
    conductor_factors: Vec<u64>,
    d: Integer,
}

#[derive(Serialize, Deserialize)]
struct DiscRepr {
    d0: String,
    conductor_factors: Vec<u64>,
}

impl From<Discriminant> for DiscRepr {
    fn from(d: Discriminant) -> Self {
        DiscRepr {
            d0: d.d0.to_string(),
            conductor_factors: d.conductor_factors,
        }
    }
}

impl TryFrom<DiscRepr> for Discriminant {
    type Error = Error;
    fn try_from(r: DiscRepr) -> Result<Self> {
        let d0 = r.d0.parse::<Integer>().map_err(|e| Error::Serde(e.to_string()))?;
        Discriminant::new(d0, r.conductor_factors)
    }
}

fn is_squarefree(n: &Integer) -> bool {
    let n = n.abs();
    let mut k = Integer::from(2);
    while &k * &k <= n {
        if (&n % (&k * &k)).is_zero() {
            return false;
        }
        k += 1;
    }
    true
}

/// Is `d` a negative fundamental discriminant?
pub fn is_fundamental(d: &Integer) -> bool {
    if !d.is_negative() {
        return false;
    }
    let r = d.mod_floor(&Integer::from(4));
    if r == Integer::one() {
        return is_squarefree(d);
    }
    if r.is_zero() {
        let m: Integer = d / 4;
        let mr = m.mod_floor(&Integer::from(4));
        return (mr == Integer::from(2) || mr == Integer::from(3)) && is_squarefree(&m);
    }
    false
}

impl Discriminant {
    pub fn new(d0: Integer, conductor_factors: Vec<u64>) -> Result<Self> {
        if !is_fundamental(&d0) {
            return Err(Error::InvalidForm(format!("{d0} is not a negative fundamental discriminant")));
        }
        for &f in &conductor_factors {
            if !is_prime_u64(f) {
                return Err(Error::NotPrime(f.into()));
            }
        }
        let f: Integer = conductor_factors.iter().map(|&p| Integer::from(p)).product();
        let d = &f * &f * &d0;
        Ok(Discriminant {
            d0,
            conductor_factors,
            d,
        })
    }

    pub fn fundamental(d0: i64) -> Result<Self> {
        Self::new(Integer::from(d0), vec![])
    }

    pub fn d(&self) -> &Integer {
        &self.d
    }

    pub fn d0(&self) -> &Integer {
        &self.d0
    }

    pub fn conductor_factors(&self) -> &[u64] {
        &self.conductor_factors
    }

    pub fn conductor(&self) -> Integer {
        self.conductor_factors.iter().map(|&p| Integer::from(p)).product()
    }

    /// Number of units of the order.
    pub fn w(&self) -> u32 {
        units(&self.d)
    }

    pub fn d_i64(&self) -> i64 {
        self.d.to_i64().expect("discriminant fits i64")
    }
}

fn units(d: &Integer) -> u32 {
    if *d == Integer::from(-3) {
        6
    } else if *d == Integer::from(-4) {
        4
    } else {
        2
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d)
    }
}

/// ax^2 + bxy + cy^2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[String; 3]", try_from = "[String; 3]")]
pub struct QuadForm {
    pub a: Integer,
    pub b: Integer,
    pub c: Integer,
}

impl QuadForm {
    pub fn new(a: impl Into<Integer>, b: impl Into<Integer>, c: impl Into<Integer>) -> Self {
        QuadForm {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn discriminant(&self) -> Integer {
        &self.b * &self.b - Integer::from(4) * &self.a * &self.c
    }

    /// Form (a, b, (b^2 - D)/4a) for a given discriminant.
    pub fn from_ab(a: Integer, b: Integer, d: &Integer) -> Result<Self> {
        let num = &b * &b - d;
        let den = Integer::from(4) * &a;
        if !(&num % &den).is_zero() {
            return Err(Error::InvalidForm(format!("b^2 - D not divisible by 4a for ({a},{b})")));
        }
        Ok(QuadForm { c: num / den, a, b })
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        let na = -a;
        if !(b > &na && b <= a && a <= c) {
            return false;
        }
        !(a == c && b.is_negative())
    }
}

impl From<QuadForm> for [String; 3] {
    fn from(f: QuadForm) -> Self {
        [f.a.to_string(), f.b.to_string(), f.c.to_string()]
    }
}

impl TryFrom<[String; 3]> for QuadForm {
    type Error = Error;
    fn try_from(v: [String; 3]) -> Result<Self> {
        let p = |s: &String| s.parse::<Integer>().map_err(|e| Error::Serde(e.to_string()));
        Ok(QuadForm::new(p(&v[0])?, p(&v[1])?, p(&v[2])?))
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// A class of the form class group, held as its unique reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IdealClass(QuadForm);

impl IdealClass {
    pub fn form(&self) -> &QuadForm {
        &self.0
    }

    pub fn a(&self) -> &Integer {
        &self.0.a
    }

    pub fn b(&self) -> &Integer {
        &self.0.b
    }

    pub fn discriminant(&self) -> Integer {
        self.0.discriminant()
    }

    pub fn is_identity(&self) -> bool {
        self.0.a.is_one()
    }

    /// Norm of the (primitive) ideal this reduced form corresponds to.
    pub fn norm(&self) -> &Integer {
        &self.0.a
    }
}

impl fmt::Display for IdealClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Standard reduction loop for positive definite forms.
pub fn reduce(form: &QuadForm) -> Result<IdealClass> {
    let d = form.discriminant();
    if !d.is_negative() || !form.a.is_positive() {
        return Err(Error::InvalidForm(format!("{form} is not positive definite")));
    }
    if !form.is_primitive() {
        return Err(Error::InvalidForm(format!("{form} is not primitive")));
    }
    Ok(IdealClass(reduce_unchecked(form.clone())))
}

fn normalize(f: QuadForm) -> QuadForm {
    // bring b into (-a, a]
    let two_a = Integer::from(2) * &f.a;
    let k = (&f.a - &f.b).div_floor(&two_a);
    if k.is_zero() {
        return f;
    }
    let b2 = &f.b + &two_a * &k;
    let c2 = &f.a * &k * &k + &f.b * &k + &f.c;
    QuadForm {
        a: f.a,
        b: b2,
        c: c2,
    }
}

fn reduce_unchecked(mut f: QuadForm) -> QuadForm {
    f = normalize(f);
    while f.a > f.c {
        f = QuadForm {
            a: f.c,
            b: -f.b,
            c: f.a,
        };
        f = normalize(f);
    }
    if f.a == f.c && f.b.is_negative() {
        f.b = -f.b;
    }
    f
}

pub fn identity(d: &Discriminant) -> IdealClass {
    identity_for(d.d())
}

fn identity_for(d: &Integer) -> IdealClass {
    let b = if d.is_odd() { Integer::one() } else { Integer::zero() };
    let c = (&b * &b - d) / 4;
    IdealClass(QuadForm::new(1, b, c))
}

pub fn inverse(x: &IdealClass) -> IdealClass {
    IdealClass(reduce_unchecked(QuadForm {
        a: x.0.a.clone(),
        b: -x.0.b.clone(),
        c: x.0.c.clone(),
    }))
}

fn ext_gcd(a: &Integer, b: &Integer) -> (Integer, Integer, Integer) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Gauss composition (Shanks' arrangement) followed by reduction.
pub fn compose(x: &IdealClass, y: &IdealClass) -> Result<IdealClass> {
    let d = x.discriminant();
    if d != y.discriminant() {
        return Err(Error::DiscriminantMismatch);
    }
    let (f1, f2) = if x.0.a <= y.0.a { (&x.0, &y.0) } else { (&y.0, &x.0) };
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2, c2) = (&f2.a, &f2.b, &f2.c);
    let s: Integer = (b1 + b2) / 2;
    let n = b2 - &s;
    let (d, y1) = if (a2 % a1).is_zero() {
        (a1.clone(), Integer::zero())
    } else {
        let (g, u, _) = ext_gcd(a2, a1);
        (g, u)
    };
    let (d1, x2, y2) = if (&s % &d).is_zero() {
        (d.clone(), Integer::zero(), -Integer::one())
    } else {
        let (g, u, v) = ext_gcd(&s, &d);
        (g, u, -v)
    };
    let v1 = a1 / &d1;
    let v2 = a2 / &d1;
    let r = (&y1 * &y2 * &n - &x2 * c2).mod_floor(&v1);
    let b3 = b2 + Integer::from(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    let c3 = (c2 * &d1 + &r * (b2 + &v2 * &r)) / &v1;
    Ok(IdealClass(reduce_unchecked(QuadForm::new(a3, b3, c3))))
}

pub fn square(x: &IdealClass) -> IdealClass {
    compose(x, x).expect("same discriminant")
}

/// x^e by square and multiply; negative e uses the inverse.
pub fn pow(x: &IdealClass, e: &Integer) -> IdealClass {
    let d = x.discriminant();
    let mut base = if e.is_negative() { inverse(x) } else { x.clone() };
    let e = e.abs();
    let mut acc = identity_for(&d);
    let bits = e.bits();
    for i in 0..bits {
        if e.bit(i) {
            acc = compose(&acc, &base).expect("same discriminant");
        }
        if i + 1 < bits {
            base = square(&base);
        }
    }
    acc
}

pub fn pow_i64(x: &IdealClass, e: i64) -> IdealClass {
    pow(x, &Integer::from(e))
}

/// Reduced class of (l, b, (b^2-D)/4l) with b the smallest non-negative
/// solution of b^2 = D mod 4l.
pub fn prime_form(d: &Discriminant, l: u64) -> Result<IdealClass> {
    if !is_prime_u64(l) {
        return Err(Error::NotPrime(l.into()));
    }
    let dd = d.d();
    let li = Integer::from(l);
    if (dd % &li).is_zero() {
        return Err(Error::PrimeRamified(l));
    }
    if kronecker(dd, &li) == -1 {
        return Err(Error::PrimeInert(l));
    }
    let four_l = Integer::from(4 * l);
    for b in 0..2 * l {
        let bi = Integer::from(b);
        if ((&bi * &bi - dd) % &four_l).is_zero() {
            let f = QuadForm::from_ab(li.clone(), bi, dd)?;
            return Ok(IdealClass(reduce_unchecked(f)));
        }
    }
    unreachable!("split prime has a square root of D mod 4l")
}

/// The unreduced prime form (l, b, c) before reduction; b as in `prime_form`.
pub fn prime_form_b(d: &Discriminant, l: u64) -> Result<u64> {
    prime_form(d, l)?;
    let dd = d.d();
    let four_l = Integer::from(4 * l);
    (0..2 * l)
        .find(|&b| {
            let bi = Integer::from(b);
            ((&bi * &bi - dd) % &four_l).is_zero()
        })
        .ok_or(Error::PrimeInert(l))
}

const ENUM_BOUND: u64 = 1_000_000_000;

/// All reduced primitive forms of discriminant D, sorted.
pub fn reduced_forms(d: &Integer) -> Result<Vec<IdealClass>> {
    let dd = d.to_i64().ok_or(Error::TooLarge)?;
    if dd >= 0 {
        return Err(Error::InvalidForm("discriminant must be negative".into()));
    }
    if dd.unsigned_abs() > ENUM_BOUND {
        return Err(Error::TooLarge);
    }
    let mut out = vec![];
    let mut a: i64 = 1;
    while 3 * a * a <= -dd {
        let mut b = -a + 1;
        while b <= a {
            if (b * b - dd) % (4 * a) == 0 {
                let c = (b * b - dd) / (4 * a);
                let ok = c >= a && !(b < 0 && (a == c)) && gcd3(a, b, c) == 1;
                if ok {
                    out.push(IdealClass(QuadForm::new(a, b, c)));
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// h(D) by enumeration of reduced forms.
pub fn class_number(d: &Discriminant) -> Result<u64> {
    Ok(reduced_forms(d.d())?.len() as u64)
}

/// h(D) from h(D0) and the conductor:
/// h(D) = h(D0) f / [O0^* : O^*] * prod_{p | f} (1 - (D0|p)/p).
pub fn class_number_formula(d: &Discriminant) -> Result<u64> {
    let h0 = reduced_forms(d.d0())?.len() as u64;
    let mut primes: Vec<u64> = d.conductor_factors.clone();
    primes.sort_unstable();
    let f: u64 = primes.iter().product();
    let mut num = h0 * f;
    primes.dedup();
    for p in primes {
        let k = kronecker(d.d0(), &Integer::from(p));
        num = num / p * (p as i64 - k as i64) as u64;
    }
    let index = (units(d.d0()) / units(d.d())) as u64;
    Ok(num / index)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(a: i64, b: i64, c: i64) -> IdealClass {
        reduce(&QuadForm::new(a, b, c)).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(cls(1, 1, 63).form(), &QuadForm::new(1, 1, 63));
        assert_eq!(cls(3, -1, 21).form(), &QuadForm::new(3, -1, 21));
        assert_eq!(cls(21, 1, 3).form(), &QuadForm::new(3, -1, 21));
        assert!(reduce(&QuadForm::new(2, 2, 2)).is_err());
        assert!(reduce(&QuadForm::new(1, 3, 1)).is_err());
    }

    #[test]
    fn compose_examples() {
        let x = cls(3, 1, 21);
        let id = identity(&Discriminant::fundamental(-251).unwrap());
        assert_eq!(compose(&id, &x).unwrap(), x);
        assert_eq!(compose(&x, &inverse(&x)).unwrap(), id);
        let x2 = compose(&x, &x).unwrap();
        assert_eq!(x2.a(), &Integer::from(7));
        assert_eq!(pow_i64(&x, 7), id);
        assert_eq!(pow_i64(&x, 0), id);
        assert_eq!(inverse(&x).form(), &QuadForm::new(3, -1, 21));
        let other = cls(1, 0, 1);
        assert_eq!(compose(&x, &other), Err(Error::DiscriminantMismatch));
    }

    #[test]
    fn class_numbers() {
        let d = Discriminant::fundamental(-251).unwrap();
        assert_eq!(class_number(&d).unwrap(), 7);
        assert_eq!(class_number(&Discriminant::fundamental(-3).unwrap()).unwrap(), 1);
        let d = Discriminant::new((-251).into(), vec![3]).unwrap();
        assert_eq!(d.d(), &Integer::from(-2259));
        assert_eq!(class_number(&d).unwrap(), 14);
        assert_eq!(class_number_formula(&d).unwrap(), 14);
        let d = Discriminant::new((-4).into(), vec![5]).unwrap();
        assert_eq!(class_number(&d).unwrap(), class_number_formula(&d).unwrap());
        let d = Discriminant::new((-3).into(), vec![7]).unwrap();
        assert_eq!(class_number(&d).unwrap(), class_number_formula(&d).unwrap());
    }

    #[test]
    fn prime_forms() {
        let d = Discriminant::fundamental(-251).unwrap();
        assert_eq!(prime_form(&d, 3).unwrap().form(), &QuadForm::new(3, 1, 21));
        assert_eq!(prime_form(&d, 5).unwrap().form(), &QuadForm::new(5, 3, 13));
        assert_eq!(prime_form(&d, 2), Err(Error::PrimeInert(2)));
        assert_eq!(prime_form(&d, 251), Err(Error::PrimeRamified(251)));
    }

    #[test]
    fn fundamental_check() {
        assert!(is_fundamental(&Integer::from(-251)));
        assert!(is_fundamental(&Integer::from(-4)));
        assert!(is_fundamental(&Integer::from(-8)));
        assert!(!is_fundamental(&Integer::from(-2259)));
        assert!(!is_fundamental(&Integer::from(-12)));
    }
}
