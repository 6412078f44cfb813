//! Discrete logarithms, relation lattices and short exponent vectors.

use std::collections::HashMap;

use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::forms::{class_number, compose, identity, inverse, pow_i64, prime_form, Discriminant, IdealClass};
use crate::arith::int::{factor_u64, Integer};
use crate::arith::lattice::{gauss_sample_coset, lll, smoothing_bound, IntMatrix};
use crate::error::{Error, Result};

/// Class group of a discriminant with its (computed) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroup {
    disc: Discriminant,
    order: u64,
}

impl ClassGroup {
    pub fn new(disc: Discriminant) -> Result<Self> {
        let order = class_number(&disc)?;
        Ok(ClassGroup { disc, order })
    }

    /// Trusts the caller for the order.
    pub fn with_order(disc: Discriminant, order: u64) -> Self {
        ClassGroup { disc, order }
    }

    pub fn disc(&self) -> &Discriminant {
        &self.disc
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> IdealClass {
        identity(&self.disc)
    }

    pub fn prime_form(&self, l: u64) -> Result<IdealClass> {
        prime_form(&self.disc, l)
    }

    pub fn order_of(&self, x: &IdealClass) -> u64 {
        order_dividing(x, self.order)
    }

    /// Largest odd divisor of the group order.
    pub fn odd_order(&self) -> u64 {
        let mut h = self.order;
        while h % 2 == 0 {
            h /= 2;
        }
        h
    }
}

/// Order of x given that it divides n.
pub fn order_dividing(x: &IdealClass, n: u64) -> u64 {
    let mut ord = n;
    for (r, _) in factor_u64(n) {
        while ord % r == 0 && pow_i64(x, (ord / r) as i64).is_identity() {
            ord /= r;
        }
    }
    ord
}

/// Split primes together with their prime-form classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationSet {
    pub primes: Vec<u64>,
    pub classes: Vec<IdealClass>,
}

impl GenerationSet {
    pub fn from_primes(disc: &Discriminant, primes: &[u64]) -> Result<Self> {
        let classes = primes.iter().map(|&l| prime_form(disc, l)).collect::<Result<_>>()?;
        Ok(GenerationSet {
            primes: primes.to_vec(),
            classes,
        })
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    fn prefix(&self, k: usize) -> GenerationSet {
        GenerationSet {
            primes: self.primes[..k].to_vec(),
            classes: self.classes[..k].to_vec(),
        }
    }
}

/// prod classes[i]^e[i]
pub fn evaluate(id: &IdealClass, classes: &[IdealClass], e: &[i64]) -> IdealClass {
    classes
        .iter()
        .zip(e)
        .fold(id.clone(), |acc, (c, &k)| compose(&acc, &pow_i64(c, k)).expect("same discriminant"))
}

fn bsgs(g: &IdealClass, t: &IdealClass, n: u64) -> Option<u64> {
    let m = (n as f64).sqrt().ceil() as u64 + 1;
    let mut baby = HashMap::with_capacity(m as usize);
    let id = pow_i64(g, 0);
    let mut cur = id;
    for i in 0..m {
        baby.entry(cur.clone()).or_insert(i);
        cur = compose(&cur, g).expect("same discriminant");
    }
    let giant = inverse(&pow_i64(g, m as i64));
    let mut y = t.clone();
    for j in 0..=m {
        if let Some(&i) = baby.get(&y) {
            let k = j * m + i;
            if k < n.max(1) || n == 0 {
                return Some(k % n.max(1));
            }
        }
        y = compose(&y, &giant).expect("same discriminant");
    }
    None
}

/// log_g t in a cyclic group of order r^a (Pohlig-Hellman on digits).
fn dlog_prime_power(g: &IdealClass, t: &IdealClass, r: u64, a: u32) -> Option<u64> {
    if a == 0 {
        return t.is_identity().then_some(0);
    }
    let gamma = pow_i64(g, r.pow(a - 1) as i64);
    let mut k = 0u64;
    let mut rj = 1u64;
    for j in 0..a {
        let rest = compose(&pow_i64(g, -(k as i64)), t).ok()?;
        let hj = pow_i64(&rest, r.pow(a - 1 - j) as i64);
        let d = bsgs(&gamma, &hj, r)?;
        k += d * rj;
        rj *= r;
    }
    pow_i64(g, k as i64).eq(t).then_some(k)
}

/// Solve in the r-primary part. `gens` and `t` are already projected.
fn dlog_primary(gens: &[IdealClass], t: &IdealClass, r: u64, v: u32) -> Result<Vec<i64>> {
    let n = r.pow(v);
    let w = gens.len();
    let orders: Vec<u64> = gens.iter().map(|g| order_dividing(g, n)).collect();
    let mut out = vec![0i64; w];
    if t.is_identity() {
        return Ok(out);
    }
    let Some(best) = (0..w).max_by_key(|&i| orders[i]) else {
        return Err(Error::NotInSpan);
    };
    let a = orders[best].trailing_zeros_base(r);
    let cyclic = (0..w).all(|i| i == best || dlog_prime_power(&gens[best], &gens[i], r, a).is_some());
    if cyclic {
        return match dlog_prime_power(&gens[best], t, r, a) {
            Some(k) => {
                out[best] = k as i64;
                Ok(out)
            }
            None => Err(Error::NotInSpan),
        };
    }
    // non-cyclic primary part: enumerate the span
    let id = pow_i64(t, 0);
    let mut table: HashMap<IdealClass, Vec<i64>> = HashMap::new();
    table.insert(id, vec![0; w]);
    for i in 0..w {
        let snapshot: Vec<(IdealClass, Vec<i64>)> = table.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        for (x, e) in snapshot {
            let mut cur = x;
            for k in 1..orders[i] {
                cur = compose(&cur, &gens[i])?;
                table.entry(cur.clone()).or_insert_with(|| {
                    let mut e2 = e.clone();
                    e2[i] = k as i64;
                    e2
                });
            }
        }
    }
    table.get(t).cloned().ok_or(Error::NotInSpan)
}

trait LogBase {
    fn trailing_zeros_base(self, r: u64) -> u32;
}

impl LogBase for u64 {
    fn trailing_zeros_base(mut self, r: u64) -> u32 {
        let mut a = 0;
        while self > 1 && self % r == 0 {
            self /= r;
            a += 1;
        }
        a
    }
}

fn modinv_u64(a: u64, m: u64) -> u64 {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    s0.rem_euclid(m as i128) as u64
}

/// Exponents e >= 0 with prod S_i^{e_i} = target, each e_i below ord(S_i).
/// Pohlig-Hellman over the prime-power components of the group order.
pub fn discrete_log(group: &ClassGroup, target: &IdealClass, s: &GenerationSet) -> Result<Vec<Integer>> {
    Ok(discrete_log_i64(group, target, s)?.into_iter().map(Integer::from).collect())
}

pub fn discrete_log_i64(group: &ClassGroup, target: &IdealClass, s: &GenerationSet) -> Result<Vec<i64>> {
    if target.discriminant() != *group.disc().d() {
        return Err(Error::DiscriminantMismatch);
    }
    let h = group.order();
    let w = s.len();
    let mut e = vec![0i128; w];
    for (r, v) in factor_u64(h) {
        let rv = r.pow(v);
        let m = h / rv;
        let gens: Vec<IdealClass> = s.classes.iter().map(|c| pow_i64(c, m as i64)).collect();
        let t = pow_i64(target, m as i64);
        let er = dlog_primary(&gens, &t, r, v)?;
        let u = modinv_u64(m % rv, rv) as i128 * m as i128;
        for (acc, x) in e.iter_mut().zip(er) {
            *acc += u * x as i128;
        }
    }
    let out: Vec<i64> = e
        .iter()
        .zip(&s.classes)
        .map(|(&x, c)| x.rem_euclid(group.order_of(c) as i128) as i64)
        .collect();
    debug_assert_eq!(&evaluate(&group.identity(), &s.classes, &out), target);
    Ok(out)
}

/// Lattice of exponent vectors y with prod S_i^{y_i} = 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationLattice {
    pub basis: IntMatrix,
    pub reduced: IntMatrix,
}

impl RelationLattice {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Index of the lattice in Z^w, equal to the order of the span of S.
    pub fn index(&self) -> Integer {
        self.basis.det()
    }

    pub fn sigma_min(&self) -> f64 {
        smoothing_bound(&self.reduced)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        let v: Vec<Integer> = v.iter().map(|&x| Integer::from(x)).collect();
        self.basis.contains(&v)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d = vec![1u64];
    for (p, k) in factor_u64(n) {
        let cur = d.clone();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            d.extend(cur.iter().map(|x| x * pk));
        }
    }
    d.sort_unstable();
    d
}

/// Triangular basis from successive relative orders, then LLL.
pub fn relation_lattice(group: &ClassGroup, s: &GenerationSet) -> Result<RelationLattice> {
    let w = s.len();
    let divs = divisors(group.order());
    let mut rows = Vec::with_capacity(w);
    for i in 0..w {
        let prefix = s.prefix(i);
        let mut found = None;
        for &n in &divs {
            let x = pow_i64(&s.classes[i], n as i64);
            let rel = if i == 0 {
                x.is_identity().then(Vec::new)
            } else {
                discrete_log_i64(group, &x, &prefix).ok()
            };
            if let Some(e) = rel {
                found = Some((n, e));
                break;
            }
        }
        let (n, e) = found.expect("the group order annihilates every class");
        let mut row = vec![Integer::zero(); w];
        for (j, x) in e.into_iter().enumerate() {
            row[j] = Integer::from(-x);
        }
        row[i] = Integer::from(n);
        rows.push(row);
    }
    let basis = IntMatrix::new(rows)?;
    let reduced = lll(&basis)?;
    Ok(RelationLattice { basis, reduced })
}

/// Lattice vector with every entry at least `bound`, found by nearest-plane
/// rounding towards a constant vector.
pub fn positive_shift(lat: &RelationLattice, bound: i64) -> Vec<i64> {
    let b = &lat.reduced;
    let gs = b.gram_schmidt_f64();
    let n = b.nrows();
    let rows: Vec<Vec<f64>> = b.rows().iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
    let mut t = bound.max(0) as f64;
    loop {
        let mut c = vec![t; b.ncols()];
        let mut v = vec![0f64; b.ncols()];
        for i in (0..n).rev() {
            let nb: f64 = gs[i].iter().map(|x| x * x).sum();
            let k = (c.iter().zip(&gs[i]).map(|(x, y)| x * y).sum::<f64>() / nb).round();
            for j in 0..c.len() {
                c[j] -= k * rows[i][j];
                v[j] += k * rows[i][j];
            }
        }
        let v: Vec<i64> = v.iter().map(|x| x.round() as i64).collect();
        if v.iter().all(|&x| x >= bound) {
            return v;
        }
        t += 1.0;
    }
}

/// Non-negative e with prod S_i^{e_i} = x: a discrete Gaussian over the
/// coset of the relation lattice, moved into the positive orthant by a
/// fixed lattice vector.
pub fn sample_short_exponents<R: Rng>(
    group: &ClassGroup,
    x: &IdealClass,
    s: &GenerationSet,
    lat: &RelationLattice,
    sigma: f64,
    rng: &mut R,
) -> Result<Vec<Integer>> {
    let e0: Vec<Integer> = discrete_log(group, x, s)?;
    let w = s.len();
    let bound = (2.5 * sigma / (2.0 * std::f64::consts::PI).sqrt()).ceil() as i64;
    let shift = positive_shift(lat, bound);
    let zero = vec![0f64; w];
    loop {
        let v = gauss_sample_coset(&lat.reduced, &e0, sigma, &zero, rng)?;
        let e: Vec<Integer> = v.iter().zip(&shift).map(|(a, &b)| a + b).collect();
        if e.iter().all(|x| x >= &Integer::zero()) {
            return Ok(e);
        }
    }
}
