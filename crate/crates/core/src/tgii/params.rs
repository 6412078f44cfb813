//! Parameter generation, the trapdoor and the prime registry.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::action::{crt2, Side};
use super::serial::dec;
use crate::arith::int::{factor_u64, gcd_u64, is_prime_u64, kronecker_i64, small_primes};
use crate::classgroup::{
    class_number, compose, discrete_log, inverse, pow_i64, ClassGroup, Discriminant, GenerationSet, IdealClass,
};
use crate::error::{Error, Result};
use crate::modpoly::available;
use crate::volcano::ell_set;

/// Largest prime considered for walking sets and registry pools.
const MAX_LEVEL: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenConfig {
    pub d0: i64,
    #[serde(default)]
    pub conductor_factors: Vec<u64>,
    /// Pinned (p, q); otherwise searched in `prime_bounds`.
    #[serde(default)]
    pub primes: Option<(u64, u64)>,
    pub prime_bounds: (u64, u64),
    /// Primes never handed out as encoding degrees.
    #[serde(default)]
    pub exclude: Vec<u64>,
    /// Pinned j0 mod N.
    #[serde(default)]
    pub j0: Option<u64>,
    /// (l, j1): orient both primes so that the prime form of norm l maps
    /// j0 to j1.
    #[serde(default)]
    pub anchor: Option<(u64, u64)>,
    /// Warn when #E or #E' is this smooth. Zero disables the check.
    #[serde(default)]
    pub smoothness_bound: u64,
    #[serde(default)]
    pub seed: u64,
}

impl GenConfig {
    pub fn toy() -> Self {
        GenConfig {
            d0: -251,
            conductor_factors: vec![],
            primes: Some((83, 173)),
            prime_bounds: (50, 500),
            exclude: vec![],
            j0: Some(12631),
            anchor: Some((3, 7601)),
            smoothness_bound: 0,
            seed: 0,
        }
    }

    pub fn app() -> Self {
        GenConfig {
            d0: -38891,
            conductor_factors: vec![],
            primes: Some((9743, 9833)),
            prime_bounds: (9000, 11000),
            exclude: vec![],
            j0: None,
            anchor: None,
            smoothness_bound: 0,
            seed: 1,
        }
    }

    /// D = 9 * (-251), h = 14, primes found by search.
    pub fn conductor3() -> Self {
        GenConfig {
            d0: -251,
            conductor_factors: vec![3],
            primes: None,
            prime_bounds: (500, 2000),
            exclude: vec![],
            j0: None,
            anchor: None,
            smoothness_bound: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicParams {
    #[serde(with = "dec")]
    pub n: u64,
    #[serde(with = "dec")]
    pub j0: u64,
}

/// Degrees already handed out, plus named pools kept back for
/// applications. Append-only.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PrimeRegistry {
    pub pool: Vec<u64>,
    pub used: BTreeSet<u64>,
    pub reserved: BTreeMap<String, Vec<u64>>,
}

impl PrimeRegistry {
    pub fn new(pool: Vec<u64>) -> Self {
        PrimeRegistry {
            pool,
            ..Default::default()
        }
    }

    /// Pool primes neither used nor reserved, ascending.
    pub fn available(&self) -> Vec<u64> {
        let held: BTreeSet<u64> = self.reserved.values().flatten().copied().collect();
        self.pool
            .iter()
            .copied()
            .filter(|l| !self.used.contains(l) && !held.contains(l))
            .collect()
    }

    /// The w smallest available primes, marked used.
    pub fn fresh(&mut self, w: usize) -> Result<Vec<u64>> {
        let a = self.available();
        if a.len() < w {
            return Err(Error::OutOfPrimes);
        }
        let out = a[..w].to_vec();
        self.used.extend(&out);
        Ok(out)
    }

    /// A named pool of `count` primes, created on first request.
    pub fn reserve(&mut self, name: &str, count: usize) -> Result<Vec<u64>> {
        if let Some(v) = self.reserved.get(name) {
            if v.len() != count {
                return Err(Error::Unsupported(format!("pool {name} already holds {} primes", v.len())));
            }
            return Ok(v.clone());
        }
        let a = self.available();
        if a.len() < count {
            return Err(Error::OutOfPrimes);
        }
        let v = a[..count].to_vec();
        self.reserved.insert(name.to_string(), v.clone());
        Ok(v)
    }

    pub fn reserved(&self, name: &str) -> Option<&[u64]> {
        self.reserved.get(name).map(|v| v.as_slice())
    }
}

/// Orbit of j0 under one generator of CL(D), per prime.
#[derive(Debug)]
struct CraterTables {
    index: HashMap<IdealClass, usize>,
    walks: [Vec<u64>; 2],
    pos: [HashMap<u64, usize>; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trapdoor {
    pub group: ClassGroup,
    pub odd_order: u64,
    pub sides: [Side; 2],
    #[serde(with = "dec")]
    pub j0: u64,
    /// Primes whose classes generate CL(D); used to walk arbitrary classes.
    pub walk: GenerationSet,
    /// Ell(O_D) mod p and mod q, sorted.
    pub craters: [Vec<u64>; 2],
    pub warnings: Vec<String>,
    #[serde(skip)]
    tables: Option<Arc<CraterTables>>,
}

impl Trapdoor {
    pub fn disc(&self) -> &Discriminant {
        self.group.disc()
    }

    pub fn p(&self) -> u64 {
        self.sides[0].p
    }

    pub fn q(&self) -> u64 {
        self.sides[1].p
    }

    pub fn n(&self) -> u64 {
        self.p() * self.q()
    }

    pub fn public_params(&self) -> PublicParams {
        PublicParams { n: self.n(), j0: self.j0 }
    }

    pub fn on_crater(&self, j: u64) -> bool {
        (0..2).all(|i| self.craters[i].binary_search(&(j % self.sides[i].p)).is_ok())
    }

    /// Builds the orbit tables when one walking prime generates CL(D).
    /// Idempotent; called by `gen` and after deserialization.
    pub fn prepare(&mut self) -> Result<()> {
        if self.tables.is_some() || self.walk.len() != 1 {
            return Ok(());
        }
        let h = self.group.order() as usize;
        let g = &self.walk.classes[0];
        if self.group.order_of(g) as usize != h {
            return Ok(());
        }
        let mut index = HashMap::with_capacity(h);
        let mut x = self.group.identity();
        for k in 0..h {
            index.insert(x.clone(), k);
            x = compose(&x, g)?;
        }
        let l = self.walk.primes[0];
        let mut walks: [Vec<u64>; 2] = Default::default();
        let mut pos: [HashMap<u64, usize>; 2] = Default::default();
        for i in 0..2 {
            let side = &self.sides[i];
            let start = self.j0 % side.p;
            let mut w = vec![start];
            w.extend(side.walk(self.disc(), start, l, 1, h)?);
            if w.pop() != Some(start) {
                return Err(Error::Degenerate(format!("orbit mod {} does not close", side.p)));
            }
            pos[i] = w.iter().enumerate().map(|(k, &j)| (j, k)).collect();
            if pos[i].len() != h {
                return Err(Error::Degenerate(format!("orbit mod {} repeats", side.p)));
            }
            walks[i] = w;
        }
        self.tables = Some(Arc::new(CraterTables { index, walks, pos }));
        Ok(())
    }

    fn check(&self, j: u64, c: &IdealClass) -> Result<()> {
        if c.discriminant() != *self.disc().d() {
            return Err(Error::DiscriminantMismatch);
        }
        if !self.on_crater(j) {
            return Err(Error::NotOnSurface);
        }
        Ok(())
    }

    /// C * j over Z/NZ.
    pub fn act(&self, j: u64, c: &IdealClass) -> Result<u64> {
        let j = j % self.n();
        self.check(j, c)?;
        let Some(t) = &self.tables else {
            return self.act_literal(j, c);
        };
        let k = t.index[c];
        let h = t.walks[0].len();
        let mut r = [0u64; 2];
        for i in 0..2 {
            let start = t.pos[i].get(&(j % self.sides[i].p)).ok_or(Error::NotOnSurface)?;
            r[i] = t.walks[i][(start + k) % h];
        }
        crt2(r[0], self.p(), r[1], self.q())
    }

    /// C * j by walking isogenies step by step, without the orbit tables.
    pub fn act_literal(&self, j: u64, c: &IdealClass) -> Result<u64> {
        let j = j % self.n();
        self.check(j, c)?;
        let e = crate::classgroup::group::discrete_log_i64(&self.group, c, &self.walk)?;
        let mut r = [0u64; 2];
        for (i, side) in self.sides.iter().enumerate() {
            let mut cur = j % side.p;
            for ((&l, cl), &k) in self.walk.primes.iter().zip(&self.walk.classes).zip(&e) {
                let ord = self.group.order_of(cl) as i64;
                let (dir, steps) = if 2 * k > ord { (-1, ord - k) } else { (1, k) };
                if steps > 0 {
                    cur = *side.walk(self.disc(), cur, l, dir, steps as usize)?.last().unwrap();
                }
            }
            r[i] = cur;
        }
        crt2(r[0], self.p(), r[1], self.q())
    }

    /// Uniform element of the odd part of CL(D).
    pub fn random_class<R: Rng>(&self, rng: &mut R) -> IdealClass {
        let e: Vec<i64> = self
            .walk
            .classes
            .iter()
            .map(|c| rng.gen_range(0..self.group.order_of(c) as i64))
            .collect();
        let x = crate::classgroup::evaluate(&self.group.identity(), &self.walk.classes, &e);
        pow_i64(&x, (self.group.order() / self.odd_order) as i64)
    }

    pub fn in_odd_part(&self, x: &IdealClass) -> bool {
        pow_i64(x, self.odd_order as i64).is_identity()
    }
}

fn reject(msg: impl Into<String>) -> Error {
    Error::ConfigRejected(msg.into())
}

fn odd_part(mut n: u64) -> u64 {
    while n > 0 && n % 2 == 0 {
        n /= 2;
    }
    n
}

fn is_squarefree_u64(n: u64) -> bool {
    factor_u64(n).iter().all(|&(_, e)| e == 1)
}

fn check_config(cfg: &GenConfig) -> Result<(Discriminant, u64)> {
    match cfg.d0 {
        -3 => return Err(reject("D0 = -3 is the j = 0 class")),
        -4 => return Err(reject("D0 = -4 is the j = 1728 class")),
        _ => {}
    }
    if cfg.d0 >= 0 || cfg.d0.rem_euclid(4) != 1 {
        return Err(reject(format!("D0 = {} must be negative and 1 mod 4", cfg.d0)));
    }
    if !is_squarefree_u64(cfg.d0.unsigned_abs()) {
        return Err(reject(format!("D0 = {} is not square-free", cfg.d0)));
    }
    let d0 = Discriminant::fundamental(cfg.d0)?;
    let h0 = class_number(&d0)?;
    if !is_prime_u64(h0) {
        return Err(reject(format!("h(D0) = {h0} is not prime")));
    }
    for &f in &cfg.conductor_factors {
        if !is_prime_u64(f) {
            return Err(reject(format!("conductor factor {f} is not prime")));
        }
        let k = f as i64 - kronecker_i64(cfg.d0, f) as i64;
        let m = odd_part(k as u64);
        if !is_squarefree_u64(m) {
            return Err(reject(format!("odd part of f - (D0|f) = {k} is not square-free for f = {f}")));
        }
        if m % h0 == 0 {
            return Err(reject(format!("h(D0) = {h0} divides the odd part of f - (D0|f) for f = {f}")));
        }
    }
    let d = Discriminant::new(cfg.d0.into(), cfg.conductor_factors.clone())?;
    Ok((d, h0))
}

/// (t, u) with t >= 0 and t^2 - 4p = u^2 D, smallest u first.
fn frobenius_for(d: &Discriminant, p: u64) -> Option<(i64, u64)> {
    let dd = d.d_i64() as i128;
    let mut best: Option<(i64, u64)> = None;
    let mut t: i128 = 0;
    while t * t < 4 * p as i128 {
        let delta = t * t - 4 * p as i128;
        if delta % dd == 0 {
            let q = (delta / dd) as u64;
            let s = (q as f64).sqrt().round() as u64;
            if s * s == q && best.is_none_or(|b| s < b.1) {
                best = Some((t as i64, s));
            }
        }
        t += 1;
    }
    best
}

fn largest_prime_factor(n: u64) -> u64 {
    factor_u64(n).last().map(|f| f.0).unwrap_or(1)
}

/// Split primes l with a shipped Phi_l modulo n, l not dividing `avoid`.
fn usable_primes(group: &ClassGroup, n: u64, avoid: u64) -> Vec<(u64, IdealClass)> {
    small_primes(MAX_LEVEL)
        .into_iter()
        .filter(|&l| l > 2 && avoid % l != 0 && n % l != 0 && available(l, n))
        .filter_map(|l| group.prime_form(l).ok().map(|c| (l, c)))
        .collect()
}

fn walking_set(group: &ClassGroup, cands: &[(u64, IdealClass)]) -> Result<GenerationSet> {
    let h = group.order();
    if let Some((l, c)) = cands.iter().find(|(_, c)| group.order_of(c) == h) {
        return Ok(GenerationSet {
            primes: vec![*l],
            classes: vec![c.clone()],
        });
    }
    let mut span: HashSet<IdealClass> = HashSet::from([group.identity()]);
    let mut s = GenerationSet {
        primes: vec![],
        classes: vec![],
    };
    for (l, c) in cands {
        if span.contains(c) {
            continue;
        }
        let ord = group.order_of(c) as i64;
        let old: Vec<IdealClass> = span.iter().cloned().collect();
        for k in 1..ord {
            let ck = pow_i64(c, k);
            for x in &old {
                span.insert(compose(x, &ck)?);
            }
        }
        s.primes.push(*l);
        s.classes.push(c.clone());
        if span.len() as u64 == h {
            return Ok(s);
        }
    }
    Err(reject("no set of usable primes generates CL(D)"))
}

/// Usable primes whose classes each generate the odd part and are
/// pairwise distinct up to inversion.
fn registry_pool(group: &ClassGroup, odd: u64, cands: &[(u64, IdealClass)], exclude: &[u64]) -> Vec<u64> {
    let mut seen: HashSet<IdealClass> = HashSet::new();
    let mut pool = vec![];
    for (l, c) in cands {
        if exclude.contains(l) || group.order_of(c) % odd != 0 || seen.contains(c) {
            continue;
        }
        seen.insert(c.clone());
        seen.insert(inverse(c));
        pool.push(*l);
    }
    pool
}

fn orient(side: &mut Side, d: &Discriminant, j0: u64, l: u64, j1: u64) -> Result<()> {
    for s in [1i8, -1] {
        side.sign = s;
        if side.step(d, j0 % side.p, l, 1)? == j1 % side.p {
            return Ok(());
        }
    }
    Err(reject(format!("anchor j = {j1} is not {l}-isogenous to j0 mod {}", side.p)))
}

/// Public parameters, trapdoor and a fresh registry for a configuration.
pub fn gen(cfg: &GenConfig) -> Result<(PublicParams, Trapdoor, PrimeRegistry)> {
    let (d, _) = check_config(cfg)?;
    let group = ClassGroup::new(d.clone())?;
    let h = group.order();
    let odd = odd_part(h);
    if odd > 1 {
        let cyclic = small_primes(10_000)
            .into_iter()
            .filter_map(|l| group.prime_form(l).ok())
            .take(200)
            .any(|c| group.order_of(&pow_i64(&c, (h / odd) as i64)) == odd);
        if !cyclic {
            return Err(reject("odd part of CL(D) is not cyclic"));
        }
    }

    let (p, q) = match cfg.primes {
        Some(pq) => pq,
        None => {
            let (lo, hi) = cfg.prime_bounds;
            let found: Vec<u64> = (lo..=hi)
                .filter(|&p| is_prime_u64(p) && d.d_i64() % p as i64 != 0)
                .filter(|&p| frobenius_for(&d, p).is_some_and(|f| f.1 == 1))
                .take(2)
                .collect();
            if found.len() < 2 {
                return Err(reject(format!("fewer than two primes in [{lo}, {hi}] with t^2 - 4p = D")));
            }
            (found[0], found[1])
        }
    };
    if p == q {
        return Err(reject("p = q"));
    }
    let mut sides = [Side { p, t: 0, u: 0, sign: 1 }; 2];
    let mut warnings = vec!["desk-scale primes: no security".to_string()];
    for (side, prime) in sides.iter_mut().zip([p, q]) {
        if !is_prime_u64(prime) {
            return Err(reject(format!("{prime} is not prime")));
        }
        if d.d_i64() % prime as i64 == 0 {
            return Err(reject(format!("{prime} divides D")));
        }
        let (t, u) = frobenius_for(&d, prime).ok_or_else(|| reject(format!("no trace for D over F_{prime}")))?;
        *side = Side { p: prime, t, u, sign: 1 };
        if cfg.smoothness_bound > 0 {
            for n in [prime + 1 - t as u64, prime + 1 + t as u64] {
                if largest_prime_factor(n) <= cfg.smoothness_bound {
                    warnings.push(format!("#E = {n} over F_{prime} is {}-smooth", cfg.smoothness_bound));
                }
            }
        }
    }
    let n = p * q;

    let mut craters: [Vec<u64>; 2] = Default::default();
    for i in 0..2 {
        craters[i] = ell_set(&d, sides[i].p)?;
        if craters[i].len() as u64 != h {
            return Err(Error::Degenerate(format!(
                "found {} curves with CM by O_D over F_{}, expected {h}",
                craters[i].len(),
                sides[i].p
            )));
        }
    }
    let j0 = match cfg.j0 {
        Some(j) => {
            let j = j % n;
            if (0..2).any(|i| craters[i].binary_search(&(j % sides[i].p)).is_err()) {
                return Err(reject(format!("pinned j0 = {j} is not on both craters")));
            }
            j
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let a = *craters[0].choose(&mut rng).unwrap();
            let b = *craters[1].choose(&mut rng).unwrap();
            crt2(a, p, b, q)?
        }
    };
    if gcd_u64(j0, n) != 1 {
        warnings.push(format!("gcd(j0, N) = {}", gcd_u64(j0, n)));
    }

    let avoid = sides[0].u * sides[1].u;
    let cands = usable_primes(&group, n, avoid);
    let walk = walking_set(&group, &cands)?;
    if let Some((l, j1)) = cfg.anchor {
        for side in sides.iter_mut() {
            orient(side, &d, j0, l, j1)?;
        }
    }
    let pool = registry_pool(&group, odd, &cands, &cfg.exclude);

    let mut td = Trapdoor {
        group,
        odd_order: odd,
        sides,
        j0,
        walk,
        craters,
        warnings,
        tables: None,
    };
    td.prepare()?;
    Ok((td.public_params(), td, PrimeRegistry::new(pool)))
}

/// Exponents of x over S, used by callers that want the deterministic
/// minimal vector instead of a Gaussian sample.
pub fn minimal_exponents(td: &Trapdoor, x: &IdealClass, s: &GenerationSet) -> Result<Vec<u64>> {
    Ok(discrete_log(&td.group, x, s)?
        .into_iter()
        .map(|e| u64::try_from(e).expect("discrete_log returns non-negative exponents"))
        .collect())
}
