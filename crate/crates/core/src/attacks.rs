//! Attacks on the encoding: gcd-only scripts, the parallelogram attack,
//! the Hilbert class polynomial attack, factoring from neighbor
//! collisions and the discriminant search.
//!
//! Each attack returns a [`Transcript`] that can be replayed with
//! [`run_gcd_script`]. Operations outside the gcd-only model (Phi of a
//! prime power, H_D) are listed by name in `outside_model`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::int::{crt_symmetric, gcd_u64, is_prime_u64, isqrt, kronecker_i64, to_u64, Integer};
use crate::arith::{Poly, Zn};
use crate::classgroup::{class_number, Discriminant};
use crate::error::{Error, Result};
use crate::modpoly::reduced;
use crate::tgii::serial::dec;
use crate::tgii::{common_gcd, gcd_op, ComposableEncoding, PublicParams};
use crate::volcano::{ell_set, ell_set_closure};

/// Largest |D| accepted by [`hilbert_over_z`].
pub const HILBERT_BOUND: u64 = 10_000;

/// A j-invariant known to the attacker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ref {
    J0,
    /// `published[enc].lists[list][entry]`.
    Published { enc: usize, list: usize, entry: usize },
    /// Output of an earlier step.
    Step(usize),
}

/// gcd_op(l1, l2, a, b): the l2-neighbor of `a` that is an l1-neighbor
/// of `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GcdStep {
    pub l1: u64,
    pub l2: u64,
    pub a: Ref,
    pub b: Ref,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GcdScript {
    pub steps: Vec<GcdStep>,
}

impl GcdScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Appends a step and returns a reference to its output.
    pub fn push(&mut self, l1: u64, l2: u64, a: Ref, b: Ref) -> Ref {
        self.steps.push(GcdStep { l1, l2, a, b });
        Ref::Step(self.steps.len() - 1)
    }

    /// Every reference resolves and no step shares a prime between its
    /// two degrees.
    pub fn validate(&self, published: &[ComposableEncoding]) -> Result<()> {
        for (i, s) in self.steps.iter().enumerate() {
            for r in [s.a, s.b] {
                check_ref(r, published, i).map_err(|m| Error::ScriptError(format!("step {i}: {m}")))?;
            }
            if gcd_u64(s.l1, s.l2) > 1 {
                return Err(Error::ScriptError(format!("step {i}: degrees {} and {} share a factor", s.l1, s.l2)));
            }
        }
        Ok(())
    }
}

fn check_ref(r: Ref, published: &[ComposableEncoding], before: usize) -> std::result::Result<(), String> {
    match r {
        Ref::J0 => Ok(()),
        Ref::Step(k) if k < before => Ok(()),
        Ref::Step(k) => Err(format!("step {k} is not computed yet")),
        Ref::Published { enc, list, entry } => published
            .get(enc)
            .and_then(|e| e.lists.get(list))
            .and_then(|t| t.get(entry))
            .map(|_| ())
            .ok_or_else(|| format!("no published j at ({enc}, {list}, {entry})")),
    }
}

fn resolve(pp: &PublicParams, published: &[ComposableEncoding], out: &[u64], r: Ref) -> u64 {
    match r {
        Ref::J0 => pp.j0,
        Ref::Step(k) => out[k],
        Ref::Published { enc, list, entry } => published[enc].lists[list][entry],
    }
}

/// Runs the script and returns every step output in order.
pub fn run_gcd_script(pp: &PublicParams, published: &[ComposableEncoding], script: &GcdScript) -> Result<Vec<u64>> {
    script.validate(published)?;
    let mut out = Vec::with_capacity(script.len());
    for s in &script.steps {
        let a = resolve(pp, published, &out, s.a);
        let b = resolve(pp, published, &out, s.b);
        out.push(gcd_op(pp, s.l1, s.l2, a, b)?);
    }
    Ok(out)
}

/// Record of one attack run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub attack: String,
    pub script: GcdScript,
    /// Operations used beyond gcd_op on published values.
    pub outside_model: Vec<String>,
    #[serde(with = "dec")]
    pub result: u64,
}

/// Symbolic version of the extraction loop: appends the gcd steps for
/// the concatenation of the given lists and returns the walk (degree,
/// reference) it produces, ending at the extracted value.
fn extract_path(script: &mut GcdScript, parts: &[(u64, Vec<Ref>)]) -> Vec<(u64, Ref)> {
    let mut u: Vec<Ref> = vec![];
    let mut v: Vec<u64> = vec![];
    for (l, list) in parts {
        let utemp = u.len();
        let mut below = u.clone();
        for &start in list {
            let mut t = start;
            let mut row = Vec::with_capacity(utemp);
            for h in 0..utemp {
                t = script.push(*l, v[h], t, below[h]);
                row.push(t);
            }
            u.push(t);
            v.push(*l);
            below = row;
        }
    }
    v.into_iter().zip(u).collect()
}

fn parts_of(published: &[ComposableEncoding], which: &[usize]) -> Vec<(u64, Vec<Ref>)> {
    let mut parts = vec![];
    for &enc in which {
        for (list, (&l, t)) in published[enc].degrees.iter().zip(&published[enc].lists).enumerate() {
            let refs = (0..t.len()).map(|entry| Ref::Published { enc, list, entry }).collect();
            parts.push((l, refs));
        }
    }
    parts
}

/// The gcd script that converts the composition of the published
/// encodings listed in `which`, and the reference holding the result.
pub fn convert_script(published: &[ComposableEncoding], which: &[usize]) -> (GcdScript, Ref) {
    let mut script = GcdScript::new();
    let path = extract_path(&mut script, &parts_of(published, which));
    let last = path.last().map(|&(_, r)| r).unwrap_or(Ref::J0);
    (script, last)
}

fn shared(x: &ComposableEncoding, y: &ComposableEncoding) -> Option<u64> {
    x.degrees.iter().copied().find(|l| y.degrees.contains(l))
}

/// Given encodings with a * b = c, recovers the canonical encoding of
/// b^{-1} using gcd_op only.
///
/// Let X = b^{-1} * j0. Then X walks to j0 along b and to a * j0 along c.
/// The walk of c from j0 and the walk of b from a * j0 are both
/// extractable, and every missing corner of the grid between them is the
/// unique common neighbor of two known corners. With single-step b and c
/// this is one gcd.
pub fn parallelogram(
    pp: &PublicParams,
    a: &ComposableEncoding,
    b: &ComposableEncoding,
    c: &ComposableEncoding,
) -> Result<Transcript> {
    for (x, y, name) in [(a, b, "a and b"), (a, c, "a and c"), (b, c, "b and c")] {
        if let Some(l) = shared(x, y) {
            return Err(Error::NotApplicable(format!("{name} share prime {l}")));
        }
    }
    let published = [a.clone(), b.clone(), c.clone()];
    let mut script = GcdScript::new();
    let ab = extract_path(&mut script, &parts_of(&published, &[0, 1]));
    let cw = extract_path(&mut script, &parts_of(&published, &[2]));
    let na = a.size();
    let m = b.size();
    let n = c.size();

    // top[s] = (a * b_1 ... b_s) * j0, right[t] = (c_1 ... c_t) * j0.
    let top: Vec<Ref> = (0..=m)
        .map(|s| if na + s == 0 { Ref::J0 } else { ab[na + s - 1].1 })
        .collect();
    let beta: Vec<u64> = ab[na..].iter().map(|&(l, _)| l).collect();
    let right: Vec<Ref> = std::iter::once(Ref::J0).chain(cw.iter().map(|&(_, r)| r)).collect();
    let gamma: Vec<u64> = cw.iter().map(|&(l, _)| l).collect();

    // grid[s][t] = X * (b_1 ... b_s) * (c_1 ... c_t).
    let mut grid = vec![vec![Ref::J0; n + 1]; m + 1];
    for s in 0..=m {
        grid[s][n] = top[s];
    }
    for t in 0..=n {
        grid[m][t] = right[t];
    }
    for s in (0..m).rev() {
        for t in (0..n).rev() {
            grid[s][t] = script.push(gamma[t], beta[s], grid[s + 1][t], grid[s][t + 1]);
        }
    }
    let out = run_gcd_script(pp, &published, &script)?;
    let get = |r: Ref| resolve(pp, &published, &out, r);
    if get(top[m]) != get(right[n]) {
        return Err(Error::AttackFailed("convert(a . b) differs from convert(c)".into()));
    }
    Ok(Transcript {
        attack: "parallelogram".into(),
        script,
        outside_model: vec![],
        result: get(grid[0][0]),
    })
}

/// Integer polynomial, coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPoly {
    pub coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn reduce(&self, r: Zn) -> Poly {
        Poly::new(r, self.coeffs.iter().map(|c| r.from_big_elem(c)).collect())
    }
}

/// Primes with 4p = t^2 - u^2 D for the smallest possible u (1, or 2
/// when D = 1 mod 8), ascending. They split completely in the ring class
/// field of D, so H_D has h(D) distinct roots modulo them, and keeping u
/// minimal keeps the Kohel descent in `ell_set` cheap.
fn norm_primes(d: i64) -> impl Iterator<Item = u64> {
    let u: u64 = if d.rem_euclid(8) == 1 { 2 } else { 1 };
    let a = d.unsigned_abs() * u * u;
    let t0 = a % 2;
    (0u64..).map(move |k| t0 + 2 * k).filter_map(move |t| {
        let p = (t * t + a) / 4;
        (p > 3 && is_prime_u64(p) && a % p != 0).then_some(p)
    })
}

fn roots_mod(d: &Discriminant, p: u64) -> Result<Vec<u64>> {
    match d.d_i64() {
        -3 => Ok(vec![0]),
        -4 => Ok(vec![1728 % p]),
        _ => ell_set_closure(d, p),
    }
}

/// H_D over Z by CRT over split primes. Primes are added until the
/// symmetric reconstruction has come out the same for three primes in a
/// row.
pub fn hilbert_over_z(d: &Discriminant) -> Result<IntPoly> {
    let dd = d.d_i64();
    if dd.unsigned_abs() > HILBERT_BOUND {
        return Err(Error::TooLarge);
    }
    let h = class_number(d)? as usize;
    let mut moduli: Vec<Integer> = vec![];
    let mut residues: Vec<Vec<Integer>> = vec![vec![]; h + 1];
    let mut last: Option<Vec<Integer>> = None;
    let mut agreed = 0;
    for p in norm_primes(dd) {
        let mut roots = roots_mod(d, p)?;
        if roots.len() != h {
            roots = ell_set(d, p)?;
        }
        if roots.len() != h {
            continue;
        }
        let f = Poly::from_roots(Zn::new(p)?, &roots);
        moduli.push(p.into());
        for (i, r) in residues.iter_mut().enumerate() {
            r.push(f.coeff(i).into());
        }
        let cur = residues
            .iter()
            .map(|r| crt_symmetric(&moduli, r))
            .collect::<Result<Vec<_>>>()?;
        if last.as_ref() == Some(&cur) {
            agreed += 1;
            if agreed == 2 {
                return Ok(IntPoly { coeffs: cur });
            }
        } else {
            agreed = 0;
        }
        last = Some(cur);
    }
    unreachable!("norm_primes is infinite")
}

/// The withheld neighbor j_{-1} from (j0, j1): the unique root of
/// gcd(Phi_l(j0, x), Phi_{l^2}(j1, x), H_D(x)) over Z/NZ.
pub fn hilbert_attack(pp: &PublicParams, d: &Discriminant, l: u64, j0: u64, j1: u64) -> Result<u64> {
    hilbert_attack_transcript(pp, d, l, j0, j1).map(|t| t.result)
}

pub fn hilbert_attack_transcript(pp: &PublicParams, d: &Discriminant, l: u64, j0: u64, j1: u64) -> Result<Transcript> {
    let r = Zn::new(pp.n)?;
    let phi = reduced(l, r)?;
    if phi.eval(j0, j1) != 0 {
        return Err(Error::NotIsogenous(l));
    }
    let f = phi.eval_x(r.elem(j0));
    let g = reduced(l * l, r)?.eval_x(r.elem(j1));
    let hd = hilbert_over_z(d)?.reduce(r);
    let g = common_gcd(&[f, g, hd], j0 ^ j1.rotate_left(32) ^ l)?;
    let result = match g.degree() {
        Some(1) => r.neg(g.coeff(0)),
        k => {
            return Err(Error::AttackFailed(format!(
                "gcd has degree {} for D = {}",
                k.map_or(-1, |k| k as i64),
                d.d_i64()
            )))
        }
    };
    Ok(Transcript {
        attack: "hilbert".into(),
        script: GcdScript::new(),
        outside_model: vec![
            format!("Phi_{}(j1, x): prime-power level", l * l),
            format!("H_D(x) for D = {}", d.d_i64()),
        ],
        result,
    })
}

/// A nontrivial divisor of n from two entries that agree modulo one
/// prime factor only.
pub fn factor_from_neighbors(n: u64, js: &[u64]) -> Result<u64> {
    for (i, &x) in js.iter().enumerate() {
        for &y in &js[i + 1..] {
            let g = gcd_u64(x.abs_diff(y) % n, n);
            if g > 1 && g < n {
                return Ok(g);
            }
        }
    }
    Err(Error::NoCollision)
}

/// Negative discriminants D with |D| < bound (default sqrt(n)) and
/// (D | p) = k for every constraint (p, k), ordered by |D|.
pub fn discriminant_search(n: u64, constraints: &[(u64, i32)], bound: Option<u64>) -> Vec<i64> {
    let bound = bound.unwrap_or_else(|| {
        let s = to_u64(&isqrt(&Integer::from(n))).unwrap_or(u64::MAX);
        // |D| < sqrt(n) strictly
        if s * s == n {
            s
        } else {
            s + 1
        }
    });
    (3..bound as i64)
        .map(|a| -a)
        .filter(|d| matches!(d.rem_euclid(4), 0 | 1))
        .filter(|&d| constraints.iter().all(|&(p, k)| kronecker_i64(d, p) == k))
        .collect()
}

/// Number of independent multiplicative relations among a published set,
/// measured as exponent vectors over the primes involved: the rank of the
/// lattice spanned by the given relation vectors. Used to check that a
/// published set leaves more primes than relations.
pub fn relation_rank(relations: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<num_rational::BigRational>> = relations
        .iter()
        .map(|r| r.iter().map(|&x| num_rational::BigRational::from_integer(x.into())).collect())
        .collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, piv);
        let pv = rows[rank][c].clone();
        for i in 0..rows.len() {
            if i != rank && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pv;
                for k in 0..cols {
                    let sub = &f * &rows[rank][k];
                    rows[i][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}
