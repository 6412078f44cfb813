//! l-isogeny graphs over F_p, volcano levels and endomorphism rings.

use std::fmt::Write as _;

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::fp::{distinct_roots_fp, poly_roots_fp};
use crate::arith::int::{factor_u64, is_prime_u64, kronecker, Integer};
use crate::arith::{Poly, Zn};
use crate::classgroup::Discriminant;
use crate::curves::curve::{trace, trace_with_sign};
use crate::curves::isogeny::frobenius_eigenvalue_with_trace;
use crate::curves::{curve_from_j, elkies_kernel, Curve, Point};
use crate::error::{Error, Result};
use crate::modpoly::reduced;

/// Adjacency of G_l(F_p): for each j, the roots of Phi_l(j, Y) with
/// multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsogenyGraph {
    pub p: u64,
    pub l: u64,
    adj: Vec<Vec<(u64, usize)>>,
}

impl IsogenyGraph {
    pub fn neighbors(&self, j: u64) -> &[(u64, usize)] {
        &self.adj[j as usize]
    }

    /// Distinct neighbours.
    pub fn neighbor_set(&self, j: u64) -> Vec<u64> {
        self.adj[j as usize].iter().map(|e| e.0).collect()
    }

    pub fn degree(&self, j: u64) -> usize {
        self.adj[j as usize].iter().map(|e| e.1).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// `j1 j2 multiplicity` lines, sorted.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (j1, list) in self.adj.iter().enumerate() {
            for &(j2, m) in list {
                writeln!(s, "{j1} {j2} {m}").unwrap();
            }
        }
        s
    }
}

fn roots_with_mult(f: &Poly) -> Result<Vec<(u64, usize)>> {
    let mut out: Vec<(u64, usize)> = vec![];
    for r in poly_roots_fp(f)? {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += 1,
            _ => out.push((r, 1)),
        }
    }
    Ok(out)
}

pub fn build_graph(p: u64, l: u64) -> Result<IsogenyGraph> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.into()));
    }
    let r = Zn::new(p)?;
    let table = reduced(l, r)?;
    let adj = (0..p)
        .into_par_iter()
        .map(|j| roots_with_mult(&table.eval_x(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(IsogenyGraph { p, l, adj })
}

fn valuation(mut n: u64, l: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n % l == 0 {
        n /= l;
        v += 1;
    }
    v
}

/// Largest d with l^(2d) dividing (t^2 - 4p) / D0.
pub fn component_depth(p: u64, l: u64, t: i64, d0: i64) -> Result<u32> {
    let delta = t as i128 * t as i128 - 4 * p as i128;
    if delta % d0 as i128 != 0 {
        return Err(Error::DiscriminantMismatch);
    }
    let ratio = (delta / d0 as i128) as u64;
    Ok(valuation(ratio, l) / 2)
}

/// Write t^2 - 4p = v^2 D0 with D0 fundamental.
pub fn frobenius_disc(p: u64, t: i64) -> (i64, u64) {
    let delta = t as i128 * t as i128 - 4 * p as i128;
    let mut s: i64 = -1;
    let mut k: u64 = 1;
    for (q, e) in factor_u64(delta.unsigned_abs() as u64) {
        k *= q.pow(e / 2);
        if e % 2 == 1 {
            s *= q as i64;
        }
    }
    if s.rem_euclid(4) == 1 {
        (s, k)
    } else {
        (4 * s, k / 2)
    }
}

/// Height above the floor of the l-volcano containing j: the length of the
/// shortest descending path to a vertex of degree one. Zero on flat
/// volcanoes.
pub fn height_above_floor(g: &IsogenyGraph, j: u64, depth: u32) -> u32 {
    if depth == 0 {
        return 0;
    }
    let mut best = depth;
    for &(w, _) in g.neighbors(j) {
        let (mut prev, mut cur, mut steps) = (j, w, 1u32);
        while g.degree(cur) > 1 && steps < best {
            let Some(&(nxt, _)) = g.neighbors(cur).iter().find(|e| e.0 != prev) else {
                break;
            };
            prev = cur;
            cur = nxt;
            steps += 1;
        }
        if g.degree(cur) == 1 {
            best = best.min(steps);
        }
    }
    if g.degree(j) == 1 {
        0
    } else {
        best
    }
}

/// Discriminant of End(E_j) by trace and Kohel descent at each l | v.
pub fn end_disc(j: u64, p: u64) -> Result<Discriminant> {
    if j % p == 0 || j % p == 1728 % p {
        return Err(Error::Unsupported("j = 0 or 1728".into()));
    }
    let r = Zn::new(p)?;
    let c = curve_from_j(j, r)?;
    let t = trace(&c)?;
    if t % p as i64 == 0 {
        return Err(Error::Unsupported("supersingular curve".into()));
    }
    let (d0, v) = frobenius_disc(p, t);
    let mut conductor = vec![];
    for (l, e) in factor_u64(v) {
        let g = build_graph(p, l)?;
        let h = height_above_floor(&g, j, e);
        for _ in 0..(e - h) {
            conductor.push(l);
        }
    }
    Discriminant::new(Integer::from(d0), conductor)
}

/// Traces t > 0 with t^2 - 4p = u^2 D for the given D.
fn traces_for(d: &Discriminant, p: u64) -> Vec<i64> {
    let dd = d.d_i64();
    let mut out = vec![];
    let mut t: i64 = 1;
    while (t as i128) * (t as i128) < 4 * p as i128 {
        let delta = t as i128 * t as i128 - 4 * p as i128;
        if delta % dd as i128 == 0 {
            let q = (delta / dd as i128) as u64;
            let s = (q as f64).sqrt().round() as u64;
            if s * s == q {
                out.push(t);
            }
        }
        t += 1;
    }
    out
}

fn has_trace<R: rand::Rng>(c: &Curve, t: i64, rng: &mut R) -> Result<bool> {
    let p = c.modulus() as i128;
    let orders = [(p + 1 - t as i128) as u128, (p + 1 + t as i128) as u128];
    for _ in 0..4 {
        let pt = c.random_point(rng)?;
        if !orders.iter().any(|&n| c.mul_u128(n, &pt) == Ok(Point::Infinity)) {
            return Ok(false);
        }
    }
    Ok(trace(c)?.abs() == t)
}

/// All j in F_p with End(E_j) of discriminant exactly D, ascending.
pub fn ell_set(d: &Discriminant, p: u64) -> Result<Vec<u64>> {
    let r = Zn::new(p)?;
    let ts = traces_for(d, p);
    if ts.is_empty() {
        return Ok(vec![]);
    }
    let candidates: Vec<u64> = (1..p)
        .into_par_iter()
        .filter(|&j| j != 1728 % p)
        .filter_map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(j);
            let c = curve_from_j(j, r).ok()?;
            for &t in &ts {
                if has_trace(&c, t, &mut rng).ok()? {
                    return Some(j);
                }
            }
            None
        })
        .collect();
    let needs_descent = ts.iter().any(|&t| frobenius_disc(p, t).1 > 1);
    if !needs_descent {
        return Ok(candidates);
    }
    let mut out = vec![];
    for j in candidates {
        if end_disc(j, p)?.d() == d.d() {
            out.push(j);
        }
    }
    Ok(out)
}

/// Part of ell_set found without scanning all of F_p. With
/// t^2 - 4p = u^2 D and u = 1 every curve of trace t has End = O_D; with
/// u = 2 (D fundamental) the curves of trace t form a 2-volcano of depth
/// one, and those on its crater have at least two distinct 2-neighbors.
/// The set is then the closure of one crater curve under the shipped
/// Phi_l for non-inert l, keeping to the crater when l = 2. The closure can fall short of ell_set
/// when those l do not generate CL(D); other cases run the full scan.
pub fn ell_set_closure(d: &Discriminant, p: u64) -> Result<Vec<u64>> {
    let ts = traces_for(d, p);
    let dd = d.d_i64() as i128;
    let us: Vec<i128> = ts
        .iter()
        .map(|&t| ((t as i128) * (t as i128) - 4 * p as i128) / dd)
        .collect();
    let u = match us.first() {
        None => return Ok(vec![]),
        Some(&1) if us.iter().all(|&x| x == 1) => 1,
        Some(&4) if us.iter().all(|&x| x == 4) && d.conductor_factors().is_empty() => 2,
        _ => return ell_set(d, p),
    };
    let r = Zn::new(p)?;
    let phi2 = reduced(2, r)?;
    let on_crater = |j: u64| u == 1 || distinct_roots_fp(&phi2.eval_x(j)).is_ok_and(|w| w.len() >= 2);
    let start = (1..p).into_par_iter().filter(|&j| j != 1728 % p).find_first(|&j| {
        let mut rng = ChaCha8Rng::seed_from_u64(j);
        let traced = curve_from_j(j, r).is_ok_and(|c| ts.iter().any(|&t| has_trace(&c, t, &mut rng).unwrap_or(false)));
        traced && on_crater(j)
    });
    let Some(start) = start else {
        return Ok(vec![]);
    };
    // split and ramified l not dividing u only have horizontal edges
    let levels: Vec<u64> = [2u64, 3, 5, 7, 11, 13]
        .into_iter()
        .filter(|&l| l != p && kronecker(d.d(), &Integer::from(l)) >= 0)
        .collect();
    let mut seen = std::collections::BTreeSet::from([start]);
    let mut queue = vec![start];
    while let Some(j) = queue.pop() {
        for &l in &levels {
            for w in distinct_roots_fp(&reduced(l, r)?.eval_x(j))? {
                if (l != 2 || on_crater(w)) && seen.insert(w) {
                    queue.push(w);
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// H_D mod p as the product of (x - j) over ell_set.
pub fn hilbert_mod_p(d: &Discriminant, p: u64) -> Result<Poly> {
    let r = Zn::new(p)?;
    Ok(Poly::from_roots(r, &ell_set(d, p)?))
}

/// The crater cycle through `j_start`. The first step follows the kernel
/// whose Frobenius eigenvalue is the smaller root of X^2 - tX + p mod l;
/// the walk then never backtracks.
pub fn crater_cycle(p: u64, l: u64, j_start: u64) -> Result<Vec<u64>> {
    let r = Zn::new(p)?;
    let c = curve_from_j(j_start, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(j_start ^ l);
    let t_abs = trace(&c)?.abs();
    let t = trace_with_sign(&c, t_abs, &mut rng)?;
    let (_, v) = frobenius_disc(p, t);
    let depth = valuation(v, l);
    let g = build_graph(p, l)?;
    let crater = |j: u64| -> Vec<u64> {
        let h0 = height_above_floor(&g, j, depth);
        g.neighbor_set(j)
            .into_iter()
            .filter(|&w| height_above_floor(&g, w, depth) == h0)
            .collect()
    };
    if height_above_floor(&g, j_start, depth) != depth {
        return Err(Error::NotOnSurface);
    }
    let first = crater(j_start);
    if first.is_empty() {
        return Ok(vec![j_start]);
    }
    let next = if first.len() == 1 {
        first[0]
    } else {
        let table = reduced(l, r)?;
        let mut best: Option<(u64, u64)> = None;
        for &w in &first {
            let (_, _, k) = elkies_kernel(&table, j_start, w)?;
            let mu = frobenius_eigenvalue_with_trace(&c, l, &k, t)?;
            if best.is_none_or(|(m, _)| mu < m) {
                best = Some((mu, w));
            }
        }
        best.unwrap().1
    };
    let mut cycle = vec![j_start];
    let (mut prev, mut cur) = (j_start, next);
    while cur != j_start {
        cycle.push(cur);
        let nb = crater(cur);
        let nxt = nb.iter().copied().find(|&w| w != prev).unwrap_or(prev);
        prev = cur;
        cur = nxt;
        if cycle.len() > p as usize {
            return Err(Error::Degenerate("crater walk does not close".into()));
        }
    }
    Ok(cycle)
}

/// Fraction of nonsingular (a, b) over F_p whose j has at least two
/// distinct roots of Phi_l(j, Y). Each j in F_p accounts for exactly p - 1
/// pairs, so this is a count over j.
pub fn two_neighbor_fraction(p: u64, l: u64) -> Result<Ratio<u64>> {
    let g = build_graph(p, l)?;
    let hits = (0..p).filter(|&j| g.neighbors(j).len() >= 2).count() as u64;
    Ok(Ratio::new(hits * (p - 1), p * (p - 1)))
}
