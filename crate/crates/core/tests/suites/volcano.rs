use std::collections::{BTreeMap, BTreeSet, VecDeque};

use tgii_core::arith::int::factor_u64;
use tgii_core::arith::{kronecker, Integer, Zn};
use tgii_core::classgroup::{class_number, prime_form, ClassGroup, Discriminant};
use tgii_core::curves::curve::trace;
use tgii_core::curves::*;
use tgii_core::modpoly::builtin::integer_levels;
use tgii_core::volcano::*;

use super::primes;

fn valuation(mut n: u64, l: u64) -> u32 {
    let mut v = 0;
    while n % l == 0 {
        n /= l;
        v += 1;
    }
    v
}

/// Ordinary j outside {0, 1728} whose Frobenius discriminant has D0 not in {-3, -4}.
fn ordinary(p: u64, j: u64) -> Option<(i64, u64)> {
    if j == 0 || j == 1728 % p {
        return None;
    }
    let t = trace(&curve_from_j(j, Zn::new(p).unwrap()).unwrap()).unwrap();
    if t % p as i64 == 0 {
        return None;
    }
    let (d0, v) = frobenius_disc(p, t);
    (d0 != -3 && d0 != -4).then_some((d0, v))
}

pub fn kohel_structure() {
    let mut checked = 0usize;
    for p in primes(11, 300) {
        let r = Zn::new(p).unwrap();
        let graph_of = |l: u64| build_graph(p, l).unwrap();
        for l in [2u64, 3, 5, 7] {
            if l == p {
                continue;
            }
            let g = graph_of(l);
            // edges of the volcano: targets of F_p-rational l-isogenies
            let mut edges: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
            let mut info = BTreeMap::new();
            for j in 0..p {
                let Some(fd) = ordinary(p, j) else { continue };
                let c = curve_from_j(j, r).unwrap();
                let ts: Vec<u64> = kernel_polynomials(&c, l)
                    .unwrap()
                    .iter()
                    .map(|k| j_invariant(&velu(&c, k).unwrap().target).unwrap())
                    .collect();
                let nb = g.neighbor_set(j);
                assert!(ts.iter().all(|t| nb.contains(t)), "p={p} l={l} j={j}");
                edges.insert(j, ts);
                info.insert(j, fd);
            }
            // level = distance to the nearest floor vertex
            let depth = |j: u64| valuation(info[&j].1, l);
            let mut level: BTreeMap<u64, u32> = BTreeMap::new();
            let mut queue = VecDeque::new();
            for (&j, ts) in &edges {
                if depth(j) > 0 && ts.len() == 1 {
                    level.insert(j, 0);
                    queue.push_back(j);
                }
            }
            while let Some(j) = queue.pop_front() {
                for &w in &edges[&j] {
                    if edges.contains_key(&w) && !level.contains_key(&w) {
                        level.insert(w, level[&j] + 1);
                        queue.push_back(w);
                    }
                }
            }
            for (&j, ts) in &edges {
                let (d0, _) = info[&j];
                let d = depth(j);
                let chi = kronecker(&Integer::from(d0), &Integer::from(l)) as i64;
                if ts.iter().any(|w| !edges.contains_key(w)) {
                    continue;
                }
                if d == 0 {
                    assert_eq!(ts.len() as i64, 1 + chi, "p={p} l={l} j={j}");
                    checked += 1;
                    continue;
                }
                let h = level[&j];
                assert!(h <= d, "p={p} l={l} j={j}");
                if h == 0 {
                    assert_eq!(ts.len(), 1, "p={p} l={l} j={j}");
                    assert_eq!(level[&ts[0]], 1, "p={p} l={l} j={j}");
                } else {
                    assert_eq!(ts.len() as u64, l + 1, "p={p} l={l} j={j}");
                }
                let up: BTreeSet<u64> = ts.iter().copied().filter(|w| level[w] == h + 1).collect();
                let same = ts.iter().filter(|w| level[*w] == h).count() as i64;
                if h < d {
                    assert_eq!(up.len(), 1, "p={p} l={l} j={j}");
                    assert_eq!(same, 0, "p={p} l={l} j={j}");
                } else {
                    assert!(up.is_empty());
                    assert_eq!(same, 1 + chi, "p={p} l={l} j={j}");
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 20_000, "{checked}");
}

pub fn crater_cycle_is_prime_form_orbit() {
    let mut checked = 0;
    for d0 in [-47i64, -71, -95, -119, -167, -191, -199, -251, -263, -311] {
        let disc = Discriminant::fundamental(d0).unwrap();
        let group = ClassGroup::new(disc.clone()).unwrap();
        for p in primes(50, 700) {
            let set = ell_set(&disc, p).unwrap();
            let Some(&j) = set.first() else { continue };
            for l in [3u64, 5, 7] {
                if kronecker(&Integer::from(d0), &Integer::from(l)) != 1 || l == p {
                    continue;
                }
                let order = group.order_of(&prime_form(&disc, l).unwrap()) as usize;
                let cycle = crater_cycle(p, l, j).unwrap();
                assert_eq!(cycle.len(), order, "D={d0} p={p} l={l}");
                assert!(cycle.iter().all(|w| set.contains(w)));
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "{checked}");
}

pub fn ell_set_size_is_class_number() {
    let mut checked = 0;
    for p in primes(5, 300) {
        let mut discs = BTreeSet::new();
        let mut t = 1i64;
        let levels = integer_levels();
        // descent along l | v needs a shipped Phi_l
        let descends = |t: i64| factor_u64(frobenius_disc(p, t).1).iter().all(|(q, _)| levels.contains(q));
        if !(1..).take_while(|t| t * t < 4 * p as i64).all(|t| t % p as i64 == 0 || descends(t)) {
            continue;
        }
        while t * t < 4 * p as i64 {
            if t % p as i64 != 0 {
                let (d0, v) = frobenius_disc(p, t);
                let mut fs = vec![1u64];
                for (q, e) in factor_u64(v) {
                    let base = fs.clone();
                    for k in 1..=e {
                        fs.extend(base.iter().map(|f| f * q.pow(k)));
                    }
                }
                for f in fs {
                    let mut cond = vec![];
                    for (q, e) in factor_u64(f) {
                        cond.extend(std::iter::repeat_n(q, e as usize));
                    }
                    discs.insert((d0, cond));
                }
            }
            t += 1;
        }
        for (d0, cond) in discs {
            let d = Discriminant::new(Integer::from(d0), cond).unwrap();
            if d.d_i64() == -3 || d.d_i64() == -4 {
                continue;
            }
            assert_eq!(ell_set(&d, p).unwrap().len() as u64, class_number(&d).unwrap(), "D={} p={p}", d.d());
            checked += 1;
        }
    }
    assert!(checked > 500, "{checked}");
}
