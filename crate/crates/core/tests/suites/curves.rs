use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tgii_core::arith::{crt, distinct_roots_fp, poly_roots_fp, Zn};
use tgii_core::curves::*;
use tgii_core::modpoly::reduced;

use super::{primes, runner};

pub fn point_group_law() {
    let ps = primes(5, 2000);
    let strat = (0usize..ps.len(), any::<u64>(), any::<u64>(), any::<u64>());
    runner(1000)
        .run(&strat, |(pi, a, b, seed)| {
            let p = ps[pi];
            let Ok(c) = Curve::new(Zn::new(p).unwrap(), a % p, b % p) else { return Ok(()) };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = c.random_point(&mut rng).unwrap();
            let y = c.random_point(&mut rng).unwrap();
            let z = c.random_point(&mut rng).unwrap();
            let xy = c.add(&x, &y).unwrap();
            prop_assert!(c.contains(&xy));
            prop_assert_eq!(c.add(&xy, &z).unwrap(), c.add(&x, &c.add(&y, &z).unwrap()).unwrap());
            prop_assert_eq!(&xy, &c.add(&y, &x).unwrap());
            prop_assert_eq!(c.add(&x, &Point::Infinity).unwrap(), x.clone());
            prop_assert_eq!(c.add(&x, &c.neg(&x)).unwrap(), Point::Infinity);
            prop_assert_eq!(c.double(&x).unwrap(), c.add(&x, &x).unwrap());
            let n = count_points(&c).unwrap();
            prop_assert_eq!(c.mul_u128(n as u128, &x).unwrap(), Point::Infinity);
            Ok(())
        })
        .unwrap();
}

pub fn velu_targets_are_modular_roots() {
    // Over F_p, for j outside {0, 1728}, every rational kernel gives an
    // F_p-root of Phi_l(j, Y). A root can also come from a Frobenius orbit
    // of irrational kernels whose quotients all have the same rational j;
    // such an orbit has at least two members, so it adds at least 2 to the
    // multiplicity. When Phi_l(j, Y) is squarefree the two lists agree.
    let (mut exact, mut collided) = (0usize, 0usize);
    for p in primes(11, 200) {
        let r = Zn::new(p).unwrap();
        for l in [2u64, 3, 5, 7] {
            if l == p {
                continue;
            }
            let table = reduced(l, r).unwrap();
            for j in 1..p {
                if j == 1728 % p {
                    continue;
                }
                let c = curve_from_j(j, r).unwrap();
                let mut targets: Vec<u64> = kernel_polynomials(&c, l)
                    .unwrap()
                    .iter()
                    .map(|k| j_invariant(&velu(&c, k).unwrap().target).unwrap())
                    .collect();
                targets.sort_unstable();
                let roots = poly_roots_fp(&table.eval_x(j)).unwrap();
                let mut distinct = roots.clone();
                distinct.dedup();
                if distinct.len() == roots.len() {
                    assert_eq!(targets, roots, "p={p} l={l} j={j}");
                    exact += 1;
                    continue;
                }
                for y in distinct {
                    let in_roots = roots.iter().filter(|&&x| x == y).count();
                    let in_targets = targets.iter().filter(|&&x| x == y).count();
                    let excess = in_roots.checked_sub(in_targets);
                    assert!(matches!(excess, Some(0) | Some(2..)), "p={p} l={l} j={j} y={y}");
                    if excess != Some(0) {
                        collided += 1;
                    }
                }
                assert!(targets.iter().all(|t| roots.contains(t)), "p={p} l={l} j={j}");
            }
        }
    }
    assert!(exact > 10_000);
    assert!(collided > 0);
}

pub fn kernel_mod_n_is_crt_of_kernels() {
    let ps = primes(40, 400);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 50 {
        let p = ps[rng.gen_range(0..ps.len())];
        let q = ps[rng.gen_range(0..ps.len())];
        if p == q {
            continue;
        }
        let l = [3u64, 5, 7][rng.gen_range(0..3)];
        let n = p * q;
        let j1 = rng.gen_range(2..n);
        let simple_roots = |m: u64| -> Vec<u64> {
            let t = reduced(l, Zn::new(m).unwrap()).unwrap();
            let f = t.eval_x(j1 % m);
            distinct_roots_fp(&f).unwrap().into_iter().filter(|&y| f.derivative().eval(y) != 0).collect()
        };
        let (rp, rq) = (simple_roots(p), simple_roots(q));
        if rp.is_empty() || rq.is_empty() || [p, q].iter().any(|&m| [0, 1728 % m].contains(&(j1 % m))) {
            continue;
        }
        let (yp, yq) = (rp[rng.gen_range(0..rp.len())], rq[rng.gen_range(0..rq.len())]);
        let j2 = crt(&[p.into(), q.into()], &[yp.into(), yq.into()]).unwrap();
        let j2 = u64::try_from(&j2).unwrap();
        let Ok((src, _, k)) = kernel_poly_mod_n(n, l, j1, j2) else { continue };
        for (m, y) in [(p, yp), (q, yq)] {
            let rm = Zn::new(m).unwrap();
            let c = src.reduce(rm).unwrap();
            let local: Vec<KernelPoly> = kernel_polynomials(&c, l)
                .unwrap()
                .into_iter()
                .filter(|kk| j_invariant(&velu(&c, kk).unwrap().target).unwrap() == y)
                .collect();
            assert_eq!(local.len(), 1, "p={p} q={q} l={l} j1={j1}");
            assert_eq!(k.h.reduce(rm), local[0].h, "p={p} q={q} l={l} j1={j1} mod {m}");
        }
        done += 1;
    }
}
