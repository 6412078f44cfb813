use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tgii_core::arith::int::is_prime_u64;
use tgii_core::arith::{distinct_roots_fp, gauss_sample_coset, kronecker, Integer, Poly, Zn};
use tgii_core::classgroup::forms::is_fundamental;
use tgii_core::classgroup::*;
use tgii_core::modpoly::reduced;
use tgii_core::tgii::common_gcd;
use tgii_core::volcano::ell_set;

/// Fundamental D with 3, 5 and 7 split, and primes p = (t^2 - D)/4 so that
/// every curve with trace t has End = O_D.
fn instances(min_abs: i64, max_abs: i64, per_disc: usize) -> Vec<(i64, u64)> {
    let mut out = vec![];
    for a in min_abs..max_abs {
        let d = -a;
        if !is_fundamental(&Integer::from(d)) || d % 4 == 0 {
            continue;
        }
        if [3u64, 5, 7].iter().any(|&l| kronecker(&Integer::from(d), &Integer::from(l)) != 1) {
            continue;
        }
        let ps: Vec<u64> = (1i64..300)
            .step_by(2)
            .map(|t| ((t * t - d) / 4) as u64)
            .filter(|&p| p > 7 && is_prime_u64(p))
            .take(per_disc)
            .collect();
        out.extend(ps.into_iter().map(|p| (d, p)));
    }
    out
}

fn neighbors_in(set: &[u64], l: u64, j: u64, r: Zn) -> Vec<u64> {
    let f = reduced(l, r).unwrap().eval_x(j);
    distinct_roots_fp(&f).unwrap().into_iter().filter(|w| set.contains(w)).collect()
}

pub fn coprime_degrees_meet_in_one_root() {
    let mut checked = 0;
    for (d, p) in instances(901, 5200, 2) {
        let r = Zn::new(p).unwrap();
        let set = ell_set(&Discriminant::fundamental(d).unwrap(), p).unwrap();
        for (l, m) in [(3u64, 5u64), (3, 7), (5, 7)] {
            if 4 * l * l * m * m >= d.unsigned_abs() {
                continue;
            }
            for &j0 in set.iter().take(4) {
                for a in neighbors_in(&set, l, j0, r) {
                    for b in neighbors_in(&set, m, j0, r) {
                        let g = reduced(l, r).unwrap().eval_x(a).gcd(&reduced(m, r).unwrap().eval_x(b)).unwrap();
                        assert_eq!(g, Poly::linear(r, j0), "D={d} p={p} l={l} m={m}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 100, "{checked}");
}

fn check_square_case(r: Zn, l: u64, j0: u64, j1: u64, seed: u64) -> Result<(), String> {
    let f = reduced(l, r).unwrap().eval_x(j0);
    let g = reduced(l * l, r).unwrap().eval_x(j1);
    let h = common_gcd(&[f.clone(), g], seed).map_err(|e| e.to_string())?;
    if h.degree() != Some(l as usize) {
        return Err(format!("degree {:?}", h.degree()));
    }
    if Poly::linear(r, j1).mul(&h) != f {
        return Err("(X - j1) gcd != Phi_l(X, j0)".into());
    }
    Ok(())
}

pub fn square_degree_gcd_is_the_other_neighbors() {
    let mut checked = 0;
    for (d, p) in instances(2501, 6000, 1) {
        let r = Zn::new(p).unwrap();
        let set = ell_set(&Discriminant::fundamental(d).unwrap(), p).unwrap();
        for l in [3u64, 5] {
            if 4 * l.pow(4) >= d.unsigned_abs() {
                continue;
            }
            for &j0 in set.iter().take(3) {
                for j1 in neighbors_in(&set, l, j0, r) {
                    check_square_case(r, l, j0, j1, 0).unwrap_or_else(|e| panic!("D={d} p={p} l={l}: {e}"));
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 50, "{checked}");
}

pub fn square_degree_gcd_mod_n() {
    let r = Zn::new(14359).unwrap();
    check_square_case(r, 3, 12631, 7601, 1).unwrap();
    let h = common_gcd(&[reduced(3, r).unwrap().eval_x(12631), reduced(9, r).unwrap().eval_x(7601)], 1).unwrap();
    // 1897 is the other crater neighbour of 12631
    assert_eq!(h.eval(1897), 0);
    assert_ne!(h.eval(7601), 0);
}

pub fn gauss_samples_stay_in_coset() {
    let disc = Discriminant::fundamental(-251).unwrap();
    let group = ClassGroup::new(disc.clone()).unwrap();
    let s = GenerationSet::from_primes(&disc, &[3, 5, 7]).unwrap();
    let lattice = relation_lattice(&group, &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (i, sigma) in [(2i64, 8.0), (5, 16.0)] {
        let class = pow_i64(&prime_form(&disc, 3).unwrap(), i);
        let target = discrete_log(&group, &class, &s).unwrap();
        let target: Vec<BigInt> = target.iter().map(|x| BigInt::from(i64::try_from(x).unwrap())).collect();
        for _ in 0..5000 {
            let v = gauss_sample_coset(&lattice.basis, &target, sigma, &[0.0; 3], &mut rng).unwrap();
            let diff: Vec<BigInt> = v.iter().zip(&target).map(|(a, b)| a - b).collect();
            assert!(lattice.basis.contains(&diff));
            let e: Vec<i64> = v.iter().map(|x| i64::try_from(x).unwrap()).collect();
            assert_eq!(evaluate(&group.identity(), &s.classes, &e), class);
        }
    }
}
