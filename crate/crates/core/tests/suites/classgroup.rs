use proptest::prelude::*;

use tgii_core::arith::int::{factor_u64, Integer};
use tgii_core::classgroup::forms::is_fundamental;
use tgii_core::classgroup::*;

use super::runner;

/// D = D0 f^2 with D0 fundamental.
pub fn disc_of(d: i64) -> Discriminant {
    let mut f = (d.unsigned_abs() as f64).sqrt() as i64 + 1;
    while f > 0 {
        if d % (f * f) == 0 && is_fundamental(&Integer::from(d / (f * f))) {
            let mut factors = vec![];
            for (p, e) in factor_u64(f as u64) {
                factors.extend(std::iter::repeat_n(p, e as usize));
            }
            return Discriminant::new(Integer::from(d / (f * f)), factors).unwrap();
        }
        f -= 1;
    }
    panic!("{d} is not a discriminant")
}

fn is_disc(a: i64) -> bool {
    matches!((-a).rem_euclid(4), 0 | 1)
}

fn disc_strategy(max: i64) -> impl Strategy<Value = i64> {
    (3..=max).prop_filter("discriminant", |a| is_disc(*a)).prop_map(|a| -a)
}

pub fn group_laws() {
    let strat = (disc_strategy(10_000), any::<usize>(), any::<usize>(), any::<usize>());
    runner(1000)
        .run(&strat, |(d, i, j, k)| {
            let forms = reduced_forms(&Integer::from(d)).unwrap();
            let n = forms.len();
            let (x, y, z) = (&forms[i % n], &forms[j % n], &forms[k % n]);
            let xy = compose(x, y).unwrap();
            prop_assert_eq!(compose(&xy, z).unwrap(), compose(x, &compose(y, z).unwrap()).unwrap());
            prop_assert_eq!(&xy, &compose(y, x).unwrap());
            let id = identity(&disc_of(d));
            prop_assert_eq!(&compose(x, &id).unwrap(), x);
            prop_assert!(compose(x, &inverse(x)).unwrap().is_identity());
            prop_assert!(forms.binary_search(&xy).is_ok());
            Ok(())
        })
        .unwrap();
}

pub fn reduction_lands_on_one_representative() {
    let strat = (disc_strategy(10_000), 1i64..200, -400i64..400);
    runner(1000)
        .run(&strat, |(d, a, b)| {
            let Ok(f) = QuadForm::from_ab(a.into(), b.into(), &Integer::from(d)) else {
                return Ok(());
            };
            prop_assume!(f.is_primitive());
            let x = reduce(&f).unwrap();
            prop_assert!(x.form().is_reduced());
            prop_assert_eq!(&reduce(x.form()).unwrap(), &x);
            let forms = reduced_forms(&Integer::from(d)).unwrap();
            prop_assert!(forms.binary_search(&x).is_ok());
            Ok(())
        })
        .unwrap();
}

pub fn discrete_log_recomposes() {
    let strat = (disc_strategy(10_000), prop::collection::vec(-50i64..50, 3));
    runner(1000)
        .run(&strat, |(d, e)| {
            let disc = disc_of(d);
            prop_assume!(disc.conductor_factors().is_empty());
            let group = ClassGroup::new(disc.clone()).unwrap();
            let primes: Vec<u64> = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31]
                .into_iter()
                .filter(|&l| prime_form(&disc, l).is_ok() && d % l as i64 != 0)
                .take(3)
                .collect();
            prop_assume!(!primes.is_empty());
            let s = GenerationSet::from_primes(&disc, &primes).unwrap();
            let target = evaluate(&group.identity(), &s.classes, &e[..primes.len()]);
            let dl = discrete_log(&group, &target, &s).unwrap();
            let dl: Vec<i64> = dl.iter().map(|x| i64::try_from(x).unwrap()).collect();
            prop_assert_eq!(evaluate(&group.identity(), &s.classes, &dl), target);
            Ok(())
        })
        .unwrap();
}

pub fn reduced_forms_are_distinct_classes() {
    // the forms of one discriminant form a group under composition, so
    // translating by any g permutes them
    for a in (3..=2000).filter(|a| is_disc(*a)) {
        let forms = reduced_forms(&Integer::from(-a)).unwrap();
        let g = &forms[forms.len() / 2];
        let mut moved: Vec<IdealClass> = forms.iter().map(|x| compose(x, g).unwrap()).collect();
        moved.sort();
        assert_eq!(moved, forms, "D = -{a}");
    }
}

pub fn class_number_formula_matches_enumeration() {
    let mut checked = 0;
    for a in (3..=10_000i64).filter(|a| is_disc(*a)) {
        let d = disc_of(-a);
        if d.conductor_factors().is_empty() {
            continue;
        }
        assert_eq!(class_number(&d).unwrap(), class_number_formula(&d).unwrap(), "D = -{a}");
        checked += 1;
    }
    assert!(checked > 1000);
}

pub fn inverse_is_power_order_minus_one() {
    for a in (3..=1000).filter(|a| is_disc(*a)) {
        let group = ClassGroup::new(disc_of(-a)).unwrap();
        for x in reduced_forms(&Integer::from(-a)).unwrap() {
            let h = group.order_of(&x) as i64;
            assert_eq!(pow_i64(&x, h - 1), inverse(&x));
            assert!(pow_i64(&x, h).is_identity());
        }
    }
}
