use tgii_core::classgroup::{compose, discrete_log, reduced_forms};
use tgii_core::tgii::*;

fn toy() -> (PublicParams, Trapdoor) {
    let (pp, td, _) = gen(&GenConfig::toy()).unwrap();
    (pp, td)
}

/// (x * y) * j = y * (x * j) for every pair of classes and every crater j,
/// with the literal walk agreeing with the shortcut.
pub fn action_law_exhaustive() {
    let (pp, td) = toy();
    let classes = reduced_forms(&(-251).into()).unwrap();
    assert_eq!(classes.len(), 7);
    let crater: Vec<u64> = classes.iter().map(|c| td.act(pp.j0, c).unwrap()).collect();
    for &j in &crater {
        for c1 in &classes {
            for c2 in &classes {
                let lhs = td.act(td.act(j, c1).unwrap(), c2).unwrap();
                let rhs = td.act(j, &compose(c1, c2).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "j={j}");
            }
            assert_eq!(td.act(j, c1).unwrap(), td.act_literal(j, c1).unwrap(), "j={j}");
        }
    }
}

/// The action mod N reduces to the walks over F_p and F_q.
pub fn crt_consistency() {
    let (pp, td) = toy();
    let classes = reduced_forms(&(-251).into()).unwrap();
    for start in classes.iter().map(|c| td.act(pp.j0, c).unwrap()) {
        for c in &classes {
            let j = td.act(start, c).unwrap();
            let e = discrete_log(&td.group, c, &td.walk).unwrap();
            let steps = u64::try_from(&e[0]).unwrap() as usize;
            for (i, side) in td.sides.iter().enumerate() {
                let cur = start % side.p;
                let w = side.walk(td.disc(), cur, td.walk.primes[0], 1, steps).unwrap();
                assert_eq!(j % side.p, *w.last().unwrap_or(&cur), "side {i} start {start}");
            }
        }
    }
}
