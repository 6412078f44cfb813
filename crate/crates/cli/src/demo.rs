use std::fmt::Write as _;

use serde_json::json;

use tgii_core::classgroup::prime_form;
use tgii_core::tgii::{gcd_op, gen, GenConfig};
use tgii_core::volcano::crater_cycle;

use crate::error::CliResult;
use crate::Out;

fn join(js: &[u64]) -> String {
    js.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// True when `b` is `a` read in either direction from the same start.
fn same_cycle(a: &[u64], b: &[u64]) -> bool {
    let mut rev = a.to_vec();
    rev[1..].reverse();
    a == b || rev == b
}

pub fn toy() -> CliResult<Out> {
    let (pp, td, _) = gen(&GenConfig::toy())?;
    let (p, q) = (td.p(), td.q());
    let l = 3;

    let c = prime_form(td.disc(), l)?;
    let mut crt_crater = vec![pp.j0];
    loop {
        let next = td.act(*crt_crater.last().unwrap(), &c)?;
        if next == pp.j0 {
            break;
        }
        crt_crater.push(next);
    }
    let cp = crater_cycle(p, l, pp.j0 % p)?;
    let cq = crater_cycle(q, l, pp.j0 % q)?;
    let reduce = |m: u64| crt_crater.iter().map(|j| j % m).collect::<Vec<_>>();
    let consistent = same_cycle(&cp, &reduce(p)) && same_cycle(&cq, &reduce(q));
    let (j1, j2) = (crt_crater[1], crt_crater[2]);
    let ext = gcd_op(&pp, l, 7, j1, j2)?;

    let mut t = String::new();
    writeln!(t, "toy instance, D = {}", td.disc()).unwrap();
    writeln!(t, "N  = {} = {p} * {q}", pp.n).unwrap();
    writeln!(t, "j0 = {}", pp.j0).unwrap();
    writeln!(t, "crater of G_{l} over F_{p}: {}", join(&cp)).unwrap();
    writeln!(t, "crater of G_{l} over F_{q}: {}", join(&cq)).unwrap();
    writeln!(t, "crater over Z/{}: {}", pp.n, join(&crt_crater)).unwrap();
    writeln!(t, "craters agree mod {p} and mod {q}: {}", if consistent { "yes" } else { "no" }).unwrap();
    writeln!(t, "gcd(Phi_7({j1}, x), Phi_{l}({j2}, x)) has the single root {ext}").unwrap();
    let json = json!({
        "n": pp.n.to_string(),
        "j0": pp.j0.to_string(),
        "p": p,
        "q": q,
        "crater_p": cp,
        "crater_q": cq,
        "crater_n": crt_crater,
        "consistent": consistent,
        "extraction": ext.to_string(),
    });
    Ok(Out::new(t, json))
}
