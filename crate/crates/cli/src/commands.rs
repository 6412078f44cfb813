use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use tgii_core::attacks::{
    discriminant_search, factor_from_neighbors, hilbert_attack_transcript, parallelogram, Transcript,
};
use tgii_core::classgroup::{inverse, prime_form, reduce, Discriminant, GenerationSet, IdealClass, QuadForm};
use tgii_core::tgii::{
    comp, comp_with_ladders, convert, gen as tgii_gen, sample_ladder, to_document, trap_sam, trap_sam_with,
    ComposableEncoding, GenConfig, Ladder, PublicParams, SampleOpts,
};
use tgii_core::volcano::{build_graph, crater_cycle};
use tgii_core::Error;

use crate::error::{CliError, CliResult};
use crate::workspace::{read_doc, write_doc, Workspace, PP, REGISTRY, TRAPDOOR};
use crate::{AttackCmd, GenArgs, Out, VolcanoCmd};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn join(js: &[u64]) -> String {
    js.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Writes a document to `out` or prints it.
pub fn emit<T: Serialize>(kind: &str, v: &T, out: Option<&Path>, summary: &str) -> CliResult<Out> {
    let doc = to_document(kind, v)?;
    let json: Value = serde_json::from_str(&doc).map_err(|e| CliError::usage(e.to_string()))?;
    match out {
        Some(path) => {
            write_doc(path, kind, v, false)?;
            Ok(Out::new(format!("{summary}\nwrote {}", path.display()), json))
        }
        None => Ok(Out::new(doc, json)),
    }
}

pub fn load_encoding(path: &Path) -> CliResult<ComposableEncoding> {
    read_doc(path, "encoding")
}

fn parse_class(s: &str, d: &Discriminant) -> CliResult<IdealClass> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts[..] else {
        return Err(CliError::usage(format!("--class expects `a,b`, got `{s}`")));
    };
    let num = |x: &str| x.parse().map_err(|_| CliError::usage(format!("`{x}` is not an integer")));
    let f = QuadForm::from_ab(num(a)?, num(b)?, d.d())?;
    if !f.is_primitive() {
        return Err(Error::InvalidForm(format!("{f} is not primitive")).into());
    }
    Ok(reduce(&f)?)
}

pub fn gen(ws: &Workspace, args: &GenArgs, seed: Option<u64>) -> CliResult<Out> {
    let mut cfg = match args.preset.as_deref() {
        Some("toy") => GenConfig::toy(),
        Some("app") => GenConfig::app(),
        Some("conductor3") => GenConfig::conductor3(),
        Some(other) => return Err(CliError::usage(format!("unknown preset `{other}`"))),
        None => {
            let d0 = args.d0.ok_or_else(|| CliError::usage("gen needs --d0 or --preset"))?;
            GenConfig {
                d0,
                conductor_factors: vec![],
                primes: None,
                prime_bounds: (3, 1000),
                exclude: vec![],
                j0: None,
                anchor: None,
                smoothness_bound: 0,
                seed: 0,
            }
        }
    };
    if args.preset.is_some() && args.d0.is_some_and(|d| d != cfg.d0) {
        cfg.d0 = args.d0.unwrap();
        cfg.primes = None;
        cfg.j0 = None;
        cfg.anchor = None;
    }
    if let Some(f) = &args.conductor {
        cfg.conductor_factors = f.clone();
    }
    if let Some(b) = args.p_bound {
        cfg.prime_bounds.1 = b;
    }
    if let Some(b) = args.p_min {
        cfg.prime_bounds.0 = b;
    }
    if let Some(ps) = &args.primes {
        let [p, q] = ps[..] else {
            return Err(CliError::usage("--primes expects `p,q`"));
        };
        cfg.primes = Some((p, q));
    }
    if args.j0.is_some() {
        cfg.j0 = args.j0;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let (pp, td, reg) = tgii_gen(&cfg)?;
    ws.write(PP, "public_params", &pp, false)?;
    ws.write(TRAPDOOR, "trapdoor", &td, true)?;
    ws.save_registry(&reg)?;

    let mut text = format!("N  = {}\nj0 = {}\nh(D) = {}\n", pp.n, pp.j0, td.group.order());
    writeln!(text, "prime pool: {}", join(&reg.pool)).unwrap();
    for w in &td.warnings {
        writeln!(text, "warning: {w}").unwrap();
    }
    writeln!(text, "wrote {PP}, {TRAPDOOR} (owner-only), {REGISTRY}").unwrap();
    let json = json!({
        "n": pp.n.to_string(),
        "j0": pp.j0.to_string(),
        "class_number": td.group.order(),
        "pool": reg.pool,
        "warnings": td.warnings,
    });
    Ok(Out::new(text, json))
}

pub fn encode(
    ws: &Workspace,
    class: &str,
    primes: Option<&[u64]>,
    w: usize,
    minimal: bool,
    out: Option<&Path>,
    seed: u64,
) -> CliResult<Out> {
    let pp = ws.pp()?;
    let td = ws.trapdoor()?;
    let x = parse_class(class, td.disc())?;
    let mut rng = rng(seed);
    let opts = SampleOpts {
        w,
        minimal,
        ..SampleOpts::default()
    };
    let enc = match primes {
        Some(ps) => {
            let s = GenerationSet::from_primes(td.disc(), ps)?;
            trap_sam_with(&pp, &td, &x, &s, &opts, &mut rng)?
        }
        None => {
            let mut reg = ws.registry()?;
            let enc = trap_sam(&pp, &td, &x, &mut reg, &opts, &mut rng)?;
            ws.save_registry(&reg)?;
            enc
        }
    };
    let summary = format!("encoding of {x} over degrees {}", join(&enc.degrees));
    emit("encoding", &enc, out, &summary)
}

pub fn compose(ws: &Workspace, a: &Path, b: &Path, ladders: &[PathBuf], out: Option<&Path>) -> CliResult<Out> {
    let pp = ws.pp()?;
    let (ea, eb) = (load_encoding(a)?, load_encoding(b)?);
    let enc = if ladders.is_empty() {
        comp(&pp, &ea, &eb)?
    } else {
        let ls = ladders
            .iter()
            .map(|p| read_doc::<Ladder>(p, "ladder"))
            .collect::<CliResult<Vec<_>>>()?;
        comp_with_ladders(&pp, &ls, &ea, &eb)?
    };
    let summary = format!("composition over degrees {}", join(&enc.degrees));
    emit("encoding", &enc, out, &summary)
}

pub fn extract(ws: &Workspace, paths: &[PathBuf]) -> CliResult<Out> {
    let pp = ws.pp()?;
    let (mut degrees, mut lists) = (vec![], vec![]);
    for p in paths {
        let e = load_encoding(p)?;
        for (l, t) in e.degrees.into_iter().zip(e.lists) {
            if degrees.contains(&l) {
                return Err(Error::Bottom.into());
            }
            degrees.push(l);
            lists.push(t);
        }
    }
    let j = convert(&pp, &ComposableEncoding::new(degrees, lists)?)?;
    Ok(Out::new(format!("{j}"), json!({ "j": j.to_string() })))
}

pub fn act(ws: &Workspace, class: &str, j: Option<u64>) -> CliResult<Out> {
    let td = ws.trapdoor()?;
    let x = parse_class(class, td.disc())?;
    let j = j.unwrap_or(td.j0);
    let r = td.act(j, &x)?;
    Ok(Out::new(format!("{x} * {j} = {r}"), json!({ "class": x.to_string(), "j": j.to_string(), "result": r.to_string() })))
}

pub fn ladder(ws: &Workspace, l: u64, k: usize, inv: bool, out: Option<&Path>) -> CliResult<Out> {
    let td = ws.trapdoor()?;
    let c = prime_form(td.disc(), l)?;
    let x = if inv { inverse(&c) } else { c };
    let lad = sample_ladder(&td, l, k, &x)?;
    let summary = format!("ladder of {x}: {}", join(&lad.js));
    emit("ladder", &lad, out, &summary)
}

fn components(g: &tgii_core::volcano::IsogenyGraph) -> usize {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for w in g.neighbor_set(v as u64) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w as usize);
                }
            }
        }
    }
    count
}

pub fn volcano(cmd: &VolcanoCmd) -> CliResult<Out> {
    match *cmd {
        VolcanoCmd::Build { p, l } => {
            let g = build_graph(p, l)?;
            let edges: usize = (0..p).map(|j| g.degree(j)).sum();
            let two = (0..p).filter(|&j| g.neighbors(j).len() >= 2).count();
            let comps = components(&g);
            let text = format!(
                "G_{l}(F_{p}): {} vertices, {edges} directed edges with multiplicity, {comps} components\n{two} vertices with at least two distinct neighbours",
                g.vertex_count()
            );
            let json = json!({ "p": p, "l": l, "vertices": g.vertex_count(), "edges": edges, "components": comps, "two_neighbor_vertices": two });
            Ok(Out::new(text, json))
        }
        VolcanoCmd::Dump { p, l } => {
            let g = build_graph(p, l)?;
            let dump = g.dump();
            let lines: Vec<&str> = dump.lines().collect();
            Ok(Out::new(dump.clone(), json!({ "p": p, "l": l, "edges": lines })))
        }
        VolcanoCmd::Crater { p, l, j } => {
            let c = crater_cycle(p, l, j)?;
            Ok(Out::new(
                format!("crater of G_{l}(F_{p}) through {j} (length {}): {}", c.len(), join(&c)),
                json!({ "p": p, "l": l, "cycle": c }),
            ))
        }
    }
}

fn modulus(ws: &Workspace, n: Option<u64>) -> CliResult<u64> {
    match n {
        Some(n) => Ok(n),
        None => Ok(ws.pp()?.n),
    }
}

fn transcript_out(t: &Transcript, what: &str, out: Option<&Path>) -> CliResult<Out> {
    let mut summary = format!("{what} = {}", t.result);
    if !t.script.is_empty() {
        write!(summary, "\n{} gcd steps", t.script.len()).unwrap();
    }
    for s in &t.outside_model {
        write!(summary, "\noutside the gcd model: {s}").unwrap();
    }
    let doc = to_document("transcript", t)?;
    let json: Value = serde_json::from_str(&doc).map_err(|e| CliError::usage(e.to_string()))?;
    if let Some(path) = out {
        write_doc(path, "transcript", t, false)?;
        write!(summary, "\nwrote {}", path.display()).unwrap();
    }
    Ok(Out::new(summary, json))
}

pub fn attack(ws: &Workspace, cmd: &AttackCmd) -> CliResult<Out> {
    match cmd {
        AttackCmd::Parallelogram { a, b, c, out } => {
            let pp = ws.pp()?;
            let (a, b, c) = (load_encoding(a)?, load_encoding(b)?, load_encoding(c)?);
            let t = parallelogram(&pp, &a, &b, &c)?;
            transcript_out(&t, "b^-1 * j0", out.as_deref())
        }
        AttackCmd::Hilbert { d, conductor, l, j0, j1, n } => {
            let pp = PublicParams {
                n: modulus(ws, *n)?,
                j0: *j0,
            };
            let disc = Discriminant::new((*d).into(), conductor.clone())?;
            let t = hilbert_attack_transcript(&pp, &disc, *l, *j0, *j1)?;
            transcript_out(&t, "j_-1", None)
        }
        AttackCmd::Factor { j, n } => {
            let n = modulus(ws, *n)?;
            let f = factor_from_neighbors(n, j)?;
            Err(Error::FactorFound(f.into()).into())
        }
        AttackCmd::DiscSearch { constraint, bound, n } => {
            let n = modulus(ws, *n)?;
            let cons = constraint
                .iter()
                .map(|c| {
                    let bad = || CliError::usage(format!("constraint `{c}` is not `l:s`"));
                    let (l, s) = c.split_once(':').ok_or_else(bad)?;
                    Ok((l.parse().map_err(|_| bad())?, s.parse().map_err(|_| bad())?))
                })
                .collect::<CliResult<Vec<(u64, i32)>>>()?;
            let ds = discriminant_search(n, &cons, *bound);
            let text = format!(
                "{} candidates: {}",
                ds.len(),
                ds.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
            );
            Ok(Out::new(text, json!({ "candidates": ds })))
        }
    }
}
