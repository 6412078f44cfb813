use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tgii_core::apps::*;
use tgii_core::attacks::parallelogram;
use tgii_core::tgii::*;
use tgii_core::Error;

fn app() -> &'static (PublicParams, Trapdoor, PrimeRegistry) {
    static APP: OnceLock<(PublicParams, Trapdoor, PrimeRegistry)> = OnceLock::new();
    APP.get_or_init(|| gen(&GenConfig::app()).unwrap())
}

struct Dts {
    public: DtsPublic,
    certs: Vec<NodeCert>,
    sigs: BTreeMap<(usize, usize), DtsSignature>,
}

fn dts_instance(seed: u64, nodes: usize, edges: &[(usize, usize)]) -> Dts {
    let (pp, td, reg) = app();
    let mut reg = reg.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SampleOpts::default();
    let (public, master) = dts_gen(pp, td, &mut reg, nodes, &mut rng).unwrap();
    let certs = (0..nodes)
        .map(|i| dts_cert(pp, td, &master, &mut reg, i, &opts, &mut rng).unwrap())
        .collect();
    let sigs = edges
        .iter()
        .map(|&(i, k)| ((i, k), dts_sign(pp, td, &master, &mut reg, i, k, &opts, &mut rng).unwrap()))
        .collect();
    Dts { public, certs, sigs }
}

fn random_dag(rng: &mut ChaCha8Rng, nodes: usize) -> Vec<(usize, usize)> {
    let mut edges = vec![];
    for i in 0..nodes {
        for k in i + 1..nodes {
            if k == i + 1 || rng.gen_bool(0.3) {
                edges.push((i, k));
            }
        }
    }
    edges
}

/// Every path of signed edges, as composed signatures.
fn paths(d: &Dts) -> Vec<DtsSignature> {
    let pp = &d.public.pp;
    let mut out: Vec<DtsSignature> = d.sigs.values().cloned().collect();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = vec![];
        for s in &frontier {
            for ((i, _), e) in &d.sigs {
                if *i == s.to {
                    next.push(dts_comp(pp, s, e).unwrap());
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[test]
fn dts_chain_and_compression() {
    let d = dts_instance(1, 3, &[(0, 1), (1, 2)]);
    let pp = &d.public.pp;
    let vk = &d.public.vk;
    let (s01, s12) = (&d.sigs[&(0, 1)], &d.sigs[&(1, 2)]);
    dts_ver(pp, vk, s01, &d.certs[0], &d.certs[1]).unwrap();
    let s02 = dts_comp(pp, s01, s12).unwrap();
    dts_ver(pp, vk, &s02, &d.certs[0], &d.certs[2]).unwrap();
    assert_eq!(dts_comp(pp, s12, s01), Err(Error::NotConsecutive));
    assert!(matches!(dts_ver(pp, vk, &s02, &d.certs[0], &d.certs[1]), Err(Error::Reject(_))));

    let c = dts_compress(pp, &s02, &d.certs[0]).unwrap();
    assert_eq!(c.isogenies.len(), d.certs[0].pk.size());
    let v = dts_ver_compressed(pp, vk, &c, &d.certs[0], &d.certs[2]).unwrap();
    assert!(v.endpoint_ok && !v.proof_checked);
    assert!(v.warning.contains("INSECURE"));
    let mut forged = c.clone();
    forged.proof.verified = true;
    assert!(!dts_ver_compressed(pp, vk, &forged, &d.certs[0], &d.certs[2]).unwrap().proof_checked);
    let mut bad = c.clone();
    bad.j = (bad.j + 1) % pp.n;
    assert!(matches!(dts_ver_compressed(pp, vk, &bad, &d.certs[0], &d.certs[2]), Err(Error::Reject(_))));
    // compression only grows with PK(from), not with the chain
    let c01 = dts_compress(pp, s01, &d.certs[0]).unwrap();
    assert_eq!(c01.isogenies.len(), c.isogenies.len());

    let mut cert = d.certs[1].clone();
    cert.sig = "12345".into();
    assert!(matches!(dts_ver(pp, vk, s01, &d.certs[0], &cert), Err(Error::Reject(_))));

    let doc = to_document("dts_signature", &s02).unwrap();
    assert_eq!(from_document::<DtsSignature>("dts_signature", &doc).unwrap(), s02);
}

#[test]
fn dts_policy_blocks_parallelogram() {
    let d = dts_instance(2, 3, &[(0, 1), (1, 2), (0, 2)]);
    let pp = &d.public.pp;
    let (s01, s12, s02) = (&d.sigs[&(0, 1)], &d.sigs[&(1, 2)], &d.sigs[&(0, 2)]);
    assert!(matches!(parallelogram(pp, &s01.enc, &s12.enc, &s02.enc), Err(Error::NotApplicable(_))));
    for (&(i, k), s) in &d.sigs {
        let r = parallelogram(pp, &d.certs[i].pk, &s.enc, &d.certs[k].pk);
        assert!(matches!(r, Err(Error::NotApplicable(_))));
    }
    let rel = |a: &ComposableEncoding, b: &ComposableEncoding, c: &ComposableEncoding| {
        vec![(1i64, a.clone()), (1, b.clone()), (-1, c.clone())]
    };
    let mut rels = vec![rel(&s01.enc, &s12.enc, &s02.enc)];
    for (&(i, k), s) in &d.sigs {
        rels.push(rel(&d.certs[i].pk, &s.enc, &d.certs[k].pk));
    }
    let borrowed: Vec<Vec<(i64, &ComposableEncoding)>> =
        rels.iter().map(|r| r.iter().map(|(s, e)| (*s, e)).collect()).collect();
    let (rank, primes) = relation_hygiene(&borrowed);
    assert!(rank < primes, "{rank} relations over {primes} primes");
}

#[test]
fn dts_random_dag() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let edges = random_dag(&mut rng, 5);
    let d = dts_instance(3, 5, &edges);
    let pp = &d.public.pp;
    let all = paths(&d);
    for s in &all {
        dts_ver(pp, &d.public.vk, s, &d.certs[s.from], &d.certs[s.to]).unwrap();
    }
    for _ in 0..10 {
        let mut s = all[rng.gen_range(0..all.len())].clone();
        let l = rng.gen_range(0..s.enc.lists.len());
        let e = rng.gen_range(0..s.enc.lists[l].len());
        s.enc.lists[l][e] = (s.enc.lists[l][e] + rng.gen_range(1..pp.n)) % pp.n;
        assert!(matches!(dts_ver(pp, &d.public.vk, &s, &d.certs[s.from], &d.certs[s.to]), Err(Error::Reject(_))));
    }
}

struct Be {
    public: BePublic,
    keys: Vec<BeUserKey>,
    td: Trapdoor,
    master: BeMaster,
}

fn be_instance(seed: u64, users: usize) -> Be {
    let (pp, td, reg) = app();
    let mut reg = reg.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = SampleOpts::default();
    let (mut public, mut master) = be_setup(pp, td, &mut reg, &mut rng).unwrap();
    let keys = (0..users)
        .map(|u| be_gen(&mut public, td, &mut master, &mut reg, u, &opts, &mut rng).unwrap())
        .collect();
    Be { public, keys, td: td.clone(), master }
}

#[test]
fn be_three_users() {
    let mut b = be_instance(4, 3);
    b.td.prepare().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let msg = b"broadcast to users 0 and 1";
    let ct = be_enc(&b.public, &b.td, &b.master, &[0, 1], msg, &mut rng).unwrap();
    let k = be_key(&b.public, &b.td, &b.master, &[0, 1]).unwrap();
    for u in [0, 1] {
        assert_eq!(be_derive_key(&b.public, &b.keys[u], &[0, 1]).unwrap(), k);
        assert_eq!(be_dec(&b.public, &b.keys[u], &ct).unwrap(), msg);
    }
    assert_eq!(be_dec(&b.public, &b.keys[2], &ct), Err(Error::KeyMismatch));

    let single = be_enc(&b.public, &b.td, &b.master, &[2], b"solo", &mut rng).unwrap();
    assert_eq!(be_dec(&b.public, &b.keys[2], &single).unwrap(), b"solo");
    assert_eq!(
        be_enc(&b.public, &b.td, &b.master, &[], b"x", &mut rng),
        Err(Error::EmptyRecipientSet)
    );
    let doc = to_document("be_ciphertext", &ct).unwrap();
    assert_eq!(from_document::<BeCiphertext>("be_ciphertext", &doc).unwrap(), ct);
}

#[test]
fn be_policy_blocks_parallelogram() {
    let b = be_instance(6, 3);
    let pp = &b.public.pp;
    for i in 0..3 {
        for k in 0..3 {
            if i == k {
                continue;
            }
            let (pki, pkk) = (&b.public.pks[&i], &b.public.pks[&k]);
            let (ski, skk) = (&b.keys[i].sk, &b.keys[k].sk);
            let c = comp(pp, pkk, ski).unwrap();
            assert!(matches!(parallelogram(pp, pki, skk, &c), Err(Error::NotApplicable(_))));
            assert!(matches!(parallelogram(pp, skk, pki, &c), Err(Error::NotApplicable(_))));
            assert!(comp(pp, ski, skk).is_err());
            assert!(comp(pp, pki, ski).is_err());
        }
    }
}

#[test]
fn secrets_are_distinct_and_nontrivial() {
    let (pp, td, reg) = app();
    let mut reg = reg.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (_, master) = dts_gen(pp, td, &mut reg, 10, &mut rng).unwrap();
    for (i, x) in master.xs.iter().enumerate() {
        assert!(!x.is_identity());
        assert!(!master.xs[..i].contains(x));
    }
}
