//! Private-key broadcast encryption.
//!
//! PK_u = enc(x_u) over S_u + one fresh prime, SK_u = enc(x_u s) over
//! S_u + S_msk + one fresh prime. Secret keys share S_msk and each SK_u
//! shares S_u with its own PK_u, so neither kind of pair composes. The
//! message key for a recipient set G is (prod_{i in G} x_i) s * j0.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::classgroup::{compose, inverse, GenerationSet, IdealClass};
use crate::error::{Error, Result};
use crate::tgii::{comp, convert, trap_sam_with, ComposableEncoding, PrimeRegistry, PublicParams, SampleOpts, Trapdoor};

/// Name of the extendable-output function behind the symmetric layer.
pub const XOF: &str = "SHAKE256";

const TAG_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BePublic {
    pub pp: PublicParams,
    pub xof: String,
    pub pks: BTreeMap<usize, ComposableEncoding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeMaster {
    pub s: IdealClass,
    pub s_msk: Vec<u64>,
    pub xs: BTreeMap<usize, IdealClass>,
    pub user_sets: BTreeMap<usize, Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeUserKey {
    pub user: usize,
    pub sk: ComposableEncoding,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeCiphertext {
    pub gamma: Vec<usize>,
    pub nonce: String,
    pub checksum: String,
    pub payload: String,
}

pub fn be_setup<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    reg: &mut PrimeRegistry,
    rng: &mut R,
) -> Result<(BePublic, BeMaster)> {
    let s_msk = reg.reserve("be/msk", 1)?;
    let public = BePublic {
        pp: *pp,
        xof: XOF.into(),
        pks: BTreeMap::new(),
    };
    let master = BeMaster {
        s: super::secret_class(td, &[], rng)?,
        s_msk,
        xs: BTreeMap::new(),
        user_sets: BTreeMap::new(),
    };
    Ok((public, master))
}

fn sample<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    reg: &mut PrimeRegistry,
    x: &IdealClass,
    sets: &[&[u64]],
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<ComposableEncoding> {
    let mut primes: Vec<u64> = sets.iter().flat_map(|s| s.iter().copied()).collect();
    primes.extend(reg.fresh(1)?);
    let s = GenerationSet::from_primes(td.disc(), &primes)?;
    trap_sam_with(pp, td, x, &s, opts, rng)
}

/// Adds user `u`: publishes PK_u and returns SK_u.
#[allow(clippy::too_many_arguments)]
pub fn be_gen<R: Rng>(
    public: &mut BePublic,
    td: &Trapdoor,
    master: &mut BeMaster,
    reg: &mut PrimeRegistry,
    user: usize,
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<BeUserKey> {
    if public.pks.contains_key(&user) {
        return Err(Error::Unsupported(format!("user {user} already exists")));
    }
    let pp = public.pp;
    let s_u = reg.reserve(&format!("be/user/{user}"), 1)?;
    // x s = 1 would make SK_u empty
    let mut avoid: Vec<IdealClass> = master.xs.values().cloned().collect();
    avoid.push(inverse(&master.s));
    let x = super::secret_class(td, &avoid, rng)?;
    let pk = sample(&pp, td, reg, &x, &[&s_u], opts, rng)?;
    let xs = compose(&x, &master.s)?;
    let sk = sample(&pp, td, reg, &xs, &[&s_u, &master.s_msk], opts, rng)?;
    public.pks.insert(user, pk);
    master.xs.insert(user, x);
    master.user_sets.insert(user, s_u);
    Ok(BeUserKey { user, sk })
}

fn recipients(gamma: &[usize]) -> Result<Vec<usize>> {
    let g: BTreeSet<usize> = gamma.iter().copied().collect();
    if g.is_empty() {
        return Err(Error::EmptyRecipientSet);
    }
    Ok(g.into_iter().collect())
}

fn xof(label: &[u8], key: u64, gamma: &[usize], nonce: &[u8], extra: &[u8], len: usize) -> Vec<u8> {
    let mut h = Shake256::default();
    h.update(label);
    h.update(key.to_string().as_bytes());
    for u in gamma {
        h.update(&(*u as u64).to_be_bytes());
    }
    h.update(nonce);
    h.update(extra);
    let mut out = vec![0u8; len];
    h.finalize_xof().read(&mut out);
    out
}

fn keystream(key: u64, gamma: &[usize], nonce: &[u8], len: usize) -> Vec<u8> {
    xof(b"tgii-be/stream", key, gamma, nonce, &[], len)
}

fn checksum(key: u64, gamma: &[usize], nonce: &[u8], msg: &[u8]) -> Vec<u8> {
    xof(b"tgii-be/check", key, gamma, nonce, msg, TAG_LEN)
}

/// The message key K = (prod x_i) s * j0, by the trapdoor action.
pub fn be_key(public: &BePublic, td: &Trapdoor, master: &BeMaster, gamma: &[usize]) -> Result<u64> {
    let mut k = master.s.clone();
    for u in recipients(gamma)? {
        let x = master.xs.get(&u).ok_or_else(|| Error::Unsupported(format!("unknown user {u}")))?;
        k = compose(&k, x)?;
    }
    td.act(public.pp.j0, &k)
}

pub fn be_enc<R: Rng>(
    public: &BePublic,
    td: &Trapdoor,
    master: &BeMaster,
    gamma: &[usize],
    msg: &[u8],
    rng: &mut R,
) -> Result<BeCiphertext> {
    let gamma = recipients(gamma)?;
    let key = be_key(public, td, master, &gamma)?;
    let nonce: [u8; 16] = rng.gen();
    let stream = keystream(key, &gamma, &nonce, msg.len());
    let payload: Vec<u8> = msg.iter().zip(&stream).map(|(a, b)| a ^ b).collect();
    Ok(BeCiphertext {
        checksum: hex::encode(checksum(key, &gamma, &nonce, msg)),
        nonce: hex::encode(nonce),
        payload: hex::encode(payload),
        gamma,
    })
}

/// K' = convert(prod_{i in G \ u} PK_i . SK_u), then decrypt and check.
pub fn be_derive_key(public: &BePublic, key: &BeUserKey, gamma: &[usize]) -> Result<u64> {
    let pp = &public.pp;
    let mut enc = key.sk.clone();
    for u in recipients(gamma)? {
        if u == key.user {
            continue;
        }
        let pk = public.pks.get(&u).ok_or_else(|| Error::Unsupported(format!("unknown user {u}")))?;
        enc = comp(pp, pk, &enc)?;
    }
    convert(pp, &enc)
}

pub fn be_dec(public: &BePublic, key: &BeUserKey, ct: &BeCiphertext) -> Result<Vec<u8>> {
    let gamma = recipients(&ct.gamma)?;
    let bad = |e: hex::FromHexError| Error::Serde(e.to_string());
    let nonce = hex::decode(&ct.nonce).map_err(bad)?;
    let payload = hex::decode(&ct.payload).map_err(bad)?;
    let tag = hex::decode(&ct.checksum).map_err(bad)?;
    let k = match be_derive_key(public, key, &gamma) {
        Ok(k) => k,
        Err(e @ Error::FactorFound(_)) => return Err(e),
        Err(_) => return Err(Error::KeyMismatch),
    };
    let stream = keystream(k, &gamma, &nonce, payload.len());
    let msg: Vec<u8> = payload.iter().zip(&stream).map(|(a, b)| a ^ b).collect();
    if checksum(k, &gamma, &nonce, &msg) != tag {
        return Err(Error::KeyMismatch);
    }
    Ok(msg)
}
