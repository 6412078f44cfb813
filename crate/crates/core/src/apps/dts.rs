//! Directed transitive signatures on a DAG with topologically ordered
//! nodes (edges i -> k only for i < k).
//!
//! Generation sets: PK(i) uses common + dst(i) + one fresh prime, the
//! signature on i -> k uses src(i) + dst(k) + one fresh prime. PK(i) and
//! PK(k) then share `common`, signatures out of i share src(i) and
//! signatures into k share dst(k), which keeps the parallelogram attack
//! out of reach. Waiting signatures are not supported.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::fdh::{fdh_keygen, FdhPublicKey, FdhSecretKey, Signer, Verifier};
use crate::arith::{Poly, Zn};
use crate::classgroup::{compose, inverse, GenerationSet, IdealClass};
use crate::curves::{j_invariant, velu, Curve, KernelPoly};
use crate::error::{Error, Result};
use crate::tgii::serial::{dec, dec_vec};
use crate::tgii::{comp, convert, partial_convert, trap_sam_with, ComposableEncoding, PrimeRegistry, PublicParams, SampleOpts, Trapdoor};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtsPublic {
    pub pp: PublicParams,
    pub vk: FdhPublicKey,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtsMaster {
    pub sk: FdhSecretKey,
    /// Secret x_i per node.
    pub xs: Vec<IdealClass>,
    pub common: Vec<u64>,
    /// dst(i) for every node but the first, src(i) for every node but the
    /// last; empty otherwise.
    pub dst: Vec<Vec<u64>>,
    pub src: Vec<Vec<u64>>,
}

/// (i, PK(i)) with the master's certificate on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCert {
    pub node: usize,
    pub pk: ComposableEncoding,
    pub sig: String,
}

impl NodeCert {
    fn message(node: usize, pk: &ComposableEncoding) -> Vec<u8> {
        serde_json::to_vec(&("tgii-dts-node", node, pk)).expect("encoding serializes")
    }

    pub fn check(&self, vk: &impl Verifier) -> Result<()> {
        if vk.verify(&Self::message(self.node, &self.pk), &self.sig) {
            Ok(())
        } else {
            Err(Error::Reject(format!("certificate of node {} is invalid", self.node)))
        }
    }
}

/// enc(x_from^{-1} x_to).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DtsSignature {
    pub from: usize,
    pub to: usize,
    pub enc: ComposableEncoding,
}

/// Stand-in for the succinct argument that the isogeny chain came from
/// PK(from). Nothing is proved; verifiers report it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofPlaceholder {
    pub verified: bool,
    pub note: String,
}

impl Default for ProofPlaceholder {
    fn default() -> Self {
        ProofPlaceholder {
            verified: false,
            note: "INSECURE: no proof that the isogenies represent PK(from)".into(),
        }
    }
}

/// One isogeny of the compressed chain: its degree, the source curve
/// (a, b) and the kernel polynomial coefficients, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsogenyData {
    pub l: u64,
    #[serde(with = "dec_vec")]
    pub source: Vec<u64>,
    #[serde(with = "dec_vec")]
    pub kernel: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompressedSignature {
    pub from: usize,
    pub to: usize,
    #[serde(with = "dec")]
    pub j: u64,
    pub isogenies: Vec<IsogenyData>,
    pub proof: ProofPlaceholder,
}

/// Outcome of verifying a compressed signature: the endpoint matched, the
/// proof could not be checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompressedVerdict {
    pub endpoint_ok: bool,
    pub proof_checked: bool,
    pub warning: String,
}

pub fn dts_gen<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    reg: &mut PrimeRegistry,
    nodes: usize,
    rng: &mut R,
) -> Result<(DtsPublic, DtsMaster)> {
    if nodes == 0 {
        return Err(Error::Unsupported("a DAG needs at least one node".into()));
    }
    let (vk, sk) = fdh_keygen(rng);
    let common = reg.reserve("dts/common", 1)?;
    let mut dst = vec![vec![]; nodes];
    let mut src = vec![vec![]; nodes];
    for i in 0..nodes {
        if i > 0 {
            dst[i] = reg.reserve(&format!("dts/dst/{i}"), 1)?;
        }
        if i + 1 < nodes {
            src[i] = reg.reserve(&format!("dts/src/{i}"), 1)?;
        }
    }
    let mut xs = Vec::with_capacity(nodes);
    for _ in 0..nodes {
        xs.push(super::secret_class(td, &xs, rng)?);
    }
    Ok((
        DtsPublic { pp: *pp, vk, nodes },
        DtsMaster { sk, xs, common, dst, src },
    ))
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

/// PK(i) = enc(x_i) and its certificate.
pub fn dts_cert<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    master: &DtsMaster,
    reg: &mut PrimeRegistry,
    node: usize,
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<NodeCert> {
    let x = master.xs.get(node).ok_or_else(|| Error::Unsupported(format!("no node {node}")))?;
    let pk = sample(pp, td, reg, x, &[&master.common, &master.dst[node]], opts, rng)?;
    let sig = master.sk.sign(&NodeCert::message(node, &pk));
    Ok(NodeCert { node, pk, sig })
}

/// Signature on the edge i -> k, sampled directly from x_i^{-1} x_k.
pub fn dts_sign<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    master: &DtsMaster,
    reg: &mut PrimeRegistry,
    i: usize,
    k: usize,
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<DtsSignature> {
    if i >= k || k >= master.xs.len() {
        return Err(Error::Reject(format!("{i} -> {k} is not an edge of the ordered DAG")));
    }
    let x = compose(&inverse(&master.xs[i]), &master.xs[k])?;
    let enc = sample(pp, td, reg, &x, &[&master.src[i], &master.dst[k]], opts, rng)?;
    Ok(DtsSignature { from: i, to: k, enc })
}

/// Signature on i -> k from signatures on i -> j and j -> k.
pub fn dts_comp(pp: &PublicParams, a: &DtsSignature, b: &DtsSignature) -> Result<DtsSignature> {
    if a.to != b.from {
        return Err(Error::NotConsecutive);
    }
    Ok(DtsSignature {
        from: a.from,
        to: b.to,
        enc: comp(pp, &a.enc, &b.enc)?,
    })
}

fn check_nodes(from: usize, to: usize, ci: &NodeCert, ck: &NodeCert, vk: &impl Verifier) -> Result<()> {
    if ci.node != from || ck.node != to {
        return Err(Error::Reject("certificates do not match the edge".into()));
    }
    ci.check(vk)?;
    ck.check(vk)
}

fn reject(e: Error) -> Error {
    match e {
        Error::Reject(_) | Error::FactorFound(_) => e,
        other => Error::Reject(other.to_string()),
    }
}

/// Accepts when both certificates verify and
/// convert(PK(i) . sigma) = convert(PK(k)).
pub fn dts_ver(
    pp: &PublicParams,
    vk: &impl Verifier,
    sig: &DtsSignature,
    ci: &NodeCert,
    ck: &NodeCert,
) -> Result<()> {
    check_nodes(sig.from, sig.to, ci, ck, vk)?;
    let lhs = comp(pp, &ci.pk, &sig.enc)
        .and_then(|e| convert(pp, &e))
        .map_err(reject)?;
    let rhs = convert(pp, &ck.pk).map_err(reject)?;
    if lhs != rhs {
        return Err(Error::Reject(format!("endpoint mismatch: {lhs} != {rhs}")));
    }
    Ok(())
}

/// (convert(sigma), isogenies representing PK(i) from there, placeholder).
pub fn dts_compress(pp: &PublicParams, sig: &DtsSignature, ci: &NodeCert) -> Result<CompressedSignature> {
    if ci.node != sig.from {
        return Err(Error::Reject("certificate does not match the edge".into()));
    }
    let (j, chain) = partial_convert(pp, &sig.enc, &ci.pk)?;
    let isogenies = chain
        .iter()
        .map(|iso| IsogenyData {
            l: iso.kernel.l,
            source: vec![iso.source.a, iso.source.b],
            kernel: iso.kernel.h.coeffs().to_vec(),
        })
        .collect();
    Ok(CompressedSignature {
        from: sig.from,
        to: sig.to,
        j,
        isogenies,
        proof: ProofPlaceholder::default(),
    })
}

/// Checks the certificates and that the chain carries j to
/// convert(PK(k)). The proof is never checked; the verdict says so.
pub fn dts_ver_compressed(
    pp: &PublicParams,
    vk: &impl Verifier,
    sig: &CompressedSignature,
    ci: &NodeCert,
    ck: &NodeCert,
) -> Result<CompressedVerdict> {
    check_nodes(sig.from, sig.to, ci, ck, vk)?;
    let r = Zn::new(pp.n)?;
    let mut j = sig.j;
    for (i, iso) in sig.isogenies.iter().enumerate() {
        let bad = |m: &str| Error::Reject(format!("isogeny {}: {m}", i + 1));
        let [a, b] = iso.source[..] else {
            return Err(bad("source must be (a, b)"));
        };
        let c = Curve::new(r, a, b).map_err(reject)?;
        if j_invariant(&c).map_err(reject)? != j {
            return Err(bad("source does not continue the chain"));
        }
        let k = KernelPoly::new(iso.l, Poly::new(r, iso.kernel.clone())).map_err(reject)?;
        j = j_invariant(&velu(&c, &k).map_err(reject)?.target).map_err(reject)?;
    }
    let want = convert(pp, &ck.pk).map_err(reject)?;
    if j != want {
        return Err(Error::Reject(format!("endpoint mismatch: {j} != {want}")));
    }
    Ok(CompressedVerdict {
        endpoint_ok: true,
        proof_checked: false,
        warning: sig.proof.note.clone(),
    })
}
