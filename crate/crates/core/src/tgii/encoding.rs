//! Composable encodings: sampling, composition, extraction and ladders.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::params::{minimal_exponents, PrimeRegistry, PublicParams, Trapdoor};
use super::serial::dec_vec;
use super::serial::dec_vec2;
use crate::arith::int::{gcd_u64, is_prime_u64, to_u64, Integer};
use crate::arith::{Poly, Zn};
use crate::classgroup::{
    inverse, prime_form, relation_lattice, sample_short_exponents, GenerationSet, IdealClass,
};
use crate::curves::{j_invariant, kernel_poly_mod_n, velu, ExplicitIsogeny};
use crate::error::{Error, Result};
use crate::modpoly::reduced;

/// (L; T_1..T_w): T_i walks e_i steps of the prime form of norm L_i
/// starting from j0.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ComposableEncoding {
    pub degrees: Vec<u64>,
    #[serde(with = "dec_vec2")]
    pub lists: Vec<Vec<u64>>,
}

impl ComposableEncoding {
    /// The encoding of the identity.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(degrees: Vec<u64>, lists: Vec<Vec<u64>>) -> Result<Self> {
        if degrees.len() != lists.len() {
            return Err(Error::Unsupported("one j-list per degree".into()));
        }
        for (i, &l) in degrees.iter().enumerate() {
            if !is_prime_u64(l) {
                return Err(Error::NotPrime(l.into()));
            }
            if degrees[..i].contains(&l) {
                return Err(Error::SharedPrime(l));
            }
        }
        Ok(ComposableEncoding { degrees, lists })
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn exponents(&self) -> Vec<usize> {
        self.lists.iter().map(|t| t.len()).collect()
    }

    /// Number of j-invariants carried.
    pub fn size(&self) -> usize {
        self.lists.iter().map(|t| t.len()).sum()
    }

    /// prod L_i^{|T_i|}.
    pub fn degree(&self) -> Integer {
        self.degrees
            .iter()
            .zip(&self.lists)
            .fold(Integer::one(), |acc, (&l, t)| acc * Integer::from(l).pow(t.len() as u32))
    }

    /// Every adjacent pair in every list (with j0 in front) is a root of
    /// Phi_{L_i} mod N.
    pub fn check_relations(&self, pp: &PublicParams) -> Result<()> {
        let r = Zn::new(pp.n)?;
        for (&l, t) in self.degrees.iter().zip(&self.lists) {
            let table = reduced(l, r)?;
            let mut prev = pp.j0;
            for &j in t {
                if table.eval(prev, j) != 0 {
                    return Err(Error::NotIsogenous(l));
                }
                prev = j;
            }
        }
        Ok(())
    }
}

/// Public list (x * j0, x^2 * j0, ..., x^k * j0) for x of prime norm l.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladder {
    pub l: u64,
    #[serde(with = "dec_vec")]
    pub js: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOpts {
    /// Number of fresh primes per encoding.
    pub w: usize,
    /// sigma as a multiple of the smoothing bound of the relation lattice.
    pub sigma_factor: f64,
    /// Use the reduced discrete log instead of a Gaussian sample.
    pub minimal: bool,
}

impl Default for SampleOpts {
    fn default() -> Self {
        SampleOpts {
            w: 3,
            sigma_factor: 1.0,
            minimal: false,
        }
    }
}

fn check_pp(pp: &PublicParams, td: &Trapdoor) -> Result<()> {
    if pp != &td.public_params() {
        return Err(Error::Unsupported("trapdoor does not match the public parameters".into()));
    }
    Ok(())
}

/// Encoding of x over a given generation set.
pub fn trap_sam_with<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    x: &IdealClass,
    s: &GenerationSet,
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<ComposableEncoding> {
    check_pp(pp, td)?;
    if x.is_identity() {
        return Ok(ComposableEncoding::empty());
    }
    let e: Vec<u64> = if opts.minimal {
        minimal_exponents(td, x, s)?
    } else {
        let lat = relation_lattice(&td.group, s)?;
        let sigma = opts.sigma_factor * lat.sigma_min().max(1.0);
        sample_short_exponents(&td.group, x, s, &lat, sigma, rng)?
            .iter()
            .map(|v| to_u64(v).expect("non-negative exponent"))
            .collect()
    };
    let mut degrees = vec![];
    let mut lists = vec![];
    for ((&l, c), &k) in s.primes.iter().zip(&s.classes).zip(&e) {
        if k == 0 {
            continue;
        }
        let mut t = Vec::with_capacity(k as usize);
        let mut j = pp.j0;
        for _ in 0..k {
            j = td.act(j, c)?;
            t.push(j);
        }
        degrees.push(l);
        lists.push(t);
    }
    ComposableEncoding::new(degrees, lists)
}

/// Encoding of x in the odd part over `opts.w` fresh primes from the
/// registry.
pub fn trap_sam<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    x: &IdealClass,
    registry: &mut PrimeRegistry,
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<ComposableEncoding> {
    if !td.in_odd_part(x) {
        return Err(Error::InvalidForm(format!("{} is outside the odd part", x.form())));
    }
    if x.is_identity() {
        return Ok(ComposableEncoding::empty());
    }
    let primes = registry.fresh(opts.w)?;
    let s = GenerationSet::from_primes(td.disc(), &primes)?;
    trap_sam_with(pp, td, x, &s, opts, rng)
}

/// A uniform x in the odd part with its encoding; over `s` when given,
/// otherwise over fresh registry primes.
pub fn random_sam<R: Rng>(
    pp: &PublicParams,
    td: &Trapdoor,
    s: Option<&GenerationSet>,
    registry: &mut PrimeRegistry,
    opts: &SampleOpts,
    rng: &mut R,
) -> Result<(IdealClass, ComposableEncoding)> {
    let x = td.random_class(rng);
    let enc = match s {
        Some(s) => trap_sam_with(pp, td, &x, s, opts, rng)?,
        None => trap_sam(pp, td, &x, registry, opts, rng)?,
    };
    Ok((x, enc))
}

/// Concatenation when the degrees are coprime.
pub fn comp(_pp: &PublicParams, ex: &ComposableEncoding, ey: &ComposableEncoding) -> Result<ComposableEncoding> {
    if let Some(&l) = ex.degrees.iter().find(|l| ey.degrees.contains(l)) {
        return Err(Error::SharedPrime(l));
    }
    let mut out = ex.clone();
    out.degrees.extend(&ey.degrees);
    out.lists.extend(ey.lists.iter().cloned());
    Ok(out)
}

/// Composition where each shared prime takes the first e_x + e_y entries
/// of its ladder.
pub fn comp_with_ladders(
    _pp: &PublicParams,
    ladders: &[Ladder],
    ex: &ComposableEncoding,
    ey: &ComposableEncoding,
) -> Result<ComposableEncoding> {
    let mut degrees = ex.degrees.clone();
    degrees.extend(ey.degrees.iter().filter(|l| !ex.degrees.contains(l)));
    let find = |e: &ComposableEncoding, l: u64| e.degrees.iter().position(|&x| x == l).map(|i| e.lists[i].len());
    let mut lists = Vec::with_capacity(degrees.len());
    for &l in &degrees {
        let list = match (find(ex, l), find(ey, l)) {
            (Some(a), Some(b)) => {
                let need = a + b;
                let have = ladders.iter().find(|x| x.l == l).map(|x| x.js.len()).unwrap_or(0);
                if have < need {
                    return Err(Error::LadderTooShort { l, need, have });
                }
                ladders.iter().find(|x| x.l == l).unwrap().js[..need].to_vec()
            }
            (Some(_), None) => ex.lists[ex.degrees.iter().position(|&x| x == l).unwrap()].clone(),
            _ => ey.lists[ey.degrees.iter().position(|&x| x == l).unwrap()].clone(),
        };
        lists.push(list);
    }
    ComposableEncoding::new(degrees, lists)
}

fn gcd_inputs(pp: &PublicParams, l1: u64, l2: u64, j1: u64, j2: u64) -> Result<(Poly, Poly)> {
    if gcd_u64(l1, l2) > 1 {
        return Err(Error::Bottom);
    }
    let r = Zn::new(pp.n)?;
    let f = reduced(l2, r)?.eval_x(r.elem(j1));
    let g = reduced(l1, r)?.eval_x(r.elem(j2));
    Ok((f, g))
}

fn linear_root(d: &Poly) -> Result<u64> {
    match d.degree() {
        Some(1) => Ok(d.ring().neg(d.coeff(0))),
        Some(k) => Err(Error::NotLinear(k)),
        None => Err(Error::NotLinear(0)),
    }
}

/// gcd_op by the plain Euclidean algorithm over Z/NZ. A remainder whose
/// leading coefficient vanishes modulo only one prime factor surfaces as
/// `FactorFound`.
pub fn gcd_op_euclid(pp: &PublicParams, l1: u64, l2: u64, j1: u64, j2: u64) -> Result<u64> {
    let (f, g) = gcd_inputs(pp, l1, l2, j1, j2)?;
    linear_root(&f.gcd(&g)?)
}

/// The unique root of gcd(Phi_l2(j1, x), Phi_l1(j2, x)) over Z/NZ.
/// `Bottom` when gcd(l1, l2) > 1.
///
/// When the Euclidean remainder sequence breaks down modulo one prime
/// only, the gcd is recomputed from (f, w g + d f) for random w, d. That
/// pair has the same common root but an unrelated remainder sequence. The
/// root is accepted only if it kills both f and g.
pub fn gcd_op(pp: &PublicParams, l1: u64, l2: u64, j1: u64, j2: u64) -> Result<u64> {
    let (f, g) = gcd_inputs(pp, l1, l2, j1, j2)?;
    let err = match f.gcd(&g) {
        Ok(d) => return linear_root(&d),
        Err(e @ Error::FactorFound(_)) => e,
        Err(e) => return Err(e),
    };
    let (f, g) = if f.degree() >= g.degree() { (f, g) } else { (g, f) };
    let r = f.ring();
    let k = f.degree().unwrap_or(0) - g.degree().unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(j1 ^ j2.rotate_left(32) ^ l1.rotate_left(16) ^ l2);
    for _ in 0..64 {
        let w = Poly::new(r, (0..=k.max(1)).map(|_| rng.gen_range(1..pp.n)).collect());
        let b = w.mul(&g).add(&f.scale(rng.gen_range(1..pp.n)));
        let Ok(d) = f.gcd(&b) else { continue };
        if let Ok(x) = linear_root(&d) {
            if f.eval(x) == 0 && g.eval(x) == 0 {
                return Ok(x);
            }
        }
    }
    Err(err)
}

/// Monic gcd of several polynomials over Z/NZ. A Euclidean breakdown
/// modulo one prime is retried on (f, sum w_i g_i + d f) with random
/// multipliers; a candidate is accepted only if it divides every input.
pub fn common_gcd(polys: &[Poly], seed: u64) -> Result<Poly> {
    let Some((f, rest)) = polys.split_first() else {
        return Err(Error::Unsupported("gcd of nothing".into()));
    };
    let plain = rest.iter().try_fold(f.clone(), |acc, g| acc.gcd(g));
    let err = match plain {
        Ok(d) => return Ok(d),
        Err(e @ Error::FactorFound(_)) => e,
        Err(e) => return Err(e),
    };
    let r = f.ring();
    let n = r.modulus();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut b = f.scale(rng.gen_range(1..n));
        for g in rest {
            let k = f.degree().unwrap_or(0).saturating_sub(g.degree().unwrap_or(0)).max(1);
            let w = Poly::new(r, (0..=k).map(|_| rng.gen_range(1..n)).collect());
            b = b.add(&w.mul(g));
        }
        let Ok(d) = f.gcd(&b) else { continue };
        if polys.iter().all(|p| p.rem(&d).is_ok_and(|x| x.is_zero())) {
            return Ok(d);
        }
    }
    Err(err)
}

/// The (U, V) state of the extraction loop.
struct Extractor<'a> {
    pp: &'a PublicParams,
    u: Vec<u64>,
    v: Vec<u64>,
}

impl<'a> Extractor<'a> {
    fn new(pp: &'a PublicParams) -> Self {
        Extractor { pp, u: vec![], v: vec![] }
    }

    fn last(&self) -> u64 {
        self.u.last().copied().unwrap_or(self.pp.j0)
    }

    /// Fills the parallelograms for one list; `on_append` sees the previous
    /// last entry of U and the new one.
    fn push_list(
        &mut self,
        index: usize,
        l: u64,
        list: &[u64],
        mut on_append: impl FnMut(u64, u64) -> Result<()>,
    ) -> Result<()> {
        let utemp = self.u.len();
        let mut below: Vec<u64> = self.u.clone();
        for (k, &start) in list.iter().enumerate() {
            let mut t = start;
            let mut row = Vec::with_capacity(utemp);
            for h in 0..utemp {
                t = gcd_op(self.pp, l, self.v[h], t, below[h]).map_err(|e| Error::ConvertFailed {
                    list: index + 1,
                    entry: k + 1,
                    step: h + 1,
                    source: Box::new(e),
                })?;
                row.push(t);
            }
            on_append(self.last(), t)?;
            self.u.push(t);
            self.v.push(l);
            below = row;
        }
        Ok(())
    }
}

/// Canonical encoding x * j0 from a composable encoding.
pub fn convert(pp: &PublicParams, enc: &ComposableEncoding) -> Result<u64> {
    let mut ex = Extractor::new(pp);
    for (i, (&l, t)) in enc.degrees.iter().zip(&enc.lists).enumerate() {
        ex.push_list(i, l, t, |_, _| Ok(()))?;
    }
    Ok(ex.last())
}

/// convert(ex) together with explicit isogenies, one per entry of ey,
/// leading from it to convert(ex || ey).
pub fn partial_convert(
    pp: &PublicParams,
    ex: &ComposableEncoding,
    ey: &ComposableEncoding,
) -> Result<(u64, Vec<ExplicitIsogeny>)> {
    let mut st = Extractor::new(pp);
    for (i, (&l, t)) in ex.degrees.iter().zip(&ex.lists).enumerate() {
        st.push_list(i, l, t, |_, _| Ok(()))?;
    }
    let jx = st.last();
    let mut chain = vec![];
    for (i, (&l, t)) in ey.degrees.iter().zip(&ey.lists).enumerate() {
        st.push_list(ex.degrees.len() + i, l, t, |from, to| {
            let (src, _, k) = kernel_poly_mod_n(pp.n, l, from, to)?;
            let iso = velu(&src, &k)?;
            if j_invariant(&iso.target)? != to {
                return Err(Error::Degenerate(format!("isogeny of degree {l} misses {to}")));
            }
            chain.push(iso);
            Ok(())
        })?;
    }
    Ok((jx, chain))
}

/// (x * j0, ..., x^k * j0) for x the prime form of norm l or its inverse.
pub fn sample_ladder(td: &Trapdoor, l: u64, k: usize, x: &IdealClass) -> Result<Ladder> {
    let c = prime_form(td.disc(), l)?;
    if x != &c && x != &inverse(&c) {
        return Err(Error::InvalidForm(format!("{} does not have norm {l}", x.form())));
    }
    let mut js = Vec::with_capacity(k);
    let mut j = td.j0;
    for _ in 0..k {
        j = td.act(j, x)?;
        js.push(j);
    }
    Ok(Ladder { l, js })
}
