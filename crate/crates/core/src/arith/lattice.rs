//! Small integer lattices: exact LLL, membership, and GPV discrete Gaussian
//! sampling over cosets.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major integer matrix; rows are lattice basis vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: Vec<Vec<BigInt>>,
    cols: usize,
}

impl IntMatrix {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Unsupported("ragged matrix".into()));
        }
        Ok(IntMatrix { rows, cols })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntMatrix { rows, cols: n }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    /// Determinant of a square matrix (Bareiss fraction-free elimination).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.nrows(), self.cols, "det of non-square matrix");
        let n = self.cols;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(i) => {
                        m.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    /// det(B B^T), the squared covolume.
    pub fn gram_det(&self) -> BigInt {
        let n = self.nrows();
        let g: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| dot(&self.rows[i], &self.rows[j])).collect())
            .collect();
        IntMatrix { rows: g, cols: n }.det()
    }

    /// Solve x * B = v over the rationals. `None` if v is outside the row
    /// space.
    pub fn solve_left(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let n = self.nrows();
        let m = self.cols;
        // augmented system B^T x = v, m equations, n unknowns
        let mut a: Vec<Vec<BigRational>> = (0..m)
            .map(|j| {
                let mut row: Vec<BigRational> =
                    (0..n).map(|i| BigRational::from(self.rows[i][j].clone())).collect();
                row.push(BigRational::from(v[j].clone()));
                row
            })
            .collect();
        let mut piv_cols = vec![];
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = BigRational::one() / a[r][c].clone();
            for k in c..=n {
                a[r][k] = &a[r][k] * &inv;
            }
            for i in 0..m {
                if i != r && !a[i][c].is_zero() {
                    let f = a[i][c].clone();
                    for k in c..=n {
                        let t = &f * &a[r][k];
                        a[i][k] = &a[i][k] - t;
                    }
                }
            }
            piv_cols.push(c);
            r += 1;
        }
        if (r..m).any(|i| !a[i][n].is_zero()) {
            return None;
        }
        let mut x = vec![BigRational::zero(); n];
        for (row, &c) in piv_cols.iter().enumerate() {
            x[c] = a[row][n].clone();
        }
        Some(x)
    }

    /// Is v an integer combination of the rows?
    pub fn contains(&self, v: &[BigInt]) -> bool {
        match self.solve_left(v) {
            Some(x) => x.iter().all(|q| q.is_integer()),
            None => false,
        }
    }

    /// Gram-Schmidt vectors in floating point.
    pub fn gram_schmidt_f64(&self) -> Vec<Vec<f64>> {
        let b: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_f64().unwrap()).collect())
            .collect();
        let mut out: Vec<Vec<f64>> = Vec::with_capacity(b.len());
        for bi in &b {
            let mut v = bi.clone();
            for bj in &out {
                let mu = dotf(bi, bj) / dotf(bj, bj);
                for (vk, bk) in v.iter_mut().zip(bj) {
                    *vk -= mu * bk;
                }
            }
            out.push(v);
        }
        out
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dotf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dotq(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gso(b: &[Vec<BigInt>]) -> Result<(Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let n = b.len();
    let mut bs: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut norms = Vec::with_capacity(n);
    for i in 0..n {
        let bi: Vec<BigRational> = b[i].iter().map(|v| BigRational::from(v.clone())).collect();
        let mut v = bi.clone();
        for j in 0..i {
            mu[i][j] = dotq(&bi, &bs[j]) / &norms[j];
            for (vk, bk) in v.iter_mut().zip(&bs[j]) {
                *vk = &*vk - &mu[i][j] * bk;
            }
        }
        let nv = dotq(&v, &v);
        if nv.is_zero() {
            return Err(Error::RankDeficient);
        }
        norms.push(nv);
        bs.push(v);
    }
    Ok((bs, mu, norms))
}

/// LLL reduction with delta = 3/4, exact rational arithmetic.
pub fn lll(basis: &IntMatrix) -> Result<IntMatrix> {
    let mut b = basis.rows.clone();
    let n = b.len();
    if n == 0 {
        return Ok(basis.clone());
    }
    let delta = BigRational::new(3.into(), 4.into());
    let half = BigRational::new(1.into(), 2.into());
    let (_, mut mu, mut norms) = gso(&b)?;
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            if mu[k][j].abs() > half {
                let r = mu[k][j].round().to_integer();
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
                (_, mu, norms) = gso(&b)?;
            }
        }
        let lhs = &norms[k];
        let rhs = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1];
        if *lhs >= rhs {
            k += 1;
        } else {
            b.swap(k, k - 1);
            (_, mu, norms) = gso(&b)?;
            k = (k - 1).max(1);
        }
    }
    IntMatrix::new(b)
}

/// Smoothing bound sigma_min = max ||b~_i|| * sqrt(ln(2n+4)/pi).
pub fn smoothing_bound(basis: &IntMatrix) -> f64 {
    let n = basis.nrows() as f64;
    let gs = basis.gram_schmidt_f64();
    let m = gs.iter().map(|v| dotf(v, v).sqrt()).fold(0.0, f64::max);
    m * ((2.0 * n + 4.0).ln() / std::f64::consts::PI).sqrt()
}

/// Sample from D_{Z, s, c} with rho_s(x) = exp(-pi (x-c)^2 / s^2).
pub fn sample_z<R: Rng>(rng: &mut R, s: f64, c: f64) -> i64 {
    let tail = 12.0 * s.max(1.0);
    let lo = (c - tail).floor() as i64;
    let hi = (c + tail).ceil() as i64;
    loop {
        let x = rng.gen_range(lo..=hi);
        let d = x as f64 - c;
        let p = (-std::f64::consts::PI * d * d / (s * s)).exp();
        if rng.gen::<f64>() < p {
            return x;
        }
    }
}

/// GPV randomized nearest plane: a lattice vector distributed as
/// D_{L, sigma, c}.
pub fn sample_d<R: Rng>(basis: &IntMatrix, sigma: f64, center: &[f64], rng: &mut R) -> Vec<BigInt> {
    let gs = basis.gram_schmidt_f64();
    let n = basis.nrows();
    let mut c = center.to_vec();
    let mut v = vec![BigInt::zero(); basis.ncols()];
    for i in (0..n).rev() {
        let nb = dotf(&gs[i], &gs[i]);
        let ci = dotf(&c, &gs[i]) / nb;
        let si = sigma / nb.sqrt();
        let z = sample_z(rng, si, ci);
        for (k, bk) in basis.rows[i].iter().enumerate() {
            c[k] -= z as f64 * bk.to_f64().unwrap();
            v[k] += BigInt::from(z) * bk;
        }
    }
    v
}

/// Sample v in target + L with v distributed as D_{target+L, sigma, center}.
/// The statistical mean of v approaches `center`.
pub fn gauss_sample_coset<R: Rng>(
    basis: &IntMatrix,
    target: &[BigInt],
    sigma: f64,
    center: &[f64],
    rng: &mut R,
) -> Result<Vec<BigInt>> {
    let bound = smoothing_bound(basis);
    if sigma < bound {
        return Err(Error::SigmaTooSmall(format!("{bound:.3}")));
    }
    // v = target - y with y ~ D_{L, sigma, target - center}
    let shifted: Vec<f64> = target
        .iter()
        .zip(center)
        .map(|(t, c)| t.to_f64().unwrap() - c)
        .collect();
    let y = sample_d(basis, sigma, &shifted, rng);
    Ok(target.iter().zip(y).map(|(t, y)| t - y).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn identity_is_reduced() {
        let id = IntMatrix::identity(4);
        assert_eq!(lll(&id).unwrap(), id);
    }

    #[test]
    fn finds_shortest_vector() {
        let m = IntMatrix::from_i64(&[vec![201, 37], vec![1648, 297]]).unwrap();
        let r = lll(&m).unwrap();
        let mut best = i64::MAX;
        for x in -50i64..=50 {
            for y in -50i64..=50 {
                if x == 0 && y == 0 {
                    continue;
                }
                let v0 = 201 * x + 1648 * y;
                let v1 = 37 * x + 297 * y;
                best = best.min(v0 * v0 + v1 * v1);
            }
        }
        let norms: Vec<i64> = r
            .rows()
            .iter()
            .map(|row| row.iter().map(|v| v.to_i64().unwrap().pow(2)).sum())
            .collect();
        assert!(norms.contains(&best), "{norms:?} vs {best}");
        assert_eq!(r.det().abs(), m.det().abs());
    }

    #[test]
    fn dependent_rows_rejected() {
        let m = IntMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(lll(&m), Err(Error::RankDeficient));
    }

    #[test]
    fn coset_sampling_membership() {
        let l7 = IntMatrix::from_i64(&[vec![7]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let v = gauss_sample_coset(&l7, &[b(3)], 40.0, &[0.0], &mut rng).unwrap();
            assert_eq!((&v[0] - b(3)) % 7, b(0));
        }
        let v = gauss_sample_coset(&l7, &[b(0)], 1e6, &[0.0], &mut rng).unwrap();
        assert_eq!(&v[0] % 7, b(0));
        assert!(matches!(
            gauss_sample_coset(&l7, &[b(0)], 0.5, &[0.0], &mut rng),
            Err(Error::SigmaTooSmall(_))
        ));
    }

    #[test]
    fn membership_solver() {
        let m = IntMatrix::from_i64(&[vec![2, 1], vec![0, 3]]).unwrap();
        assert!(m.contains(&[b(2), b(4)]));
        assert!(!m.contains(&[b(1), b(0)]));
    }
}
