//! Coefficient tables of classical modular polynomials.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::int::{is_prime_u64, Integer};
use crate::arith::{Poly, Zn};
use crate::error::{Error, Result};

/// Phi_m stored as its lower triangle: (i, j) with i >= j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularPolynomialTable {
    level: u64,
    /// Set when the coefficients are only known modulo this integer.
    modulus: Option<Integer>,
    entries: BTreeMap<(usize, usize), Integer>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError {
        line,
        msg: msg.into(),
    }
}

fn level_from_degree(d: usize) -> Option<u64> {
    let d = d as u64;
    if d >= 3 && is_prime_u64(d - 1) {
        return Some(d - 1);
    }
    (2..d).find(|&l| l * (l + 1) == d && is_prime_u64(l)).map(|l| l * l)
}

impl ModularPolynomialTable {
    /// Parse the `[i,j] c` line format. `#` lines are comments, except that
    /// `# modulus N` marks a table reduced mod N and `Phi_m` in a comment
    /// names the level.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<(usize, usize), Integer> = BTreeMap::new();
        let mut modulus = None;
        let mut level = None;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if let Some(m) = comment.strip_prefix("modulus") {
                    let n: Integer = m.trim().parse().map_err(|_| parse_err(line_no, "bad modulus"))?;
                    modulus = Some(n);
                } else if let Some(pos) = comment.find("Phi_") {
                    let digits: String = comment[pos + 4..].chars().take_while(|c| c.is_ascii_digit()).collect();
                    level = digits.parse::<u64>().ok();
                }
                continue;
            }
            let rest = line.strip_prefix('[').ok_or_else(|| parse_err(line_no, "expected '['"))?;
            let (idx, coeff) = rest.split_once(']').ok_or_else(|| parse_err(line_no, "expected ']'"))?;
            let (i, j) = idx.split_once(',').ok_or_else(|| parse_err(line_no, "expected 'i,j'"))?;
            let i: usize = i.trim().parse().map_err(|_| parse_err(line_no, "bad index"))?;
            let j: usize = j.trim().parse().map_err(|_| parse_err(line_no, "bad index"))?;
            let c: Integer = coeff.trim().parse().map_err(|_| parse_err(line_no, "bad coefficient"))?;
            let key = (i.max(j), i.min(j));
            match entries.get(&key) {
                Some(old) if *old != c => return Err(Error::ConflictError(line_no)),
                _ => {
                    entries.insert(key, c);
                }
            }
        }
        if entries.is_empty() {
            return Err(parse_err(0, "no coefficients"));
        }
        let d = entries.keys().map(|k| k.0).max().unwrap_or(0);
        let level = match level {
            Some(l) => l,
            None => level_from_degree(d).ok_or_else(|| parse_err(0, "cannot infer level"))?,
        };
        Ok(ModularPolynomialTable {
            level,
            modulus,
            entries,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| parse_err(0, e.to_string()))?;
        Self::parse(&text)
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn modulus(&self) -> Option<&Integer> {
        self.modulus.as_ref()
    }

    /// Degree in each variable.
    pub fn degree(&self) -> usize {
        self.entries.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Integer {
        self.entries
            .get(&(i.max(j), i.min(j)))
            .cloned()
            .unwrap_or_else(Integer::zero)
    }

    /// Lower-triangle entries (i >= j) in lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Integer)> {
        self.entries.iter().map(|(&(i, j), c)| (i, j, c))
    }

    /// Reduce into a ring. Tables known mod N reduce only into Z/mZ with m | N.
    pub fn reduce(&self, ring: Zn) -> Result<ReducedTable> {
        if let Some(n) = &self.modulus {
            if !(n % ring.modulus_big()).is_zero() {
                return Err(Error::MissingModularPolynomial(self.level));
            }
        }
        let d = self.degree();
        let mut c = vec![vec![0u64; d + 1]; d + 1];
        for (&(i, j), v) in &self.entries {
            let r = ring.from_big_elem(v);
            c[i][j] = r;
            c[j][i] = r;
        }
        Ok(ReducedTable {
            level: self.level,
            ring,
            c,
        })
    }

    /// Serialise in the line format.
    pub fn to_text(&self) -> String {
        let mut s = format!("# classical modular polynomial Phi_{}\n", self.level);
        if let Some(n) = &self.modulus {
            s.push_str(&format!("# modulus {n}\n"));
        }
        for (&(i, j), c) in &self.entries {
            if !c.is_zero() {
                s.push_str(&format!("[{i},{j}] {c}\n"));
            }
        }
        s
    }

    /// Largest coefficient size in bits.
    pub fn max_bits(&self) -> u64 {
        self.entries.values().map(|c| c.abs().bits()).max().unwrap_or(0)
    }

    pub fn small_coefficient(&self, i: usize, j: usize) -> Option<i64> {
        self.coefficient(i, j).to_i64()
    }
}

/// A table reduced into Z/nZ, stored densely.
#[derive(Debug, Clone)]
pub struct ReducedTable {
    level: u64,
    ring: Zn,
    c: Vec<Vec<u64>>,
}

impl ReducedTable {
    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn ring(&self) -> Zn {
        self.ring
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    /// Phi(j, Y) as a polynomial in Y.
    pub fn eval_x(&self, j: u64) -> Poly {
        let r = self.ring;
        let j = r.elem(j);
        let d = self.c.len();
        let mut pw = Vec::with_capacity(d);
        let mut acc = 1u64;
        for _ in 0..d {
            pw.push(acc);
            acc = r.mul(acc, j);
        }
        let n = r.modulus();
        let mut out = vec![0u64; d];
        if n <= u32::MAX as u64 {
            let mut sums = vec![0u128; d];
            for (row, &x) in self.c.iter().zip(&pw) {
                if x == 0 {
                    continue;
                }
                for (s, &v) in sums.iter_mut().zip(row) {
                    *s += (v * x) as u128;
                }
            }
            for (o, s) in out.iter_mut().zip(sums) {
                *o = (s % n as u128) as u64;
            }
        } else {
            for (row, &x) in self.c.iter().zip(&pw) {
                for (o, &v) in out.iter_mut().zip(row) {
                    *o = r.add(*o, r.mul(v, x));
                }
            }
        }
        Poly::new(r, out)
    }

    pub fn eval(&self, x: u64, y: u64) -> u64 {
        self.eval_x(x).eval(y)
    }

    /// Partial derivatives (d/dX, d/dY) at (x, y).
    pub fn partials(&self, x: u64, y: u64) -> (u64, u64) {
        let r = self.ring;
        let d = self.c.len();
        let pows = |v: u64| {
            let mut p = Vec::with_capacity(d);
            let mut a = 1u64;
            for _ in 0..d {
                p.push(a);
                a = r.mul(a, v);
            }
            p
        };
        let (px, py) = (pows(r.elem(x)), pows(r.elem(y)));
        let (mut dx, mut dy) = (0u64, 0u64);
        for a in 0..d {
            for b in 0..d {
                let c = self.c[a][b];
                if c == 0 {
                    continue;
                }
                if a > 0 {
                    let t = r.mul(r.mul(c, r.elem(a as u64)), r.mul(px[a - 1], py[b]));
                    dx = r.add(dx, t);
                }
                if b > 0 {
                    let t = r.mul(r.mul(c, r.elem(b as u64)), r.mul(px[a], py[b - 1]));
                    dy = r.add(dy, t);
                }
            }
        }
        (dx, dy)
    }

    /// Second partials (XX, XY, YY) at (x, y).
    pub fn second_partials(&self, x: u64, y: u64) -> (u64, u64, u64) {
        let r = self.ring;
        let d = self.c.len();
        let pows = |v: u64| {
            let mut p = Vec::with_capacity(d);
            let mut a = 1u64;
            for _ in 0..d {
                p.push(a);
                a = r.mul(a, v);
            }
            p
        };
        let (px, py) = (pows(r.elem(x)), pows(r.elem(y)));
        let (mut xx, mut xy, mut yy) = (0u64, 0u64, 0u64);
        for a in 0..d {
            for b in 0..d {
                let c = self.c[a][b];
                if c == 0 {
                    continue;
                }
                if a > 1 {
                    let k = r.elem((a * (a - 1)) as u64);
                    xx = r.add(xx, r.mul(r.mul(c, k), r.mul(px[a - 2], py[b])));
                }
                if a > 0 && b > 0 {
                    let k = r.elem((a * b) as u64);
                    xy = r.add(xy, r.mul(r.mul(c, k), r.mul(px[a - 1], py[b - 1])));
                }
                if b > 1 {
                    let k = r.elem((b * (b - 1)) as u64);
                    yy = r.add(yy, r.mul(r.mul(c, k), r.mul(px[a], py[b - 2])));
                }
            }
        }
        (xx, xy, yy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ModularPolynomialTable::parse(""),
            Err(Error::ParseError { .. })
        ));
        assert!(matches!(
            ModularPolynomialTable::parse("[1,0] 5\n[1 0] 3\n"),
            Err(Error::ParseError { line: 2, .. })
        ));
        assert_eq!(
            ModularPolynomialTable::parse("[3,0] 1\n[1,0] 5\n[0,1] 6\n"),
            Err(Error::ConflictError(3))
        );
    }

    #[test]
    fn symmetric_completion() {
        let t = ModularPolynomialTable::parse("# Phi_2\n[3,0] 1\n[1,2] -1\n").unwrap();
        assert_eq!(t.level(), 2);
        assert_eq!(t.coefficient(2, 1), Integer::from(-1));
        assert_eq!(t.coefficient(1, 2), Integer::from(-1));
        assert_eq!(t.coefficient(0, 3), Integer::from(1));
        let again = ModularPolynomialTable::parse(&t.to_text()).unwrap();
        assert_eq!(again, t);
    }
}
