//! Generates the classical modular polynomial tables shipped with tgii-core.
//!
//! `integer` writes exact tables (CRT over 61-bit primes until the symmetric
//! reconstruction is stable); `modular` writes tables reduced mod a fixed
//! modulus whose prime factors all exceed l + 1.

mod phi;
mod series;
mod square;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use tgii_core::arith::int::{crt_symmetric, is_prime_u64};

use series::Fm;

#[derive(Parser)]
#[command(about = "Classical modular polynomial table generator")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact integer tables for prime levels and squares of primes.
    Integer {
        #[arg(long, value_delimiter = ',')]
        levels: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tables reduced modulo a fixed modulus.
    Modular {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_delimiter = ',')]
        primes: Vec<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn crt_primes() -> impl Iterator<Item = u64> {
    let mut p = (1u64 << 61) - 1;
    std::iter::from_fn(move || {
        while !is_prime_u64(p) {
            p -= 2;
        }
        let r = p;
        p -= 2;
        Some(r)
    })
}

fn prime_root(m: usize) -> Option<(usize, bool)> {
    if is_prime_u64(m as u64) {
        return Some((m, false));
    }
    let r = (m as f64).sqrt().round() as usize;
    if r * r == m && is_prime_u64(r as u64) {
        return Some((r, true));
    }
    None
}

fn table_mod(m: usize, f: Fm) -> Result<Vec<Vec<u64>>> {
    match prime_root(m) {
        Some((l, false)) => Ok(phi::phi_prime_mod(l, f)),
        Some((l, true)) => {
            let base = phi::phi_prime_mod(l, f);
            Ok(square::phi_square_mod(l, &base, f))
        }
        None => bail!("level {m} is neither a prime nor a prime square"),
    }
}

fn integer_table(m: usize) -> Result<Vec<Vec<BigInt>>> {
    let mut moduli: Vec<BigInt> = vec![];
    let mut residues: Vec<Vec<Vec<u64>>> = vec![];
    let mut last: Option<Vec<Vec<BigInt>>> = None;
    let mut stable = 0;
    for p in crt_primes() {
        let f = Fm { m: p };
        residues.push(table_mod(m, f)?);
        moduli.push(BigInt::from(p));
        let n = residues[0].len();
        let mut cur = vec![vec![BigInt::zero(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let rs: Vec<BigInt> = residues.iter().map(|t| BigInt::from(t[a][b])).collect();
                cur[a][b] = crt_symmetric(&moduli, &rs)?;
            }
        }
        if last.as_ref() == Some(&cur) {
            stable += 1;
            if stable >= 2 {
                eprintln!("level {m}: stable after {} primes", moduli.len());
                return Ok(cur);
            }
        } else {
            stable = 0;
        }
        last = Some(cur);
    }
    unreachable!()
}

fn write_table<T: std::fmt::Display + PartialEq + Default>(
    path: &Path,
    header: &[String],
    c: &[Vec<T>],
) -> Result<()> {
    let n = c.len();
    for a in 0..n {
        for b in 0..n {
            if c[a][b] != c[b][a] {
                bail!("table is not symmetric at [{a},{b}]");
            }
        }
    }
    let mut out = fs::File::create(path)?;
    for h in header {
        writeln!(out, "# {h}")?;
    }
    for (i, row) in c.iter().enumerate() {
        for (j, v) in row.iter().enumerate().take(i + 1) {
            if *v != T::default() {
                writeln!(out, "[{i},{j}] {v}")?;
            }
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Integer { levels, out } => {
            fs::create_dir_all(&out)?;
            levels.par_iter().try_for_each(|&m| -> Result<()> {
                let t = integer_table(m)?;
                let header = vec![
                    format!("classical modular polynomial Phi_{m}"),
                    "[i,j] c means c*X^i*Y^j + c*X^j*Y^i for i > j".to_string(),
                ];
                write_table(&out.join(format!("phi_{m}.txt")), &header, &t)
            })?;
        }
        Cmd::Modular { modulus, primes, out } => {
            fs::create_dir_all(&out)?;
            for &l in &primes {
                if !is_prime_u64(l as u64) {
                    bail!("{l} is not prime");
                }
            }
            primes.par_iter().try_for_each(|&l| -> Result<()> {
                let t = phi::phi_prime_mod(l, Fm { m: modulus });
                let header = vec![
                    format!("classical modular polynomial Phi_{l}"),
                    format!("modulus {modulus}"),
                    "[i,j] c means c*X^i*Y^j + c*X^j*Y^i for i > j".to_string(),
                ];
                eprintln!("Phi_{l} mod {modulus} done");
                write_table(&out.join(format!("phi_{l}.txt")), &header, &t)
            })?;
        }
    }
    Ok(())
}
