//! `tgii`: generation, encodings, volcanoes, attacks and the two
//! applications from the command line.

mod apps;
mod commands;
mod demo;
mod error;
mod workspace;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use error::{CliError, CliResult};
use workspace::Workspace;

#[derive(Parser)]
#[command(name = "tgii", version, about = "Desk-scale trapdoor group with infeasible inversion from isogeny volcanoes")]
pub struct Cli {
    /// Workspace directory holding pp.json, trapdoor.json and registry.json.
    #[arg(long, global = true, default_value = ".")]
    pub dir: PathBuf,
    /// Seed for every random choice the command makes.
    /// Defaults to 0; `gen --preset` keeps the preset's own seed unless given.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand)]
pub enum Cmd {
    /// Generate public parameters, trapdoor and prime registry.
    Gen(GenArgs),
    /// Encode an ideal class (needs the trapdoor).
    Encode {
        /// Class given as `a,b` of a form of discriminant D.
        #[arg(long)]
        class: String,
        /// Explicit generation set instead of fresh registry primes.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Fresh primes per encoding.
        #[arg(long, default_value_t = 3)]
        w: usize,
        /// Reduced discrete log instead of a Gaussian sample.
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two encodings.
    Compose {
        a: PathBuf,
        b: PathBuf,
        /// Ladder documents for shared primes.
        #[arg(long)]
        ladder: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical j-invariant of the composition of the given encodings.
    Extract {
        #[arg(required = true)]
        encodings: Vec<PathBuf>,
    },
    /// Apply an ideal class to a crater j-invariant (needs the trapdoor).
    Act {
        #[arg(long)]
        class: String,
        /// Defaults to j0.
        #[arg(long)]
        j: Option<u64>,
    },
    /// Publish a ladder for the prime form of norm l (needs the trapdoor).
    Ladder {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        k: usize,
        /// Use the inverse of the prime form.
        #[arg(long)]
        inverse: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isogeny graphs over F_p.
    Volcano {
        /// Worker threads for graph construction.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(subcommand)]
        cmd: VolcanoCmd,
    },
    /// Attacks that use public data only.
    Attack {
        #[command(subcommand)]
        cmd: AttackCmd,
    },
    /// Directed transitive signatures.
    Dts {
        #[command(subcommand)]
        cmd: DtsCmd,
    },
    /// Broadcast encryption.
    Be {
        #[command(subcommand)]
        cmd: BeCmd,
    },
    /// Fixed demonstrations.
    Demo {
        #[command(subcommand)]
        cmd: DemoCmd,
    },
}

#[derive(Args)]
pub struct GenArgs {
    /// Named configuration: toy, app or conductor3. Other flags override it.
    #[arg(long)]
    pub preset: Option<String>,
    /// Fundamental discriminant D0.
    #[arg(long, allow_hyphen_values = true)]
    pub d0: Option<i64>,
    /// Prime factors of the conductor.
    #[arg(long, value_delimiter = ',')]
    pub conductor: Option<Vec<u64>>,
    /// Upper end of the prime search range.
    #[arg(long)]
    pub p_bound: Option<u64>,
    /// Lower end of the prime search range.
    #[arg(long)]
    pub p_min: Option<u64>,
    /// Pinned primes `p,q`.
    #[arg(long, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,
    /// Pinned j0.
    #[arg(long)]
    pub j0: Option<u64>,
}

#[derive(Subcommand)]
pub enum VolcanoCmd {
    /// Build G_l(F_p) and summarize it.
    Build {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
    },
    /// `j1 j2 multiplicity` lines of G_l(F_p).
    Dump {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
    },
    /// The crater cycle through j.
    Crater {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        j: u64,
    },
}

#[derive(Subcommand)]
pub enum AttackCmd {
    /// Recover b^{-1} * j0 from encodings with a * b = c.
    Parallelogram {
        a: PathBuf,
        b: PathBuf,
        c: PathBuf,
        /// Write the transcript here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invert one crater step with the Hilbert class polynomial of D.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, value_delimiter = ',')]
        conductor: Vec<u64>,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        j0: u64,
        #[arg(long)]
        j1: u64,
        /// Modulus; read from pp.json when absent.
        #[arg(long)]
        n: Option<u64>,
    },
    /// Factor N from l-neighbors of one j that disagree mod p and mod q.
    Factor {
        #[arg(long, value_delimiter = ',', required = true)]
        j: Vec<u64>,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Candidate discriminants consistent with splitting constraints.
    DiscSearch {
        /// `l:s` pairs with s the Kronecker symbol (D|l).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        constraint: Vec<String>,
        /// Largest |D|; defaults to sqrt(N).
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
    },
}

#[derive(Subcommand)]
pub enum DtsCmd {
    /// Master keys and generation sets for a DAG on nodes 0..n.
    Gen {
        #[arg(long)]
        nodes: usize,
    },
    /// PK(i) and its certificate, written to dts_cert_<i>.json.
    Cert {
        #[arg(long)]
        node: usize,
    },
    /// Signature on the edge from -> to.
    Sign {
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Signature on i -> k from signatures on i -> j and j -> k.
    Compose {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a signature, or a compressed one with --compressed.
    Verify {
        sig: PathBuf,
        #[arg(long)]
        compressed: bool,
    },
    /// Replace the encoding by a j-invariant and explicit isogenies.
    Compress {
        sig: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum BeCmd {
    Setup,
    /// Add user u; the key goes to be_key_<u>.json.
    Adduser {
        #[arg(long)]
        user: usize,
    },
    Encrypt {
        /// Recipients.
        #[arg(long, value_delimiter = ',')]
        to: Vec<usize>,
        #[arg(long)]
        message: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Decrypt {
        #[arg(long)]
        key: PathBuf,
        ct: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum DemoCmd {
    /// The pinned toy instance: parameters, craters and one extraction.
    Toy,
}

/// Human-readable text plus the same result as JSON.
pub struct Out {
    pub text: String,
    pub json: Value,
}

impl Out {
    pub fn new(text: impl Into<String>, json: Value) -> Self {
        Out { text: text.into(), json }
    }
}

fn run(cli: &Cli) -> CliResult<Out> {
    let ws = Workspace::new(cli.dir.clone());
    let seed = cli.seed.unwrap_or(0);
    match &cli.cmd {
        Cmd::Gen(args) => commands::gen(&ws, args, cli.seed),
        Cmd::Encode { class, primes, w, minimal, out } => {
            commands::encode(&ws, class, primes.as_deref(), *w, *minimal, out.as_deref(), seed)
        }
        Cmd::Compose { a, b, ladder, out } => commands::compose(&ws, a, b, ladder, out.as_deref()),
        Cmd::Extract { encodings } => commands::extract(&ws, encodings),
        Cmd::Act { class, j } => commands::act(&ws, class, *j),
        Cmd::Ladder { l, k, inverse, out } => commands::ladder(&ws, *l, *k, *inverse, out.as_deref()),
        Cmd::Volcano { jobs, cmd } => {
            if let Some(n) = jobs {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build_global()
                    .map_err(|e| CliError::usage(e.to_string()))?;
            }
            commands::volcano(cmd)
        }
        Cmd::Attack { cmd } => commands::attack(&ws, cmd),
        Cmd::Dts { cmd } => apps::dts(&ws, cmd, seed),
        Cmd::Be { cmd } => apps::be(&ws, cmd, seed),
        Cmd::Demo { cmd: DemoCmd::Toy } => demo::toy(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    // a closed pipe downstream is not our failure
    let mut emit = |s: String| {
        let _ = stdout.write_all(s.as_bytes());
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                emit(serde_json::to_string_pretty(&out.json).expect("JSON output") + "\n");
            } else if out.text.ends_with('\n') {
                emit(out.text);
            } else {
                emit(out.text + "\n");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if cli.json {
                let v = serde_json::json!({ "error": e.tag(), "message": e.to_string() });
                emit(serde_json::to_string_pretty(&v).expect("JSON output") + "\n");
            }
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
