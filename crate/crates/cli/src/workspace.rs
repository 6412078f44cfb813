//! The directory of JSON documents the commands read and write.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use tgii_core::tgii::{from_document, to_document, PrimeRegistry, PublicParams, Trapdoor};

use crate::error::{CliError, CliResult};

pub const PP: &str = "pp.json";
pub const TRAPDOOR: &str = "trapdoor.json";
pub const REGISTRY: &str = "registry.json";

pub struct Workspace {
    dir: PathBuf,
}

pub fn read_doc<T: DeserializeOwned>(path: &Path, kind: &str) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    from_document(kind, &text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// Writes a document; secret ones are created owner-only.
pub fn write_doc<T: Serialize>(path: &Path, kind: &str, v: &T, secret: bool) -> CliResult<()> {
    let text = to_document(kind, v)?;
    let io = |e: std::io::Error| CliError::usage(format!("cannot write {}: {e}", path.display()));
    let mut opts = fs::OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    if secret {
        use std::os::unix::fs::OpenOptionsExt;
        opts.mode(0o600);
    }
    #[cfg(not(unix))]
    let _ = secret;
    let mut f = opts.open(path).map_err(io)?;
    f.write_all(text.as_bytes()).map_err(io)
}

impl Workspace {
    pub fn new(dir: PathBuf) -> Self {
        Workspace { dir }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn read<T: DeserializeOwned>(&self, name: &str, kind: &str) -> CliResult<T> {
        let p = self.path(name);
        if !p.exists() {
            return Err(CliError::usage(format!("{} not found; run `tgii gen` first or pass --dir", p.display())));
        }
        read_doc(&p, kind)
    }

    pub fn write<T: Serialize>(&self, name: &str, kind: &str, v: &T, secret: bool) -> CliResult<()> {
        fs::create_dir_all(&self.dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", self.dir.display())))?;
        write_doc(&self.path(name), kind, v, secret)
    }

    pub fn pp(&self) -> CliResult<PublicParams> {
        self.read(PP, "public_params")
    }

    pub fn trapdoor(&self) -> CliResult<Trapdoor> {
        let mut td: Trapdoor = self.read(TRAPDOOR, "trapdoor")?;
        td.prepare()?;
        Ok(td)
    }

    pub fn registry(&self) -> CliResult<PrimeRegistry> {
        self.read(REGISTRY, "registry")
    }

    pub fn save_registry(&self, reg: &PrimeRegistry) -> CliResult<()> {
        self.write(REGISTRY, "registry", reg, false)
    }
}
