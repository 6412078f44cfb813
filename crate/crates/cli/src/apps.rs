use serde_json::json;

use tgii_core::apps::*;
use tgii_core::tgii::SampleOpts;

use crate::commands::{emit, rng};
use crate::error::{CliError, CliResult};
use crate::workspace::{read_doc, Workspace};
use crate::{BeCmd, DtsCmd, Out};

const DTS_PUBLIC: &str = "dts_public.json";
const DTS_MASTER: &str = "dts_master.json";
const BE_PUBLIC: &str = "be_public.json";
const BE_MASTER: &str = "be_master.json";

fn cert_name(i: usize) -> String {
    format!("dts_cert_{i}.json")
}

fn key_name(u: usize) -> String {
    format!("be_key_{u}.json")
}

fn sig_name(i: usize, k: usize) -> String {
    format!("dts_sig_{i}_{k}.json")
}

fn written(ws: &Workspace, name: &str, what: String) -> Out {
    Out::new(
        format!("{what}\nwrote {}", ws.path(name).display()),
        json!({ "wrote": ws.path(name), "summary": what }),
    )
}

pub fn dts(ws: &Workspace, cmd: &DtsCmd, seed: u64) -> CliResult<Out> {
    let opts = SampleOpts::default();
    let mut rng = rng(seed);
    match cmd {
        DtsCmd::Gen { nodes } => {
            let pp = ws.pp()?;
            let td = ws.trapdoor()?;
            let mut reg = ws.registry()?;
            let (public, master) = dts_gen(&pp, &td, &mut reg, *nodes, &mut rng)?;
            ws.write(DTS_PUBLIC, "dts_public", &public, false)?;
            ws.write(DTS_MASTER, "dts_master", &master, true)?;
            ws.save_registry(&reg)?;
            Ok(written(ws, DTS_PUBLIC, format!("DAG on nodes 0..{nodes}; master key in {DTS_MASTER}")))
        }
        DtsCmd::Cert { node } => {
            let pp = ws.pp()?;
            let td = ws.trapdoor()?;
            let mut reg = ws.registry()?;
            let master: DtsMaster = ws.read(DTS_MASTER, "dts_master")?;
            let cert = dts_cert(&pp, &td, &master, &mut reg, *node, &opts, &mut rng)?;
            ws.save_registry(&reg)?;
            let name = cert_name(*node);
            ws.write(&name, "dts_cert", &cert, false)?;
            Ok(written(ws, &name, format!("PK({node}) over degrees {:?}", cert.pk.degrees)))
        }
        DtsCmd::Sign { from, to, out } => {
            let pp = ws.pp()?;
            let td = ws.trapdoor()?;
            let mut reg = ws.registry()?;
            let master: DtsMaster = ws.read(DTS_MASTER, "dts_master")?;
            let sig = dts_sign(&pp, &td, &master, &mut reg, *from, *to, &opts, &mut rng)?;
            ws.save_registry(&reg)?;
            let path = out.clone().unwrap_or_else(|| ws.path(&sig_name(*from, *to)));
            emit("dts_signature", &sig, Some(&path), &format!("signature on {from} -> {to}"))
        }
        DtsCmd::Compose { a, b, out } => {
            let public: DtsPublic = ws.read(DTS_PUBLIC, "dts_public")?;
            let a: DtsSignature = read_doc(a, "dts_signature")?;
            let b: DtsSignature = read_doc(b, "dts_signature")?;
            let sig = dts_comp(&public.pp, &a, &b)?;
            let path = out.clone().unwrap_or_else(|| ws.path(&sig_name(sig.from, sig.to)));
            emit("dts_signature", &sig, Some(&path), &format!("signature on {} -> {}", sig.from, sig.to))
        }
        DtsCmd::Verify { sig, compressed } => {
            let public: DtsPublic = ws.read(DTS_PUBLIC, "dts_public")?;
            let certs = |i: usize, k: usize| -> CliResult<(NodeCert, NodeCert)> {
                Ok((ws.read(&cert_name(i), "dts_cert")?, ws.read(&cert_name(k), "dts_cert")?))
            };
            if *compressed {
                let s: CompressedSignature = read_doc(sig, "dts_compressed")?;
                let (ci, ck) = certs(s.from, s.to)?;
                let v = dts_ver_compressed(&public.pp, &public.vk, &s, &ci, &ck)?;
                Ok(Out::new(
                    format!("accept {} -> {} (endpoint only)\nwarning: {}", s.from, s.to, v.warning),
                    json!({ "accept": true, "endpoint_ok": v.endpoint_ok, "proof_checked": v.proof_checked, "warning": v.warning }),
                ))
            } else {
                let s: DtsSignature = read_doc(sig, "dts_signature")?;
                let (ci, ck) = certs(s.from, s.to)?;
                dts_ver(&public.pp, &public.vk, &s, &ci, &ck)?;
                Ok(Out::new(
                    format!("accept {} -> {}", s.from, s.to),
                    json!({ "accept": true, "from": s.from, "to": s.to }),
                ))
            }
        }
        DtsCmd::Compress { sig, out } => {
            let public: DtsPublic = ws.read(DTS_PUBLIC, "dts_public")?;
            let s: DtsSignature = read_doc(sig, "dts_signature")?;
            let ci: NodeCert = ws.read(&cert_name(s.from), "dts_cert")?;
            let c = dts_compress(&public.pp, &s, &ci)?;
            let summary = format!("j = {} with {} isogenies; {}", c.j, c.isogenies.len(), c.proof.note);
            emit("dts_compressed", &c, out.as_deref(), &summary)
        }
    }
}

pub fn be(ws: &Workspace, cmd: &BeCmd, seed: u64) -> CliResult<Out> {
    let opts = SampleOpts::default();
    let mut rng = rng(seed);
    match cmd {
        BeCmd::Setup => {
            let pp = ws.pp()?;
            let td = ws.trapdoor()?;
            let mut reg = ws.registry()?;
            let (public, master) = be_setup(&pp, &td, &mut reg, &mut rng)?;
            ws.write(BE_PUBLIC, "be_public", &public, false)?;
            ws.write(BE_MASTER, "be_master", &master, true)?;
            ws.save_registry(&reg)?;
            Ok(written(ws, BE_PUBLIC, format!("broadcast setup; master key in {BE_MASTER}")))
        }
        BeCmd::Adduser { user } => {
            let td = ws.trapdoor()?;
            let mut reg = ws.registry()?;
            let mut public: BePublic = ws.read(BE_PUBLIC, "be_public")?;
            let mut master: BeMaster = ws.read(BE_MASTER, "be_master")?;
            let key = be_gen(&mut public, &td, &mut master, &mut reg, *user, &opts, &mut rng)?;
            ws.write(BE_PUBLIC, "be_public", &public, false)?;
            ws.write(BE_MASTER, "be_master", &master, true)?;
            ws.save_registry(&reg)?;
            let name = key_name(*user);
            ws.write(&name, "be_user_key", &key, true)?;
            Ok(written(ws, &name, format!("user {user} added")))
        }
        BeCmd::Encrypt { to, message, out } => {
            let td = ws.trapdoor()?;
            let public: BePublic = ws.read(BE_PUBLIC, "be_public")?;
            let master: BeMaster = ws.read(BE_MASTER, "be_master")?;
            let ct = be_enc(&public, &td, &master, to, message.as_bytes(), &mut rng)?;
            emit("be_ciphertext", &ct, out.as_deref(), &format!("ciphertext for {:?}", ct.gamma))
        }
        BeCmd::Decrypt { key, ct } => {
            let public: BePublic = ws.read(BE_PUBLIC, "be_public")?;
            let key: BeUserKey = read_doc(key, "be_user_key")?;
            let ct: BeCiphertext = read_doc(ct, "be_ciphertext")?;
            let msg = be_dec(&public, &key, &ct)?;
            let text = String::from_utf8(msg.clone()).map_err(|_| CliError::usage("plaintext is not UTF-8"))?;
            Ok(Out::new(text.clone(), json!({ "user": key.user, "message": text })))
        }
    }
}
