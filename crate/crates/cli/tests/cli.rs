use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn tgii(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tgii"))
        .arg("--dir")
        .arg(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let o = tgii(dir, args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

fn encoding(dir: &Path, name: &str, l: u64, js: &[u64]) -> String {
    let list: Vec<String> = js.iter().map(|j| format!("\"{j}\"")).collect();
    let doc = format!(
        "{{\"degrees\": [{l}], \"demo_only\": true, \"format\": \"tgii/1\", \"kind\": \"encoding\", \"lists\": [[{}]]}}\n",
        list.join(", ")
    );
    let p = dir.join(name);
    fs::write(&p, doc).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn demo_toy() {
    let dir = tempfile::tempdir().unwrap();
    let a = ok(dir.path(), &["demo", "toy"]);
    assert!(a.contains("N  = 14359"));
    assert!(a.contains("j0 = 12631"));
    assert!(a.contains("12631 7601 1766 4096 7919 2711 1897"));
    assert!(a.contains("agree mod 83 and mod 173: yes"));
    assert!(a.contains("single root 4096"));
    assert_eq!(a, ok(dir.path(), &["demo", "toy"]));
    let j = ok(dir.path(), &["--json", "demo", "toy"]);
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    assert_eq!(v["extraction"], "4096");
}

#[test]
fn toy_workspace() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(d, &["gen", "--preset", "toy"]);
    assert!(out.contains("N  = 14359"));
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let mode = fs::metadata(d.join("trapdoor.json")).unwrap().permissions().mode();
        assert_eq!(mode & 0o077, 0);
    }
    assert!(ok(d, &["act", "--class", "3,1"]).contains("= 7601"));
    let enc = d.join("x.json");
    ok(d, &["encode", "--class", "3,1", "--primes", "3", "--minimal", "--out", enc.to_str().unwrap()]);

    // public commands run without the trapdoor
    fs::remove_file(d.join("trapdoor.json")).unwrap();
    assert_eq!(ok(d, &["extract", enc.to_str().unwrap()]).trim(), "7601");
    let o = tgii(d, &["act", "--class", "3,1"]);
    assert_eq!(o.status.code(), Some(2));

    let a = encoding(d, "a.json", 3, &[7601]);
    let b = encoding(d, "b.json", 7, &[1766]);
    let c = encoding(d, "c.json", 5, &[4096]);
    assert_eq!(ok(d, &["extract", &a, &b]).trim(), "4096");

    let shared = encoding(d, "s.json", 3, &[1897]);
    let o = tgii(d, &["extract", &a, &shared]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("⊥: shared degree"));
    let o = tgii(d, &["compose", &a, &shared]);
    assert_eq!(o.status.code(), Some(3));

    let out = ok(d, &["attack", "parallelogram", &a, &b, &c]);
    assert!(out.contains("b^-1 * j0 = 2711"), "{out}");
    let o = tgii(d, &["attack", "parallelogram", &a, &a, &c]);
    assert_eq!(o.status.code(), Some(5));

    let out = ok(d, &["attack", "hilbert", "--d", "-251", "--l", "3", "--j0", "12631", "--j1", "7601"]);
    assert!(out.contains("1897"), "{out}");

    let o = tgii(d, &["attack", "factor", "--j", "7601,11585"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("FACTOR FOUND: 83"));
    let o = tgii(d, &["attack", "factor", "--j", "7601"]);
    assert_eq!(o.status.code(), Some(3));

    let out = ok(d, &["attack", "disc-search", "--constraint", "3:1,5:1,7:1", "--bound", "300"]);
    assert!(out.contains("-251"));
}

#[test]
fn hilbert_without_workspace() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["attack", "hilbert", "--d", "-251", "--l", "3", "--j0", "12631", "--j1", "7601", "--n", "14359"];
    assert!(ok(dir.path(), &args).starts_with("j_-1 = 1897"));
    let o = tgii(dir.path(), &args[..args.len() - 2]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn volcano_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = ok(d, &["volcano", "crater", "--p", "83", "--l", "3", "--j", "15"]);
    assert!(out.contains("length 7"));
    let dump = ok(d, &["volcano", "--jobs", "2", "dump", "--p", "83", "--l", "3"]);
    assert!(dump.lines().any(|l| l == "15 48 1" || l == "15 71 1"));
    assert!(ok(d, &["volcano", "build", "--p", "83", "--l", "3"]).contains("83 vertices"));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(tgii(d, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(tgii(d, &["gen", "--preset", "nope"]).status.code(), Some(2));
    assert_eq!(tgii(d, &["extract", "missing.json"]).status.code(), Some(2));
}

#[test]
fn applications() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let p = |n: &str| d.join(n).to_str().unwrap().to_string();
    ok(d, &["gen", "--preset", "app"]);

    ok(d, &["dts", "gen", "--nodes", "3"]);
    for i in 0..3 {
        ok(d, &["dts", "cert", "--node", &i.to_string(), "--seed", &i.to_string()]);
    }
    ok(d, &["dts", "sign", "--from", "0", "--to", "1", "--seed", "5"]);
    ok(d, &["dts", "sign", "--from", "1", "--to", "2", "--seed", "6"]);
    assert_eq!(tgii(d, &["dts", "sign", "--from", "2", "--to", "1"]).status.code(), Some(3));

    fs::rename(d.join("trapdoor.json"), d.join("held.json")).unwrap();
    ok(d, &["dts", "compose", &p("dts_sig_0_1.json"), &p("dts_sig_1_2.json")]);
    assert!(ok(d, &["dts", "verify", &p("dts_sig_0_2.json")]).contains("accept 0 -> 2"));
    let o = tgii(d, &["dts", "compose", &p("dts_sig_1_2.json"), &p("dts_sig_0_1.json")]);
    assert_eq!(o.status.code(), Some(3));

    let tampered = fs::read_to_string(d.join("dts_sig_0_2.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&tampered).unwrap();
    let first = v["enc"]["lists"][0][0].as_str().unwrap().to_string();
    let bumped = (first.parse::<u64>().unwrap() + 1).to_string();
    fs::write(d.join("bad.json"), tampered.replacen(&format!("\"{first}\""), &format!("\"{bumped}\""), 1)).unwrap();
    assert_eq!(tgii(d, &["dts", "verify", &p("bad.json")]).status.code(), Some(3));

    ok(d, &["dts", "compress", &p("dts_sig_0_2.json"), "--out", &p("c.json")]);
    let j = ok(d, &["--json", "dts", "verify", "--compressed", &p("c.json")]);
    let v: serde_json::Value = serde_json::from_str(&j).unwrap();
    assert_eq!(v["endpoint_ok"], true);
    assert_eq!(v["proof_checked"], false);
    fs::rename(d.join("held.json"), d.join("trapdoor.json")).unwrap();

    ok(d, &["be", "setup"]);
    for u in 0..3 {
        ok(d, &["be", "adduser", "--user", &u.to_string(), "--seed", &(10 + u).to_string()]);
    }
    ok(d, &["be", "encrypt", "--to", "0,2", "--message", "for zero and two", "--out", &p("ct.json")]);
    fs::rename(d.join("trapdoor.json"), d.join("held.json")).unwrap();
    for u in [0, 2] {
        let out = ok(d, &["be", "decrypt", "--key", &p(&format!("be_key_{u}.json")), &p("ct.json")]);
        assert_eq!(out.trim(), "for zero and two");
    }
    let o = tgii(d, &["be", "decrypt", "--key", &p("be_key_1.json"), &p("ct.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("key mismatch"));
}
