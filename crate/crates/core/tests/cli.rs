//! Drives the `didself` binary end to end against a directory store and a
//! zone file in a temporary workspace.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use didself::prelude::*;

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn path(&self, rel: &str) -> PathBuf {
        self.dir.path().join(rel)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_didself"))
            .current_dir(self.dir.path())
            .env_remove("DIDSELF_CONFIG")
            .env("DIDSELF_STORE", "dir:store")
            .env("DIDSELF_RESOLVER", "zonefile:zone.txt")
            .args(args)
            .output()
            .unwrap()
    }

    fn ok(&self, args: &[&str]) -> String {
        let out = self.run(args);
        assert!(
            out.status.success(),
            "{args:?} failed: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        String::from_utf8(out.stdout).unwrap()
    }

    fn write(&self, rel: &str, bytes: &[u8]) -> PathBuf {
        let p = self.path(rel);
        fs::write(&p, bytes).unwrap();
        p
    }

    fn did(&self, keys: &str) -> String {
        fs::read_to_string(self.path(keys).join("did.txt")).unwrap().trim().to_owned()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no {key} line in {stdout}"))
}

const T0: &str = "2021-06-01T00:00:00Z";
const T1: &str = "2021-06-01T01:00:00Z";

#[test]
fn keygen_is_random_unless_seeded() {
    let ws = Workspace::new();
    let a = ws.ok(&["keygen", "--out", "a"]);
    let b = ws.ok(&["keygen", "--out", "b"]);
    assert_ne!(a, b);
    parse_did(a.trim()).unwrap();
    assert_eq!(a.trim(), ws.did("a"));

    let s1 = ws.ok(&["keygen", "--out", "s1", "--seed", "42"]);
    let s2 = ws.ok(&["keygen", "--out", "s2", "--seed", "42"]);
    assert_eq!(s1, s2);

    let again = ws.run(&["keygen", "--out", "s1", "--seed", "7"]);
    assert_eq!(code(&again), 4, "overwrite needs --force");
    ws.ok(&["keygen", "--out", "s1", "--seed", "7", "--force"]);
}

#[test]
fn create_verify_publish_fetch() {
    let ws = Workspace::new();
    ws.ok(&["keygen", "--out", "keys", "--seed", "1"]);
    let content: Vec<u8> = (0..5000u32).map(|i| (i * 7 % 251) as u8).collect();
    ws.write("item.bin", &content);

    let created = ws.ok(&["create", "item.bin", "--keys", "keys", "-o", "item.bundle", "--created", T0]);
    let verified = ws.ok(&["verify", "item.bundle", "--now", T1]);
    assert!(verified.starts_with("Accept did:self:"));

    let published = ws.ok(&["publish", "item.bundle", "--domain", "example.org", "--now", T1]);
    assert_eq!(field(&created, "cid"), field(&published, "cid"));
    let did = ws.did("keys");
    let label = did.strip_prefix("did:self:").unwrap().to_lowercase();
    assert_eq!(field(&published, "name"), format!("_dnslink.{label}.example.org"));

    let zone = fs::read_to_string(ws.path("zone.txt")).unwrap();
    assert_eq!(
        zone,
        format!("_dnslink.{label}.example.org TXT \"dnslink=/ipfs/{}\"\n", field(&published, "cid"))
    );

    let out = ws.run(&["fetch", "--did", &did, "--domain", "example.org", "--now", T1]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(out.stdout, content);

    // Replace semantics: a new version moves the name to a new CID.
    ws.write("item.bin", b"second version");
    ws.ok(&["create", "item.bin", "--keys", "keys", "-o", "item2.bundle", "--created", T1]);
    let second = ws.ok(&["publish", "item2.bundle", "--domain", "example.org", "--now", T1]);
    assert_ne!(field(&second, "cid"), field(&published, "cid"));
    let out = ws.run(&["fetch", "--did", &did, "--domain", "example.org", "--now", T1]);
    assert_eq!(out.stdout, b"second version");
}

#[test]
fn expired_bundle_is_rejected() {
    let ws = Workspace::new();
    ws.ok(&["keygen", "--out", "keys", "--seed", "2"]);
    ws.write("item.txt", b"short-lived");
    ws.ok(&[
        "create", "item.txt", "--keys", "keys", "-o", "b", "--created", T0, "--expires", "2021-06-01T00:30:00Z",
    ]);
    let out = ws.run(&["verify", "b", "--now", T1]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("Expired"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let bad = ws.run(&["create", "item.txt", "--keys", "keys", "-o", "c", "--created", T1, "--expires", T0]);
    assert_eq!(code(&bad), 4);
    assert!(stderr(&bad).contains("BadInterval"));
}

fn published_workspace(seed: &str) -> (Workspace, String, String) {
    let ws = Workspace::new();
    ws.ok(&["keygen", "--out", "keys", "--seed", seed]);
    ws.write("item.txt", b"genuine content");
    ws.ok(&["create", "item.txt", "--keys", "keys", "-o", "b", "--created", T0]);
    let published = ws.ok(&["publish", "b", "--domain", "example.org", "--now", T0]);
    let did = ws.did("keys");
    (ws, did, field(&published, "cid").to_owned())
}

#[test]
fn tampered_store_file_fails_integrity() {
    let (ws, did, cid) = published_workspace("3");
    let blob = ws.path("store").join(&cid);
    let mut raw = fs::read(&blob).unwrap();
    *raw.last_mut().unwrap() ^= 1;
    fs::write(&blob, raw).unwrap();

    let out = ws.run(&["fetch", "--did", &did, "--domain", "example.org", "--now", T1]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("IntegrityMismatch"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn tampered_bundle_behind_rewritten_zone_fails_content_digest() {
    let (ws, did, cid) = published_workspace("4");
    // Store a content-modified copy under its own, honest CID and point the
    // zone at it, as a party controlling the zone could.
    let mut raw = fs::read(ws.path("store").join(&cid)).unwrap();
    raw.extend_from_slice(b" plus an attacker's suffix");
    let store = didself::store::DirStore::open(ws.path("store")).unwrap();
    let forged = store.add(&raw).unwrap();
    let zone = fs::read_to_string(ws.path("zone.txt")).unwrap().replace(&cid, &forged.to_string());
    fs::write(ws.path("zone.txt"), zone).unwrap();

    let out = ws.run(&["fetch", "--did", &did, "--domain", "example.org", "--now", T1]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("ContentDigestMismatch"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
}

#[test]
fn stale_item_and_missing_name() {
    let (ws, did, _) = published_workspace("5");
    let out = ws.run(&["fetch", "--did", &did, "--domain", "example.org", "--now", T1, "--max-age", "600"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("Stale"), "{}", stderr(&out));
    assert!(out.stdout.is_empty());

    let out = ws.run(&["fetch", "--did", &did, "--domain", "other.org", "--now", T1]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("NotFound"), "{}", stderr(&out));
}

#[test]
fn signed_records_enforce_record_freshness() {
    let ws = Workspace::new();
    ws.ok(&["keygen", "--out", "keys", "--seed", "6"]);
    ws.write("item.txt", b"fresh");
    ws.ok(&["create", "item.txt", "--keys", "keys", "-o", "b", "--created", T0]);
    let published = ws.ok(&["publish", "b", "--domain", "example.org", "--keys", "keys", "--now", T0]);
    assert!(field(&published, "txt").contains(" ts=1622505600 sig="));
    let did = ws.did("keys");
    let fetch = |now: &str| ws.run(&["fetch", "--did", &did, "--domain", "example.org", "--now", now, "--max-record-age", "3600"]);
    assert_eq!(fetch("2021-06-01T00:59:00Z").stdout, b"fresh");
    let stale = fetch("2021-06-01T01:00:01Z");
    assert_eq!(code(&stale), 2);
    assert!(stderr(&stale).contains("Stale"));
}

#[test]
fn delegation_through_files() {
    let ws = Workspace::new();
    ws.ok(&["keygen", "--out", "owner", "--seed", "10"]);
    ws.ok(&["keygen", "--out", "host", "--seed", "11"]);
    let out = ws.run(&[
        "delegate", "--keys", "owner", "--host-pub", "host/assertion.pub", "--created", "now", "--expires",
        "2099-01-01T00:00:00Z", "-o", "grant.txt",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let grant_text = fs::read_to_string(ws.path("grant.txt")).unwrap();
    let grant = DelegationGrant::parse(&grant_text).unwrap();
    assert_eq!(grant.did().as_str(), ws.did("owner"));
    assert_eq!(grant.expires().unwrap().to_string(), "2099-01-01T00:00:00Z");
    // The grant carries no secret material from either side.
    for file in ["owner/did.key", "owner/assertion.key", "host/did.key", "host/assertion.key"] {
        let secret = fs::read_to_string(ws.path(file)).unwrap();
        assert!(!grant_text.contains(secret.lines().nth(1).unwrap()));
    }

    // The host wraps content under the owner's DID with only the grant and its own key.
    let host_only = ws.path("hostkeys");
    fs::create_dir(&host_only).unwrap();
    copy_private(&ws.path("host/assertion.key"), &host_only.join("assertion.key"));
    ws.write("item.txt", b"hosted");
    ws.ok(&["create", "item.txt", "--keys", "hostkeys", "--grant", "grant.txt", "-o", "b"]);
    ws.ok(&["publish", "b", "--domain", "example.org", "--keys", "hostkeys"]);
    let out = ws.run(&["fetch", "--did", &ws.did("owner"), "--domain", "example.org", "--max-record-age", "600"]);
    assert_eq!(out.stdout, b"hosted", "{}", stderr(&out));

    // A grant for someone else's key cannot be used.
    let wrong = ws.run(&["create", "item.txt", "--keys", "owner", "--grant", "grant.txt", "-o", "c"]);
    assert_eq!(code(&wrong), 4);
    assert!(stderr(&wrong).contains("KeyMismatch"));

    let past = ws.run(&[
        "delegate", "--keys", "owner", "--host-pub", "host/assertion.pub", "--created", T1, "--expires", T0, "-o", "g2",
    ]);
    assert_eq!(code(&past), 4);
    assert!(stderr(&past).contains("BadInterval"));
}

fn copy_private(from: &Path, to: &Path) {
    fs::copy(from, to).unwrap();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(to, fs::Permissions::from_mode(0o600)).unwrap();
    }
}

#[test]
fn scenarios_report_registered_expectations() {
    let ws = Workspace::new();
    for name in ["key-leak-only", "dns-replay-no-freshness", "dns-replay-with-freshness"] {
        let out = ws.run(&["scenario", name, "--seed", "3"]);
        assert_eq!(code(&out), 0, "{name}: {}", stderr(&out));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.lines().last().unwrap().starts_with("outcome "));
    }
    let out = ws.run(&["scenario", "dns-replay-no-freshness"]);
    assert!(String::from_utf8_lossy(&out.stdout).contains("outcome StaleAccepted"));
    let unknown = ws.run(&["scenario", "no-such-thing"]);
    assert_eq!(code(&unknown), 4);
    assert!(stderr(&unknown).contains("UnknownScenario"));
    assert!(ws.ok(&["scenario", "--list"]).contains("rotation-drill"));
}

#[test]
fn usage_and_config_errors() {
    let ws = Workspace::new();
    assert_eq!(code(&ws.run(&["fetch"])), 4);
    assert_eq!(code(&ws.run(&["--store", "s3:x", "scenario", "--list"])), 4);
    ws.write("cfg.toml", b"resolver = \"dns:127.0.0.1:1\"\n");
    let out = Command::new(env!("CARGO_BIN_EXE_didself"))
        .current_dir(ws.dir.path())
        .env_remove("DIDSELF_RESOLVER")
        .env_remove("DIDSELF_STORE")
        .args(["--config", "cfg.toml", "publish", "x", "--domain", "example.org"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 4, "publishing to live DNS is refused: {}", stderr(&out));
}

#[test]
fn config_file_supplies_backends() {
    let ws = Workspace::new();
    ws.write("cfg.toml", b"store = \"dir:cfgstore\"\nresolver = \"zonefile:cfgzone.txt\"\nkey_dir = \"k\"\n");
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_didself"))
            .current_dir(ws.dir.path())
            .env_remove("DIDSELF_STORE")
            .env_remove("DIDSELF_RESOLVER")
            .env("DIDSELF_CONFIG", "cfg.toml")
            .args(args)
            .output()
            .unwrap()
    };
    assert!(run(&["keygen", "--seed", "9"]).status.success());
    ws.write("item.txt", b"via config");
    assert!(run(&["create", "item.txt", "-o", "b"]).status.success());
    assert!(run(&["publish", "b", "--domain", "example.org"]).status.success());
    assert!(ws.path("cfgzone.txt").exists());
    let out = run(&["fetch", "--did", &ws.did("k"), "--domain", "example.org"]);
    assert_eq!(out.stdout, b"via config", "{}", stderr(&out));
}
