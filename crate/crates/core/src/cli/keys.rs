//! On-disk key files.
//!
//! Each file is two lines: a type tag, then the 32 raw key bytes in
//! unpadded base64url. Secret files are created mode 0600 inside a 0700
//! directory, and loading refuses secrets readable by other users.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::CliError;
use crate::did::KeyPair;
use crate::encoding::{b64url, b64url_decode_array};

pub const DID_SECRET_TAG: &str = "didself-did-secret-v1";
pub const ASSERTION_SECRET_TAG: &str = "didself-assertion-secret-v1";
pub const ASSERTION_PUBLIC_TAG: &str = "didself-assertion-public-v1";

pub const DID_KEY_FILE: &str = "did.key";
pub const ASSERTION_KEY_FILE: &str = "assertion.key";
pub const ASSERTION_PUB_FILE: &str = "assertion.pub";
pub const DID_FILE: &str = "did.txt";

pub fn encode(tag: &str, bytes: &[u8; 32]) -> String {
    format!("{tag}\n{}\n", b64url(bytes))
}

pub fn decode(tag: &str, text: &str) -> Result<[u8; 32], String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(t) if t.trim() == tag => {}
        Some(t) => return Err(format!("expected a {tag} file, found tag {:?}", t.trim())),
        None => return Err("empty key file".into()),
    }
    let body = lines.next().ok_or("key file has no key line")?.trim();
    if lines.any(|l| !l.trim().is_empty()) {
        return Err("trailing data after key line".into());
    }
    b64url_decode_array::<32>(body).ok_or_else(|| "key line is not 32 bytes of base64url".to_owned())
}

/// The two key pairs a publisher needs.
pub struct KeySet {
    pub did_key: Option<KeyPair>,
    pub assertion: KeyPair,
}

pub fn write_keyset(dir: &Path, owner: &KeyPair, assertion: &KeyPair, force: bool) -> Result<(), CliError> {
    create_private_dir(dir)?;
    let files = [
        (DID_KEY_FILE, encode(DID_SECRET_TAG, &owner.secret()), true),
        (ASSERTION_KEY_FILE, encode(ASSERTION_SECRET_TAG, &assertion.secret()), true),
        (ASSERTION_PUB_FILE, encode(ASSERTION_PUBLIC_TAG, &assertion.public()), false),
        (DID_FILE, format!("{}\n", owner.did()), false),
    ];
    if !force {
        if let Some((name, _, _)) = files.iter().find(|(n, _, _)| dir.join(n).exists()) {
            return Err(CliError::usage(format!(
                "{} already exists; pass --force to replace the keys",
                dir.join(name).display()
            )));
        }
    }
    for (name, body, secret) in files {
        write_file(&dir.join(name), body.as_bytes(), secret)?;
    }
    Ok(())
}

/// Loads `assertion.key` and, if present, `did.key` from `dir`.
pub fn load_keyset(dir: &Path) -> Result<KeySet, CliError> {
    let assertion = load_secret(&dir.join(ASSERTION_KEY_FILE), ASSERTION_SECRET_TAG)?;
    let did_path = dir.join(DID_KEY_FILE);
    let did_key = if did_path.exists() {
        Some(load_secret(&did_path, DID_SECRET_TAG)?)
    } else {
        None
    };
    Ok(KeySet { did_key, assertion })
}

pub fn load_secret(path: &Path, tag: &str) -> Result<KeyPair, CliError> {
    check_private(path)?;
    let text = read(path)?;
    let seed = decode(tag, &text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(KeyPair::from_seed(seed))
}

pub fn load_public(path: &Path) -> Result<[u8; 32], CliError> {
    let text = read(path)?;
    decode(ASSERTION_PUBLIC_TAG, &text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn create_private_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(dir, fs::Permissions::from_mode(0o700))
            .map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    }
    Ok(())
}

/// Writes via a temporary sibling so a crash never leaves a torn key file.
pub fn write_file(path: &Path, bytes: &[u8], secret: bool) -> Result<(), CliError> {
    let err = |e: std::io::Error| CliError::io(format!("{}: {e}", path.display()));
    let tmp: PathBuf = {
        let mut name = path.file_name().unwrap_or_default().to_os_string();
        name.push(".tmp");
        path.with_file_name(name)
    };
    let mut opts = fs::OpenOptions::new();
    opts.write(true).create(true).truncate(true);
    #[cfg(unix)]
    {
        use std::os::unix::fs::OpenOptionsExt;
        opts.mode(if secret { 0o600 } else { 0o644 });
    }
    #[cfg(not(unix))]
    let _ = secret;
    let mut f = opts.open(&tmp).map_err(err)?;
    f.write_all(bytes).map_err(err)?;
    f.sync_all().map_err(err)?;
    fs::rename(&tmp, path).map_err(err)
}

fn check_private(path: &Path) -> Result<(), CliError> {
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let meta = fs::metadata(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        if meta.permissions().mode() & 0o077 != 0 {
            return Err(CliError::usage(format!(
                "{} is accessible by other users; run chmod 600 on it",
                path.display()
            )));
        }
    }
    #[cfg(not(unix))]
    let _ = path;
    Ok(())
}
