//! The `didself` command-line tool.
//!
//! Exit codes: 0 success, 1 verification failure, 2 resolution failure,
//! 3 I/O or backend failure, 4 usage error. Failures print
//! `error: <Kind>: <detail>` on stderr, where `<Kind>` is the library's
//! error kind (for example `ContentDigestMismatch` or `Stale`).

pub mod config;
pub mod keys;

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::{
    assemble_bundle, create_bundle, create_metadata, parse_bundle, sign_metadata, verify_bundle, ProofWindow,
};
use crate::delegation::{issue_grant, DelegationGrant};
use crate::did::{canonical_bytes, KeyPair};
use crate::error::{Error, VerificationError};
use crate::naming::{fetch_and_verify, format_record, publish, DnsName, FetchError, Freshness};
use crate::scenarios::{find_scenario, SCENARIOS};
use crate::store::{compute_cid, StoreError};
use crate::time::Timestamp;
use crate::did::Did;

use config::{CliConfig, FileConfig, ResolverSpec, StoreSpec};
use keys::KeySet;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_RESOLVE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_USAGE: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    fn new(code: u8, kind: &str, message: impl Into<String>) -> Self {
        CliError {
            code,
            kind: kind.to_owned(),
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, "Usage", message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(EXIT_IO, "Io", message)
    }

    pub fn resolution(kind: &str, message: impl Into<String>) -> Self {
        Self::new(EXIT_RESOLVE, kind, message)
    }

    pub fn verification(e: &VerificationError) -> Self {
        Self::new(EXIT_VERIFY, e.kind.as_str(), e.detail.clone())
    }

    /// An integrity failure is a verification failure: the backend handed
    /// back bytes that do not hash to what was asked for.
    pub fn from_store(e: StoreError) -> Self {
        let code = match e {
            StoreError::IntegrityMismatch { .. } => EXIT_VERIFY,
            _ => EXIT_IO,
        };
        Self::new(code, e.kind(), e.to_string())
    }

    pub fn from_fetch(e: FetchError) -> Self {
        match e {
            FetchError::Resolve(e) => e.into(),
            FetchError::Store(e) => Self::from_store(e),
            FetchError::Verify(e) => Self::verification(&e),
        }
    }

    pub fn from_lib(e: Error) -> Self {
        match e {
            Error::Verification(e) => Self::verification(&e),
            Error::Store(e) => Self::from_store(e),
            Error::Naming(e) => e.into(),
            Error::Io(e) => Self::io(e.to_string()),
            Error::KeyMismatch(_) => Self::new(EXIT_USAGE, "KeyMismatch", e.to_string()),
            Error::BadInterval { .. } => Self::new(EXIT_USAGE, "BadInterval", e.to_string()),
            Error::EntropyUnavailable(_) => Self::new(EXIT_IO, "EntropyUnavailable", e.to_string()),
            other => Self::usage(other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

/// Accepts `now`, a unix timestamp in seconds, or `YYYY-MM-DDTHH:MM:SSZ`.
pub fn parse_time(s: &str) -> Result<Timestamp, String> {
    if s == "now" {
        return Ok(Timestamp::now());
    }
    if let Ok(secs) = s.parse::<i64>() {
        return Ok(Timestamp::from_unix(secs));
    }
    Timestamp::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "didself", version, about = "Self-verifiable content items named by did:self DIDs")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true, env = "DIDSELF_CONFIG")]
    pub config: Option<PathBuf>,
    /// Content store: memory, dir:<path> or ipfs:<api url>.
    #[arg(long, global = true, env = "DIDSELF_STORE")]
    pub store: Option<StoreSpec>,
    /// Name resolver: zonefile:<path> or dns:<host[:port]>.
    #[arg(long, global = true, env = "DIDSELF_RESOLVER")]
    pub resolver: Option<ResolverSpec>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a DID key and an assertion key.
    Keygen {
        /// Output directory (default: the configured key directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Derive both keys from this seed. For tests and fixtures only.
        #[arg(long)]
        seed: Option<u64>,
        /// Replace existing key files.
        #[arg(long)]
        force: bool,
    },
    /// Wrap a file into a self-verifiable bundle.
    Create {
        input: PathBuf,
        /// Key directory (default: the configured key directory).
        #[arg(long)]
        keys: Option<PathBuf>,
        #[arg(long, short)]
        out: PathBuf,
        /// Proof creation time, also used as the metadata timestamp.
        #[arg(long, value_parser = parse_time)]
        created: Option<Timestamp>,
        /// Proof expiry time.
        #[arg(long, value_parser = parse_time)]
        expires: Option<Timestamp>,
        /// Delegation grant; the keys directory then holds the host key.
        #[arg(long, conflicts_with_all = ["created", "expires"])]
        grant: Option<PathBuf>,
    },
    /// Verify a bundle file.
    Verify {
        bundle: PathBuf,
        /// Expected DID (default: the DID the bundle claims).
        #[arg(long)]
        did: Option<Did>,
        #[arg(long, value_parser = parse_time)]
        now: Option<Timestamp>,
        /// Maximum metadata age in seconds.
        #[arg(long)]
        max_age: Option<u64>,
    },
    /// Store a bundle and point its DNSlink record at it.
    Publish {
        bundle: PathBuf,
        #[arg(long)]
        domain: DnsName,
        /// Sign the record with this directory's assertion key.
        #[arg(long)]
        keys: Option<PathBuf>,
        #[arg(long, value_parser = parse_time)]
        now: Option<Timestamp>,
    },
    /// Resolve, retrieve and verify an item; prints its content.
    Fetch {
        #[arg(long)]
        did: Did,
        #[arg(long)]
        domain: DnsName,
        /// Maximum metadata age in seconds.
        #[arg(long)]
        max_age: Option<u64>,
        /// Maximum signed-record age in seconds.
        #[arg(long)]
        max_record_age: Option<u64>,
        #[arg(long, value_parser = parse_time)]
        now: Option<Timestamp>,
        /// Write content here instead of stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Issue a delegation grant to a hosting service's assertion key.
    Delegate {
        /// Owner key directory (default: the configured key directory).
        #[arg(long)]
        keys: Option<PathBuf>,
        /// The host's assertion.pub file.
        #[arg(long)]
        host_pub: PathBuf,
        #[arg(long, value_parser = parse_time)]
        created: Option<Timestamp>,
        #[arg(long, value_parser = parse_time)]
        expires: Timestamp,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run a registered adversary scenario.
    Scenario {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// List registered scenarios.
        #[arg(long)]
        list: bool,
    },
}

/// Entry point for the `didself` binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let cfg = CliConfig::resolve(file, cli.store, cli.resolver)?;
    let key_dir = |k: Option<PathBuf>| k.unwrap_or_else(|| cfg.key_dir.clone());
    match cli.command {
        Command::Keygen { out: dir, seed, force } => cmd_keygen(&key_dir(dir), seed, force, out),
        Command::Create {
            input,
            keys,
            out: dest,
            created,
            expires,
            grant,
        } => cmd_create(&input, &key_dir(keys), &dest, created, expires, grant.as_deref(), out),
        Command::Verify {
            bundle,
            did,
            now,
            max_age,
        } => {
            let max_age = max_age.map(Duration::from_secs).or(cfg.freshness.max_age);
            cmd_verify(&bundle, did.as_ref(), now.unwrap_or_else(Timestamp::now), max_age, out)
        }
        Command::Publish {
            bundle,
            domain,
            keys,
            now,
        } => cmd_publish(&cfg, &bundle, &domain, keys.as_deref(), now.unwrap_or_else(Timestamp::now), out),
        Command::Fetch {
            did,
            domain,
            max_age,
            max_record_age,
            now,
            out: dest,
        } => {
            let mut policy = cfg.freshness;
            if let Some(s) = max_age {
                policy.max_age = Some(Duration::from_secs(s));
            }
            if let Some(s) = max_record_age {
                policy.max_record_age = Some(Duration::from_secs(s));
            }
            let now = now.unwrap_or_else(Timestamp::now);
            let content = cmd_fetch(&cfg, &did, &domain, now, &policy)?;
            match dest {
                Some(p) => keys::write_file(&p, &content, false),
                None => out.write_all(&content).and_then(|_| out.flush()).map_err(|e| CliError::io(e.to_string())),
            }
        }
        Command::Delegate {
            keys,
            host_pub,
            created,
            expires,
            out: dest,
        } => cmd_delegate(&key_dir(keys), &host_pub, created.unwrap_or_else(Timestamp::now), expires, &dest, out),
        Command::Scenario { name, seed, list } => match name {
            Some(name) if !list => cmd_scenario(&name, seed, out),
            _ => {
                for s in SCENARIOS {
                    writeln!(out, "{:<28} expect {:<20} {}", s.name, s.expected.to_string(), s.description)
                        .map_err(|e| CliError::io(e.to_string()))?;
                }
                Ok(())
            }
        },
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::io(e.to_string())
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

pub fn cmd_keygen(dir: &Path, seed: Option<u64>, force: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let (owner, assertion) = match seed {
        Some(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (KeyPair::from_seed(rng.gen()), KeyPair::from_seed(rng.gen()))
        }
        None => (
            KeyPair::generate().map_err(CliError::from_lib)?,
            KeyPair::generate().map_err(CliError::from_lib)?,
        ),
    };
    keys::write_keyset(dir, &owner, &assertion, force)?;
    writeln!(out, "{}", owner.did()).map_err(io_err)
}

pub fn cmd_create(
    input: &Path,
    key_dir: &Path,
    dest: &Path,
    created: Option<Timestamp>,
    expires: Option<Timestamp>,
    grant: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let content = read_file(input)?;
    let KeySet { did_key, assertion } = keys::load_keyset(key_dir)?;
    let raw = match grant {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
            let grant = DelegationGrant::parse(&text).map_err(CliError::from_lib)?;
            if grant.document().assertion_key() != assertion.public() {
                return Err(CliError::from_lib(Error::KeyMismatch(
                    "the grant names a different assertion key".into(),
                )));
            }
            let meta = create_metadata(grant.did(), &content, Some(Timestamp::now()));
            let signed = sign_metadata(&meta, &assertion.secret()).map_err(CliError::from_lib)?;
            assemble_bundle(grant.document(), grant.proof(), &signed, &content)
        }
        None => {
            let owner = did_key.ok_or_else(|| {
                CliError::usage(format!("{} has no {}", key_dir.display(), keys::DID_KEY_FILE))
            })?;
            let created = created.unwrap_or_else(Timestamp::now);
            let window = ProofWindow { created, expires };
            create_bundle(&owner, &assertion, &content, window, Some(created)).map_err(CliError::from_lib)?
        }
    };
    keys::write_file(dest, &raw, false)?;
    let bundle = parse_bundle(&raw).map_err(|e| CliError::verification(&e))?;
    let h = &bundle.header;
    writeln!(out, "did {}", h.did).map_err(io_err)?;
    writeln!(out, "cid {}", compute_cid(&raw)).map_err(io_err)?;
    writeln!(
        out,
        "bytes document={} proof={} metadata={} content={}",
        canonical_bytes(&h.document).len(),
        h.proof.as_str().len(),
        h.metadata_jws.as_str().len(),
        content.len()
    )
    .map_err(io_err)
}

pub fn cmd_verify(
    path: &Path,
    did: Option<&Did>,
    now: Timestamp,
    max_age: Option<Duration>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let raw = read_file(path)?;
    let expected = match did {
        Some(d) => d.clone(),
        None => parse_bundle(&raw).map_err(|e| CliError::verification(&e))?.header.did,
    };
    let item = verify_bundle(&expected, &raw, now, max_age).map_err(|e| CliError::verification(&e))?;
    writeln!(out, "Accept {} content={} bytes cid={}", item.did(), item.content().len(), compute_cid(&raw))
        .map_err(io_err)
}

pub fn cmd_publish(
    cfg: &CliConfig,
    path: &Path,
    domain: &DnsName,
    key_dir: Option<&Path>,
    now: Timestamp,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let zone_path = cfg.zone_file()?;
    let raw = read_file(path)?;
    let did = parse_bundle(&raw).map_err(|e| CliError::verification(&e))?.header.did;
    // Refuse to point a name at something consumers would reject anyway.
    let item = verify_bundle(&did, &raw, now, None).map_err(|e| CliError::verification(&e))?;
    let signer = match key_dir {
        Some(dir) => {
            let key = keys::load_secret(&dir.join(keys::ASSERTION_KEY_FILE), keys::ASSERTION_SECRET_TAG)?;
            if key.public() != item.assertion_key() {
                return Err(CliError::from_lib(Error::KeyMismatch(
                    "record key differs from the bundle's assertion key".into(),
                )));
            }
            Some(key)
        }
        None => None,
    };
    if cfg.store == StoreSpec::Memory {
        eprintln!("note: the memory store does not outlive this process");
    }
    let store = cfg.open_store()?;
    let cid = store.add(&raw).map_err(CliError::from_store)?;
    let secret = signer.as_ref().map(KeyPair::secret);
    let record = format_record(
        &cid,
        secret.as_ref().map(|s| Freshness {
            ts: now,
            assertion_secret: s,
        }),
    );
    let zone = config::load_zone(zone_path)?;
    let name = publish(&zone, &did, domain, &record)?;
    zone.save(zone_path).map_err(|e| CliError::io(format!("{}: {e}", zone_path.display())))?;
    writeln!(out, "cid {cid}\nname {name}\ntxt {}", record.to_txt()).map_err(io_err)
}

/// Returns verified content only; nothing is written before verification.
pub fn cmd_fetch(
    cfg: &CliConfig,
    did: &Did,
    domain: &DnsName,
    now: Timestamp,
    policy: &crate::naming::FreshnessPolicy,
) -> Result<Vec<u8>, CliError> {
    let resolver = cfg.open_resolver()?;
    let store = cfg.open_store()?;
    fetch_and_verify(&resolver, &store, did, domain, now, policy)
        .map(|item| item.into_content())
        .map_err(CliError::from_fetch)
}

pub fn cmd_delegate(
    key_dir: &Path,
    host_pub: &Path,
    created: Timestamp,
    expires: Timestamp,
    dest: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let owner = keys::load_secret(&key_dir.join(keys::DID_KEY_FILE), keys::DID_SECRET_TAG)?;
    let host = keys::load_public(host_pub)?;
    let grant = issue_grant(&owner, &host, created, expires).map_err(CliError::from_lib)?;
    keys::write_file(dest, grant.to_file_string().as_bytes(), false)?;
    writeln!(out, "grant {} expires {expires}", grant.did()).map_err(io_err)
}

pub fn cmd_scenario(name: &str, seed: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let scenario = find_scenario(name).ok_or_else(|| {
        CliError::new(EXIT_USAGE, "UnknownScenario", format!("{name:?}; try --list"))
    })?;
    let outcome = scenario.run(seed);
    write!(out, "{}", outcome.transcript).map_err(io_err)?;
    writeln!(out, "outcome {} expected {}", outcome.class, scenario.expected).map_err(io_err)?;
    if scenario.expected.admits(outcome.class) {
        Ok(())
    } else {
        Err(CliError::new(
            EXIT_VERIFY,
            "UnexpectedOutcome",
            format!("{name} produced {}, expected {}", outcome.class, scenario.expected),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_arguments() {
        assert_eq!(parse_time("0").unwrap(), Timestamp::from_unix(0));
        assert_eq!(parse_time("2021-06-01T00:00:00Z").unwrap(), Timestamp::from_unix(1_622_505_600));
        assert!(parse_time("yesterday").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn error_codes() {
        let ve = VerificationError::new(crate::VerifyErrorKind::Stale, "old");
        assert_eq!(CliError::verification(&ve).code, EXIT_VERIFY);
        assert_eq!(CliError::from_fetch(FetchError::Verify(ve)).kind, "Stale");
        let integrity = StoreError::IntegrityMismatch {
            expected: compute_cid(b"a"),
            actual: compute_cid(b"b"),
        };
        assert_eq!(CliError::from_store(integrity).code, EXIT_VERIFY);
        assert_eq!(CliError::from_store(StoreError::Backend("down".into())).code, EXIT_IO);
        let nf = crate::naming::NamingError::NotFound("x".into());
        assert_eq!(CliError::from(nf).code, EXIT_RESOLVE);
    }

    #[test]
    fn unknown_scenario_is_usage() {
        let err = cmd_scenario("nope", 1, &mut Vec::new()).unwrap_err();
        assert_eq!((err.code, err.kind.as_str()), (EXIT_USAGE, "UnknownScenario"));
    }
}
