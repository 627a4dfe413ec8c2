//! Backend selection for the command-line tool.
//!
//! Values come from, in increasing precedence: built-in defaults, a TOML
//! file, environment variables and flags. Only the store and resolver have
//! environment overrides (`DIDSELF_STORE`, `DIDSELF_RESOLVER`); clap reads
//! those directly.

use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use serde::Deserialize;

use super::CliError;
use crate::naming::{DnsClientConfig, DnsTxtClient, FreshnessPolicy, NamingError, Resolver, Zone};
use crate::store::{ContentStore, DirStore, IpfsHttpStore, MemoryStore};

pub const DEFAULT_STORE: &str = "dir:.didself/store";
pub const DEFAULT_RESOLVER: &str = "zonefile:.didself/zone.txt";
pub const DEFAULT_KEY_DIR: &str = "keys";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StoreSpec {
    Dir(PathBuf),
    /// Lives for one process only.
    Memory,
    Ipfs(String),
}

impl FromStr for StoreSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            _ if s == "memory" => Ok(StoreSpec::Memory),
            Some(("dir", p)) if !p.is_empty() => Ok(StoreSpec::Dir(PathBuf::from(p))),
            Some(("ipfs", url)) if !url.is_empty() => Ok(StoreSpec::Ipfs(url.to_owned())),
            _ => Err(format!("store must be memory, dir:<path> or ipfs:<url>, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResolverSpec {
    ZoneFile(PathBuf),
    Dns(String),
}

impl FromStr for ResolverSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            Some(("zonefile", p)) if !p.is_empty() => Ok(ResolverSpec::ZoneFile(PathBuf::from(p))),
            Some(("dns", addr)) if !addr.is_empty() => Ok(ResolverSpec::Dns(addr.to_owned())),
            _ => Err(format!("resolver must be zonefile:<path> or dns:<host[:port]>, got {s:?}")),
        }
    }
}

/// Contents of the configuration file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub store: Option<String>,
    pub resolver: Option<String>,
    pub key_dir: Option<PathBuf>,
    pub max_age_secs: Option<u64>,
    pub max_record_age_secs: Option<u64>,
    pub dns_timeout_ms: Option<u64>,
    pub ipfs_timeout_ms: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct CliConfig {
    pub store: StoreSpec,
    pub resolver: ResolverSpec,
    pub key_dir: PathBuf,
    pub freshness: FreshnessPolicy,
    pub dns_timeout: Duration,
    pub ipfs_timeout: Duration,
}

impl CliConfig {
    /// Merges a file config with overrides (flags or environment).
    pub fn resolve(
        file: FileConfig,
        store: Option<StoreSpec>,
        resolver: Option<ResolverSpec>,
    ) -> Result<Self, CliError> {
        let store = match store {
            Some(s) => s,
            None => file.store.as_deref().unwrap_or(DEFAULT_STORE).parse().map_err(CliError::usage)?,
        };
        let resolver = match resolver {
            Some(r) => r,
            None => file.resolver.as_deref().unwrap_or(DEFAULT_RESOLVER).parse().map_err(CliError::usage)?,
        };
        Ok(CliConfig {
            store,
            resolver,
            key_dir: file.key_dir.unwrap_or_else(|| PathBuf::from(DEFAULT_KEY_DIR)),
            freshness: FreshnessPolicy {
                max_age: file.max_age_secs.map(Duration::from_secs),
                max_record_age: file.max_record_age_secs.map(Duration::from_secs),
            },
            dns_timeout: Duration::from_millis(file.dns_timeout_ms.unwrap_or(2000)),
            ipfs_timeout: Duration::from_millis(file.ipfs_timeout_ms.unwrap_or(10_000)),
        })
    }

    pub fn open_store(&self) -> Result<Box<dyn ContentStore>, CliError> {
        Ok(match &self.store {
            StoreSpec::Memory => Box::new(MemoryStore::new()),
            StoreSpec::Dir(p) => Box::new(DirStore::open(p).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?),
            StoreSpec::Ipfs(url) => Box::new(IpfsHttpStore::new(url, self.ipfs_timeout).map_err(CliError::from_store)?),
        })
    }

    pub fn open_resolver(&self) -> Result<Box<dyn Resolver>, CliError> {
        Ok(match &self.resolver {
            ResolverSpec::ZoneFile(p) => Box::new(load_zone(p)?),
            ResolverSpec::Dns(addr) => {
                let ns = DnsClientConfig::parse_nameserver(addr).map_err(|e| CliError::usage(e.to_string()))?;
                Box::new(DnsTxtClient::new(DnsClientConfig {
                    nameserver: ns,
                    timeout: self.dns_timeout,
                }))
            }
        })
    }

    /// The writable zone file, for commands that publish.
    pub fn zone_file(&self) -> Result<&Path, CliError> {
        match &self.resolver {
            ResolverSpec::ZoneFile(p) => Ok(p),
            ResolverSpec::Dns(_) => Err(CliError::usage(
                "publishing needs a zonefile: resolver; live DNS zones are updated out of band",
            )),
        }
    }
}

pub fn load_zone(path: &Path) -> Result<Zone, CliError> {
    Zone::load(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

impl From<NamingError> for CliError {
    fn from(e: NamingError) -> Self {
        CliError::resolution(e.kind(), e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn store_specs() {
        assert_eq!("memory".parse::<StoreSpec>().unwrap(), StoreSpec::Memory);
        assert_eq!("dir:/tmp/x".parse::<StoreSpec>().unwrap(), StoreSpec::Dir("/tmp/x".into()));
        assert_eq!(
            "ipfs:http://127.0.0.1:5001".parse::<StoreSpec>().unwrap(),
            StoreSpec::Ipfs("http://127.0.0.1:5001".into())
        );
        assert!("dir:".parse::<StoreSpec>().is_err());
        assert!("s3:bucket".parse::<StoreSpec>().is_err());
    }

    #[test]
    fn resolver_specs() {
        assert_eq!(
            "zonefile:z.txt".parse::<ResolverSpec>().unwrap(),
            ResolverSpec::ZoneFile("z.txt".into())
        );
        assert_eq!("dns:1.1.1.1".parse::<ResolverSpec>().unwrap(), ResolverSpec::Dns("1.1.1.1".into()));
        assert!("memory".parse::<ResolverSpec>().is_err());
    }

    #[test]
    fn overrides_beat_file() {
        let file: FileConfig = toml::from_str("store = \"memory\"\nmax_age_secs = 60\n").unwrap();
        let cfg = CliConfig::resolve(file.clone(), None, None).unwrap();
        assert_eq!(cfg.store, StoreSpec::Memory);
        assert_eq!(cfg.freshness.max_age, Some(Duration::from_secs(60)));
        assert_eq!(cfg.resolver, DEFAULT_RESOLVER.parse().unwrap());
        let cfg = CliConfig::resolve(file, Some(StoreSpec::Dir("s".into())), None).unwrap();
        assert_eq!(cfg.store, StoreSpec::Dir("s".into()));
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(toml::from_str::<FileConfig>("stor = \"memory\"").is_err());
    }
}
