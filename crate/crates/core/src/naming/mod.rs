//! DNSlink naming for did:self items.
//!
//! An item's DID maps to the TXT name `_dnslink.<lowercased key>.<domain>`,
//! whose record is `dnslink=/ipfs/<cid>`, optionally followed by a signed
//! freshness timestamp. DNS is only a locator: the consumer supplies the DID
//! and everything fetched is verified against it.

mod dns;
mod record;
mod zone;

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

pub use dns::{DnsTxtClient, DnsClientConfig};
pub use record::{format_record, parse_record, DnslinkRecord, Freshness};
pub use zone::{publish, Zone, ZoneFileError};

use crate::bundle::{verify_bundle, VerifiedItem};
use crate::did::Did;
use crate::error::VerificationError;
use crate::store::{ContentStore, StoreError};
use crate::time::Timestamp;

pub const DNSLINK_LABEL: &str = "_dnslink";
const MAX_LABEL: usize = 63;
const MAX_NAME: usize = 253;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NamingError {
    #[error("no DNSlink record at {0}")]
    NotFound(String),
    #[error("malformed record: {0}")]
    Malformed(String),
    #[error("unsupported DNSlink address {0:?}")]
    UnsupportedAddress(String),
    #[error("record is stale: {0}")]
    Stale(String),
    #[error("record signature invalid: {0}")]
    SignatureInvalid(String),
    #[error("DNS label {0:?} exceeds 63 characters")]
    LabelTooLong(String),
    #[error("invalid DNS name {0:?}")]
    InvalidName(String),
    #[error("DNS transport: {0}")]
    Transport(String),
}

impl NamingError {
    pub fn kind(&self) -> &'static str {
        match self {
            NamingError::NotFound(_) => "NotFound",
            NamingError::Malformed(_) => "Malformed",
            NamingError::UnsupportedAddress(_) => "UnsupportedAddress",
            NamingError::Stale(_) => "Stale",
            NamingError::SignatureInvalid(_) => "SignatureInvalid",
            NamingError::LabelTooLong(_) => "LabelTooLong",
            NamingError::InvalidName(_) => "InvalidName",
            NamingError::Transport(_) => "Transport",
        }
    }
}

/// A lowercase DNS name. Labels are 1-63 characters of `a-z 0-9 - _`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DnsName {
    labels: Vec<String>,
}

impl DnsName {
    pub fn parse(s: &str) -> Result<Self, NamingError> {
        let trimmed = s.strip_suffix('.').unwrap_or(s);
        if trimmed.is_empty() {
            return Err(NamingError::InvalidName(s.to_owned()));
        }
        let labels = trimmed
            .split('.')
            .map(|l| check_label(&l.to_ascii_lowercase()).map_err(|e| match e {
                NamingError::LabelTooLong(_) => e,
                _ => NamingError::InvalidName(s.to_owned()),
            }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_labels(labels)
    }

    fn from_labels(labels: Vec<String>) -> Result<Self, NamingError> {
        let name = DnsName { labels };
        if name.to_string().len() > MAX_NAME {
            return Err(NamingError::InvalidName(name.to_string()));
        }
        Ok(name)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

fn check_label(label: &str) -> Result<String, NamingError> {
    if label.len() > MAX_LABEL {
        return Err(NamingError::LabelTooLong(label.to_owned()));
    }
    let ok = !label.is_empty()
        && label
            .bytes()
            .all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'-' || b == b'_');
    if !ok {
        return Err(NamingError::InvalidName(label.to_owned()));
    }
    Ok(label.to_owned())
}

impl fmt::Display for DnsName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.labels.join("."))
    }
}

impl fmt::Debug for DnsName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnsName({self})")
    }
}

impl FromStr for DnsName {
    type Err = NamingError;

    fn from_str(s: &str) -> Result<Self, NamingError> {
        DnsName::parse(s)
    }
}

/// `_dnslink.<label>.<domain>` for an arbitrary key label.
pub fn dnslink_name_for_label(label: &str, domain: &DnsName) -> Result<DnsName, NamingError> {
    let mut labels = vec![DNSLINK_LABEL.to_owned(), check_label(&label.to_ascii_lowercase())?];
    labels.extend(domain.labels.iter().cloned());
    DnsName::from_labels(labels)
}

/// The TXT name holding `did`'s record under `domain`.
///
/// The key label is lowercased because DNS compares names case-insensitively;
/// it is a locator only and never used for verification.
pub fn dnslink_name(did: &Did, domain: &DnsName) -> Result<DnsName, NamingError> {
    dnslink_name_for_label(did.key_b64(), domain)
}

/// Anything that can answer TXT queries.
pub trait Resolver: Send + Sync {
    /// All TXT strings at `name`; an empty list when the name has none.
    fn lookup_txt(&self, name: &DnsName) -> Result<Vec<String>, NamingError>;
}

impl<R: Resolver + ?Sized> Resolver for &R {
    fn lookup_txt(&self, name: &DnsName) -> Result<Vec<String>, NamingError> {
        (**self).lookup_txt(name)
    }
}

impl<R: Resolver + ?Sized> Resolver for Box<R> {
    fn lookup_txt(&self, name: &DnsName) -> Result<Vec<String>, NamingError> {
        (**self).lookup_txt(name)
    }
}

/// Maximum accepted ages for item metadata and for signed DNSlink records.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FreshnessPolicy {
    pub max_age: Option<Duration>,
    pub max_record_age: Option<Duration>,
}

impl FreshnessPolicy {
    pub const NONE: FreshnessPolicy = FreshnessPolicy {
        max_age: None,
        max_record_age: None,
    };

    pub fn both(max_age: Duration) -> Self {
        FreshnessPolicy {
            max_age: Some(max_age),
            max_record_age: Some(max_age),
        }
    }

    pub fn is_active(&self) -> bool {
        self.max_age.is_some() || self.max_record_age.is_some()
    }
}

/// Looks up `did`'s DNSlink record under `domain`.
///
/// The first well-formed record wins. With `max_record_age`, the record must
/// carry a timestamp no older than that at `now` and a signature; the
/// signature is checked here when `assertion_key` is known, otherwise the
/// caller checks it once the bundle's assertion key is verified.
pub fn resolve<R: Resolver + ?Sized>(
    resolver: &R,
    did: &Did,
    domain: &DnsName,
    now: Timestamp,
    max_record_age: Option<Duration>,
    assertion_key: Option<&[u8; 32]>,
) -> Result<DnslinkRecord, NamingError> {
    let name = dnslink_name(did, domain)?;
    let txts = resolver.lookup_txt(&name)?;
    if txts.is_empty() {
        return Err(NamingError::NotFound(name.to_string()));
    }
    let mut first_err = None;
    let record = txts.iter().find_map(|txt| match parse_record(txt) {
        Ok(r) => Some(r),
        Err(e) => {
            first_err.get_or_insert(e);
            None
        }
    });
    let record = match record {
        Some(r) => r,
        None => return Err(first_err.expect("at least one record failed")),
    };
    if let Some(max_age) = max_record_age {
        record.check_age(now, max_age)?;
        if let Some(key) = assertion_key {
            record.check_signature(key)?;
        }
    }
    Ok(record)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FetchError {
    #[error(transparent)]
    Resolve(#[from] NamingError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Verify(#[from] VerificationError),
}

impl FetchError {
    pub fn kind(&self) -> &'static str {
        match self {
            FetchError::Resolve(e) => e.kind(),
            FetchError::Store(e) => e.kind(),
            FetchError::Verify(e) => e.kind.as_str(),
        }
    }
}

/// Resolve, retrieve, verify: the full consumer path from a DID to content.
///
/// A signed record's timestamp is checked before retrieval; its signature is
/// checked afterwards against the verified bundle's assertion key, since
/// that key is only trustworthy once the bundle's proof has been checked.
pub fn fetch_and_verify<R, S>(
    resolver: &R,
    store: &S,
    did: &Did,
    domain: &DnsName,
    now: Timestamp,
    policy: &FreshnessPolicy,
) -> Result<VerifiedItem, FetchError>
where
    R: Resolver + ?Sized,
    S: ContentStore + ?Sized,
{
    let record = resolve(resolver, did, domain, now, policy.max_record_age, None)?;
    let raw = store.get(record.cid())?;
    let item = verify_bundle(did, &raw, now, policy.max_age)?;
    if policy.max_record_age.is_some() {
        record.check_signature(&item.assertion_key())?;
    }
    Ok(item)
}
