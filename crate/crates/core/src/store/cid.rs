//! CIDv1, raw codec, sha2-256 multihash, base32-lower multibase.
//!
//! For single-block payloads these are the identifiers an IPFS node assigns
//! with `--raw-leaves --cid-version=1 --hash=sha2-256`.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use data_encoding::Encoding;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encoding::sha256;

const CID_V1: u8 = 0x01;
const RAW_CODEC: u8 = 0x55;
const SHA2_256: u8 = 0x12;
const DIGEST_LEN: u8 = 0x20;
const BASE32_PREFIX: char = 'b';

pub const CID_BINARY_LEN: usize = 36;

fn base32_lower() -> &'static Encoding {
    static ENC: OnceLock<Encoding> = OnceLock::new();
    ENC.get_or_init(|| {
        let mut spec = data_encoding::Specification::new();
        spec.symbols.push_str("abcdefghijklmnopqrstuvwxyz234567");
        spec.encoding().expect("valid base32 spec")
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cid {
    digest: [u8; 32],
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid CID {input:?}: {reason}")]
pub struct CidParseError {
    pub input: String,
    pub reason: &'static str,
}

impl Cid {
    pub fn from_digest(digest: [u8; 32]) -> Self {
        Cid { digest }
    }

    pub fn digest(&self) -> &[u8; 32] {
        &self.digest
    }

    pub fn to_bytes(&self) -> [u8; CID_BINARY_LEN] {
        let mut out = [0u8; CID_BINARY_LEN];
        out[..4].copy_from_slice(&[CID_V1, RAW_CODEC, SHA2_256, DIGEST_LEN]);
        out[4..].copy_from_slice(&self.digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, &'static str> {
        if bytes.len() != CID_BINARY_LEN {
            return Err("wrong binary length");
        }
        if bytes[..4] != [CID_V1, RAW_CODEC, SHA2_256, DIGEST_LEN] {
            return Err("only CIDv1/raw/sha2-256 is supported");
        }
        let mut digest = [0u8; 32];
        digest.copy_from_slice(&bytes[4..]);
        Ok(Cid { digest })
    }

    /// Whether `content` hashes to this CID.
    pub fn matches(&self, content: &[u8]) -> bool {
        sha256(content) == self.digest
    }
}

pub fn compute_cid(content: &[u8]) -> Cid {
    Cid::from_digest(sha256(content))
}

impl fmt::Display for Cid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{BASE32_PREFIX}{}", base32_lower().encode(&self.to_bytes()))
    }
}

impl fmt::Debug for Cid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cid({self})")
    }
}

impl FromStr for Cid {
    type Err = CidParseError;

    fn from_str(s: &str) -> Result<Self, CidParseError> {
        let err = |reason| CidParseError {
            input: s.to_owned(),
            reason,
        };
        let body = s.strip_prefix(BASE32_PREFIX).ok_or_else(|| err("expected base32 multibase prefix 'b'"))?;
        let bytes = base32_lower().decode(body.as_bytes()).map_err(|_| err("bad base32"))?;
        let cid = Cid::from_bytes(&bytes).map_err(err)?;
        // Reject alternative spellings of the same bytes.
        if cid.to_string() != s {
            return Err(err("non-canonical encoding"));
        }
        Ok(cid)
    }
}

impl Serialize for Cid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_layout() {
        let cid = compute_cid(b"abc");
        let bytes = cid.to_bytes();
        assert_eq!(&bytes[..4], &[0x01, 0x55, 0x12, 0x20]);
        assert_eq!(&bytes[4..], &sha256(b"abc"));
        assert_eq!(Cid::from_bytes(&bytes).unwrap(), cid);
    }

    #[test]
    fn string_round_trip_and_rejections() {
        let cid = compute_cid(b"abc");
        let s = cid.to_string();
        assert!(s.starts_with("bafkrei"));
        assert_eq!(s.parse::<Cid>().unwrap(), cid);
        assert!(s.to_uppercase().parse::<Cid>().is_err());
        assert!(s[1..].parse::<Cid>().is_err());
        assert!("QmYwAPJzv5CZsnA625s3Xf2nemtYgPpHdWEz79ojWnPbdG".parse::<Cid>().is_err());
        // dag-pb codec rather than raw
        assert!("bafybeigdyrzt5sfp7udm7hu76uh7y26nf3efuylqabf3oclgtqy55fbzdi".parse::<Cid>().is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(compute_cid(b"x"), compute_cid(b"x"));
        assert_ne!(compute_cid(b"x"), compute_cid(b"y"));
    }
}
