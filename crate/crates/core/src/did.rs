//! The did:self method: Ed25519 key pairs, identifiers derived from public
//! keys, and the DID document that names the item's assertion key.

use std::fmt;
use std::str::FromStr;

use ed25519_dalek::SigningKey;
use rand::rngs::OsRng;
use rand::RngCore;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encoding::{b64url, b64url_decode_array, canonical_json, sha256_b64url};
use crate::error::{Error, Result};

pub const DID_PREFIX: &str = "did:self:";
/// Length of the unpadded base64url encoding of a 32-byte key.
pub const KEY_B64_LEN: usize = 43;
pub const DEFAULT_FRAGMENT: &str = "#key1";
pub const JWK_TYPE: &str = "JsonWebKey2020";

/// An Ed25519 key pair held as its 32-byte secret seed.
#[derive(Clone)]
pub struct KeyPair {
    signing: SigningKey,
}

impl KeyPair {
    pub fn from_seed(seed: [u8; 32]) -> Self {
        KeyPair {
            signing: SigningKey::from_bytes(&seed),
        }
    }

    /// Builds a key pair from a secret seed of unchecked length.
    pub fn from_secret(secret: &[u8]) -> Result<Self> {
        let seed: [u8; 32] = secret.try_into().map_err(|_| Error::BadLength {
            what: "secret key",
            expected: 32,
            got: secret.len(),
        })?;
        Ok(Self::from_seed(seed))
    }

    pub fn generate() -> Result<Self> {
        let mut seed = [0u8; 32];
        OsRng
            .try_fill_bytes(&mut seed)
            .map_err(|e| Error::EntropyUnavailable(e.to_string()))?;
        Ok(Self::from_seed(seed))
    }

    pub fn public(&self) -> [u8; 32] {
        self.signing.verifying_key().to_bytes()
    }

    pub fn secret(&self) -> [u8; 32] {
        self.signing.to_bytes()
    }

    pub fn did(&self) -> Did {
        Did::from_public_key(self.public())
    }

    pub(crate) fn signing_key(&self) -> &SigningKey {
        &self.signing
    }
}

impl fmt::Debug for KeyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyPair")
            .field("public", &b64url(&self.public()))
            .finish_non_exhaustive()
    }
}

/// Generates an Ed25519 key pair, deterministically when a seed is given.
pub fn generate_keypair(seed: Option<&[u8]>) -> Result<KeyPair> {
    match seed {
        Some(seed) => KeyPair::from_secret(seed),
        None => KeyPair::generate(),
    }
}

/// A did:self identifier: `did:self:` followed by the unpadded base64url
/// encoding of a 32-byte Ed25519 public key.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Did {
    encoded: String,
    key: [u8; 32],
}

impl Did {
    pub fn from_public_key(key: [u8; 32]) -> Self {
        Did {
            encoded: format!("{DID_PREFIX}{}", b64url(&key)),
            key,
        }
    }

    pub fn public_key(&self) -> [u8; 32] {
        self.key
    }

    /// The 43-character base64url tail.
    pub fn key_b64(&self) -> &str {
        &self.encoded[DID_PREFIX.len()..]
    }

    pub fn as_str(&self) -> &str {
        &self.encoded
    }
}

pub fn derive_did(public_key: &[u8]) -> Result<Did> {
    let key: [u8; 32] = public_key.try_into().map_err(|_| Error::BadLength {
        what: "public key",
        expected: 32,
        got: public_key.len(),
    })?;
    Ok(Did::from_public_key(key))
}

pub fn parse_did(s: &str) -> Result<Did> {
    let tail = s
        .strip_prefix(DID_PREFIX)
        .ok_or_else(|| Error::Malformed(format!("{s:?} does not start with {DID_PREFIX:?}")))?;
    if tail.len() != KEY_B64_LEN {
        return Err(Error::Malformed(format!(
            "DID key must be {KEY_B64_LEN} base64url characters, got {}",
            tail.len()
        )));
    }
    if let Some(c) = tail
        .chars()
        .find(|c| !(c.is_ascii_alphanumeric() || *c == '-' || *c == '_'))
    {
        return Err(Error::Malformed(format!("illegal character {c:?} in DID")));
    }
    // Strict decoding also rejects a final character with stray low bits,
    // which would otherwise let two strings name the same key.
    let key = b64url_decode_array::<32>(tail)
        .ok_or_else(|| Error::Malformed(format!("{tail:?} is not a canonical key encoding")))?;
    Ok(Did {
        encoded: s.to_owned(),
        key,
    })
}

impl fmt::Display for Did {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoded)
    }
}

impl fmt::Debug for Did {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Did({})", self.encoded)
    }
}

impl FromStr for Did {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_did(s)
    }
}

impl Serialize for Did {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.encoded)
    }
}

impl<'de> Deserialize<'de> for Did {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_did(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PublicKeyJwk {
    crv: String,
    kty: String,
    x: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssertionMethod {
    id: String,
    #[serde(rename = "type")]
    kind: String,
    #[serde(rename = "publicKeyJwk")]
    public_key_jwk: PublicKeyJwk,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    id: String,
    assertion: Vec<AssertionMethod>,
}

/// A DID document carrying exactly one assertion key as an Ed25519 JWK.
///
/// Constructed with [`create_document`] or by parsing JSON; either way the
/// structural invariants hold for every value of this type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawDocument", into = "RawDocument")]
pub struct DidDocument {
    id: Did,
    fragment: String,
    assertion_key: [u8; 32],
}

impl DidDocument {
    pub fn id(&self) -> &Did {
        &self.id
    }

    pub fn fragment(&self) -> &str {
        &self.fragment
    }

    pub fn assertion_key(&self) -> [u8; 32] {
        self.assertion_key
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        serde_json::from_slice(bytes).map_err(|e| Error::Malformed(format!("DID document: {e}")))
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("document serializes")
    }
}

impl TryFrom<RawDocument> for DidDocument {
    type Error = Error;

    fn try_from(raw: RawDocument) -> Result<Self> {
        let id = parse_did(&raw.id)?;
        let [method]: [AssertionMethod; 1] = raw.assertion.try_into().map_err(|v: Vec<_>| {
            Error::Malformed(format!("expected exactly one assertion key, found {}", v.len()))
        })?;
        if method.kind != JWK_TYPE {
            return Err(Error::Malformed(format!("assertion type {:?}", method.kind)));
        }
        let jwk = method.public_key_jwk;
        if jwk.kty != "OKP" || jwk.crv != "Ed25519" {
            return Err(Error::Malformed(format!("unsupported JWK {}/{}", jwk.kty, jwk.crv)));
        }
        let assertion_key = b64url_decode_array::<32>(&jwk.x)
            .ok_or_else(|| Error::Malformed("JWK x is not a 32-byte key".into()))?;
        Ok(DidDocument {
            id,
            fragment: method.id,
            assertion_key,
        })
    }
}

impl From<DidDocument> for RawDocument {
    fn from(doc: DidDocument) -> Self {
        RawDocument {
            id: doc.id.encoded,
            assertion: vec![AssertionMethod {
                id: doc.fragment,
                kind: JWK_TYPE.to_owned(),
                public_key_jwk: PublicKeyJwk {
                    crv: "Ed25519".to_owned(),
                    kty: "OKP".to_owned(),
                    x: b64url(&doc.assertion_key),
                },
            }],
        }
    }
}

pub fn create_document(did: &Did, assertion_public: &[u8], fragment: &str) -> Result<DidDocument> {
    let assertion_key: [u8; 32] = assertion_public.try_into().map_err(|_| Error::BadLength {
        what: "assertion public key",
        expected: 32,
        got: assertion_public.len(),
    })?;
    Ok(DidDocument {
        id: did.clone(),
        fragment: fragment.to_owned(),
        assertion_key,
    })
}

/// Deterministic serialization of a document: sorted keys, no whitespace.
pub fn canonical_bytes(doc: &DidDocument) -> Vec<u8> {
    canonical_json(doc)
}

pub(crate) fn document_digest(doc: &DidDocument) -> String {
    sha256_b64url(&canonical_bytes(doc))
}
