//! Self-verifiable content items.
//!
//! A bundle is one header line holding the DID, its document and proof, and
//! the signed metadata, then a single `\n`, then the content bytes verbatim.
//! The metadata names the DID and carries the content digest; it is signed
//! with the document's assertion key.

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::did::{create_document, parse_did, Did, DidDocument, KeyPair};
use crate::encoding::{b64url_decode_array, canonical_json, sha256_b64url};
use crate::error::{Error, Result, VerificationError, VerifyErrorKind};
use crate::jws::{self, CompactJws};
use crate::proof::{create_proof, verify_document, Proof};
use crate::time::Timestamp;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub name: String,
    #[serde(rename = "sha-256")]
    pub sha256: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created: Option<Timestamp>,
}

impl Metadata {
    fn validate(&self) -> Result<(), VerificationError> {
        parse_did(&self.name).map_err(|e| VerificationError::malformed(format!("metadata name: {e}")))?;
        if b64url_decode_array::<32>(&self.sha256).is_none() {
            return Err(VerificationError::malformed("metadata sha-256 is not a 32-byte digest"));
        }
        Ok(())
    }
}

pub fn create_metadata(did: &Did, content: &[u8], created: Option<Timestamp>) -> Metadata {
    Metadata {
        name: did.as_str().to_owned(),
        sha256: sha256_b64url(content),
        created,
    }
}

/// Metadata signed with an assertion key, as a compact JWS.
#[derive(Clone, PartialEq, Eq)]
pub struct MetadataJws {
    jws: CompactJws,
    metadata: Metadata,
}

impl MetadataJws {
    pub fn parse(s: &str) -> Result<Self, VerificationError> {
        let jws = CompactJws::parse(s).map_err(|e| VerificationError::malformed(format!("metadata: {e}")))?;
        let metadata: Metadata = serde_json::from_slice(jws.payload())
            .map_err(|e| VerificationError::malformed(format!("metadata payload: {e}")))?;
        metadata.validate()?;
        Ok(MetadataJws { jws, metadata })
    }

    pub fn metadata(&self) -> &Metadata {
        &self.metadata
    }

    pub fn as_str(&self) -> &str {
        self.jws.as_str()
    }

    pub fn verify(&self, assertion_public: &[u8; 32]) -> bool {
        self.jws.verify(assertion_public)
    }
}

impl fmt::Debug for MetadataJws {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetadataJws").field("metadata", &self.metadata).finish()
    }
}

impl Serialize for MetadataJws {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for MetadataJws {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        MetadataJws::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn sign_metadata(meta: &Metadata, assertion_secret: &[u8]) -> Result<MetadataJws> {
    let key = KeyPair::from_secret(assertion_secret).map_err(|e| Error::BadKey(e.to_string()))?;
    let signed = jws::sign(&canonical_json(meta), key.signing_key());
    Ok(MetadataJws::parse(&signed).expect("freshly signed metadata parses"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleHeader {
    pub did: Did,
    pub document: DidDocument,
    pub proof: Proof,
    pub metadata_jws: MetadataJws,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bundle {
    pub header: BundleHeader,
    pub content: Vec<u8>,
}

impl Bundle {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = canonical_json(&self.header);
        debug_assert!(!out.contains(&b'\n'));
        out.reserve(self.content.len() + 1);
        out.push(b'\n');
        out.extend_from_slice(&self.content);
        out
    }
}

/// Mechanically assembles the wire form. Consistency between the parts is
/// not checked; that is [`verify_bundle`]'s job.
pub fn assemble_bundle(
    doc: &DidDocument,
    proof: &Proof,
    metadata_jws: &MetadataJws,
    content: &[u8],
) -> Vec<u8> {
    Bundle {
        header: BundleHeader {
            did: doc.id().clone(),
            document: doc.clone(),
            proof: proof.clone(),
            metadata_jws: metadata_jws.clone(),
        },
        content: content.to_vec(),
    }
    .to_bytes()
}

pub fn parse_bundle(raw: &[u8]) -> Result<Bundle, VerificationError> {
    let split = raw
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| VerificationError::malformed("bundle has no header line"))?;
    let header: BundleHeader = serde_json::from_slice(&raw[..split])
        .map_err(|e| VerificationError::malformed(format!("bundle header: {e}")))?;
    Ok(Bundle {
        header,
        content: raw[split + 1..].to_vec(),
    })
}

/// Content that passed [`verify_bundle`]. There is no other way to build one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifiedItem {
    did: Did,
    content: Vec<u8>,
    assertion_key: [u8; 32],
    metadata_created: Option<Timestamp>,
}

impl VerifiedItem {
    pub fn did(&self) -> &Did {
        &self.did
    }

    pub fn content(&self) -> &[u8] {
        &self.content
    }

    pub fn into_content(self) -> Vec<u8> {
        self.content
    }

    pub fn assertion_key(&self) -> [u8; 32] {
        self.assertion_key
    }

    pub fn metadata_created(&self) -> Option<Timestamp> {
        self.metadata_created
    }
}

/// Verifies a raw bundle for the DID the consumer asked for.
///
/// The header's own `did` field is attacker-controlled, so everything is
/// checked against `expected_did`. With `max_age`, the metadata must carry a
/// `created` time no older than `max_age` at `now`.
pub fn verify_bundle(
    expected_did: &Did,
    raw: &[u8],
    now: Timestamp,
    max_age: Option<Duration>,
) -> Result<VerifiedItem, VerificationError> {
    let Bundle { header, content } = parse_bundle(raw)?;
    if header.did != *expected_did {
        return Err(VerificationError::new(
            VerifyErrorKind::DidMismatch,
            format!("bundle is for {}, expected {expected_did}", header.did),
        ));
    }
    verify_document(expected_did, &header.document, &header.proof, now)?;

    let meta = header.metadata_jws.metadata();
    if meta.name != expected_did.as_str() {
        return Err(VerificationError::new(
            VerifyErrorKind::NameMismatch,
            format!("metadata names {}", meta.name),
        ));
    }
    if meta.sha256 != sha256_b64url(&content) {
        return Err(VerificationError::new(
            VerifyErrorKind::ContentDigestMismatch,
            "content digest differs from the metadata",
        ));
    }
    let assertion_key = header.document.assertion_key();
    if !header.metadata_jws.verify(&assertion_key) {
        return Err(VerificationError::new(
            VerifyErrorKind::MetadataSignatureInvalid,
            "metadata signature does not verify under the assertion key",
        ));
    }
    if let Some(max_age) = max_age {
        match meta.created {
            None => {
                return Err(VerificationError::new(
                    VerifyErrorKind::Stale,
                    "freshness required but metadata has no timestamp",
                ))
            }
            Some(created) if now.is_older_than(created, max_age) => {
                return Err(VerificationError::new(
                    VerifyErrorKind::Stale,
                    format!("metadata created {created} is older than {}s", max_age.as_secs()),
                ))
            }
            Some(_) => {}
        }
    }
    Ok(VerifiedItem {
        did: expected_did.clone(),
        content,
        assertion_key,
        metadata_created: meta.created,
    })
}

/// Validity window for a freshly issued document proof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProofWindow {
    pub created: Timestamp,
    pub expires: Option<Timestamp>,
}

impl ProofWindow {
    pub fn open_ended(created: Timestamp) -> Self {
        ProofWindow { created, expires: None }
    }

    pub fn lasting(created: Timestamp, lifetime: Duration) -> Self {
        ProofWindow {
            created,
            expires: Some(created.plus(lifetime)),
        }
    }
}

/// The owner-side pipeline: document, proof, signed metadata, assembled bundle.
///
/// `metadata_created` is the optional freshness timestamp placed in the
/// metadata.
pub fn create_bundle(
    owner: &KeyPair,
    assertion: &KeyPair,
    content: &[u8],
    window: ProofWindow,
    metadata_created: Option<Timestamp>,
) -> Result<Vec<u8>> {
    let did = owner.did();
    let doc = create_document(&did, &assertion.public(), crate::did::DEFAULT_FRAGMENT)?;
    let proof = create_proof(&doc, &owner.secret(), window.created, window.expires)?;
    let meta = create_metadata(&did, content, metadata_created);
    let signed = sign_metadata(&meta, &assertion.secret())?;
    Ok(assemble_bundle(&doc, &proof, &signed, content))
}

/// Re-issues a bundle under a new assertion key while keeping its DID.
///
/// The document gets the new key, the proof is re-signed by the DID key at
/// `now` (keeping the old proof's lifetime, if it had one) and the metadata
/// is signed by the new assertion key.
pub fn rotate_assertion_key(
    old: &Bundle,
    new_assertion_public: &[u8],
    did_secret: &[u8],
    content: &[u8],
    new_assertion_secret: &[u8],
    now: Timestamp,
) -> Result<Vec<u8>> {
    let owner = KeyPair::from_secret(did_secret)?;
    let did = old.header.document.id();
    if owner.did() != *did {
        return Err(Error::KeyMismatch(format!("secret does not belong to {did}")));
    }
    let assertion = KeyPair::from_secret(new_assertion_secret)?;
    if assertion.public().as_slice() != new_assertion_public {
        return Err(Error::KeyMismatch(
            "new assertion secret does not match the new public key".into(),
        ));
    }
    let doc = create_document(did, new_assertion_public, old.header.document.fragment())?;
    let old_proof = &old.header.proof;
    let expires = old_proof
        .expires()
        .map(|e| now.plus(Duration::from_secs(e.seconds_since(old_proof.created()) as u64)));
    let proof = create_proof(&doc, did_secret, now, expires)?;
    let created = old.header.metadata_jws.metadata().created.map(|_| now);
    let signed = sign_metadata(&create_metadata(did, content, created), new_assertion_secret)?;
    Ok(assemble_bundle(&doc, &proof, &signed, content))
}
