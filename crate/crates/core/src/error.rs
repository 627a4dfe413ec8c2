use std::fmt;

use crate::time::Timestamp;

/// Why a document, proof or bundle was rejected.
///
/// The first five kinds correspond to parse failure and the four steps of
/// document verification (DID match, document digest, expiry, proof
/// signature); the remaining ones to the bundle authenticity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifyErrorKind {
    Malformed,
    DidMismatch,
    DigestMismatch,
    Expired,
    BadSignature,
    NameMismatch,
    ContentDigestMismatch,
    MetadataSignatureInvalid,
    Stale,
}

impl VerifyErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerifyErrorKind::Malformed => "Malformed",
            VerifyErrorKind::DidMismatch => "DidMismatch",
            VerifyErrorKind::DigestMismatch => "DigestMismatch",
            VerifyErrorKind::Expired => "Expired",
            VerifyErrorKind::BadSignature => "BadSignature",
            VerifyErrorKind::NameMismatch => "NameMismatch",
            VerifyErrorKind::ContentDigestMismatch => "ContentDigestMismatch",
            VerifyErrorKind::MetadataSignatureInvalid => "MetadataSignatureInvalid",
            VerifyErrorKind::Stale => "Stale",
        }
    }
}

impl fmt::Display for VerifyErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct VerificationError {
    pub kind: VerifyErrorKind,
    pub detail: String,
}

impl VerificationError {
    pub fn new(kind: VerifyErrorKind, detail: impl Into<String>) -> Self {
        VerificationError {
            kind,
            detail: detail.into(),
        }
    }

    pub fn malformed(detail: impl Into<String>) -> Self {
        Self::new(VerifyErrorKind::Malformed, detail)
    }
}

/// Errors raised while constructing keys, documents, proofs and bundles, and
/// by the publishing workflows built on top of them.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{what} must be {expected} bytes, got {got}")]
    BadLength {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("key mismatch: {0}")]
    KeyMismatch(String),
    #[error("expiry {expires} is not after creation time {created}")]
    BadInterval {
        created: Timestamp,
        expires: Timestamp,
    },
    #[error("no entropy source available: {0}")]
    EntropyUnavailable(String),
    #[error("invalid key: {0}")]
    BadKey(String),
    #[error(transparent)]
    Store(#[from] crate::store::StoreError),
    #[error(transparent)]
    Naming(#[from] crate::naming::NamingError),
    #[error(transparent)]
    Verification(#[from] VerificationError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
