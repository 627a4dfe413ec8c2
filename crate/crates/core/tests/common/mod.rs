//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use didself::encoding::{canonical_json, sha256_b64url};
use didself::jws;
use didself::prelude::*;
use didself::proof::ProofPayload;

pub fn digest_of(doc: &DidDocument) -> String {
    sha256_b64url(&canonical_bytes(doc))
}

/// Signs an arbitrary proof payload with `secret`, bypassing the checks
/// `create_proof` applies to its inputs.
pub fn sign_proof(payload: &ProofPayload, secret: &[u8; 32]) -> Proof {
    let key = ed25519_dalek::SigningKey::from_bytes(secret);
    Proof::parse(&jws::sign(&canonical_json(payload), &key)).expect("well-formed proof")
}

pub fn honest_payload(doc: &DidDocument, created: Timestamp, expires: Option<Timestamp>) -> ProofPayload {
    ProofPayload {
        id: doc.id().to_string(),
        created,
        expires,
        sha256: digest_of(doc),
    }
}

pub fn t(offset: i64) -> Timestamp {
    Timestamp::from_unix(1_622_505_600 + offset)
}
