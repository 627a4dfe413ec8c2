//! Document proofs and the four-step document verification procedure.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::did::{document_digest, Did, DidDocument, KeyPair};
use crate::encoding::{b64url_decode_array, canonical_json};
use crate::error::{Error, Result, VerificationError, VerifyErrorKind};
use crate::jws::{self, CompactJws};
use crate::time::Timestamp;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofPayload {
    pub id: String,
    pub created: Timestamp,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expires: Option<Timestamp>,
    #[serde(rename = "sha-256")]
    pub sha256: String,
}

/// A compact JWS self-signed by the DID key, binding the digest of a DID
/// document to that DID.
#[derive(Clone, PartialEq, Eq)]
pub struct Proof {
    jws: CompactJws,
    payload: ProofPayload,
}

impl Proof {
    /// Parses the JWS and its payload. The signature is not checked here.
    pub fn parse(s: &str) -> Result<Self, VerificationError> {
        let jws = CompactJws::parse(s).map_err(|e| VerificationError::malformed(format!("proof: {e}")))?;
        let payload: ProofPayload = serde_json::from_slice(jws.payload())
            .map_err(|e| VerificationError::malformed(format!("proof payload: {e}")))?;
        if b64url_decode_array::<32>(&payload.sha256).is_none() {
            return Err(VerificationError::malformed("proof sha-256 is not a 32-byte digest"));
        }
        if let Some(expires) = payload.expires {
            if expires <= payload.created {
                return Err(VerificationError::malformed("proof expires before it was created"));
            }
        }
        Ok(Proof { jws, payload })
    }

    pub fn as_str(&self) -> &str {
        self.jws.as_str()
    }

    pub fn payload(&self) -> &ProofPayload {
        &self.payload
    }

    pub fn created(&self) -> Timestamp {
        self.payload.created
    }

    pub fn expires(&self) -> Option<Timestamp> {
        self.payload.expires
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Proof").field("payload", &self.payload).finish()
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Proof {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Proof {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Proof::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub fn create_proof(
    doc: &DidDocument,
    did_secret: &[u8],
    created: Timestamp,
    expires: Option<Timestamp>,
) -> Result<Proof> {
    let owner = KeyPair::from_secret(did_secret)?;
    if owner.did() != *doc.id() {
        return Err(Error::KeyMismatch(format!(
            "secret does not belong to {}",
            doc.id()
        )));
    }
    if let Some(expires) = expires {
        if expires <= created {
            return Err(Error::BadInterval { created, expires });
        }
    }
    let payload = ProofPayload {
        id: doc.id().as_str().to_owned(),
        created,
        expires,
        sha256: document_digest(doc),
    };
    let jws = jws::sign(&canonical_json(&payload), owner.signing_key());
    Ok(Proof::parse(&jws).expect("freshly signed proof parses"))
}

/// Checks that `proof` binds `doc` to `did` at time `now`.
///
/// Steps run in order and the first failure is reported: the proof names
/// `did`, the document digest matches, the proof has not expired, and the
/// JWS verifies under the DID's own key.
pub fn verify_document(
    did: &Did,
    doc: &DidDocument,
    proof: &Proof,
    now: Timestamp,
) -> Result<(), VerificationError> {
    let payload = proof.payload();
    if payload.id != did.as_str() {
        return Err(VerificationError::new(
            VerifyErrorKind::DidMismatch,
            format!("proof is for {}, expected {did}", payload.id),
        ));
    }
    if doc.id() != did {
        return Err(VerificationError::new(
            VerifyErrorKind::DidMismatch,
            format!("document is for {}, expected {did}", doc.id()),
        ));
    }
    if document_digest(doc) != payload.sha256 {
        return Err(VerificationError::new(
            VerifyErrorKind::DigestMismatch,
            "document digest differs from the proof",
        ));
    }
    if let Some(expires) = payload.expires {
        if now >= expires {
            return Err(VerificationError::new(
                VerifyErrorKind::Expired,
                format!("proof expired at {expires}"),
            ));
        }
    }
    if !proof.jws.verify(&did.public_key()) {
        return Err(VerificationError::new(
            VerifyErrorKind::BadSignature,
            "proof signature does not verify under the DID key",
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::did::{create_document, DEFAULT_FRAGMENT};
    use crate::encoding::b64url;

    fn t(s: i64) -> Timestamp {
        Timestamp::from_unix(1_622_541_600 + s)
    }

    fn setup() -> (KeyPair, DidDocument) {
        let owner = KeyPair::from_seed([9; 32]);
        let assertion = KeyPair::from_seed([10; 32]);
        let doc = create_document(&owner.did(), &assertion.public(), DEFAULT_FRAGMENT).unwrap();
        (owner, doc)
    }

    #[test]
    fn round_trip_accepts() {
        let (owner, doc) = setup();
        let proof = create_proof(&doc, &owner.secret(), t(0), None).unwrap();
        for now in [t(-100_000), t(0), t(10_000_000)] {
            verify_document(&owner.did(), &doc, &proof, now).unwrap();
        }
    }

    #[test]
    fn interval_and_key_checks() {
        let (owner, doc) = setup();
        assert!(matches!(
            create_proof(&doc, &owner.secret(), t(0), Some(t(0))),
            Err(Error::BadInterval { .. })
        ));
        assert!(matches!(
            create_proof(&doc, &[1; 32], t(0), None),
            Err(Error::KeyMismatch(_))
        ));
    }

    #[test]
    fn expiry_is_strict() {
        let (owner, doc) = setup();
        let proof = create_proof(&doc, &owner.secret(), t(0), Some(t(60))).unwrap();
        verify_document(&owner.did(), &doc, &proof, t(59)).unwrap();
        for now in [t(60), t(61)] {
            let err = verify_document(&owner.did(), &doc, &proof, now).unwrap_err();
            assert_eq!(err.kind, VerifyErrorKind::Expired);
        }
    }

    #[test]
    fn altered_assertion_key_is_a_digest_mismatch() {
        let (owner, doc) = setup();
        let proof = create_proof(&doc, &owner.secret(), t(0), None).unwrap();
        let mut key = doc.assertion_key();
        key[0] ^= 1;
        let tampered = create_document(doc.id(), &key, DEFAULT_FRAGMENT).unwrap();
        let err = verify_document(&owner.did(), &tampered, &proof, t(1)).unwrap_err();
        assert_eq!(err.kind, VerifyErrorKind::DigestMismatch);
    }

    #[test]
    fn proof_signed_by_other_key_is_bad_signature() {
        let (owner, doc) = setup();
        let intruder = KeyPair::from_seed([11; 32]);
        let payload = ProofPayload {
            id: owner.did().to_string(),
            created: t(0),
            expires: None,
            sha256: document_digest(&doc),
        };
        let forged = Proof::parse(&jws::sign(&canonical_json(&payload), intruder.signing_key())).unwrap();
        let err = verify_document(&owner.did(), &doc, &forged, t(1)).unwrap_err();
        assert_eq!(err.kind, VerifyErrorKind::BadSignature);
    }

    #[test]
    fn payload_digest_matches_standalone_sha256() {
        // Digest of the canonical bytes below, computed with Python's hashlib.
        let owner = KeyPair::from_seed([0; 32]);
        let doc = create_document(&owner.did(), &owner.public(), DEFAULT_FRAGMENT).unwrap();
        assert_eq!(
            String::from_utf8(crate::did::canonical_bytes(&doc)).unwrap(),
            concat!(
                r##"{"assertion":[{"id":"#key1","publicKeyJwk":{"crv":"Ed25519","kty":"OKP","##,
                r##""x":"O2onvM62pC1io6jQKm8Nc2UyFXcd4kOmOsBIoYtZ2ik"},"type":"JsonWebKey2020"}],"##,
                r##""id":"did:self:O2onvM62pC1io6jQKm8Nc2UyFXcd4kOmOsBIoYtZ2ik"}"##
            )
        );
        let proof = create_proof(&doc, &owner.secret(), t(0), None).unwrap();
        assert_eq!(proof.payload().sha256, ZERO_SEED_DOC_DIGEST);
        assert_ne!(proof.payload().sha256, b64url(&[0; 32]));
    }

    const ZERO_SEED_DOC_DIGEST: &str = "T-4S-bGkRSGQiuOzVdVgX8j8KaV-o24aR4r-Hc_nxDQ";

    #[test]
    fn unparseable_proofs_are_malformed() {
        for s in ["", "a.b.c", "eyJhbGciOiJFZERTQSJ9.e30.AAAA"] {
            assert_eq!(Proof::parse(s).unwrap_err().kind, VerifyErrorKind::Malformed);
        }
    }
}
