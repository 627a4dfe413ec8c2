//! Compact JWS with EdDSA over Ed25519.
//!
//! Only the protected header `{"alg":"EdDSA"}` is produced or accepted; the
//! verification key always comes from context (the DID or the document's
//! assertion key), never from the token.

use ed25519_dalek::{Signature, Signer, SigningKey, VerifyingKey};

use crate::encoding::{b64url, b64url_decode, b64url_decode_array};

pub const HEADER: &[u8] = br#"{"alg":"EdDSA"}"#;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JwsError {
    #[error("expected three dot-separated segments")]
    Segments,
    #[error("protected header must be {{\"alg\":\"EdDSA\"}}")]
    Header,
    #[error("payload is not valid base64url")]
    Payload,
    #[error("signature is not a 64-byte base64url value")]
    Signature,
}

/// A parsed compact JWS. Parsing checks structure only; call
/// [`CompactJws::verify`] with the key the context prescribes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactJws {
    serialized: String,
    payload: Vec<u8>,
    signature: [u8; 64],
}

impl CompactJws {
    pub fn parse(s: &str) -> Result<Self, JwsError> {
        let mut parts = s.split('.');
        let (Some(h), Some(p), Some(sig), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(JwsError::Segments);
        };
        if b64url_decode(h).map_err(|_| JwsError::Header)? != HEADER {
            return Err(JwsError::Header);
        }
        let payload = b64url_decode(p).map_err(|_| JwsError::Payload)?;
        let signature = b64url_decode_array::<64>(sig).ok_or(JwsError::Signature)?;
        Ok(CompactJws {
            serialized: s.to_owned(),
            payload,
            signature,
        })
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    pub fn as_str(&self) -> &str {
        &self.serialized
    }

    fn signing_input(&self) -> &[u8] {
        let end = self.serialized.rfind('.').expect("three segments");
        &self.serialized.as_bytes()[..end]
    }

    pub fn verify(&self, public_key: &[u8; 32]) -> bool {
        let Ok(key) = VerifyingKey::from_bytes(public_key) else {
            return false;
        };
        key.verify_strict(self.signing_input(), &Signature::from_bytes(&self.signature))
            .is_ok()
    }
}

/// Signs `payload` and returns `b64(header).b64(payload).b64(signature)`.
pub fn sign(payload: &[u8], key: &SigningKey) -> String {
    let mut out = format!("{}.{}", b64url(HEADER), b64url(payload));
    let sig = key.sign(out.as_bytes());
    out.push('.');
    out.push_str(&b64url(&sig.to_bytes()));
    out
}
