//! Byte-level helpers shared by every module: unpadded base64url, SHA-256
//! digests and the canonical JSON form used for everything that gets hashed
//! or signed.

use base64::engine::general_purpose::URL_SAFE_NO_PAD;
use base64::Engine;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Unpadded base64url (RFC 4648 section 5 alphabet, no `=`).
pub fn b64url(bytes: &[u8]) -> String {
    URL_SAFE_NO_PAD.encode(bytes)
}

/// Strict unpadded base64url decoding. Padding and non-zero trailing bits
/// are rejected, so every accepted string is the unique encoding of its bytes.
pub fn b64url_decode(s: &str) -> Result<Vec<u8>, base64::DecodeError> {
    URL_SAFE_NO_PAD.decode(s)
}

/// Decodes into a fixed-size array, `None` on bad encoding or wrong length.
pub fn b64url_decode_array<const N: usize>(s: &str) -> Option<[u8; N]> {
    b64url_decode(s).ok()?.try_into().ok()
}

pub fn sha256(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

/// `b64url(sha256(bytes))`, the digest form carried in proofs and metadata.
pub fn sha256_b64url(bytes: &[u8]) -> String {
    b64url(&sha256(bytes))
}

/// Canonical JSON: object keys sorted by their UTF-8 bytes, no whitespace,
/// serde_json's string escaping. Key order is enforced here rather than
/// relying on the map type serde_json happens to be built with.
pub fn canonical_json<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let value = serde_json::to_value(value).expect("value serializes to JSON");
    let mut out = Vec::with_capacity(256);
    write_canonical(&value, &mut out);
    out
}

fn write_canonical(value: &Value, out: &mut Vec<u8>) {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(&String, &Value)> = map.iter().collect();
            entries.sort_by(|a, b| a.0.as_bytes().cmp(b.0.as_bytes()));
            out.push(b'{');
            for (i, (k, v)) in entries.into_iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                serde_json::to_writer(&mut *out, k).expect("string serializes");
                out.push(b':');
                write_canonical(v, out);
            }
            out.push(b'}');
        }
        Value::Array(items) => {
            out.push(b'[');
            for (i, v) in items.iter().enumerate() {
                if i > 0 {
                    out.push(b',');
                }
                write_canonical(v, out);
            }
            out.push(b']');
        }
        scalar => serde_json::to_writer(&mut *out, scalar).expect("scalar serializes"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_compact() {
        let v = json!({"b": 1, "a": {"z": [1, 2], "y": "x"}, "sha-256": null});
        assert_eq!(
            canonical_json(&v),
            br#"{"a":{"y":"x","z":[1,2]},"b":1,"sha-256":null}"#.to_vec()
        );
    }

    #[test]
    fn newlines_inside_strings_are_escaped() {
        let out = canonical_json(&json!({"k": "a\nb"}));
        assert!(!out.contains(&b'\n'));
    }

    #[test]
    fn strict_decoding_rejects_padding_and_trailing_bits() {
        assert_eq!(b64url_decode("AA").unwrap(), vec![0]);
        assert!(b64url_decode("AA==").is_err());
        // "AB" carries a non-zero bit past the single encoded byte.
        assert!(b64url_decode("AB").is_err());
        assert!(b64url_decode("A+").is_err());
    }

    #[test]
    fn empty_digest_matches_known_value() {
        assert_eq!(sha256_b64url(b""), "47DEQpj8HBSa-_TImW-5JCeuQeRkm5NMpJWZG3hSuFU");
    }
}
