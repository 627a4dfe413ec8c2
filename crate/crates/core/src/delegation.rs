//! Content-storage delegation to a hosting service.
//!
//! The owner issues a grant: a DID document whose assertion key is the
//! host's, plus a proof signed by the owner's DID key, usually with an
//! expiry. The host can sign metadata for new content but cannot alter the
//! document or proof. The owner revokes by repointing the DNSlink record,
//! and the expiry cuts the host off entirely once it passes.

use std::fmt;

use crate::bundle::{assemble_bundle, create_metadata, sign_metadata};
use crate::did::{canonical_bytes, create_document, DidDocument, KeyPair, DEFAULT_FRAGMENT};
use crate::error::{Error, Result};
use crate::naming::{format_record, publish, DnsName, DnslinkRecord, Freshness, Zone};
use crate::proof::{create_proof, Proof};
use crate::store::{Cid, ContentStore};
use crate::time::Timestamp;
use crate::did::Did;

/// An owner-signed document naming the host's assertion key. Contains no
/// owner secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelegationGrant {
    document: DidDocument,
    proof: Proof,
}

impl DelegationGrant {
    pub fn new(document: DidDocument, proof: Proof) -> Self {
        DelegationGrant { document, proof }
    }

    pub fn document(&self) -> &DidDocument {
        &self.document
    }

    pub fn proof(&self) -> &Proof {
        &self.proof
    }

    pub fn did(&self) -> &Did {
        self.document.id()
    }

    pub fn expires(&self) -> Option<Timestamp> {
        self.proof.expires()
    }

    /// Grant file: canonical document on the first line, proof JWS on the second.
    pub fn to_file_string(&self) -> String {
        let doc = String::from_utf8(canonical_bytes(&self.document)).expect("canonical JSON is UTF-8");
        format!("{doc}\n{}\n", self.proof)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let (Some(doc), Some(proof), None) = (lines.next(), lines.next(), lines.next()) else {
            return Err(Error::Malformed("grant file must have exactly two lines".into()));
        };
        let document = DidDocument::from_json(doc.trim().as_bytes())?;
        let proof = Proof::parse(proof.trim())?;
        Ok(DelegationGrant { document, proof })
    }
}

impl fmt::Display for DelegationGrant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}

pub fn issue_grant(
    owner: &KeyPair,
    host_assertion_public: &[u8],
    created: Timestamp,
    expires: Timestamp,
) -> Result<DelegationGrant> {
    if expires <= created {
        return Err(Error::BadInterval { created, expires });
    }
    let document = create_document(&owner.did(), host_assertion_public, DEFAULT_FRAGMENT)?;
    let proof = create_proof(&document, &owner.secret(), created, Some(expires))?;
    Ok(DelegationGrant { document, proof })
}

/// The hosting service's publish step: sign metadata for `content` with the
/// host key, wrap it with the grant's document and proof verbatim, store
/// the bundle and point the DNSlink record at it.
///
/// The record carries a freshness timestamp signed with the host key.
#[allow(clippy::too_many_arguments)]
pub fn host_publish<S: ContentStore + ?Sized>(
    grant: &DelegationGrant,
    host_secret: &[u8],
    content: &[u8],
    store: &S,
    zone: &Zone,
    domain: &DnsName,
    now: Timestamp,
) -> Result<Cid> {
    let host = KeyPair::from_secret(host_secret)?;
    if host.public() != grant.document.assertion_key() {
        return Err(Error::KeyMismatch(
            "host secret does not match the grant's assertion key".into(),
        ));
    }
    let meta = create_metadata(grant.did(), content, Some(now));
    let signed = sign_metadata(&meta, host_secret)?;
    let raw = assemble_bundle(&grant.document, &grant.proof, &signed, content);
    let cid = store.add(&raw)?;
    let secret = host.secret();
    let record = format_record(
        &cid,
        Some(Freshness {
            ts: now,
            assertion_secret: &secret,
        }),
    );
    publish(zone, grant.did(), domain, &record)?;
    Ok(cid)
}

/// The owner repoints the DNSlink name, e.g. to a self-hosted bundle or a
/// new host's. Bundles the old host stored remain, but the name no longer
/// leads to them.
pub fn revoke_by_dns(zone: &Zone, did: &Did, domain: &DnsName, new_record: &DnslinkRecord) -> Result<DnsName> {
    Ok(publish(zone, did, domain, new_record)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::VerifyErrorKind;
    use crate::proof::verify_document;
    use crate::encoding::b64url;

    fn t(s: i64) -> Timestamp {
        Timestamp::from_unix(1_622_541_600 + s)
    }

    #[test]
    fn grant_verifies_until_expiry() {
        let owner = KeyPair::from_seed([1; 32]);
        let host = KeyPair::from_seed([2; 32]);
        let grant = issue_grant(&owner, &host.public(), t(0), t(3600)).unwrap();
        assert_eq!(grant.document().assertion_key(), host.public());
        verify_document(&owner.did(), grant.document(), grant.proof(), t(3599)).unwrap();
        let err = verify_document(&owner.did(), grant.document(), grant.proof(), t(3600)).unwrap_err();
        assert_eq!(err.kind, VerifyErrorKind::Expired);
    }

    #[test]
    fn grant_interval_must_be_positive() {
        let owner = KeyPair::from_seed([1; 32]);
        assert!(matches!(
            issue_grant(&owner, &[2; 32], t(10), t(10)),
            Err(Error::BadInterval { .. })
        ));
    }

    #[test]
    fn grant_file_round_trip_has_no_owner_secret() {
        let owner = KeyPair::from_seed([1; 32]);
        let host = KeyPair::from_seed([2; 32]);
        let grant = issue_grant(&owner, &host.public(), t(0), t(60)).unwrap();
        let text = grant.to_file_string();
        assert_eq!(text.lines().count(), 2);
        assert!(!text.contains(&b64url(&owner.secret())));
        assert_eq!(DelegationGrant::parse(&text).unwrap(), grant);
        assert!(DelegationGrant::parse(text.lines().next().unwrap()).is_err());
    }

    #[test]
    fn host_key_must_match_grant() {
        let owner = KeyPair::from_seed([1; 32]);
        let host = KeyPair::from_seed([2; 32]);
        let grant = issue_grant(&owner, &host.public(), t(0), t(60)).unwrap();
        let store = crate::store::MemoryStore::new();
        let zone = Zone::new();
        let domain = DnsName::parse("example.org").unwrap();
        let err = host_publish(&grant, &[3; 32], b"x", &store, &zone, &domain, t(1));
        assert!(matches!(err, Err(Error::KeyMismatch(_))));
        assert!(store.is_empty() && zone.is_empty());
    }
}
