//! Self-verifiable mutable content items named by did:self identifiers.
//!
//! An item's name is a did:self DID, i.e. an Ed25519 public key. The owner
//! publishes a bundle containing a DID document (naming an assertion key),
//! a proof self-signed by the DID key, metadata signed by the assertion key,
//! and the content itself. The bundle goes into a content-addressed store
//! and a DNSlink TXT record points the DID at its current CID.
//!
//! Consumers who know the DID can resolve, fetch and verify an item without
//! trusting DNS or the store:
//!
//! ```
//! use didself::prelude::*;
//!
//! let owner = KeyPair::from_seed([1; 32]);
//! let assertion = KeyPair::from_seed([2; 32]);
//! let now = Timestamp::parse("2021-06-01T10:00:00Z").unwrap();
//!
//! let raw = create_bundle(&owner, &assertion, b"hello", ProofWindow::open_ended(now), Some(now)).unwrap();
//! let store = MemoryStore::new();
//! let zone = Zone::new();
//! let domain = DnsName::parse("example.org").unwrap();
//! let cid = store.add(&raw).unwrap();
//! publish(&zone, &owner.did(), &domain, &format_record(&cid, None)).unwrap();
//!
//! let item = fetch_and_verify(&zone, &store, &owner.did(), &domain, now, &FreshnessPolicy::NONE).unwrap();
//! assert_eq!(item.content(), b"hello");
//! ```

pub mod bundle;
pub mod cli;
pub mod delegation;
pub mod did;
pub mod encoding;
pub mod error;
pub mod jws;
pub mod naming;
pub mod proof;
pub mod scenarios;
pub mod store;
pub mod time;

pub use error::{Error, Result, VerificationError, VerifyErrorKind};

pub mod prelude {
    pub use crate::bundle::{
        assemble_bundle, create_bundle, create_metadata, parse_bundle, rotate_assertion_key, sign_metadata,
        verify_bundle, Bundle, Metadata, MetadataJws, ProofWindow, VerifiedItem,
    };
    pub use crate::delegation::{host_publish, issue_grant, revoke_by_dns, DelegationGrant};
    pub use crate::did::{
        canonical_bytes, create_document, derive_did, generate_keypair, parse_did, Did, DidDocument, KeyPair,
        DEFAULT_FRAGMENT,
    };
    pub use crate::error::{Error, VerificationError, VerifyErrorKind};
    pub use crate::naming::{
        dnslink_name, fetch_and_verify, format_record, parse_record, publish, resolve, DnsName, DnslinkRecord,
        FetchError, Freshness, FreshnessPolicy, Resolver, Zone,
    };
    pub use crate::proof::{create_proof, verify_document, Proof};
    pub use crate::store::{compute_cid, Cid, ContentStore, MemoryStore, StoreError};
    pub use crate::time::Timestamp;
}
