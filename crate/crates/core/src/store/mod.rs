//! Content-addressed storage.

mod cid;
mod dir;
mod ipfs;
mod memory;

pub use cid::{compute_cid, Cid, CidParseError, CID_BINARY_LEN};
pub use dir::DirStore;
pub use ipfs::{IpfsHttpStore, SINGLE_BLOCK_LIMIT};
pub use memory::MemoryStore;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StoreError {
    #[error("{0} not found in store")]
    NotFound(Cid),
    #[error("store returned bytes for {actual} when {expected} was requested")]
    IntegrityMismatch { expected: Cid, actual: Cid },
    #[error("payload of {size} bytes exceeds the single-block limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("store backend: {0}")]
    Backend(String),
}

impl StoreError {
    pub fn kind(&self) -> &'static str {
        match self {
            StoreError::NotFound(_) => "NotFound",
            StoreError::IntegrityMismatch { .. } => "IntegrityMismatch",
            StoreError::TooLarge { .. } => "TooLarge",
            StoreError::Backend(_) => "Backend",
        }
    }
}

/// A content-addressed byte store: `get(add(b)) == b`, and `add` of the same
/// bytes always yields the same [`Cid`].
pub trait ContentStore: Send + Sync {
    fn add(&self, content: &[u8]) -> Result<Cid, StoreError>;

    /// Returns bytes whose CID is `cid`, or an error.
    fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError>;

    fn has(&self, cid: &Cid) -> Result<bool, StoreError>;
}

impl<S: ContentStore + ?Sized> ContentStore for &S {
    fn add(&self, content: &[u8]) -> Result<Cid, StoreError> {
        (**self).add(content)
    }

    fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError> {
        (**self).get(cid)
    }

    fn has(&self, cid: &Cid) -> Result<bool, StoreError> {
        (**self).has(cid)
    }
}

impl<S: ContentStore + ?Sized> ContentStore for Box<S> {
    fn add(&self, content: &[u8]) -> Result<Cid, StoreError> {
        (**self).add(content)
    }

    fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError> {
        (**self).get(cid)
    }

    fn has(&self, cid: &Cid) -> Result<bool, StoreError> {
        (**self).has(cid)
    }
}

pub(crate) fn check_integrity(expected: &Cid, bytes: &[u8]) -> Result<(), StoreError> {
    let actual = compute_cid(bytes);
    if actual != *expected {
        return Err(StoreError::IntegrityMismatch {
            expected: *expected,
            actual,
        });
    }
    Ok(())
}
