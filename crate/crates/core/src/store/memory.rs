use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::{compute_cid, Cid, ContentStore, StoreError};

/// In-process store. Entries are keyed by their computed CID, so a `get`
/// can only ever return matching bytes.
#[derive(Debug, Default)]
pub struct MemoryStore {
    blocks: RwLock<HashMap<Cid, Arc<[u8]>>>,
}

impl MemoryStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.blocks.read().expect("store lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ContentStore for MemoryStore {
    fn add(&self, content: &[u8]) -> Result<Cid, StoreError> {
        let cid = compute_cid(content);
        self.blocks
            .write()
            .expect("store lock")
            .entry(cid)
            .or_insert_with(|| Arc::from(content));
        Ok(cid)
    }

    fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError> {
        self.blocks
            .read()
            .expect("store lock")
            .get(cid)
            .map(|b| b.to_vec())
            .ok_or(StoreError::NotFound(*cid))
    }

    fn has(&self, cid: &Cid) -> Result<bool, StoreError> {
        Ok(self.blocks.read().expect("store lock").contains_key(cid))
    }
}
