//! Client for a Kubo-compatible IPFS node over its HTTP RPC API.
//!
//! Endpoints used (all `POST`, rooted at the configured API address):
//!
//! - `/api/v0/add?cid-version=1&raw-leaves=true&hash=sha2-256&pin=true` with a
//!   multipart `file` field; the JSON reply's `Hash` is the CID.
//! - `/api/v0/cat?arg=<cid>&offline=true` returns the raw bytes.
//! - `/api/v0/block/stat?arg=<cid>&offline=true` answers `has`.

use std::time::Duration;

use reqwest::blocking::{multipart, Client, Response};
use serde::Deserialize;

use super::{check_integrity, compute_cid, Cid, ContentStore, StoreError};

/// Largest payload a node stores as a single raw block under its default
/// chunker. Larger adds would be chunked into a DAG with a different CID.
pub const SINGLE_BLOCK_LIMIT: usize = 256 * 1024;

#[derive(Debug, Clone)]
pub struct IpfsHttpStore {
    api: String,
    client: Client,
}

#[derive(Deserialize)]
struct AddReply {
    #[serde(rename = "Hash")]
    hash: String,
}

#[derive(Deserialize)]
struct ErrorReply {
    #[serde(rename = "Message")]
    message: String,
}

impl IpfsHttpStore {
    /// `api` is the node's RPC address, e.g. `http://127.0.0.1:5001`.
    pub fn new(api: &str, timeout: Duration) -> Result<Self, StoreError> {
        let client = Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| StoreError::Backend(e.to_string()))?;
        Ok(IpfsHttpStore {
            api: api.trim_end_matches('/').to_owned(),
            client,
        })
    }

    pub fn api(&self) -> &str {
        &self.api
    }

    fn url(&self, path: &str) -> String {
        format!("{}/api/v0/{path}", self.api)
    }

    fn error_message(resp: Response) -> String {
        let status = resp.status();
        let body = resp.text().unwrap_or_default();
        match serde_json::from_str::<ErrorReply>(&body) {
            Ok(e) => format!("{status}: {}", e.message),
            Err(_) => format!("{status}: {}", body.trim()),
        }
    }
}

fn transport(e: reqwest::Error) -> StoreError {
    StoreError::Backend(e.to_string())
}

impl ContentStore for IpfsHttpStore {
    fn add(&self, content: &[u8]) -> Result<Cid, StoreError> {
        if content.len() > SINGLE_BLOCK_LIMIT {
            return Err(StoreError::TooLarge {
                size: content.len(),
                limit: SINGLE_BLOCK_LIMIT,
            });
        }
        let expected = compute_cid(content);
        let part = multipart::Part::bytes(content.to_vec()).file_name("item");
        let form = multipart::Form::new().part("file", part);
        let resp = self
            .client
            .post(self.url("add"))
            .query(&[
                ("cid-version", "1"),
                ("raw-leaves", "true"),
                ("hash", "sha2-256"),
                ("pin", "true"),
            ])
            .multipart(form)
            .send()
            .map_err(transport)?;
        if !resp.status().is_success() {
            return Err(StoreError::Backend(Self::error_message(resp)));
        }
        let reply: AddReply = resp.json().map_err(transport)?;
        let actual: Cid = reply
            .hash
            .parse()
            .map_err(|e| StoreError::Backend(format!("node returned {e}")))?;
        if actual != expected {
            return Err(StoreError::IntegrityMismatch { expected, actual });
        }
        Ok(actual)
    }

    fn get(&self, cid: &Cid) -> Result<Vec<u8>, StoreError> {
        let resp = self
            .client
            .post(self.url("cat"))
            .query(&[("arg", cid.to_string().as_str()), ("offline", "true")])
            .send()
            .map_err(transport)?;
        if !resp.status().is_success() {
            let msg = Self::error_message(resp);
            if msg.contains("not found") {
                return Err(StoreError::NotFound(*cid));
            }
            return Err(StoreError::Backend(msg));
        }
        let bytes = resp.bytes().map_err(transport)?.to_vec();
        check_integrity(cid, &bytes)?;
        Ok(bytes)
    }

    fn has(&self, cid: &Cid) -> Result<bool, StoreError> {
        let resp = self
            .client
            .post(self.url("block/stat"))
            .query(&[("arg", cid.to_string().as_str()), ("offline", "true")])
            .send()
            .map_err(transport)?;
        if resp.status().is_success() {
            return Ok(true);
        }
        let msg = Self::error_message(resp);
        if msg.contains("not found") {
            Ok(false)
        } else {
            Err(StoreError::Backend(msg))
        }
    }
}
