//! Optional interop against a real IPFS node and real DNS.
//!
//!     DIDSELF_IPFS_API=http://127.0.0.1:5001 cargo run --example live_backends
//!     DIDSELF_NAMESERVER=1.1.1.1 DIDSELF_LIVE_DID=did:self:... \
//!         DIDSELF_LIVE_DOMAIN=example.org cargo run --example live_backends
//!
//! Each part runs only when its variables are set.

use std::time::Duration;

use didself::naming::{DnsClientConfig, DnsTxtClient};
use didself::prelude::*;
use didself::store::IpfsHttpStore;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut ran = false;
    if let Ok(api) = std::env::var("DIDSELF_IPFS_API") {
        ran = true;
        let node = IpfsHttpStore::new(&api, Duration::from_secs(30))?;
        let owner = KeyPair::generate()?;
        let assertion = KeyPair::generate()?;
        let now = Timestamp::now();
        let raw = create_bundle(&owner, &assertion, b"interop check", ProofWindow::open_ended(now), Some(now))?;
        let cid = node.add(&raw)?;
        println!("node stored {cid} (matches local computation: {})", cid == compute_cid(&raw));
        let back = node.get(&cid)?;
        println!("read back and verified: {}", verify_bundle(&owner.did(), &back, now, None).is_ok());
    }
    if let Some(cfg) = DnsClientConfig::from_env()? {
        let (Ok(did), Ok(domain)) = (std::env::var("DIDSELF_LIVE_DID"), std::env::var("DIDSELF_LIVE_DOMAIN")) else {
            return Err("set DIDSELF_LIVE_DID and DIDSELF_LIVE_DOMAIN too".into());
        };
        ran = true;
        let did = parse_did(&did)?;
        let domain = DnsName::parse(&domain)?;
        let client = DnsTxtClient::new(cfg);
        let name = dnslink_name(&did, &domain)?;
        println!("querying {name}");
        for txt in client.lookup_txt(&name)? {
            println!("  TXT {txt:?}");
        }
        match resolve(&client, &did, &domain, Timestamp::now(), None, None) {
            Ok(record) => println!("record points at {}", record.cid()),
            Err(e) => println!("no usable record: {e}"),
        }
    }
    if !ran {
        println!("nothing to do: set DIDSELF_IPFS_API and/or DIDSELF_NAMESERVER (see the file header)");
    }
    Ok(())
}
