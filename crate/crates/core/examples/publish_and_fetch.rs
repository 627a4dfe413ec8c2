//! The publish/resolve/fetch cycle over an in-memory store and zone,
//! including an update that moves the name to a new CID.
//!
//!     cargo run --example publish_and_fetch

use didself::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owner = KeyPair::generate()?;
    let assertion = KeyPair::generate()?;
    let store = MemoryStore::new();
    let zone = Zone::new();
    let domain = DnsName::parse("example.org")?;
    let did = owner.did();

    for version in ["first edition", "second edition"] {
        let now = Timestamp::now();
        let raw = create_bundle(&owner, &assertion, version.as_bytes(), ProofWindow::open_ended(now), Some(now))?;
        let cid = store.add(&raw)?;
        let name = publish(&zone, &did, &domain, &format_record(&cid, None))?;
        println!("published {cid}");
        println!("  {name} TXT {:?}", zone.txt(&name)[0]);

        let item = fetch_and_verify(&zone, &store, &did, &domain, now, &FreshnessPolicy::NONE)?;
        println!("  fetched  {:?}", String::from_utf8_lossy(item.content()));
    }

    println!("\nzone file:\n{}", zone.to_zone_file());
    Ok(())
}
