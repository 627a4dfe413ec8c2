//! Replay of an old DNS record, with and without freshness checks.
//!
//!     cargo run --example freshness

use std::time::Duration;

use didself::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owner = KeyPair::generate()?;
    let assertion = KeyPair::generate()?;
    let secret = assertion.secret();
    let store = MemoryStore::new();
    let zone = Zone::new();
    let domain = DnsName::parse("example.org")?;
    let did = owner.did();

    let t0 = Timestamp::now();
    let t1 = t0.plus(Duration::from_secs(6 * 3600));
    let mut records = Vec::new();
    for (at, text) in [(t0, "old price list"), (t1, "new price list")] {
        let raw = create_bundle(&owner, &assertion, text.as_bytes(), ProofWindow::open_ended(at), Some(at))?;
        let cid = store.add(&raw)?;
        let record = format_record(&cid, Some(Freshness { ts: at, assertion_secret: &secret }));
        publish(&zone, &did, &domain, &record)?;
        records.push(record);
    }
    println!("signed record: {}", records[1].to_txt());

    // Someone with write access to the zone puts the old record back.
    publish(&zone, &did, &domain, &records[0])?;
    let now = t1.plus(Duration::from_secs(60));

    let lax = fetch_and_verify(&zone, &store, &did, &domain, now, &FreshnessPolicy::NONE)?;
    println!("without freshness: accepted {:?}", String::from_utf8_lossy(lax.content()));

    let strict = FreshnessPolicy::both(Duration::from_secs(3600));
    match fetch_and_verify(&zone, &store, &did, &domain, now, &strict) {
        Err(e) => println!("with a 1 h window: rejected, {} ({e})", e.kind()),
        Ok(item) => println!("with a 1 h window: accepted {:?}", String::from_utf8_lossy(item.content())),
    }
    Ok(())
}
