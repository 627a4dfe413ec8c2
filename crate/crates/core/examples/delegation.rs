//! Let a hosting service publish under the owner's DID, then take the name
//! back.
//!
//!     cargo run --example delegation

use std::time::Duration;

use didself::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owner = KeyPair::generate()?;
    let host = KeyPair::generate()?;
    let store = MemoryStore::new();
    let zone = Zone::new();
    let domain = DnsName::parse("hosting.example")?;
    let now = Timestamp::now();
    let expires = now.plus(Duration::from_secs(7 * 24 * 3600));

    // The owner certifies the host's public key; no secret changes hands.
    let grant = issue_grant(&owner, &host.public(), now, expires)?;
    println!("grant file:\n{}", grant.to_file_string());

    let cid = host_publish(&grant, &host.secret(), b"hosted page", &store, &zone, &domain, now)?;
    println!("host published {cid}");
    let item = fetch_and_verify(&zone, &store, &owner.did(), &domain, now, &FreshnessPolicy::both(Duration::from_secs(600)))?;
    println!("consumer got {:?} under {}", String::from_utf8_lossy(item.content()), item.did());

    // The host cannot extend its own reach past the grant.
    match fetch_and_verify(&zone, &store, &owner.did(), &domain, expires, &FreshnessPolicy::NONE) {
        Err(e) => println!("at expiry: {} ({e})", e.kind()),
        Ok(_) => println!("at expiry: unexpectedly accepted"),
    }

    // Revocation: the owner points the name at a bundle of their own.
    let mine = KeyPair::generate()?;
    let raw = create_bundle(&owner, &mine, b"self hosted again", ProofWindow::open_ended(now), Some(now))?;
    let own_cid = store.add(&raw)?;
    revoke_by_dns(&zone, &owner.did(), &domain, &format_record(&own_cid, None))?;
    let item = fetch_and_verify(&zone, &store, &owner.did(), &domain, now, &FreshnessPolicy::NONE)?;
    println!("after revocation: {:?}", String::from_utf8_lossy(item.content()));
    Ok(())
}
