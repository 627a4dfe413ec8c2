//! Wrap content into a bundle, inspect its parts, and verify it.
//!
//!     cargo run --example create_and_verify

use std::time::Duration;

use didself::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owner = KeyPair::generate()?;
    let assertion = KeyPair::generate()?;
    let now = Timestamp::now();

    let window = ProofWindow::lasting(now, Duration::from_secs(30 * 24 * 3600));
    let raw = create_bundle(&owner, &assertion, b"Hello, IPFS!\n", window, Some(now))?;

    let bundle = parse_bundle(&raw)?;
    let h = &bundle.header;
    println!("DID       {}", h.did);
    println!("document  {}", String::from_utf8_lossy(&canonical_bytes(&h.document)));
    println!("proof     {}", h.proof.as_str());
    println!("metadata  {}", h.metadata_jws.as_str());
    println!("CID       {}", compute_cid(&raw));

    let item = verify_bundle(&owner.did(), &raw, now, None)?;
    println!("verified  {:?}", String::from_utf8_lossy(item.content()));

    // The same bytes under a different expected DID, after expiry, or with
    // one flipped content byte are all rejected.
    let stranger = KeyPair::generate()?.did();
    println!("other DID -> {}", verify_bundle(&stranger, &raw, now, None).unwrap_err());
    let later = now.plus(Duration::from_secs(31 * 24 * 3600));
    println!("expired   -> {}", verify_bundle(&owner.did(), &raw, later, None).unwrap_err());
    let mut tampered = raw.clone();
    *tampered.last_mut().unwrap() ^= 0x20;
    println!("tampered  -> {}", verify_bundle(&owner.did(), &tampered, now, None).unwrap_err());
    Ok(())
}
