//! Rotate the assertion key of an item without changing its DID.
//!
//!     cargo run --example key_rotation

use std::time::Duration;

use didself::prelude::*;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owner = KeyPair::generate()?;
    let old_key = KeyPair::generate()?;
    let new_key = KeyPair::generate()?;
    let t0 = Timestamp::now();
    let t1 = t0.plus(Duration::from_secs(3600));
    let content = b"long-lived item";

    let before = create_bundle(&owner, &old_key, content, ProofWindow::lasting(t0, Duration::from_secs(86_400)), Some(t0))?;
    let old = parse_bundle(&before)?;
    let after = rotate_assertion_key(&old, &new_key.public(), &owner.secret(), content, &new_key.secret(), t1)?;
    let new = parse_bundle(&after)?;

    println!("DID before  {}", old.header.did);
    println!("DID after   {}", new.header.did);
    println!("CID before  {}", compute_cid(&before));
    println!("CID after   {}", compute_cid(&after));
    println!("verifies    {}", verify_bundle(&owner.did(), &after, t1, None).is_ok());

    // Someone still holding the old key signs new metadata and pairs it
    // with the current document: rejected.
    let meta = sign_metadata(&create_metadata(&owner.did(), b"forged", Some(t1)), &old_key.secret())?;
    let forged = assemble_bundle(&new.header.document, &new.header.proof, &meta, b"forged");
    println!("old key     {}", verify_bundle(&owner.did(), &forged, t1, None).unwrap_err());

    // Paired with the old document it still verifies until that proof
    // expires, which is why rotation is combined with short proof lifetimes.
    let meta = sign_metadata(&create_metadata(&owner.did(), b"forged", Some(t1)), &old_key.secret())?;
    let replayed = assemble_bundle(&old.header.document, &old.header.proof, &meta, b"forged");
    println!("old doc now {:?}", verify_bundle(&owner.did(), &replayed, t1, None).map(|_| "accepted"));
    let expired = t0.plus(Duration::from_secs(86_400));
    println!("old doc at expiry {}", verify_bundle(&owner.did(), &replayed, expired, None).unwrap_err());
    Ok(())
}
