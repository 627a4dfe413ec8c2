//! Component sizes and per-operation timings on this machine.
//!
//!     cargo run --release --example measurements

use std::hint::black_box;
use std::time::Instant;

use didself::prelude::*;

fn time_us(n: u32, mut op: impl FnMut()) -> f64 {
    let start = Instant::now();
    for _ in 0..n {
        op();
    }
    start.elapsed().as_secs_f64() * 1e6 / n as f64
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let owner = KeyPair::generate()?;
    let assertion = KeyPair::generate()?;
    let now = Timestamp::now();
    let did = owner.did();

    for (label, window, created) in [
        ("minimal", ProofWindow::open_ended(now), None),
        ("with expiry and timestamp", ProofWindow::lasting(now, std::time::Duration::from_secs(86_400)), Some(now)),
    ] {
        let raw = create_bundle(&owner, &assertion, b"", window, created)?;
        let h = parse_bundle(&raw)?.header;
        println!(
            "{label:<26} document {} B, proof {} B, metadata+signature {} B, header line {} B",
            canonical_bytes(&h.document).len(),
            h.proof.as_str().len(),
            h.metadata_jws.as_str().len(),
            raw.len() - 1
        );
    }

    let doc = create_document(&did, &assertion.public(), DEFAULT_FRAGMENT)?;
    let proof = create_proof(&doc, &owner.secret(), now, None)?;
    let meta = create_metadata(&did, b"content", Some(now));
    let signed = sign_metadata(&meta, &assertion.secret())?;
    let key = assertion.public();
    let n = 2000;
    println!();
    println!("key pair generation       {:>8.1} us", time_us(n, || drop(black_box(KeyPair::generate().unwrap()))));
    println!(
        "document + proof          {:>8.1} us",
        time_us(n, || {
            let d = create_document(&did, &key, DEFAULT_FRAGMENT).unwrap();
            black_box(create_proof(&d, &owner.secret(), now, None).unwrap());
        })
    );
    println!("metadata JWS signing      {:>8.1} us", time_us(n, || drop(black_box(sign_metadata(&meta, &assertion.secret()).unwrap()))));
    println!("document verification     {:>8.1} us", time_us(n, || verify_document(&did, &doc, &proof, now).unwrap()));
    println!("metadata JWS verification {:>8.1} us", time_us(n, || assert!(black_box(&signed).verify(&key))));
    Ok(())
}
