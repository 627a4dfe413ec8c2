//! CIDs as a real IPFS node computes them for raw single-block adds.
//!
//!     cargo run --example cid_interop [-- FILE...]
//!
//! Compare with `ipfs add --only-hash --cid-version=1 --raw-leaves FILE`.

use didself::prelude::*;
use didself::store::SINGLE_BLOCK_LIMIT;

fn main() -> std::io::Result<()> {
    let files: Vec<String> = std::env::args().skip(1).collect();
    if files.is_empty() {
        for (label, bytes) in [("empty", Vec::new()), ("\"a\"", b"a".to_vec())] {
            let cid = compute_cid(&bytes);
            println!("{label:<8} {cid}");
            println!("         binary {}", hex(&cid.to_bytes()));
        }
        return Ok(());
    }
    for f in files {
        let bytes = std::fs::read(&f)?;
        let note = if bytes.len() > SINGLE_BLOCK_LIMIT { "  (node would chunk this; CID will differ)" } else { "" };
        println!("{}  {f}{note}", compute_cid(&bytes));
    }
    Ok(())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
