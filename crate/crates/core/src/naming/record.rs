use std::fmt;
use std::time::Duration;

use ed25519_dalek::{Signature, Signer, VerifyingKey};

use super::NamingError;
use crate::did::KeyPair;
use crate::encoding::{b64url, b64url_decode_array};
use crate::store::Cid;
use crate::time::Timestamp;

const PREFIX: &str = "dnslink=";
const IPFS_NS: &str = "/ipfs/";

/// A DNSlink TXT record: `dnslink=/ipfs/<cid>`, optionally followed by
/// ` ts=<unix seconds> sig=<base64url>`. The signature covers the bytes of
/// `dnslink=/ipfs/<cid> ts=<unix seconds>`.
#[derive(Clone, PartialEq, Eq)]
pub struct DnslinkRecord {
    cid: Cid,
    ts: Option<i64>,
    sig: Option<[u8; 64]>,
}

/// Timestamp and assertion key used to sign a record's freshness suffix.
#[derive(Debug, Clone, Copy)]
pub struct Freshness<'a> {
    pub ts: Timestamp,
    pub assertion_secret: &'a [u8; 32],
}

impl DnslinkRecord {
    pub fn cid(&self) -> &Cid {
        &self.cid
    }

    pub fn ts(&self) -> Option<Timestamp> {
        self.ts.map(Timestamp::from_unix)
    }

    pub fn is_signed(&self) -> bool {
        self.sig.is_some()
    }

    /// `dnslink=/ipfs/<cid>`
    pub fn value(&self) -> String {
        format!("{PREFIX}{IPFS_NS}{}", self.cid)
    }

    fn signing_input(&self, ts: i64) -> String {
        format!("{} ts={ts}", self.value())
    }

    pub fn to_txt(&self) -> String {
        let mut out = self.value();
        if let Some(ts) = self.ts {
            out.push_str(&format!(" ts={ts}"));
        }
        if let Some(sig) = &self.sig {
            out.push_str(&format!(" sig={}", b64url(sig)));
        }
        out
    }

    pub(crate) fn check_age(&self, now: Timestamp, max_age: Duration) -> Result<(), NamingError> {
        let ts = self
            .ts()
            .ok_or_else(|| NamingError::Stale("record carries no timestamp".into()))?;
        if now.is_older_than(ts, max_age) {
            return Err(NamingError::Stale(format!(
                "record timestamp {ts} is older than {}s",
                max_age.as_secs()
            )));
        }
        Ok(())
    }

    /// Checks the freshness signature under an assertion public key.
    pub fn check_signature(&self, assertion_public: &[u8; 32]) -> Result<(), NamingError> {
        let (Some(ts), Some(sig)) = (self.ts, self.sig.as_ref()) else {
            return Err(NamingError::SignatureInvalid("record is not signed".into()));
        };
        let key = VerifyingKey::from_bytes(assertion_public)
            .map_err(|_| NamingError::SignatureInvalid("assertion key is not a valid point".into()))?;
        key.verify_strict(self.signing_input(ts).as_bytes(), &Signature::from_bytes(sig))
            .map_err(|_| NamingError::SignatureInvalid("signature does not verify".into()))
    }
}

impl fmt::Display for DnslinkRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_txt())
    }
}

impl fmt::Debug for DnslinkRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnslinkRecord({})", self.to_txt())
    }
}

pub fn format_record(cid: &Cid, freshness: Option<Freshness<'_>>) -> DnslinkRecord {
    let mut record = DnslinkRecord {
        cid: *cid,
        ts: None,
        sig: None,
    };
    if let Some(f) = freshness {
        let ts = f.ts.unix();
        let key = KeyPair::from_seed(*f.assertion_secret);
        let sig = key.signing_key().sign(record.signing_input(ts).as_bytes());
        record.ts = Some(ts);
        record.sig = Some(sig.to_bytes());
    }
    record
}

fn parse_ts(s: &str) -> Option<i64> {
    let canonical = !s.is_empty()
        && s.bytes().all(|b| b.is_ascii_digit())
        && (s == "0" || !s.starts_with('0'));
    if canonical {
        s.parse().ok()
    } else {
        None
    }
}

pub fn parse_record(txt: &str) -> Result<DnslinkRecord, NamingError> {
    let malformed = || NamingError::Malformed(txt.to_owned());
    let address = txt.strip_prefix(PREFIX).ok_or_else(malformed)?;
    let mut fields = address.split(' ');
    let path = fields.next().ok_or_else(malformed)?;
    let Some(cid_str) = path.strip_prefix(IPFS_NS) else {
        if path.starts_with("/ipns/") || path.starts_with('/') {
            return Err(NamingError::UnsupportedAddress(path.to_owned()));
        }
        return Err(malformed());
    };
    let cid: Cid = cid_str.parse().map_err(|_| malformed())?;
    let mut record = DnslinkRecord { cid, ts: None, sig: None };
    match (fields.next(), fields.next(), fields.next()) {
        (None, _, _) => {}
        (Some(ts), sig, None) => {
            let ts = ts.strip_prefix("ts=").and_then(parse_ts).ok_or_else(malformed)?;
            record.ts = Some(ts);
            if let Some(sig) = sig {
                let sig = sig
                    .strip_prefix("sig=")
                    .and_then(b64url_decode_array::<64>)
                    .ok_or_else(malformed)?;
                record.sig = Some(sig);
            }
        }
        _ => return Err(malformed()),
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::compute_cid;

    fn cid() -> Cid {
        compute_cid(b"bundle")
    }

    #[test]
    fn plain_record() {
        let r = format_record(&cid(), None);
        assert_eq!(r.to_txt(), format!("dnslink=/ipfs/{}", cid()));
        assert_eq!(parse_record(&r.to_txt()).unwrap(), r);
        assert!(!r.is_signed());
    }

    #[test]
    fn signed_record_round_trip() {
        let key = KeyPair::from_seed([3; 32]);
        let secret = key.secret();
        let r = format_record(
            &cid(),
            Some(Freshness {
                ts: Timestamp::from_unix(1_622_541_600),
                assertion_secret: &secret,
            }),
        );
        let txt = r.to_txt();
        assert!(txt.starts_with(&format!("dnslink=/ipfs/{} ts=1622541600 sig=", cid())));
        let parsed = parse_record(&txt).unwrap();
        assert_eq!(parsed, r);
        parsed.check_signature(&key.public()).unwrap();
        assert!(parsed.check_signature(&KeyPair::from_seed([4; 32]).public()).is_err());
    }

    #[test]
    fn altered_timestamp_digit_breaks_signature() {
        let key = KeyPair::from_seed([3; 32]);
        let secret = key.secret();
        let txt = format_record(
            &cid(),
            Some(Freshness {
                ts: Timestamp::from_unix(1_622_541_600),
                assertion_secret: &secret,
            }),
        )
        .to_txt();
        let altered = txt.replace("ts=1622541600", "ts=1622541601");
        let parsed = parse_record(&altered).unwrap();
        assert!(matches!(parsed.check_signature(&key.public()), Err(NamingError::SignatureInvalid(_))));
    }

    #[test]
    fn rejections() {
        assert!(matches!(parse_record("hello=world"), Err(NamingError::Malformed(_))));
        assert!(matches!(
            parse_record("dnslink=/ipns/QmYwAPJzv5CZsnA625s3Xf2nemtYgPpHdWEz79ojWnPbdG"),
            Err(NamingError::UnsupportedAddress(_))
        ));
        assert!(matches!(
            parse_record("dnslink=/ipns/example.com"),
            Err(NamingError::UnsupportedAddress(_))
        ));
        let c = cid();
        for bad in [
            format!("dnslink=/ipfs/{c} ts=01"),
            format!("dnslink=/ipfs/{c} ts=-1"),
            format!("dnslink=/ipfs/{c} ts=1 sig=abc"),
            format!("dnslink=/ipfs/{c} sig=abc"),
            format!("dnslink=/ipfs/{c}  ts=1"),
            format!("dnslink=/ipfs/{c} ts=1 sig=x extra"),
            "dnslink=/ipfs/notacid".to_owned(),
        ] {
            assert!(matches!(parse_record(&bad), Err(NamingError::Malformed(_))), "{bad}");
        }
    }

    #[test]
    fn age_check_boundary() {
        let r = parse_record(&format!("dnslink=/ipfs/{} ts=1000", cid())).unwrap();
        let max = Duration::from_secs(100);
        r.check_age(Timestamp::from_unix(1100), max).unwrap();
        assert!(matches!(r.check_age(Timestamp::from_unix(1101), max), Err(NamingError::Stale(_))));
        let untimed = format_record(&cid(), None);
        assert!(matches!(untimed.check_age(Timestamp::from_unix(0), max), Err(NamingError::Stale(_))));
    }
}
