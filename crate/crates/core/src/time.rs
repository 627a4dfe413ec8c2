//! Second-precision UTC timestamps rendered as `YYYY-MM-DDTHH:MM:SSZ`.

use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

const FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub const fn from_unix(secs: i64) -> Self {
        Timestamp(secs)
    }

    pub fn now() -> Self {
        Timestamp(Utc::now().timestamp())
    }

    pub const fn unix(self) -> i64 {
        self.0
    }

    /// Strict parse: the input must be exactly the canonical rendering.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let naive = NaiveDateTime::parse_from_str(s, FORMAT)
            .map_err(|e| Error::Malformed(format!("timestamp {s:?}: {e}")))?;
        let ts = Timestamp(naive.and_utc().timestamp());
        if ts.to_string() != s {
            return Err(Error::Malformed(format!("timestamp {s:?} is not canonical")));
        }
        Ok(ts)
    }

    pub fn plus(self, d: Duration) -> Self {
        Timestamp(self.0.saturating_add(d.as_secs() as i64))
    }

    pub fn minus(self, d: Duration) -> Self {
        Timestamp(self.0.saturating_sub(d.as_secs() as i64))
    }

    /// Signed difference `self - earlier` in seconds.
    pub fn seconds_since(self, earlier: Timestamp) -> i64 {
        self.0.saturating_sub(earlier.0)
    }

    /// Whether `self` is more than `max_age` after `created`.
    pub fn is_older_than(self, created: Timestamp, max_age: Duration) -> bool {
        i128::from(self.0) - i128::from(created.0) > i128::from(max_age.as_secs())
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match DateTime::<Utc>::from_timestamp(self.0, 0) {
            Some(dt) => write!(f, "{}", dt.format(FORMAT)),
            None => write!(f, "@{}", self.0),
        }
    }
}

impl fmt::Debug for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Timestamp({self})")
    }
}

impl FromStr for Timestamp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Timestamp::parse(s)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Timestamp::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_and_parses() {
        let t = Timestamp::parse("2021-06-01T10:00:00Z").unwrap();
        assert_eq!(t.unix(), 1_622_541_600);
        assert_eq!(t.to_string(), "2021-06-01T10:00:00Z");
    }

    #[test]
    fn rejects_non_canonical_forms() {
        for s in [
            "2021-06-01T10:00:00",
            "2021-06-01 10:00:00Z",
            "2021-06-01T10:00:00.5Z",
            "2021-6-01T10:00:00Z",
            "2021-06-01T10:00:00+00:00",
        ] {
            assert!(Timestamp::parse(s).is_err(), "{s}");
        }
    }

    #[test]
    fn age_boundary() {
        let created = Timestamp::from_unix(1000);
        let max = Duration::from_secs(60);
        assert!(!Timestamp::from_unix(1060).is_older_than(created, max));
        assert!(Timestamp::from_unix(1061).is_older_than(created, max));
    }
}
