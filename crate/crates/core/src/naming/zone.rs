use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io;
use std::path::Path;
use std::sync::{Arc, RwLock};

use super::{dnslink_name, DnsName, DnslinkRecord, NamingError, Resolver};
use crate::did::Did;

/// In-memory authoritative TXT data.
///
/// Each name's record list is replaced as a unit, so readers see either the
/// old or the new list. Holding a `&Zone` is what "write access to the DNS
/// server" means in this crate.
#[derive(Debug, Default)]
pub struct Zone {
    entries: RwLock<HashMap<DnsName, Arc<Vec<String>>>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ZoneFileError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Zone {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_txt(&self, name: &DnsName, records: Vec<String>) {
        let mut entries = self.entries.write().expect("zone lock");
        if records.is_empty() {
            entries.remove(name);
        } else {
            entries.insert(name.clone(), Arc::new(records));
        }
    }

    pub fn txt(&self, name: &DnsName) -> Vec<String> {
        self.entries
            .read()
            .expect("zone lock")
            .get(name)
            .map(|r| r.as_ref().clone())
            .unwrap_or_default()
    }

    pub fn remove(&self, name: &DnsName) {
        self.entries.write().expect("zone lock").remove(name);
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("zone lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// An independent copy of the current contents.
    pub fn snapshot(&self) -> Zone {
        Zone {
            entries: RwLock::new(self.entries.read().expect("zone lock").clone()),
        }
    }

    /// Parses the line-oriented fixture format:
    /// `<dns-name> TXT "<record-string>"`, with `#` comments and blank lines.
    pub fn parse_zone_file(text: &str) -> Result<Zone, ZoneFileError> {
        let mut grouped: BTreeMap<DnsName, Vec<String>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |reason: &str| ZoneFileError::Syntax {
                line: idx + 1,
                reason: reason.to_owned(),
            };
            let (name, rest) = line.split_once(char::is_whitespace).ok_or_else(|| syntax("expected name"))?;
            let rest = rest.trim_start();
            let rest = rest
                .strip_prefix("TXT")
                .filter(|r| r.starts_with(char::is_whitespace))
                .ok_or_else(|| syntax("expected TXT"))?;
            let value = parse_quoted(rest.trim()).ok_or_else(|| syntax("expected one quoted string"))?;
            let name = DnsName::parse(name).map_err(|e| syntax(&e.to_string()))?;
            grouped.entry(name).or_default().push(value);
        }
        let zone = Zone::new();
        for (name, records) in grouped {
            zone.set_txt(&name, records);
        }
        Ok(zone)
    }

    /// Renders the zone in the fixture format, sorted by name.
    pub fn to_zone_file(&self) -> String {
        let entries = self.entries.read().expect("zone lock");
        let sorted: BTreeMap<&DnsName, &Arc<Vec<String>>> = entries.iter().collect();
        let mut out = String::new();
        for (name, records) in sorted {
            for r in records.iter() {
                out.push_str(&format!("{name} TXT \"{}\"\n", escape(r)));
            }
        }
        out
    }

    pub fn load(path: &Path) -> Result<Zone, ZoneFileError> {
        match fs::read_to_string(path) {
            Ok(text) => Zone::parse_zone_file(&text),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Zone::new()),
            Err(e) => Err(e.into()),
        }
    }

    /// Writes the zone file via a temporary file and rename.
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let tmp = path.with_extension("zone.tmp");
        fs::write(&tmp, self.to_zone_file())?;
        fs::rename(tmp, path)
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn parse_quoted(s: &str) -> Option<String> {
    let inner = s.strip_prefix('"')?.strip_suffix('"')?;
    let mut out = String::with_capacity(inner.len());
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => out.push(chars.next()?),
            '"' => return None,
            c => out.push(c),
        }
    }
    Some(out)
}

impl Resolver for Zone {
    fn lookup_txt(&self, name: &DnsName) -> Result<Vec<String>, NamingError> {
        Ok(self.txt(name))
    }
}

/// Replaces the TXT list at `did`'s DNSlink name with `record`.
pub fn publish(zone: &Zone, did: &Did, domain: &DnsName, record: &DnslinkRecord) -> Result<DnsName, NamingError> {
    let name = dnslink_name(did, domain)?;
    zone.set_txt(&name, vec![record.to_txt()]);
    Ok(name)
}
