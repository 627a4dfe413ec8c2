//! Scripted adversary scenarios.
//!
//! Each run sets up an honest owner who publishes two versions of an item,
//! gives an attacker a set of capabilities, lets the attacker try a forgery
//! and a replay of the old version, and records what a consumer fetching
//! through DNS ends up accepting. The outcome class is read back from the
//! transcript.

use std::fmt;
use std::time::Duration;

use bitflags::bitflags;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bundle::{assemble_bundle, create_bundle, create_metadata, parse_bundle, sign_metadata, ProofWindow};
use crate::did::{create_document, KeyPair, DEFAULT_FRAGMENT};
use crate::naming::{
    dnslink_name, fetch_and_verify, format_record, publish, DnsName, DnslinkRecord, Freshness, FreshnessPolicy,
    Resolver, Zone,
};
use crate::proof::create_proof;
use crate::store::{ContentStore, MemoryStore};
use crate::time::Timestamp;

bitflags! {
    /// What the attacker can do.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
    pub struct AttackerCapability: u8 {
        /// Holds the owner's current assertion (metadata signing) secret.
        const ASSERTION_KEY_LEAK = 0b0001;
        /// Holds the owner's DID secret.
        const DID_KEY_LEAK = 0b0010;
        /// Can rewrite the owner's DNS zone.
        const ZONE_WRITE = 0b0100;
        /// Can rewrite DNS answers on the way to the consumer.
        const RESOLUTION_TAMPER = 0b1000;
    }
}

impl AttackerCapability {
    pub fn has_key_path(self) -> bool {
        self.intersects(Self::ASSERTION_KEY_LEAK | Self::DID_KEY_LEAK)
    }

    pub fn has_dissemination_path(self) -> bool {
        self.intersects(Self::ZONE_WRITE | Self::RESOLUTION_TAMPER)
    }

    /// All 16 subsets, in bit order.
    pub fn power_set() -> impl Iterator<Item = AttackerCapability> {
        (0..=Self::all().bits()).map(Self::from_bits_truncate)
    }
}

impl fmt::Display for AttackerCapability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        let names: Vec<&str> = self.iter_names().map(|(n, _)| n).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

/// Ordered by severity, least severe first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeClass {
    /// The consumer only ever received the current genuine item.
    AllRejected,
    /// At least one attack made the consumer reject what it was served.
    DenialOfService,
    /// The consumer accepted an older genuine version.
    StaleAccepted,
    /// The consumer accepted attacker-chosen content.
    ForgeryAccepted,
}

impl OutcomeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeClass::AllRejected => "AllRejected",
            OutcomeClass::DenialOfService => "DenialOfService",
            OutcomeClass::StaleAccepted => "StaleAccepted",
            OutcomeClass::ForgeryAccepted => "ForgeryAccepted",
        }
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Actor {
    Owner,
    Attacker,
    Consumer,
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Actor::Owner => "owner",
            Actor::Attacker => "attacker",
            Actor::Consumer => "consumer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub at: Timestamp,
    pub actor: Actor,
    pub action: String,
    pub result: String,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.at, self.actor, self.action, self.result)
    }
}

pub const FETCH: &str = "fetch";
pub const VERIFY_DIRECT: &str = "verify-direct";
pub const ACCEPTED_CURRENT: &str = "accepted-current";
pub const ACCEPTED_STALE: &str = "accepted-stale";
pub const ACCEPTED_FORGED: &str = "accepted-forged";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Transcript {
    events: Vec<Event>,
}

impl Transcript {
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    fn push(&mut self, at: Timestamp, actor: Actor, action: &str, result: impl Into<String>) {
        self.events.push(Event {
            at,
            actor,
            action: action.to_owned(),
            result: result.into(),
        });
    }

    /// Results of the consumer's name-based fetches, in order.
    pub fn fetch_results(&self) -> impl Iterator<Item = &str> {
        self.events
            .iter()
            .filter(|e| e.actor == Actor::Consumer && e.action == FETCH)
            .map(|e| e.result.as_str())
    }

    /// The most severe consumer fetch result.
    pub fn classify(&self) -> OutcomeClass {
        self.fetch_results()
            .map(|r| match r {
                ACCEPTED_CURRENT => OutcomeClass::AllRejected,
                ACCEPTED_STALE => OutcomeClass::StaleAccepted,
                r if r.starts_with("rejected:") => OutcomeClass::DenialOfService,
                _ => OutcomeClass::ForgeryAccepted,
            })
            .max()
            .unwrap_or(OutcomeClass::AllRejected)
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioOutcome {
    pub class: OutcomeClass,
    pub transcript: Transcript,
}

impl ScenarioOutcome {
    fn from_transcript(transcript: Transcript) -> Self {
        ScenarioOutcome {
            class: transcript.classify(),
            transcript,
        }
    }
}

/// Scenario clock origin: 2021-06-01T00:00:00Z.
pub const EPOCH: Timestamp = Timestamp::from_unix(1_622_505_600);
/// Freshness window used by the registered scenarios.
pub const FRESHNESS_WINDOW: Duration = Duration::from_secs(3600);
const PROOF_LIFETIME: Duration = Duration::from_secs(30 * 24 * 3600);
const VERSION_GAP: Duration = Duration::from_secs(2 * 3600);
const CONSUMER_DELAY: Duration = Duration::from_secs(600);

struct Harness {
    store: MemoryStore,
    zone: Zone,
    domain: DnsName,
    transcript: Transcript,
    current: Vec<u8>,
    previous: Vec<Vec<u8>>,
}

impl Harness {
    fn new() -> Self {
        Harness {
            store: MemoryStore::new(),
            zone: Zone::new(),
            domain: DnsName::parse("example.org").expect("literal domain"),
            transcript: Transcript::default(),
            current: Vec::new(),
            previous: Vec::new(),
        }
    }

    fn owner_publish(
        &mut self,
        owner: &KeyPair,
        assertion: &KeyPair,
        content: Vec<u8>,
        window: ProofWindow,
        at: Timestamp,
    ) -> DnslinkRecord {
        let raw = create_bundle(owner, assertion, &content, window, Some(at)).expect("honest bundle");
        let cid = self.store.add(&raw).expect("memory store");
        let secret = assertion.secret();
        let record = format_record(&cid, Some(Freshness { ts: at, assertion_secret: &secret }));
        publish(&self.zone, &owner.did(), &self.domain, &record).expect("publish");
        if !self.current.is_empty() {
            self.previous.push(std::mem::take(&mut self.current));
        }
        self.current = content;
        self.transcript.push(at, Actor::Owner, "publish", format!("cid={cid}"));
        record
    }

    fn consumer_fetch<R: Resolver + ?Sized>(
        &mut self,
        resolver: &R,
        owner: &KeyPair,
        at: Timestamp,
        policy: &FreshnessPolicy,
    ) {
        let result = match fetch_and_verify(resolver, &self.store, &owner.did(), &self.domain, at, policy) {
            Ok(item) if item.content() == self.current.as_slice() => ACCEPTED_CURRENT.to_owned(),
            Ok(item) if self.previous.iter().any(|p| p.as_slice() == item.content()) => ACCEPTED_STALE.to_owned(),
            Ok(_) => ACCEPTED_FORGED.to_owned(),
            Err(e) => format!("rejected:{}", e.kind()),
        };
        self.transcript.push(at, Actor::Consumer, FETCH, result);
    }

    /// Serves `record` to the consumer through whichever dissemination
    /// path the attacker has, then restores the owner's zone.
    fn attack_fetch(
        &mut self,
        capability: AttackerCapability,
        owner: &KeyPair,
        record: &DnslinkRecord,
        at: Timestamp,
        policy: &FreshnessPolicy,
    ) {
        let name = dnslink_name(&owner.did(), &self.domain).expect("name");
        let honest = self.zone.txt(&name);
        if capability.contains(AttackerCapability::ZONE_WRITE) {
            self.zone.set_txt(&name, vec![record.to_txt()]);
            self.transcript.push(at, Actor::Attacker, "rewrite-zone", format!("cid={}", record.cid()));
            let zone = std::mem::take(&mut self.zone);
            self.consumer_fetch(&zone, owner, at, policy);
            self.zone = zone;
            self.zone.set_txt(&name, honest);
        } else if capability.contains(AttackerCapability::RESOLUTION_TAMPER) {
            let tampered = self.zone.snapshot();
            tampered.set_txt(&name, vec![record.to_txt()]);
            self.transcript.push(at, Actor::Attacker, "tamper-resolution", format!("cid={}", record.cid()));
            self.consumer_fetch(&tampered, owner, at, policy);
        } else {
            self.transcript.push(at, Actor::Attacker, "disseminate", "no-path");
            let zone = std::mem::take(&mut self.zone);
            self.consumer_fetch(&zone, owner, at, policy);
            self.zone = zone;
        }
    }
}

/// Runs the fixed two-version script against an attacker with `capability`.
///
/// Timeline: the owner publishes v1 at the origin (plus seed jitter) and v2
/// two hours later; the consumer fetches ten minutes after that. The
/// attacker mints the best fake its keys allow and then replays v1's
/// genuine record, each via its dissemination path if it has one.
pub fn run_scenario(capability: AttackerCapability, policy: &FreshnessPolicy, seed: u64) -> ScenarioOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t0 = EPOCH.plus(Duration::from_secs(rng.gen_range(0..600)));
    let t1 = t0.plus(VERSION_GAP);
    let now = t1.plus(CONSUMER_DELAY);

    let owner = KeyPair::from_seed(rng.gen());
    let assertion = KeyPair::from_seed(rng.gen());
    let attacker = KeyPair::from_seed(rng.gen());
    let v1 = random_content(&mut rng, b"v1:");
    let v2 = random_content(&mut rng, b"v2:");
    let forged = random_content(&mut rng, b"forged:");

    let mut h = Harness::new();
    let window = ProofWindow::lasting(t0, PROOF_LIFETIME);
    let v1_record = h.owner_publish(&owner, &assertion, v1, window, t0);
    h.owner_publish(&owner, &assertion, v2, window, t1);
    let baseline = std::mem::take(&mut h.zone);
    h.consumer_fetch(&baseline, &owner, now, policy);
    h.zone = baseline;

    // Best available fake: a fresh proof under the leaked DID key, else the
    // owner's own document with metadata signed by the leaked assertion key,
    // else metadata signed by the attacker's key.
    let did = owner.did();
    let (document, proof, signer, how) = if capability.contains(AttackerCapability::DID_KEY_LEAK) {
        let doc = create_document(&did, &attacker.public(), DEFAULT_FRAGMENT).expect("document");
        let proof = create_proof(&doc, &owner.secret(), now, None).expect("proof");
        (doc, proof, attacker.clone(), "did-key")
    } else {
        let current = h.zone.txt(&dnslink_name(&did, &h.domain).expect("name"));
        let record = crate::naming::parse_record(&current[0]).expect("owner record");
        let honest = parse_bundle(&h.store.get(record.cid()).expect("stored")).expect("bundle");
        let signer = if capability.contains(AttackerCapability::ASSERTION_KEY_LEAK) {
            (assertion.clone(), "assertion-key")
        } else {
            (attacker.clone(), "own-key")
        };
        (honest.header.document, honest.header.proof, signer.0, signer.1)
    };
    let meta = sign_metadata(&create_metadata(&did, &forged, Some(now)), &signer.secret()).expect("metadata");
    let fake = assemble_bundle(&document, &proof, &meta, &forged);
    let fake_cid = h.store.add(&fake).expect("memory store");
    let signer_secret = signer.secret();
    let fake_record = format_record(&fake_cid, Some(Freshness { ts: now, assertion_secret: &signer_secret }));
    h.transcript.push(now, Actor::Attacker, "mint-fake", format!("signer={how} cid={fake_cid}"));
    h.attack_fetch(capability, &owner, &fake_record, now, policy);

    h.transcript.push(now, Actor::Attacker, "replay-old-record", format!("cid={}", v1_record.cid()));
    h.attack_fetch(capability, &owner, &v1_record, now, policy);

    ScenarioOutcome::from_transcript(h.transcript)
}

fn random_content(rng: &mut ChaCha8Rng, tag: &[u8]) -> Vec<u8> {
    let len = rng.gen_range(16..256);
    let mut out = tag.to_vec();
    out.extend((0..len).map(|_| rng.gen::<u8>()));
    out
}

/// The outcome predicted by the threat analysis: forgery needs a key and a
/// way to reach the consumer; DNS alone can only replay or break things,
/// and freshness turns replay into detectable rejection.
pub fn predicted_class(capability: AttackerCapability, policy: &FreshnessPolicy) -> OutcomeClass {
    match (capability.has_key_path(), capability.has_dissemination_path()) {
        (true, true) => OutcomeClass::ForgeryAccepted,
        (_, false) => OutcomeClass::AllRejected,
        (false, true) if policy.is_active() => OutcomeClass::DenialOfService,
        (false, true) => OutcomeClass::StaleAccepted,
    }
}

/// Parameters of a key-rotation drill.
#[derive(Debug, Clone)]
pub struct RotationDrill {
    pub seed: u64,
    pub issued_at: Timestamp,
    /// When the first assertion key leaks, if it does.
    pub leaked_at: Option<Timestamp>,
    pub rotation_at: Timestamp,
    /// Lifetime of each document proof.
    pub proof_expiry_window: Duration,
    /// Times at which the consumer fetches and leaked-key bundles are checked.
    pub probes: Vec<Timestamp>,
    /// Whether the attacker can also rewrite the owner's zone.
    pub zone_write: bool,
}

impl RotationDrill {
    /// Leak at issue time, rotate halfway through the proof window, and
    /// probe inside the window and one second after it closes.
    pub fn standard(seed: u64, window: Duration) -> Self {
        let issued_at = EPOCH;
        let expiry = issued_at.plus(window);
        RotationDrill {
            seed,
            issued_at,
            leaked_at: Some(issued_at),
            rotation_at: issued_at.plus(window / 2),
            proof_expiry_window: window,
            probes: vec![issued_at.plus(window * 3 / 4), expiry.plus(Duration::from_secs(1))],
            zone_write: false,
        }
    }
}

/// Runs a leak-then-rotate timeline for `owner`'s item.
///
/// Bundles minted with the leaked key reuse the first document and proof,
/// so they verify only until that proof expires. The transcript records a
/// `verify-direct` event for each probe (the leaked-key bundle handed to a
/// verifier directly) alongside the consumer's name-based fetches.
pub fn rotation_drill(owner: &KeyPair, drill: &RotationDrill) -> ScenarioOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(drill.seed);
    let first = KeyPair::from_seed(rng.gen());
    let second = KeyPair::from_seed(rng.gen());
    let policy = FreshnessPolicy::NONE;
    let did = owner.did();

    let mut h = Harness::new();
    let first_window = ProofWindow::lasting(drill.issued_at, drill.proof_expiry_window);
    h.owner_publish(owner, &first, random_content(&mut rng, b"v1:"), first_window, drill.issued_at);
    let zone = std::mem::take(&mut h.zone);
    h.consumer_fetch(&zone, owner, drill.issued_at, &policy);
    h.zone = zone;

    let mut leaked = None;
    if let Some(at) = drill.leaked_at {
        let name = dnslink_name(&did, &h.domain).expect("name");
        let record = crate::naming::parse_record(&h.zone.txt(&name)[0]).expect("record");
        let honest = parse_bundle(&h.store.get(record.cid()).expect("stored")).expect("bundle");
        let forged = random_content(&mut rng, b"forged:");
        let meta = sign_metadata(&create_metadata(&did, &forged, Some(at)), &first.secret()).expect("metadata");
        let fake = assemble_bundle(&honest.header.document, &honest.header.proof, &meta, &forged);
        let cid = h.store.add(&fake).expect("memory store");
        h.transcript.push(at, Actor::Attacker, "mint-fake", format!("signer=leaked-assertion-key cid={cid}"));
        leaked = Some((fake, format_record(&cid, None)));
    }

    let second_window = ProofWindow::lasting(drill.rotation_at, drill.proof_expiry_window);
    h.owner_publish(owner, &second, random_content(&mut rng, b"v2:"), second_window, drill.rotation_at);
    h.transcript.push(drill.rotation_at, Actor::Owner, "rotate-assertion-key", "ok");

    let capability = if drill.zone_write {
        AttackerCapability::ASSERTION_KEY_LEAK | AttackerCapability::ZONE_WRITE
    } else {
        AttackerCapability::ASSERTION_KEY_LEAK
    };
    for &probe in &drill.probes {
        match &leaked {
            Some((fake, record)) => {
                let direct = match crate::bundle::verify_bundle(&did, fake, probe, None) {
                    Ok(_) => "verifies".to_owned(),
                    Err(e) => format!("rejected:{}", e.kind),
                };
                h.transcript.push(probe, Actor::Consumer, VERIFY_DIRECT, direct);
                h.attack_fetch(capability, owner, record, probe, &policy);
            }
            None => {
                let zone = std::mem::take(&mut h.zone);
                h.consumer_fetch(&zone, owner, probe, &policy);
                h.zone = zone;
            }
        }
    }
    ScenarioOutcome::from_transcript(h.transcript)
}

/// What a registered scenario is expected to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Exactly(OutcomeClass),
    Not(OutcomeClass),
}

impl Expectation {
    pub fn admits(self, class: OutcomeClass) -> bool {
        match self {
            Expectation::Exactly(c) => c == class,
            Expectation::Not(c) => c != class,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Exactly(c) => write!(f, "{c}"),
            Expectation::Not(c) => write!(f, "not {c}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Script {
    Lattice(AttackerCapability, FreshnessPolicy),
    RotationDrill { zone_write: bool },
}

#[derive(Debug, Clone, Copy)]
pub struct NamedScenario {
    pub name: &'static str,
    pub description: &'static str,
    pub expected: Expectation,
    script: Script,
}

const FULL_FRESHNESS: FreshnessPolicy = FreshnessPolicy {
    max_age: Some(FRESHNESS_WINDOW),
    max_record_age: Some(FRESHNESS_WINDOW),
};

pub const SCENARIOS: &[NamedScenario] = &[
    NamedScenario {
        name: "key-leak-only",
        description: "assertion key leaked, DNS intact: fakes exist but cannot be disseminated",
        expected: Expectation::Exactly(OutcomeClass::AllRejected),
        script: Script::Lattice(AttackerCapability::ASSERTION_KEY_LEAK, FreshnessPolicy::NONE),
    },
    NamedScenario {
        name: "dns-replay-no-freshness",
        description: "zone rewritten to an older genuine version, no freshness checks",
        expected: Expectation::Exactly(OutcomeClass::StaleAccepted),
        script: Script::Lattice(AttackerCapability::ZONE_WRITE, FreshnessPolicy::NONE),
    },
    NamedScenario {
        name: "dns-replay-with-freshness",
        description: "zone rewritten to an older genuine version, metadata and record freshness enforced",
        expected: Expectation::Not(OutcomeClass::StaleAccepted),
        script: Script::Lattice(AttackerCapability::ZONE_WRITE, FULL_FRESHNESS),
    },
    NamedScenario {
        name: "dns-tamper-fake-item",
        description: "answers rewritten on path to a fake item, no keys: detected, denial of service only",
        expected: Expectation::Exactly(OutcomeClass::DenialOfService),
        script: Script::Lattice(AttackerCapability::RESOLUTION_TAMPER, FULL_FRESHNESS),
    },
    NamedScenario {
        name: "key-leak-with-zone-write",
        description: "assertion key leaked and zone writable: the protocol's stated boundary",
        expected: Expectation::Exactly(OutcomeClass::ForgeryAccepted),
        script: Script::Lattice(
            AttackerCapability::ASSERTION_KEY_LEAK.union(AttackerCapability::ZONE_WRITE),
            FULL_FRESHNESS,
        ),
    },
    NamedScenario {
        name: "did-key-leak-with-tamper",
        description: "DID key leaked and answers rewritten on path",
        expected: Expectation::Exactly(OutcomeClass::ForgeryAccepted),
        script: Script::Lattice(
            AttackerCapability::DID_KEY_LEAK.union(AttackerCapability::RESOLUTION_TAMPER),
            FULL_FRESHNESS,
        ),
    },
    NamedScenario {
        name: "rotation-drill",
        description: "assertion key leaks, owner rotates; leaked-key bundles die with the old proof",
        expected: Expectation::Exactly(OutcomeClass::AllRejected),
        script: Script::RotationDrill { zone_write: false },
    },
];

pub fn find_scenario(name: &str) -> Option<&'static NamedScenario> {
    SCENARIOS.iter().find(|s| s.name == name)
}

impl NamedScenario {
    pub fn run(&self, seed: u64) -> ScenarioOutcome {
        match self.script {
            Script::Lattice(capability, policy) => run_scenario(capability, &policy, seed),
            Script::RotationDrill { zone_write } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
                let owner = KeyPair::from_seed(rng.gen());
                let mut drill = RotationDrill::standard(seed, Duration::from_secs(24 * 3600));
                drill.zone_write = zone_write;
                rotation_drill(&owner, &drill)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_set_has_sixteen_members() {
        let all: Vec<_> = AttackerCapability::power_set().collect();
        assert_eq!(all.len(), 16);
        assert_eq!(all[0], AttackerCapability::empty());
        assert_eq!(all[15], AttackerCapability::all());
    }

    #[test]
    fn classification_takes_most_severe_fetch() {
        let mut t = Transcript::default();
        assert_eq!(t.classify(), OutcomeClass::AllRejected);
        t.push(EPOCH, Actor::Consumer, FETCH, ACCEPTED_CURRENT);
        t.push(EPOCH, Actor::Consumer, FETCH, "rejected:Stale");
        assert_eq!(t.classify(), OutcomeClass::DenialOfService);
        t.push(EPOCH, Actor::Consumer, VERIFY_DIRECT, "verifies");
        assert_eq!(t.classify(), OutcomeClass::DenialOfService);
        t.push(EPOCH, Actor::Consumer, FETCH, ACCEPTED_STALE);
        assert_eq!(t.classify(), OutcomeClass::StaleAccepted);
    }

    #[test]
    fn transcript_lines() {
        let out = run_scenario(AttackerCapability::ZONE_WRITE, &FreshnessPolicy::NONE, 1);
        let text = out.transcript.to_string();
        assert!(text.lines().all(|l| l.split(' ').count() >= 4));
        assert!(text.contains(" attacker rewrite-zone cid="));
        assert!(text.contains(" consumer fetch accepted-stale"));
    }

    #[test]
    fn registered_scenarios_meet_expectations() {
        for s in SCENARIOS {
            let out = s.run(7);
            assert!(s.expected.admits(out.class), "{}: got {}\n{}", s.name, out.class, out.transcript);
        }
    }

    #[test]
    fn leaked_key_dies_with_old_proof() {
        let owner = KeyPair::from_seed([3; 32]);
        let mut drill = RotationDrill::standard(5, Duration::from_secs(3600));
        let out = rotation_drill(&owner, &drill);
        let direct: Vec<_> = out
            .transcript
            .events()
            .iter()
            .filter(|e| e.action == VERIFY_DIRECT)
            .map(|e| e.result.as_str())
            .collect();
        assert_eq!(direct, ["verifies", "rejected:Expired"]);
        assert_eq!(out.class, OutcomeClass::AllRejected);

        drill.zone_write = true;
        let out = rotation_drill(&owner, &drill);
        let fetches: Vec<_> = out.transcript.fetch_results().collect();
        assert_eq!(fetches, [ACCEPTED_CURRENT, ACCEPTED_FORGED, "rejected:Expired"]);
        assert_eq!(out.class, OutcomeClass::ForgeryAccepted);
    }

    #[test]
    fn rotation_without_leak_keeps_serving() {
        let owner = KeyPair::from_seed([4; 32]);
        let mut drill = RotationDrill::standard(6, Duration::from_secs(3600));
        drill.leaked_at = None;
        let out = rotation_drill(&owner, &drill);
        assert!(out.transcript.fetch_results().all(|r| r == ACCEPTED_CURRENT));
        assert_eq!(out.transcript.fetch_results().count(), 3);
    }

    #[test]
    fn lookup() {
        assert!(find_scenario("key-leak-only").is_some());
        assert!(find_scenario("nope").is_none());
    }

    #[test]
    fn capability_display() {
        let c = AttackerCapability::ZONE_WRITE | AttackerCapability::DID_KEY_LEAK;
        assert_eq!(c.to_string(), "{DID_KEY_LEAK,ZONE_WRITE}");
        assert_eq!(AttackerCapability::empty().to_string(), "{}");
    }
}
