//! Runs the attacker capability lattice and the registered scenarios.
//!
//!     cargo run --example adversary_scenarios [-- <scenario-name>]

use std::time::Duration;

use didself::prelude::*;
use didself::scenarios::{find_scenario, run_scenario, AttackerCapability, SCENARIOS};

fn main() {
    if let Some(name) = std::env::args().nth(1) {
        let Some(s) = find_scenario(&name) else {
            eprintln!("unknown scenario {name}");
            std::process::exit(2);
        };
        let outcome = s.run(1);
        print!("{}", outcome.transcript);
        println!("outcome {} (expected {})", outcome.class, s.expected);
        return;
    }

    let policies = [("no freshness", FreshnessPolicy::NONE), ("1 h freshness", FreshnessPolicy::both(Duration::from_secs(3600)))];
    println!("{:<58} {:<18} {}", "capabilities", policies[0].0, policies[1].0);
    for cap in AttackerCapability::power_set() {
        let classes: Vec<String> = policies.iter().map(|(_, p)| run_scenario(cap, p, 1).class.to_string()).collect();
        println!("{:<58} {:<18} {}", cap.to_string(), classes[0], classes[1]);
    }

    println!();
    for s in SCENARIOS {
        let outcome = s.run(1);
        let mark = if s.expected.admits(outcome.class) { "ok " } else { "BAD" };
        println!("{mark} {:<28} {:<16} expected {}", s.name, outcome.class.to_string(), s.expected);
    }
}
