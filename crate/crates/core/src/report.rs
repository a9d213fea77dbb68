//! Run reports: a structured (JSON) form used by golden-file diffs and a
//! human-readable text rendering. Both are byte-identical across repeated
//! runs with identical inputs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::event::Event;
use crate::invariants::Violation;
use crate::ledger::Amount;
use crate::token::NftStatus;
use crate::world::WorldState;

#[derive(Debug, Clone, Serialize)]
pub struct StepFailure {
    pub step: usize,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct NftRow {
    pub contract: String,
    pub token_id: u64,
    pub owner: String,
    pub status: NftStatus,
    pub metadata_hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantReport {
    pub step: usize,
    pub invariant: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub scenario: String,
    pub seed: u64,
    pub final_clock: u64,
    pub balances: BTreeMap<String, BTreeMap<String, Amount>>,
    pub fungible_balances: BTreeMap<String, BTreeMap<String, Amount>>,
    pub nfts: Vec<NftRow>,
    pub events: Vec<Event>,
    pub invariant_violations: Vec<InvariantReport>,
    pub command_failures: Vec<StepFailure>,
    pub exit_status: u8,
}

impl RunReport {
    pub fn build(
        name: &str,
        seed: u64,
        world: &WorldState,
        command_failures: Vec<StepFailure>,
        violations: Vec<(usize, Violation)>,
    ) -> Self {
        let balances = world
            .chains
            .iter()
            .map(|(chain, ledger)| {
                (
                    chain.0.clone(),
                    ledger
                        .balances()
                        .iter()
                        .map(|(a, b)| (a.0.clone(), *b))
                        .collect(),
                )
            })
            .collect();
        let fungible_balances = world
            .fungible
            .iter()
            .map(|(chain, ledger)| {
                (
                    chain.0.clone(),
                    ledger
                        .balances()
                        .iter()
                        .map(|(a, b)| (a.0.clone(), *b))
                        .collect(),
                )
            })
            .collect();
        let nfts = world
            .contracts
            .values()
            .flat_map(|c| c.records.values())
            .map(|r| NftRow {
                contract: r.contract.to_string(),
                token_id: r.token_id,
                owner: r.owner.0.clone(),
                status: r.status,
                metadata_hash: r.metadata_hash.to_hex(),
            })
            .collect();
        let invariant_violations: Vec<InvariantReport> = violations
            .into_iter()
            .map(|(step, v)| InvariantReport {
                step,
                invariant: v.invariant,
                detail: v.detail,
            })
            .collect();
        let exit_status = if !invariant_violations.is_empty() {
            2
        } else if !command_failures.is_empty() {
            1
        } else {
            0
        };
        RunReport {
            scenario: name.to_string(),
            seed,
            final_clock: world.clock,
            balances,
            fungible_balances,
            nfts,
            events: world.events.clone(),
            invariant_violations,
            command_failures,
            exit_status,
        }
    }

    /// The machine-readable form golden-file tests diff.
    pub fn to_structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.scenario);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "final clock: {}", self.final_clock);
        let _ = writeln!(out, "\nbalances:");
        for (chain, accounts) in &self.balances {
            for (account, balance) in accounts {
                let _ = writeln!(out, "  {chain} {account} {balance}");
            }
        }
        if self.fungible_balances.values().any(|m| !m.is_empty()) {
            let _ = writeln!(out, "\nfungible balances:");
            for (chain, accounts) in &self.fungible_balances {
                for (account, balance) in accounts {
                    let _ = writeln!(out, "  {chain} {account} {balance}");
                }
            }
        }
        if !self.nfts.is_empty() {
            let _ = writeln!(out, "\nnfts:");
            for n in &self.nfts {
                let _ = writeln!(
                    out,
                    "  {}#{} owner={} status={:?} hash={}",
                    n.contract, n.token_id, n.owner, n.status, n.metadata_hash
                );
            }
        }
        let _ = writeln!(out, "\nevents: {}", self.events.len());
        for e in &self.events {
            let _ = writeln!(
                out,
                "  {}",
                serde_json::to_string(e).expect("event serializes")
            );
        }
        if !self.command_failures.is_empty() {
            let _ = writeln!(out, "\ncommand failures:");
            for f in &self.command_failures {
                let _ = writeln!(out, "  step {}: {}", f.step, f.message);
            }
        }
        if !self.invariant_violations.is_empty() {
            let _ = writeln!(out, "\ninvariant violations:");
            for v in &self.invariant_violations {
                let _ = writeln!(out, "  step {}: {}: {}", v.step, v.invariant, v.detail);
            }
        }
        let _ = writeln!(out, "\nexit status: {}", self.exit_status);
        out
    }
}
