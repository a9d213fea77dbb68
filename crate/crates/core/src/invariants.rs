//! Global invariant checks, evaluated after every scenario step.

use serde::Serialize;

use crate::bridge::{TransferKind, TransferStatus};
use crate::escrow::EscrowState;
use crate::ledger::{Address, Amount, AUCTION_CUSTODY, BRIDGE_CUSTODY, ESCROW_CUSTODY};
use crate::marketplace::{AuctionStatus, OrderStatus};
use crate::token::NftStatus;
use crate::world::WorldState;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: String,
    pub detail: String,
}

fn violation(list: &mut Vec<Violation>, invariant: &str, detail: String) {
    list.push(Violation {
        invariant: invariant.to_string(),
        detail,
    });
}

impl WorldState {
    /// Evaluates every global invariant; an empty list means a healthy
    /// world.
    pub fn check_invariants(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        self.check_conservation(&mut v);
        self.check_single_liveness(&mut v);
        self.check_peg(&mut v);
        self.check_exclusivity(&mut v);
        self.check_escrow_funds(&mut v);
        self.check_auction_escrow(&mut v);
        v
    }

    /// Per chain, the sum of balances equals the tracked total supply.
    fn check_conservation(&self, v: &mut Vec<Violation>) {
        for (chain, ledger) in &self.chains {
            let sum: Amount = ledger.balances().values().sum();
            if sum != ledger.total_supply() {
                violation(
                    v,
                    "conservation",
                    format!(
                        "chain {chain}: balance sum {sum} != supply {}",
                        ledger.total_supply()
                    ),
                );
            }
        }
        for (chain, ledger) in &self.fungible {
            let sum: Amount = ledger.balances().values().sum();
            if sum != ledger.total_supply() {
                violation(
                    v,
                    "fungible-conservation",
                    format!(
                        "chain {chain}: fungible sum {sum} != supply {}",
                        ledger.total_supply()
                    ),
                );
            }
        }
    }

    /// Every origin NFT has exactly one representation: origin Live, a
    /// wrapped Live copy, or a pending (in-flight or failed-awaiting-retry)
    /// bridge transfer.
    fn check_single_liveness(&self, v: &mut Vec<Violation>) {
        for (cid, contract) in &self.contracts {
            if contract.bridge_owned {
                continue;
            }
            for (tid, rec) in &contract.records {
                let key = (cid.clone(), *tid);
                let origin_live = (rec.status == NftStatus::Live) as u32;
                let wrapped_live: u32 = self
                    .contracts
                    .values()
                    .filter(|c| c.bridge_owned)
                    .flat_map(|c| c.records.values())
                    .filter(|r| r.origin.as_ref() == Some(&key) && r.status == NftStatus::Live)
                    .count() as u32;
                let pending: u32 = self
                    .bridge
                    .transfers
                    .values()
                    .filter(|t| {
                        matches!(t.kind, TransferKind::NftLock | TransferKind::NftReturn)
                            && t.token.as_ref() == Some(&key)
                            && matches!(t.status, TransferStatus::InFlight | TransferStatus::Failed)
                    })
                    .count() as u32;
                let reps = origin_live + wrapped_live + pending;
                if rec.status == NftStatus::Burned {
                    continue;
                }
                if reps != 1 {
                    violation(
                        v,
                        "single-liveness",
                        format!(
                            "token {cid}#{tid}: {reps} representations \
                             (origin_live={origin_live} wrapped_live={wrapped_live} pending={pending})"
                        ),
                    );
                }
            }
        }
    }

    /// Per sidechain: main-chain locked = sidechain fungible supply +
    /// pending peg transfers. The main-chain custody account holds exactly
    /// the sum of all locked amounts.
    fn check_peg(&self, v: &mut Vec<Violation>) {
        let Some(cfg) = &self.bridge.config else {
            return;
        };
        let mut custody_expected: Amount = 0;
        for (side, peg) in &self.bridge.peg {
            let supply = self
                .fungible
                .get(side)
                .map(|f| f.total_supply())
                .unwrap_or(0);
            let pending: Amount = self
                .bridge
                .transfers
                .values()
                .filter(|t| {
                    matches!(t.status, TransferStatus::InFlight | TransferStatus::Failed)
                        && match t.kind {
                            TransferKind::PegLock => t.to_chain == *side,
                            TransferKind::PegBurn => t.from_chain == *side,
                            _ => false,
                        }
                })
                .map(|t| t.amount.unwrap_or(0))
                .sum();
            if peg.locked != supply + pending {
                violation(
                    v,
                    "peg-conservation",
                    format!(
                        "sidechain {side}: locked {} != supply {supply} + pending {pending}",
                        peg.locked
                    ),
                );
            }
            custody_expected += peg.locked;
        }
        if let Some(ledger) = self.chains.get(&cfg.main_chain) {
            let custody = ledger.balance(&Address::new(BRIDGE_CUSTODY));
            if custody != custody_expected {
                violation(
                    v,
                    "peg-custody",
                    format!("main custody {custody} != total locked {custody_expected}"),
                );
            }
        }
    }

    /// At most one of {active listing, open order, open auction} per token.
    fn check_exclusivity(&self, v: &mut Vec<Violation>) {
        let mut seen = std::collections::BTreeMap::new();
        let mut record = |key: (String, u64), what: &str, v: &mut Vec<Violation>| {
            if let Some(prev) = seen.insert(key.clone(), what.to_string()) {
                violation(
                    v,
                    "exclusivity",
                    format!("token {}#{} has both {prev} and {what}", key.0, key.1),
                );
            }
        };
        for l in self.market.listings.values().filter(|l| l.active) {
            record((l.contract.to_string(), l.token_id), "active listing", v);
        }
        for o in self
            .market
            .orders
            .values()
            .filter(|o| o.status == OrderStatus::Open)
        {
            record((o.contract.to_string(), o.token_id), "open order", v);
        }
        for a in self
            .market
            .auctions
            .values()
            .filter(|a| a.status != AuctionStatus::Settled)
        {
            record((a.contract.to_string(), a.token_id), "open auction", v);
        }
    }

    /// held matches the state machine, and per-chain escrow custody equals
    /// the sum of held amounts.
    fn check_escrow_funds(&self, v: &mut Vec<Violation>) {
        let mut per_chain: std::collections::BTreeMap<_, Amount> = Default::default();
        for e in self.escrows.values() {
            let expected = if e.state == EscrowState::AwaitingDelivery {
                e.amount
            } else {
                0
            };
            if e.held != expected {
                violation(
                    v,
                    "escrow-funds",
                    format!("escrow {}: held {} != expected {expected}", e.id, e.held),
                );
            }
            *per_chain.entry(e.chain.clone()).or_default() += e.held;
        }
        for (chain, ledger) in &self.chains {
            let custody = ledger.balance(&Address::new(ESCROW_CUSTODY));
            let expected = per_chain.get(chain).copied().unwrap_or(0);
            if custody != expected {
                violation(
                    v,
                    "escrow-custody",
                    format!("chain {chain}: custody {custody} != held sum {expected}"),
                );
            }
        }
    }

    /// Auction custody equals the sum of live escrowed bids per chain.
    fn check_auction_escrow(&self, v: &mut Vec<Violation>) {
        let mut per_chain: std::collections::BTreeMap<_, Amount> = Default::default();
        for a in self.market.auctions.values() {
            let sum: Amount = a.escrowed.values().sum();
            *per_chain.entry(a.contract.chain.clone()).or_default() += sum;
        }
        for (chain, ledger) in &self.chains {
            let custody = ledger.balance(&Address::new(AUCTION_CUSTODY));
            let expected = per_chain.get(chain).copied().unwrap_or(0);
            if custody != expected {
                violation(
                    v,
                    "auction-custody",
                    format!("chain {chain}: custody {custody} != escrowed sum {expected}"),
                );
            }
        }
    }
}
