//! The whole simulated world. All mutation flows through one sequential
//! transaction-application loop; `WorldState` is `Send` and can be handed
//! off between threads, but concurrent mutation is not supported.

use std::collections::BTreeMap;

use crate::bridge::BridgeState;
use crate::escrow::EscrowAccount;
use crate::event::Event;
use crate::ledger::{ChainId, ChainLedger};
use crate::marketplace::MarketplaceState;
use crate::metadata::MetadataStore;
use crate::token::{ContractId, FungibleLedger, NftContract};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldState {
    /// Global logical clock, in ticks.
    pub clock: u64,
    pub chains: BTreeMap<ChainId, ChainLedger>,
    pub fungible: BTreeMap<ChainId, FungibleLedger>,
    pub contracts: BTreeMap<ContractId, NftContract>,
    pub metadata: MetadataStore,
    pub bridge: BridgeState,
    pub market: MarketplaceState,
    pub escrows: BTreeMap<u64, EscrowAccount>,
    pub next_escrow_id: u64,
    pub events: Vec<Event>,
}

impl WorldState {
    pub fn new() -> Self {
        WorldState {
            clock: 0,
            chains: BTreeMap::new(),
            fungible: BTreeMap::new(),
            contracts: BTreeMap::new(),
            metadata: MetadataStore::new(),
            bridge: BridgeState::new(),
            market: MarketplaceState::new(),
            escrows: BTreeMap::new(),
            next_escrow_id: 0,
            events: Vec::new(),
        }
    }

    pub(crate) fn log(&mut self, event: Event) {
        self.events.push(event);
    }
}

impl Default for WorldState {
    fn default() -> Self {
        Self::new()
    }
}
