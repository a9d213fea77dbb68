//! Deterministic multichain NFT marketplace simulator.
//!
//! Per-chain ledgers, an ERC-721-style NFT registry, a content-addressed
//! metadata store, a lock/mint and burn/unlock bridge with a two-way peg,
//! an escrow state machine, and a marketplace with fixed-price sales (2.5%
//! commission) and full-bid escrow auctions. Scenario files drive the world
//! through a single-writer loop; global invariants are checked after every
//! step.

pub mod batch;
pub mod bridge;
pub mod error;
pub mod escrow;
pub mod event;
pub mod fuzz;
pub mod invariants;
pub mod ledger;
pub mod marketplace;
pub mod metadata;
pub mod report;
pub mod scenario;
pub mod token;
pub mod world;

pub use error::{Result, SimError};
pub use ledger::{Address, Amount, ChainId};
pub use metadata::ContentHash;
pub use token::{ContractId, TokenId};
pub use world::WorldState;
