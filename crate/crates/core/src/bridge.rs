//! Bridge contract and relay: lock/mint and burn/unlock for NFTs, plus the
//! two-way peg for fungible value between the main chain and sidechains.
//!
//! The relay delivers exactly once, in order per (from, to) channel, after a
//! configurable tick delay. Failures are injected explicitly from scenario
//! config and require an explicit retry, so every run stays deterministic.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::event::Event;
use crate::ledger::{Address, Amount, ChainId, BRIDGE_CUSTODY};
use crate::token::{ContractId, NftStatus, TokenId};
use crate::world::WorldState;

/// Address under which wrapped representations live on each destination
/// chain.
pub const WRAPPED_CONTRACT: &str = "sys:wrapped";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeConfig {
    pub main_chain: ChainId,
    pub main_bridge: Address,
    pub side_bridge: Address,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransferKind {
    NftLock,
    NftReturn,
    PegLock,
    PegBurn,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TransferStatus {
    InFlight,
    Delivered,
    Failed,
}

/// One cross-chain message in flight (or already resolved).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeTransfer {
    pub id: u64,
    pub kind: TransferKind,
    /// For NFT transfers this names the *origin* record.
    pub token: Option<(ContractId, TokenId)>,
    pub amount: Option<Amount>,
    pub from_chain: ChainId,
    pub to_chain: ChainId,
    pub beneficiary: Address,
    pub submitted_tick: u64,
    pub delivery_tick: u64,
    pub status: TransferStatus,
}

/// Main-chain value locked on behalf of one sidechain. The matching
/// sidechain supply lives in that chain's fungible ledger.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PegAccount {
    pub locked: Amount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BridgeState {
    pub config: Option<BridgeConfig>,
    pub transfers: BTreeMap<u64, BridgeTransfer>,
    next_transfer_id: u64,
    default_delay: u64,
    channel_delays: BTreeMap<(ChainId, ChainId), u64>,
    /// Transfer ids to fail at delivery time (fault injection).
    pending_faults: BTreeSet<u64>,
    pub wrapped_contracts: BTreeMap<ChainId, ContractId>,
    pub peg: BTreeMap<ChainId, PegAccount>,
}

impl BridgeState {
    pub fn new() -> Self {
        BridgeState {
            config: None,
            transfers: BTreeMap::new(),
            next_transfer_id: 0,
            default_delay: 1,
            channel_delays: BTreeMap::new(),
            pending_faults: BTreeSet::new(),
            wrapped_contracts: BTreeMap::new(),
            peg: BTreeMap::new(),
        }
    }

    pub fn delay(&self, from: &ChainId, to: &ChainId) -> u64 {
        self.channel_delays
            .get(&(from.clone(), to.clone()))
            .copied()
            .unwrap_or(self.default_delay)
    }

    pub fn set_channel_delay(&mut self, from: ChainId, to: ChainId, ticks: u64) {
        self.channel_delays.insert((from, to), ticks);
    }

    pub fn fail_transfer(&mut self, id: u64) {
        self.pending_faults.insert(id);
    }

    pub fn locked_for(&self, sidechain: &ChainId) -> Amount {
        self.peg.get(sidechain).map(|p| p.locked).unwrap_or(0)
    }
}

impl Default for BridgeState {
    fn default() -> Self {
        Self::new()
    }
}

impl WorldState {
    /// One-shot configuration latch for the two bridge endpoints.
    pub fn set_bridges(
        &mut self,
        main_chain: &ChainId,
        main_bridge: &Address,
        side_bridge: &Address,
    ) -> Result<()> {
        if self.bridge.config.is_some() {
            return Err(SimError::AlreadySet);
        }
        if main_bridge.is_empty() || side_bridge.is_empty() {
            return Err(SimError::InvalidAddress);
        }
        if !self.ledger(main_chain)?.knows(main_bridge) {
            return Err(SimError::InvalidAddress);
        }
        for (chain, ledger) in &self.chains {
            if chain != main_chain && !ledger.knows(side_bridge) {
                return Err(SimError::InvalidAddress);
            }
        }
        self.bridge.config = Some(BridgeConfig {
            main_chain: main_chain.clone(),
            main_bridge: main_bridge.clone(),
            side_bridge: side_bridge.clone(),
        });
        self.log(Event::BridgesSet {
            main_chain: main_chain.clone(),
            main_bridge: main_bridge.clone(),
            side_bridge: side_bridge.clone(),
        });
        Ok(())
    }

    fn bridge_config(&self) -> Result<&BridgeConfig> {
        self.bridge.config.as_ref().ok_or(SimError::BridgesNotSet)
    }

    fn schedule_transfer(
        &mut self,
        kind: TransferKind,
        token: Option<(ContractId, TokenId)>,
        amount: Option<Amount>,
        from_chain: ChainId,
        to_chain: ChainId,
        beneficiary: Address,
    ) -> u64 {
        let delay = self.bridge.delay(&from_chain, &to_chain);
        self.bridge.next_transfer_id += 1;
        let id = self.bridge.next_transfer_id;
        let delivery_tick = self.clock + delay;
        self.bridge.transfers.insert(
            id,
            BridgeTransfer {
                id,
                kind,
                token,
                amount,
                from_chain,
                to_chain,
                beneficiary,
                submitted_tick: self.clock,
                delivery_tick,
                status: TransferStatus::InFlight,
            },
        );
        self.log(Event::TransferScheduled {
            transfer_id: id,
            kind: format!("{kind:?}"),
            delivery_tick,
        });
        id
    }

    /// Locks a live NFT into bridge custody and schedules the wrapped mint
    /// on the destination chain.
    pub fn lock_nft(
        &mut self,
        caller: &Address,
        contract: &ContractId,
        token_id: TokenId,
        to_chain: &ChainId,
    ) -> Result<u64> {
        self.bridge_config()?;
        self.ledger(to_chain)?;
        let rec = self.nft(contract, token_id)?;
        if rec.origin.is_some() {
            return Err(SimError::CannotBridgeWrapped);
        }
        if rec.status != NftStatus::Live {
            return Err(SimError::TokenNotLive);
        }
        if rec.owner != *caller {
            return Err(SimError::NotOwner);
        }
        if *to_chain == contract.chain {
            return Err(SimError::SameChain);
        }
        let rec = self.nft_mut(contract, token_id)?;
        rec.owner = Address::new(BRIDGE_CUSTODY);
        rec.approved = None;
        rec.status = NftStatus::BridgeLocked;
        self.log(Event::NftLocked {
            token_id,
            from_chain: contract.chain.clone(),
            to_chain: to_chain.clone(),
            nft_contract: contract.address.clone(),
        });
        Ok(self.schedule_transfer(
            TransferKind::NftLock,
            Some((contract.clone(), token_id)),
            None,
            contract.chain.clone(),
            to_chain.clone(),
            caller.clone(),
        ))
    }

    /// Burns a wrapped representation and schedules the unlock of its
    /// origin, payable to the burner.
    pub fn burn_wrapped(
        &mut self,
        caller: &Address,
        contract: &ContractId,
        token_id: TokenId,
    ) -> Result<u64> {
        self.bridge_config()?;
        let rec = self.nft(contract, token_id)?;
        let Some((origin_contract, origin_token)) = rec.origin.clone() else {
            return Err(SimError::NotWrapped);
        };
        if rec.status != NftStatus::Live {
            return Err(SimError::TokenNotLive);
        }
        if rec.owner != *caller {
            return Err(SimError::NotOwner);
        }
        let rec = self.nft_mut(contract, token_id)?;
        rec.status = NftStatus::Burned;
        rec.approved = None;
        self.log(Event::WrappedBurned {
            contract: contract.clone(),
            token_id,
            burner: caller.clone(),
        });
        Ok(self.schedule_transfer(
            TransferKind::NftReturn,
            Some((origin_contract.clone(), origin_token)),
            None,
            contract.chain.clone(),
            origin_contract.chain.clone(),
            caller.clone(),
        ))
    }

    /// Returns a bridge-locked origin token to the beneficiary. Only the
    /// configured counterpart bridge contract may call this; the relay does
    /// so when an `NftReturn` is delivered.
    pub fn unlock_nft(
        &mut self,
        caller_bridge: &Address,
        contract: &ContractId,
        token_id: TokenId,
        beneficiary: &Address,
        from_chain: &ChainId,
    ) -> Result<()> {
        let cfg = self.bridge_config()?;
        let expected = if contract.chain == cfg.main_chain {
            &cfg.side_bridge
        } else {
            &cfg.main_bridge
        };
        if caller_bridge != expected {
            return Err(SimError::UnauthorizedBridge);
        }
        let rec = self.nft(contract, token_id)?;
        if rec.status != NftStatus::BridgeLocked {
            return Err(SimError::TokenNotLocked);
        }
        let rec = self.nft_mut(contract, token_id)?;
        rec.owner = beneficiary.clone();
        rec.status = NftStatus::Live;
        self.log(Event::NftUnlocked {
            token_id,
            from_chain: from_chain.clone(),
            to_chain: contract.chain.clone(),
            nft_contract: contract.address.clone(),
        });
        Ok(())
    }

    /// Locks native value on the main chain; on delivery an equal fungible
    /// amount is minted to the caller on the sidechain.
    pub fn peg_lock(
        &mut self,
        caller: &Address,
        amount: Amount,
        to_chain: &ChainId,
    ) -> Result<u64> {
        let cfg = self.bridge_config()?;
        let main = cfg.main_chain.clone();
        if *to_chain == main {
            return Err(SimError::SameChain);
        }
        if amount == 0 {
            return Err(SimError::ZeroAmount);
        }
        self.ledger(to_chain)?;
        let custody = Address::new(BRIDGE_CUSTODY);
        self.transfer_native(&main, caller, &custody, amount)?;
        self.bridge.peg.entry(to_chain.clone()).or_default().locked += amount;
        self.log(Event::PegLocked {
            from_chain: main.clone(),
            to_chain: to_chain.clone(),
            account: caller.clone(),
            amount,
        });
        Ok(self.schedule_transfer(
            TransferKind::PegLock,
            None,
            Some(amount),
            main,
            to_chain.clone(),
            caller.clone(),
        ))
    }

    /// Burns sidechain fungible tokens; on delivery the main chain releases
    /// the equal locked amount back to the caller.
    pub fn peg_burn(&mut self, chain: &ChainId, caller: &Address, amount: Amount) -> Result<u64> {
        let cfg = self.bridge_config()?;
        let main = cfg.main_chain.clone();
        if *chain == main {
            return Err(SimError::SameChain);
        }
        if amount == 0 {
            return Err(SimError::ZeroAmount);
        }
        self.fungible_mut(chain)?.burn(caller, amount)?;
        self.log(Event::PegBurned {
            chain: chain.clone(),
            account: caller.clone(),
            amount,
        });
        Ok(self.schedule_transfer(
            TransferKind::PegBurn,
            None,
            Some(amount),
            chain.clone(),
            main,
            caller.clone(),
        ))
    }

    /// Re-schedules a Failed transfer. Nothing retries automatically.
    pub fn retry_transfer(&mut self, id: u64) -> Result<()> {
        let delay = {
            let t = self
                .bridge
                .transfers
                .get(&id)
                .ok_or(SimError::UnknownTransfer(id))?;
            if t.status != TransferStatus::Failed {
                return Err(SimError::NotRetryable);
            }
            self.bridge.delay(&t.from_chain, &t.to_chain)
        };
        let delivery_tick = self.clock + delay;
        let t = self.bridge.transfers.get_mut(&id).unwrap();
        t.status = TransferStatus::InFlight;
        t.delivery_tick = delivery_tick;
        self.log(Event::TransferRetried {
            transfer_id: id,
            delivery_tick,
        });
        Ok(())
    }

    /// Delivers every in-flight transfer whose delivery tick has been
    /// reached, in (tick, id) order. Called from `advance_time`.
    pub(crate) fn deliver_due_transfers(&mut self) -> Result<Vec<u64>> {
        let mut due: Vec<(u64, u64)> = self
            .bridge
            .transfers
            .values()
            .filter(|t| t.status == TransferStatus::InFlight && t.delivery_tick <= self.clock)
            .map(|t| (t.delivery_tick, t.id))
            .collect();
        due.sort_unstable();
        let mut delivered = Vec::new();
        for (_, id) in due {
            if self.bridge.pending_faults.remove(&id) {
                self.bridge.transfers.get_mut(&id).unwrap().status = TransferStatus::Failed;
                self.log(Event::TransferFailed { transfer_id: id });
                continue;
            }
            self.deliver_one(id)?;
            delivered.push(id);
        }
        Ok(delivered)
    }

    fn deliver_one(&mut self, id: u64) -> Result<()> {
        let t = self.bridge.transfers[&id].clone();
        match t.kind {
            TransferKind::NftLock => {
                let (origin_contract, origin_token) = t.token.clone().unwrap();
                let wrapped = self.ensure_wrapped_contract(&t.to_chain)?;
                let origin = self.nft(&origin_contract, origin_token)?;
                let (uri, hash, price) =
                    (origin.uri.clone(), origin.metadata_hash, origin.mint_price);
                let wrapped_id = self.mint_nft_unchecked(
                    &wrapped,
                    t.beneficiary.clone(),
                    uri,
                    hash,
                    price,
                    Some((origin_contract.clone(), origin_token)),
                )?;
                self.log(Event::WrappedMinted {
                    contract: wrapped,
                    token_id: wrapped_id,
                    origin_contract,
                    origin_token_id: origin_token,
                    owner: t.beneficiary.clone(),
                });
            }
            TransferKind::NftReturn => {
                let (origin_contract, origin_token) = t.token.clone().unwrap();
                let caller = {
                    let cfg = self.bridge_config()?;
                    if origin_contract.chain == cfg.main_chain {
                        cfg.side_bridge.clone()
                    } else {
                        cfg.main_bridge.clone()
                    }
                };
                self.unlock_nft(
                    &caller,
                    &origin_contract,
                    origin_token,
                    &t.beneficiary,
                    &t.from_chain,
                )?;
            }
            TransferKind::PegLock => {
                let amount = t.amount.unwrap();
                self.fungible_mut(&t.to_chain)?
                    .mint(&t.beneficiary, amount)?;
                self.log(Event::PegMinted {
                    chain: t.to_chain.clone(),
                    account: t.beneficiary.clone(),
                    amount,
                });
            }
            TransferKind::PegBurn => {
                let amount = t.amount.unwrap();
                let custody = Address::new(BRIDGE_CUSTODY);
                let main = t.to_chain.clone();
                self.transfer_native(&main, &custody, &t.beneficiary, amount)?;
                self.bridge.peg.get_mut(&t.from_chain).unwrap().locked -= amount;
                self.log(Event::PegReleased {
                    chain: main,
                    account: t.beneficiary.clone(),
                    amount,
                });
            }
        }
        self.bridge.transfers.get_mut(&id).unwrap().status = TransferStatus::Delivered;
        self.log(Event::TransferDelivered { transfer_id: id });
        Ok(())
    }

    fn ensure_wrapped_contract(&mut self, chain: &ChainId) -> Result<ContractId> {
        if let Some(c) = self.bridge.wrapped_contracts.get(chain) {
            return Ok(c.clone());
        }
        let id = self.register_contract_inner(chain, &Address::new(WRAPPED_CONTRACT), true)?;
        self.bridge
            .wrapped_contracts
            .insert(chain.clone(), id.clone());
        Ok(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metadata::ContentHash;

    fn setup() -> (WorldState, ChainId, ChainId, ContractId, Address, TokenId) {
        let mut w = WorldState::new();
        let eth = ChainId::new("eth-main").unwrap();
        let bsc = ChainId::new("bsc").unwrap();
        w.create_chain(eth.clone()).unwrap();
        w.create_chain(bsc.clone()).unwrap();
        let seller = Address::from("seller");
        w.register_participant(&seller, &["Seller"], true).unwrap();
        let contract = w.register_contract(&eth, &Address::from("nft")).unwrap();
        w.register_seller_contract(&seller, &contract).unwrap();
        let token = w
            .mint_nft(&contract, &seller, "uri".into(), ContentHash::of(b"m"), 100)
            .unwrap();
        w.credit(&eth, &Address::from("eb"), 0).unwrap();
        w.credit(&bsc, &Address::from("bb"), 0).unwrap();
        w.set_bridges(&eth, &Address::from("eb"), &Address::from("bb"))
            .unwrap();
        (w, eth, bsc, contract, seller, token)
    }

    #[test]
    fn set_bridges_latches() {
        let (mut w, eth, _, _, _, _) = setup();
        assert_eq!(
            w.set_bridges(&eth, &Address::from("eb"), &Address::from("bb")),
            Err(SimError::AlreadySet)
        );
    }

    #[test]
    fn empty_bridge_address_rejected() {
        let mut w = WorldState::new();
        let eth = ChainId::new("eth-main").unwrap();
        w.create_chain(eth.clone()).unwrap();
        assert_eq!(
            w.set_bridges(&eth, &Address::from(""), &Address::from("bb")),
            Err(SimError::InvalidAddress)
        );
    }

    #[test]
    fn unknown_bridge_account_rejected() {
        let mut w = WorldState::new();
        let eth = ChainId::new("eth-main").unwrap();
        w.create_chain(eth.clone()).unwrap();
        assert_eq!(
            w.set_bridges(&eth, &Address::from("never-seen"), &Address::from("bb")),
            Err(SimError::InvalidAddress)
        );
    }

    #[test]
    fn lock_moves_token_to_custody() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        let rec = w.nft(&c, t).unwrap();
        assert_eq!(rec.status, NftStatus::BridgeLocked);
        assert_eq!(rec.owner, Address::new(BRIDGE_CUSTODY));
        assert!(w
            .events
            .iter()
            .any(|e| matches!(e, Event::NftLocked { token_id, .. } if *token_id == t)));
    }

    #[test]
    fn non_owner_cannot_lock() {
        let (mut w, _, bsc, c, _, t) = setup();
        let before = w.events.len();
        assert_eq!(
            w.lock_nft(&Address::from("X"), &c, t, &bsc),
            Err(SimError::NotOwner)
        );
        assert_eq!(w.events.len(), before);
    }

    #[test]
    fn double_lock_rejected() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        assert_eq!(
            w.lock_nft(&seller, &c, t, &bsc),
            Err(SimError::TokenNotLive)
        );
    }

    #[test]
    fn lock_to_same_chain_rejected() {
        let (mut w, eth, _, c, seller, t) = setup();
        assert_eq!(w.lock_nft(&seller, &c, t, &eth), Err(SimError::SameChain));
    }

    #[test]
    fn delivery_mints_wrapped_with_identical_metadata() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        w.advance_time(1).unwrap();
        let wrapped = w.bridge.wrapped_contracts[&bsc].clone();
        let rec = w.nft(&wrapped, 1).unwrap();
        assert_eq!(rec.owner, seller);
        assert_eq!(rec.origin, Some((c.clone(), t)));
        assert_eq!(rec.metadata_hash, w.nft(&c, t).unwrap().metadata_hash);
        assert_eq!(rec.uri, w.nft(&c, t).unwrap().uri);
    }

    #[test]
    fn delivery_is_idempotent() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        w.advance_time(1).unwrap();
        let snap = w.clone();
        let delivered = w.deliver_due_transfers().unwrap();
        assert!(delivered.is_empty());
        // re-delivery changed nothing
        assert_eq!(w.chains, snap.chains);
        assert_eq!(w.contracts, snap.contracts);
        assert_eq!(w.bridge, snap.bridge);
    }

    #[test]
    fn round_trip_restores_origin() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        w.advance_time(1).unwrap();
        let wrapped = w.bridge.wrapped_contracts[&bsc].clone();
        // hand off on the sidechain, then the new owner returns it
        let buyer = Address::from("B2");
        w.transfer_nft(&wrapped, &seller, 1, &buyer).unwrap();
        w.burn_wrapped(&buyer, &wrapped, 1).unwrap();
        w.advance_time(1).unwrap();
        let rec = w.nft(&c, t).unwrap();
        assert_eq!(rec.status, NftStatus::Live);
        assert_eq!(rec.owner, buyer);
        assert!(w
            .events
            .iter()
            .any(|e| matches!(e, Event::NftUnlocked { token_id, .. } if *token_id == t)));
    }

    #[test]
    fn burn_of_native_token_rejected() {
        let (mut w, _, _, c, seller, t) = setup();
        assert_eq!(w.burn_wrapped(&seller, &c, t), Err(SimError::NotWrapped));
    }

    #[test]
    fn burned_wrapped_token_is_not_transferable() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        w.advance_time(1).unwrap();
        let wrapped = w.bridge.wrapped_contracts[&bsc].clone();
        w.burn_wrapped(&seller, &wrapped, 1).unwrap();
        assert_eq!(
            w.transfer_nft(&wrapped, &seller, 1, &Address::from("B")),
            Err(SimError::TokenNotLive)
        );
    }

    #[test]
    fn unlock_by_arbitrary_address_rejected() {
        let (mut w, _, bsc, c, seller, t) = setup();
        w.lock_nft(&seller, &c, t, &bsc).unwrap();
        assert_eq!(
            w.unlock_nft(&Address::from("mallory"), &c, t, &seller, &bsc),
            Err(SimError::UnauthorizedBridge)
        );
    }

    #[test]
    fn unlock_of_unlocked_token_rejected() {
        let (mut w, _, bsc, c, seller, t) = setup();
        assert_eq!(
            w.unlock_nft(&Address::from("bb"), &c, t, &seller, &bsc),
            Err(SimError::TokenNotLocked)
        );
    }

    #[test]
    fn injected_failure_keeps_origin_locked_until_retry() {
        let (mut w, _, bsc, c, seller, t) = setup();
        let id = w.lock_nft(&seller, &c, t, &bsc).unwrap();
        w.bridge.fail_transfer(id);
        w.advance_time(1).unwrap();
        assert_eq!(w.bridge.transfers[&id].status, TransferStatus::Failed);
        assert!(!w.bridge.wrapped_contracts.contains_key(&bsc));
        assert_eq!(w.nft(&c, t).unwrap().status, NftStatus::BridgeLocked);
        w.retry_transfer(id).unwrap();
        w.advance_time(1).unwrap();
        assert_eq!(w.bridge.transfers[&id].status, TransferStatus::Delivered);
        assert!(w.bridge.wrapped_contracts.contains_key(&bsc));
    }

    #[test]
    fn retry_of_inflight_transfer_rejected() {
        let (mut w, _, bsc, c, seller, t) = setup();
        let id = w.lock_nft(&seller, &c, t, &bsc).unwrap();
        assert_eq!(w.retry_transfer(id), Err(SimError::NotRetryable));
        assert_eq!(w.retry_transfer(999), Err(SimError::UnknownTransfer(999)));
    }

    #[test]
    fn peg_lock_and_burn_round_trip() {
        let (mut w, eth, bsc, _, _, _) = setup();
        let a = Address::from("A");
        w.credit(&eth, &a, 100).unwrap();
        w.peg_lock(&a, 100, &bsc).unwrap();
        assert_eq!(w.balance_native(&eth, &a).unwrap(), 0);
        assert_eq!(w.bridge.locked_for(&bsc), 100);
        w.advance_time(1).unwrap();
        assert_eq!(w.balance_of(&bsc, &a).unwrap(), 100);
        w.peg_burn(&bsc, &a, 100).unwrap();
        assert_eq!(w.balance_of(&bsc, &a).unwrap(), 0);
        w.advance_time(1).unwrap();
        assert_eq!(w.balance_native(&eth, &a).unwrap(), 100);
        assert_eq!(w.bridge.locked_for(&bsc), 0);
    }

    #[test]
    fn partial_peg_burn() {
        let (mut w, eth, bsc, _, _, _) = setup();
        let a = Address::from("A");
        w.credit(&eth, &a, 100).unwrap();
        w.peg_lock(&a, 100, &bsc).unwrap();
        w.advance_time(1).unwrap();
        w.peg_burn(&bsc, &a, 40).unwrap();
        w.advance_time(1).unwrap();
        assert_eq!(w.fungible(&bsc).unwrap().total_supply(), 60);
        assert_eq!(w.bridge.locked_for(&bsc), 60);
        assert_eq!(w.balance_native(&eth, &a).unwrap(), 40);
    }

    #[test]
    fn peg_of_zero_rejected() {
        let (mut w, eth, bsc, _, _, _) = setup();
        let a = Address::from("A");
        w.credit(&eth, &a, 10).unwrap();
        assert!(matches!(w.peg_lock(&a, 0, &bsc), Err(SimError::ZeroAmount)));
        assert!(matches!(w.peg_burn(&bsc, &a, 0), Err(SimError::ZeroAmount)));
        assert_eq!(w.fungible(&bsc).unwrap().total_supply(), 0);
        assert_eq!(w.ledger(&eth).unwrap().total_supply(), 10);
    }

    #[test]
    fn peg_guards_balances() {
        let (mut w, _, bsc, _, _, _) = setup();
        let a = Address::from("A");
        assert!(matches!(
            w.peg_lock(&a, 1, &bsc),
            Err(SimError::InsufficientBalance { .. })
        ));
        assert!(matches!(
            w.peg_burn(&bsc, &a, 1),
            Err(SimError::InsufficientBalance { .. })
        ));
    }
}
