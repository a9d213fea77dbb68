//! NFT registry with single-slot approval semantics, plus the per-chain
//! fungible token ledger used by the two-way peg.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::event::Event;
use crate::ledger::{Address, Amount, ChainId};
use crate::metadata::ContentHash;
use crate::world::WorldState;

pub type TokenId = u64;

/// One NFT namespace: a (chain, address) pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContractId {
    pub chain: ChainId,
    pub address: Address,
}

impl ContractId {
    pub fn new(chain: ChainId, address: Address) -> Self {
        ContractId { chain, address }
    }
}

impl std::fmt::Display for ContractId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.chain, self.address)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NftStatus {
    Live,
    BridgeLocked,
    Burned,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NftRecord {
    pub contract: ContractId,
    pub token_id: TokenId,
    pub owner: Address,
    pub approved: Option<Address>,
    pub uri: String,
    pub metadata_hash: ContentHash,
    pub mint_price: Amount,
    /// Set iff this record is a wrapped representation minted by the bridge.
    pub origin: Option<(ContractId, TokenId)>,
    pub status: NftStatus,
}

/// One registered NFT contract: token counter plus records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NftContract {
    pub id: ContractId,
    pub next_token: TokenId,
    pub records: BTreeMap<TokenId, NftRecord>,
    /// Seller authorized to mint, set via the marketplace's preserved list.
    pub minter: Option<Address>,
    /// Bridge-owned contracts hold wrapped representations and bypass the
    /// minter authorization.
    pub bridge_owned: bool,
}

impl NftContract {
    fn new(id: ContractId, bridge_owned: bool) -> Self {
        NftContract {
            id,
            next_token: 0,
            records: BTreeMap::new(),
            minter: None,
            bridge_owned,
        }
    }
}

/// Per-chain fungible token balances (the peg's sidechain representation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FungibleLedger {
    pub chain: ChainId,
    balances: BTreeMap<Address, Amount>,
    total_supply: Amount,
}

impl FungibleLedger {
    pub fn new(chain: ChainId) -> Self {
        FungibleLedger {
            chain,
            balances: BTreeMap::new(),
            total_supply: 0,
        }
    }

    pub fn balance(&self, account: &Address) -> Amount {
        self.balances.get(account).copied().unwrap_or(0)
    }

    pub fn total_supply(&self) -> Amount {
        self.total_supply
    }

    pub fn balances(&self) -> &BTreeMap<Address, Amount> {
        &self.balances
    }

    pub(crate) fn mint(&mut self, to: &Address, amount: Amount) -> Result<()> {
        let new = self
            .balance(to)
            .checked_add(amount)
            .ok_or(SimError::Overflow)?;
        self.total_supply = self
            .total_supply
            .checked_add(amount)
            .ok_or(SimError::Overflow)?;
        self.balances.insert(to.clone(), new);
        Ok(())
    }

    pub(crate) fn burn(&mut self, from: &Address, amount: Amount) -> Result<()> {
        let cur = self.balance(from);
        if cur < amount {
            return Err(SimError::InsufficientBalance {
                account: from.0.clone(),
                have: cur,
                need: amount,
            });
        }
        self.balances.insert(from.clone(), cur - amount);
        self.total_supply -= amount;
        Ok(())
    }

    fn transfer(&mut self, from: &Address, to: &Address, amount: Amount) -> Result<()> {
        let from_bal = self.balance(from);
        if from_bal < amount {
            return Err(SimError::InsufficientBalance {
                account: from.0.clone(),
                have: from_bal,
                need: amount,
            });
        }
        if from == to {
            return Ok(());
        }
        let to_new = self
            .balance(to)
            .checked_add(amount)
            .ok_or(SimError::Overflow)?;
        self.balances.insert(from.clone(), from_bal - amount);
        self.balances.insert(to.clone(), to_new);
        Ok(())
    }
}

impl WorldState {
    pub fn register_contract(&mut self, chain: &ChainId, address: &Address) -> Result<ContractId> {
        self.register_contract_inner(chain, address, false)
    }

    pub(crate) fn register_contract_inner(
        &mut self,
        chain: &ChainId,
        address: &Address,
        bridge_owned: bool,
    ) -> Result<ContractId> {
        self.ledger(chain)?;
        let id = ContractId::new(chain.clone(), address.clone());
        if self.contracts.contains_key(&id) {
            return Err(SimError::DuplicateContract(id.to_string()));
        }
        self.contracts
            .insert(id.clone(), NftContract::new(id.clone(), bridge_owned));
        self.log(Event::ContractRegistered {
            contract: id.clone(),
        });
        Ok(id)
    }

    pub fn contract(&self, id: &ContractId) -> Result<&NftContract> {
        self.contracts
            .get(id)
            .ok_or_else(|| SimError::UnknownContract(id.to_string()))
    }

    pub(crate) fn contract_mut(&mut self, id: &ContractId) -> Result<&mut NftContract> {
        self.contracts
            .get_mut(id)
            .ok_or_else(|| SimError::UnknownContract(id.to_string()))
    }

    pub fn nft(&self, contract: &ContractId, token_id: TokenId) -> Result<&NftRecord> {
        self.contract(contract)?
            .records
            .get(&token_id)
            .ok_or_else(|| SimError::UnknownToken(format!("{contract}#{token_id}")))
    }

    pub(crate) fn nft_mut(
        &mut self,
        contract: &ContractId,
        token_id: TokenId,
    ) -> Result<&mut NftRecord> {
        self.contract_mut(contract)?
            .records
            .get_mut(&token_id)
            .ok_or_else(|| SimError::UnknownToken(format!("{contract}#{token_id}")))
    }

    /// Mints a fresh token. External callers must be the contract's
    /// registered seller and a KYC-verified participant; bridge-owned
    /// contracts are minted into only by the relay.
    pub fn mint_nft(
        &mut self,
        contract: &ContractId,
        caller: &Address,
        uri: String,
        metadata_hash: ContentHash,
        mint_price: Amount,
    ) -> Result<TokenId> {
        let c = self.contract(contract)?;
        if !c.bridge_owned {
            if c.minter.as_ref() != Some(caller) {
                return Err(SimError::NotAuthorizedMinter);
            }
            self.require_kyc(caller)?;
        }
        self.mint_nft_unchecked(
            contract,
            caller.clone(),
            uri,
            metadata_hash,
            mint_price,
            None,
        )
    }

    pub(crate) fn mint_nft_unchecked(
        &mut self,
        contract: &ContractId,
        owner: Address,
        uri: String,
        metadata_hash: ContentHash,
        mint_price: Amount,
        origin: Option<(ContractId, TokenId)>,
    ) -> Result<TokenId> {
        let c = self.contract_mut(contract)?;
        c.next_token += 1;
        let token_id = c.next_token;
        let record = NftRecord {
            contract: contract.clone(),
            token_id,
            owner: owner.clone(),
            approved: None,
            uri,
            metadata_hash,
            mint_price,
            origin,
            status: NftStatus::Live,
        };
        c.records.insert(token_id, record);
        self.log(Event::Minted {
            contract: contract.clone(),
            token_id,
            owner,
        });
        Ok(token_id)
    }

    pub fn owner_of(&self, contract: &ContractId, token_id: TokenId) -> Result<&Address> {
        let rec = self.nft(contract, token_id)?;
        if rec.status == NftStatus::Burned {
            return Err(SimError::UnknownToken(format!("{contract}#{token_id}")));
        }
        Ok(&rec.owner)
    }

    pub fn approve(
        &mut self,
        contract: &ContractId,
        caller: &Address,
        token_id: TokenId,
        operator: &Address,
    ) -> Result<()> {
        let rec = self.nft(contract, token_id)?;
        if rec.status != NftStatus::Live {
            return Err(SimError::TokenNotLive);
        }
        if rec.owner != *caller {
            return Err(SimError::NotOwner);
        }
        self.nft_mut(contract, token_id)?.approved = Some(operator.clone());
        self.log(Event::Approval {
            contract: contract.clone(),
            token_id,
            operator: operator.clone(),
        });
        Ok(())
    }

    /// Owner or the single approved operator moves the token; any successful
    /// transfer consumes the approval.
    pub fn transfer_nft(
        &mut self,
        contract: &ContractId,
        caller: &Address,
        token_id: TokenId,
        to: &Address,
    ) -> Result<()> {
        let rec = self.nft(contract, token_id)?;
        if rec.status != NftStatus::Live {
            return Err(SimError::TokenNotLive);
        }
        if rec.owner != *caller && rec.approved.as_ref() != Some(caller) {
            return Err(SimError::NotAuthorized);
        }
        let from = rec.owner.clone();
        let rec = self.nft_mut(contract, token_id)?;
        rec.owner = to.clone();
        rec.approved = None;
        self.log(Event::NftTransferred {
            contract: contract.clone(),
            token_id,
            from,
            to: to.clone(),
        });
        Ok(())
    }

    pub fn fungible(&self, chain: &ChainId) -> Result<&FungibleLedger> {
        self.fungible
            .get(chain)
            .ok_or_else(|| SimError::UnknownChain(chain.0.clone()))
    }

    pub(crate) fn fungible_mut(&mut self, chain: &ChainId) -> Result<&mut FungibleLedger> {
        self.fungible
            .get_mut(chain)
            .ok_or_else(|| SimError::UnknownChain(chain.0.clone()))
    }

    pub fn balance_of(&self, chain: &ChainId, account: &Address) -> Result<Amount> {
        Ok(self.fungible(chain)?.balance(account))
    }

    pub fn transfer_fungible(
        &mut self,
        chain: &ChainId,
        caller: &Address,
        to: &Address,
        amount: Amount,
    ) -> Result<()> {
        self.fungible_mut(chain)?.transfer(caller, to, amount)?;
        self.log(Event::FungibleTransfer {
            chain: chain.clone(),
            from: caller.clone(),
            to: to.clone(),
            amount,
        });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::WorldState;

    fn setup() -> (WorldState, ContractId, Address) {
        let mut w = WorldState::new();
        let chain = ChainId::new("eth-main").unwrap();
        w.create_chain(chain.clone()).unwrap();
        let seller = Address::from("seller");
        w.register_participant(&seller, &["Seller"], true).unwrap();
        let contract = w.register_contract(&chain, &Address::from("nft")).unwrap();
        w.register_seller_contract(&seller, &contract).unwrap();
        (w, contract, seller)
    }

    fn mint(w: &mut WorldState, c: &ContractId, s: &Address) -> TokenId {
        w.mint_nft(c, s, "uri".into(), ContentHash::of(b"m"), 100)
            .unwrap()
    }

    #[test]
    fn token_ids_start_at_one_and_increase() {
        let (mut w, c, s) = setup();
        assert_eq!(mint(&mut w, &c, &s), 1);
        assert_eq!(mint(&mut w, &c, &s), 2);
        assert_eq!(mint(&mut w, &c, &s), 3);
    }

    #[test]
    fn mint_by_non_seller_rejected() {
        let (mut w, c, _) = setup();
        let stranger = Address::from("stranger");
        assert_eq!(
            w.mint_nft(&c, &stranger, "u".into(), ContentHash::of(b"m"), 1),
            Err(SimError::NotAuthorizedMinter)
        );
    }

    #[test]
    fn same_address_on_two_chains_is_two_namespaces() {
        let (mut w, _, _) = setup();
        let bsc = ChainId::new("bsc").unwrap();
        w.create_chain(bsc.clone()).unwrap();
        let c2 = w.register_contract(&bsc, &Address::from("nft")).unwrap();
        assert_eq!(w.contract(&c2).unwrap().next_token, 0);
    }

    #[test]
    fn duplicate_contract_rejected() {
        let (mut w, c, _) = setup();
        assert!(matches!(
            w.register_contract(&c.chain, &c.address),
            Err(SimError::DuplicateContract(_))
        ));
    }

    #[test]
    fn transfer_clears_approval() {
        let (mut w, c, s) = setup();
        let id = mint(&mut w, &c, &s);
        let op = Address::from(crate::ledger::MARKET_OPERATOR);
        w.approve(&c, &s, id, &op).unwrap();
        w.transfer_nft(&c, &s, id, &Address::from("B")).unwrap();
        assert_eq!(w.nft(&c, id).unwrap().approved, None);
        assert_eq!(w.owner_of(&c, id).unwrap(), &Address::from("B"));
    }

    #[test]
    fn approval_is_consumed_by_operator_transfer() {
        let (mut w, c, s) = setup();
        let id = mint(&mut w, &c, &s);
        let op = Address::from("operator");
        w.approve(&c, &s, id, &op).unwrap();
        w.transfer_nft(&c, &op, id, &Address::from("B")).unwrap();
        // same operator may not move it again
        assert_eq!(
            w.transfer_nft(&c, &op, id, &Address::from("C")),
            Err(SimError::NotAuthorized)
        );
    }

    #[test]
    fn reapprove_replaces_previous_operator() {
        let (mut w, c, s) = setup();
        let id = mint(&mut w, &c, &s);
        w.approve(&c, &s, id, &Address::from("op1")).unwrap();
        w.approve(&c, &s, id, &Address::from("op2")).unwrap();
        assert_eq!(w.nft(&c, id).unwrap().approved, Some(Address::from("op2")));
    }

    #[test]
    fn non_owner_approve_rejected() {
        let (mut w, c, s) = setup();
        let id = mint(&mut w, &c, &s);
        assert_eq!(
            w.approve(&c, &Address::from("X"), id, &Address::from("op")),
            Err(SimError::NotOwner)
        );
    }

    #[test]
    fn fungible_balances_default_to_zero() {
        let (w, c, _) = setup();
        assert_eq!(w.balance_of(&c.chain, &Address::from("new")).unwrap(), 0);
    }

    #[test]
    fn fungible_transfer_guards_balance() {
        let (mut w, c, _) = setup();
        let (a, b) = (Address::from("A"), Address::from("B"));
        w.fungible_mut(&c.chain).unwrap().mint(&a, 10).unwrap();
        assert!(matches!(
            w.transfer_fungible(&c.chain, &a, &b, 11),
            Err(SimError::InsufficientBalance { .. })
        ));
        w.transfer_fungible(&c.chain, &a, &b, 10).unwrap();
        assert_eq!(w.balance_of(&c.chain, &a).unwrap(), 0);
        assert_eq!(w.balance_of(&c.chain, &b).unwrap(), 10);
    }

    #[test]
    fn zero_fungible_transfer_logs_event() {
        let (mut w, c, _) = setup();
        let before = w.events.len();
        w.transfer_fungible(&c.chain, &Address::from("A"), &Address::from("B"), 0)
            .unwrap();
        assert_eq!(w.events.len(), before + 1);
    }
}
