//! Per-chain native-currency accounting and the global logical clock.
//!
//! Every value movement in the simulator is a double-entry move inside a
//! [`ChainLedger`]. Total supply changes only through explicit credit
//! (faucet) and peg mint/release, never through `transfer`, so conservation
//! checks are exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::event::Event;
use crate::world::WorldState;

/// Smallest currency unit. Unsigned; all arithmetic is checked.
pub type Amount = u128;

/// Short identifier of one chain, e.g. `"eth-main"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChainId(pub String);

impl ChainId {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.len() > 32 || !name.is_ascii() {
            return Err(SimError::UnknownChain(name));
        }
        Ok(ChainId(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl std::fmt::Display for ChainId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

/// Opaque account token, valid on every chain with an independent balance
/// per chain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Address(pub String);

impl Address {
    pub fn new(id: impl Into<String>) -> Self {
        Address(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::fmt::Display for Address {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Address {
    fn from(s: &str) -> Self {
        Address(s.to_string())
    }
}

/// Reserved custody account holding bridge-locked value on each chain.
pub const BRIDGE_CUSTODY: &str = "sys:bridge";
/// Reserved custody account holding escrowed buyer funds on each chain.
pub const ESCROW_CUSTODY: &str = "sys:escrow";
/// Reserved custody account holding live auction bids on each chain.
pub const AUCTION_CUSTODY: &str = "sys:auction";
/// Operator identity the marketplace uses when consuming NFT approvals.
pub const MARKET_OPERATOR: &str = "sys:market";

/// Native-currency ledger of one chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLedger {
    pub chain: ChainId,
    balances: BTreeMap<Address, Amount>,
    total_supply: Amount,
}

impl ChainLedger {
    pub fn new(chain: ChainId) -> Self {
        let mut balances = BTreeMap::new();
        for sys in [BRIDGE_CUSTODY, ESCROW_CUSTODY, AUCTION_CUSTODY] {
            balances.insert(Address::new(sys), 0);
        }
        ChainLedger {
            chain,
            balances,
            total_supply: 0,
        }
    }

    pub fn balance(&self, account: &Address) -> Amount {
        self.balances.get(account).copied().unwrap_or(0)
    }

    /// True once an address has ever appeared on this ledger.
    pub fn knows(&self, account: &Address) -> bool {
        self.balances.contains_key(account)
    }

    pub fn total_supply(&self) -> Amount {
        self.total_supply
    }

    pub fn balances(&self) -> &BTreeMap<Address, Amount> {
        &self.balances
    }

    /// Supply-increasing credit. Rejects overflow on both the account and
    /// the chain total.
    pub fn credit(&mut self, to: &Address, amount: Amount) -> Result<()> {
        let cur = self.balance(to);
        let new = cur.checked_add(amount).ok_or(SimError::Overflow)?;
        let supply = self
            .total_supply
            .checked_add(amount)
            .ok_or(SimError::Overflow)?;
        self.balances.insert(to.clone(), new);
        self.total_supply = supply;
        Ok(())
    }

    /// Supply-decreasing debit (peg release custody side uses `transfer`,
    /// this is only for burns).
    pub fn burn(&mut self, from: &Address, amount: Amount) -> Result<()> {
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

    /// Supply-preserving move.
    pub fn transfer(&mut self, from: &Address, to: &Address, amount: Amount) -> Result<()> {
        let from_bal = self.balance(from);
        if from_bal < amount {
            return Err(SimError::InsufficientBalance {
                account: from.0.clone(),
                have: from_bal,
                need: amount,
            });
        }
        if from == to {
            // self-transfer is an identity; still touch the entry
            self.balances.insert(from.clone(), from_bal);
            return Ok(());
        }
        let to_bal = self.balance(to);
        let to_new = to_bal.checked_add(amount).ok_or(SimError::Overflow)?;
        self.balances.insert(from.clone(), from_bal - amount);
        self.balances.insert(to.clone(), to_new);
        Ok(())
    }
}

impl WorldState {
    pub fn create_chain(&mut self, chain: ChainId) -> Result<()> {
        if self.chains.contains_key(&chain) {
            return Err(SimError::DuplicateChain(chain.0));
        }
        self.chains
            .insert(chain.clone(), ChainLedger::new(chain.clone()));
        self.fungible.insert(
            chain.clone(),
            crate::token::FungibleLedger::new(chain.clone()),
        );
        self.log(Event::ChainCreated { chain });
        Ok(())
    }

    pub fn ledger(&self, chain: &ChainId) -> Result<&ChainLedger> {
        self.chains
            .get(chain)
            .ok_or_else(|| SimError::UnknownChain(chain.0.clone()))
    }

    pub fn ledger_mut(&mut self, chain: &ChainId) -> Result<&mut ChainLedger> {
        self.chains
            .get_mut(chain)
            .ok_or_else(|| SimError::UnknownChain(chain.0.clone()))
    }

    /// Faucet: mints native currency out of thin air.
    pub fn credit(&mut self, chain: &ChainId, to: &Address, amount: Amount) -> Result<()> {
        self.ledger_mut(chain)?.credit(to, amount)?;
        self.log(Event::Credit {
            chain: chain.clone(),
            to: to.clone(),
            amount,
        });
        Ok(())
    }

    pub fn transfer_native(
        &mut self,
        chain: &ChainId,
        from: &Address,
        to: &Address,
        amount: Amount,
    ) -> Result<()> {
        self.ledger_mut(chain)?.transfer(from, to, amount)?;
        self.log(Event::Transfer {
            chain: chain.clone(),
            from: from.clone(),
            to: to.clone(),
            amount,
        });
        Ok(())
    }

    pub fn balance_native(&self, chain: &ChainId, account: &Address) -> Result<Amount> {
        Ok(self.ledger(chain)?.balance(account))
    }

    /// Advances the logical clock, ends due auctions and delivers due bridge
    /// transfers.
    pub fn advance_time(&mut self, ticks: u64) -> Result<()> {
        if ticks == 0 {
            return Ok(());
        }
        self.clock = self.clock.checked_add(ticks).ok_or(SimError::Overflow)?;
        self.log(Event::TimeAdvanced { to: self.clock });
        self.end_due_auctions();
        self.deliver_due_transfers()?;
        Ok(())
    }
}
