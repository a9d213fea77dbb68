//! Escrow contract: a four-state machine holding buyer funds under
//! arbitrator oversight. Funds sit in the per-chain escrow custody account
//! while the state is `AwaitingDelivery`.

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::event::Event;
use crate::ledger::{Address, Amount, ChainId, ESCROW_CUSTODY};
use crate::world::WorldState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum EscrowState {
    AwaitingPayment,
    AwaitingDelivery,
    Complete,
    Refunded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscrowAccount {
    pub id: u64,
    pub chain: ChainId,
    pub buyer: Address,
    pub seller: Address,
    pub arbitrator: Address,
    pub amount: Amount,
    pub state: EscrowState,
    /// Amount currently in escrow custody; equals `amount` exactly while
    /// `AwaitingDelivery`, else 0.
    pub held: Amount,
}

impl WorldState {
    pub fn open_escrow(
        &mut self,
        chain: &ChainId,
        buyer: &Address,
        seller: &Address,
        arbitrator: &Address,
        amount: Amount,
    ) -> Result<u64> {
        self.ledger(chain)?;
        if buyer == seller || buyer == arbitrator || seller == arbitrator {
            return Err(SimError::IdenticalParties);
        }
        if amount == 0 {
            return Err(SimError::ZeroAmount);
        }
        self.next_escrow_id += 1;
        let id = self.next_escrow_id;
        self.escrows.insert(
            id,
            EscrowAccount {
                id,
                chain: chain.clone(),
                buyer: buyer.clone(),
                seller: seller.clone(),
                arbitrator: arbitrator.clone(),
                amount,
                state: EscrowState::AwaitingPayment,
                held: 0,
            },
        );
        self.log(Event::EscrowOpened {
            escrow_id: id,
            chain: chain.clone(),
            buyer: buyer.clone(),
            seller: seller.clone(),
            arbitrator: arbitrator.clone(),
            amount,
        });
        Ok(id)
    }

    fn escrow(&self, id: u64) -> Result<&EscrowAccount> {
        self.escrows.get(&id).ok_or(SimError::UnknownEscrow(id))
    }

    /// Buyer pays the exact amount in; overpayment is rejected outright.
    pub fn confirm_payment(&mut self, id: u64, caller: &Address, sent_value: Amount) -> Result<()> {
        let e = self.escrow(id)?;
        if e.buyer != *caller {
            return Err(SimError::NotBuyer);
        }
        if e.state != EscrowState::AwaitingPayment {
            return Err(SimError::WrongState);
        }
        if sent_value != e.amount {
            return Err(SimError::WrongValue);
        }
        let (chain, buyer, amount) = (e.chain.clone(), e.buyer.clone(), e.amount);
        let custody = Address::new(ESCROW_CUSTODY);
        self.transfer_native(&chain, &buyer, &custody, amount)?;
        let e = self.escrows.get_mut(&id).unwrap();
        e.state = EscrowState::AwaitingDelivery;
        e.held = e.amount;
        self.log(Event::EscrowPaymentConfirmed { escrow_id: id });
        Ok(())
    }

    /// Buyer confirms: funds to seller, COMPLETE. Seller confirms: funds
    /// back to buyer, REFUNDED.
    pub fn confirm_delivery(&mut self, id: u64, caller: &Address) -> Result<()> {
        let e = self.escrow(id)?;
        if *caller != e.buyer && *caller != e.seller {
            return Err(SimError::NotParty);
        }
        if e.state != EscrowState::AwaitingDelivery {
            return Err(SimError::WrongState);
        }
        let (chain, amount) = (e.chain.clone(), e.amount);
        let custody = Address::new(ESCROW_CUSTODY);
        if *caller == e.buyer {
            let seller = e.seller.clone();
            self.transfer_native(&chain, &custody, &seller, amount)?;
            let e = self.escrows.get_mut(&id).unwrap();
            e.state = EscrowState::Complete;
            e.held = 0;
            self.log(Event::EscrowCompleted { escrow_id: id });
        } else {
            let buyer = e.buyer.clone();
            self.transfer_native(&chain, &custody, &buyer, amount)?;
            let e = self.escrows.get_mut(&id).unwrap();
            e.state = EscrowState::Refunded;
            e.held = 0;
            self.log(Event::EscrowRefunded { escrow_id: id });
        }
        Ok(())
    }

    pub fn refund(&mut self, id: u64, caller: &Address) -> Result<()> {
        let e = self.escrow(id)?;
        if *caller != e.arbitrator {
            return Err(SimError::NotArbitrator);
        }
        if e.state != EscrowState::AwaitingDelivery {
            return Err(SimError::WrongState);
        }
        let (chain, buyer, amount) = (e.chain.clone(), e.buyer.clone(), e.amount);
        let custody = Address::new(ESCROW_CUSTODY);
        self.transfer_native(&chain, &custody, &buyer, amount)?;
        let e = self.escrows.get_mut(&id).unwrap();
        e.state = EscrowState::Refunded;
        e.held = 0;
        self.log(Event::EscrowRefunded { escrow_id: id });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::ChainId;

    fn setup() -> (WorldState, ChainId, Address, Address, Address) {
        let mut w = WorldState::new();
        let chain = ChainId::new("eth-main").unwrap();
        w.create_chain(chain.clone()).unwrap();
        let (b, s, a) = (Address::from("B"), Address::from("S"), Address::from("A"));
        w.credit(&chain, &b, 1000).unwrap();
        (w, chain, b, s, a)
    }

    #[test]
    fn open_starts_awaiting_payment() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        let e = &w.escrows[&id];
        assert_eq!(e.state, EscrowState::AwaitingPayment);
        assert_eq!(e.held, 0);
    }

    #[test]
    fn identical_parties_rejected() {
        let (mut w, chain, b, _, a) = setup();
        assert_eq!(
            w.open_escrow(&chain, &b, &b, &a, 100),
            Err(SimError::IdenticalParties)
        );
    }

    #[test]
    fn zero_amount_rejected() {
        let (mut w, chain, b, s, a) = setup();
        assert_eq!(
            w.open_escrow(&chain, &b, &s, &a, 0),
            Err(SimError::ZeroAmount)
        );
    }

    #[test]
    fn exact_payment_moves_to_awaiting_delivery() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        w.confirm_payment(id, &b, 100).unwrap();
        assert_eq!(w.escrows[&id].state, EscrowState::AwaitingDelivery);
        assert_eq!(w.escrows[&id].held, 100);
        assert_eq!(
            w.balance_native(&chain, &Address::new(ESCROW_CUSTODY))
                .unwrap(),
            100
        );
    }

    #[test]
    fn overpayment_rejected() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        assert_eq!(w.confirm_payment(id, &b, 101), Err(SimError::WrongValue));
    }

    #[test]
    fn seller_cannot_confirm_payment() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        assert_eq!(w.confirm_payment(id, &s, 100), Err(SimError::NotBuyer));
    }

    #[test]
    fn buyer_confirm_completes_and_pays_seller() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        w.confirm_payment(id, &b, 100).unwrap();
        w.confirm_delivery(id, &b).unwrap();
        assert_eq!(w.escrows[&id].state, EscrowState::Complete);
        assert_eq!(w.balance_native(&chain, &s).unwrap(), 100);
        assert_eq!(w.escrows[&id].held, 0);
    }

    #[test]
    fn seller_confirm_refunds_buyer() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        w.confirm_payment(id, &b, 100).unwrap();
        w.confirm_delivery(id, &s).unwrap();
        assert_eq!(w.escrows[&id].state, EscrowState::Refunded);
        assert_eq!(w.balance_native(&chain, &b).unwrap(), 1000);
    }

    #[test]
    fn arbitrator_cannot_confirm_delivery() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        w.confirm_payment(id, &b, 100).unwrap();
        assert_eq!(w.confirm_delivery(id, &a), Err(SimError::NotParty));
    }

    #[test]
    fn arbitrator_refund_path() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        w.confirm_payment(id, &b, 100).unwrap();
        w.refund(id, &a).unwrap();
        assert_eq!(w.escrows[&id].state, EscrowState::Refunded);
        assert_eq!(w.balance_native(&chain, &b).unwrap(), 1000);
    }

    #[test]
    fn refund_requires_awaiting_delivery() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        assert_eq!(w.refund(id, &a), Err(SimError::WrongState));
    }

    #[test]
    fn terminal_states_are_final() {
        let (mut w, chain, b, s, a) = setup();
        let id = w.open_escrow(&chain, &b, &s, &a, 100).unwrap();
        w.confirm_payment(id, &b, 100).unwrap();
        w.confirm_delivery(id, &b).unwrap();
        assert_eq!(w.refund(id, &a), Err(SimError::WrongState));
        assert_eq!(w.confirm_delivery(id, &s), Err(SimError::WrongState));
        assert_eq!(w.confirm_payment(id, &b, 100), Err(SimError::WrongState));
    }
}
