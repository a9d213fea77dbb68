//! Marketplace contract: participant registration, the preserved
//! seller-contract list, fixed-price listings and selling orders, full-bid
//! escrow auctions, the 2.5% commission split, and ratings.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Result, SimError};
use crate::event::Event;
use crate::ledger::{Address, Amount, ChainId, AUCTION_CUSTODY, MARKET_OPERATOR};
use crate::token::{ContractId, NftStatus, TokenId};
use crate::world::WorldState;

/// Deployer wallet receiving the commission on each sale.
pub const MARKET_OWNER: &str = "marketplace-owner";

/// Commission in basis points, 2.5% of each sale.
pub const COMMISSION_BPS: u128 = 250;

pub fn commission_of(price: Amount) -> Amount {
    price * COMMISSION_BPS / 10_000
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Role {
    Artist,
    Seller,
    Buyer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rating {
    pub rater: Address,
    pub score: u8,
    pub sale_id: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Participant {
    pub address: Address,
    pub roles: BTreeSet<Role>,
    pub kyc_verified: bool,
    pub ratings_received: Vec<Rating>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Listing {
    pub id: u64,
    pub seller: Address,
    pub contract: ContractId,
    pub token_id: TokenId,
    pub price: Amount,
    pub chain: ChainId,
    pub active: bool,
    pub sold: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderStatus {
    Open,
    Filled,
    Cancelled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SellingOrder {
    pub id: u64,
    pub seller: Address,
    pub contract: ContractId,
    pub token_id: TokenId,
    pub price: Amount,
    pub status: OrderStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AuctionStatus {
    Open,
    Ended,
    Settled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Auction {
    pub id: u64,
    pub seller: Address,
    pub contract: ContractId,
    pub token_id: TokenId,
    pub start_price: Amount,
    pub deadline_tick: u64,
    /// Strictly increasing in amount.
    pub bids: Vec<(Address, Amount)>,
    /// Each bidder's latest full-bid amount currently in auction custody.
    pub escrowed: BTreeMap<Address, Amount>,
    pub status: AuctionStatus,
}

/// Party record of one completed sale, kept for ratings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaleRecord {
    pub buyer: Address,
    pub seller: Address,
    pub price: Amount,
    pub raters: BTreeSet<Address>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarketplaceState {
    pub owner: Address,
    pub commission_bps: u128,
    pub participants: BTreeMap<Address, Participant>,
    pub preserved_contracts: BTreeSet<ContractId>,
    pub listing_count: u64,
    pub listings: BTreeMap<u64, Listing>,
    pub order_count: u64,
    pub orders: BTreeMap<u64, SellingOrder>,
    pub auction_count: u64,
    pub auctions: BTreeMap<u64, Auction>,
    pub sale_count: u64,
    pub sales: BTreeMap<u64, SaleRecord>,
}

impl MarketplaceState {
    pub fn new() -> Self {
        MarketplaceState {
            owner: Address::new(MARKET_OWNER),
            commission_bps: COMMISSION_BPS,
            participants: BTreeMap::new(),
            preserved_contracts: BTreeSet::new(),
            listing_count: 0,
            listings: BTreeMap::new(),
            order_count: 0,
            orders: BTreeMap::new(),
            auction_count: 0,
            auctions: BTreeMap::new(),
            sale_count: 0,
            sales: BTreeMap::new(),
        }
    }
}

impl Default for MarketplaceState {
    fn default() -> Self {
        Self::new()
    }
}

impl WorldState {
    pub fn register_participant(
        &mut self,
        address: &Address,
        roles: &[&str],
        kyc_proof: bool,
    ) -> Result<()> {
        if self.market.participants.contains_key(address) {
            return Err(SimError::DuplicateRegistration(address.0.clone()));
        }
        let mut role_set = BTreeSet::new();
        for r in roles {
            role_set.insert(match *r {
                "Artist" => Role::Artist,
                "Seller" => Role::Seller,
                _ => Role::Buyer,
            });
        }
        self.market.participants.insert(
            address.clone(),
            Participant {
                address: address.clone(),
                roles: role_set,
                kyc_verified: kyc_proof,
                ratings_received: Vec::new(),
            },
        );
        self.log(Event::ParticipantRegistered {
            address: address.clone(),
            kyc_verified: kyc_proof,
        });
        Ok(())
    }

    /// Registered and KYC-verified, the enrollment rule applied before any
    /// mint/list/sell/buy/bid.
    pub(crate) fn require_kyc(&self, address: &Address) -> Result<()> {
        match self.market.participants.get(address) {
            Some(p) if p.kyc_verified => Ok(()),
            _ => Err(SimError::NotRegistered),
        }
    }

    /// Adds a contract to the preserved seller list and makes the seller its
    /// authorized minter.
    pub fn register_seller_contract(
        &mut self,
        seller: &Address,
        contract: &ContractId,
    ) -> Result<()> {
        match self.market.participants.get(seller) {
            Some(p) if p.kyc_verified && p.roles.contains(&Role::Seller) => {}
            _ => return Err(SimError::NotRegistered),
        }
        self.contract(contract)?;
        self.market.preserved_contracts.insert(contract.clone());
        self.contract_mut(contract)?.minter = Some(seller.clone());
        self.log(Event::SellerContractRegistered {
            seller: seller.clone(),
            contract: contract.clone(),
        });
        Ok(())
    }

    /// No token may carry more than one of {active listing, open order,
    /// open auction} at a time.
    fn require_unlisted(&self, contract: &ContractId, token_id: TokenId) -> Result<()> {
        let listed = self
            .market
            .listings
            .values()
            .any(|l| l.active && l.contract == *contract && l.token_id == token_id);
        let ordered = self.market.orders.values().any(|o| {
            o.status == OrderStatus::Open && o.contract == *contract && o.token_id == token_id
        });
        let auctioned = self.market.auctions.values().any(|a| {
            a.status != AuctionStatus::Settled && a.contract == *contract && a.token_id == token_id
        });
        if listed || ordered || auctioned {
            return Err(SimError::AlreadyListed);
        }
        Ok(())
    }

    fn require_live_owner(
        &self,
        contract: &ContractId,
        token_id: TokenId,
        caller: &Address,
    ) -> Result<()> {
        let rec = self.nft(contract, token_id)?;
        if rec.status != NftStatus::Live {
            return Err(SimError::TokenNotLive);
        }
        if rec.owner != *caller {
            return Err(SimError::NotOwner);
        }
        Ok(())
    }

    fn grant_market_approval(&mut self, contract: &ContractId, token_id: TokenId) -> Result<()> {
        self.nft_mut(contract, token_id)?.approved = Some(Address::new(MARKET_OPERATOR));
        Ok(())
    }

    pub fn list_nft(
        &mut self,
        caller: &Address,
        contract: &ContractId,
        token_id: TokenId,
        price: Amount,
        chain: &ChainId,
    ) -> Result<u64> {
        self.require_kyc(caller)?;
        if !self.market.preserved_contracts.contains(contract) {
            return Err(SimError::ContractNotPreserved);
        }
        self.require_live_owner(contract, token_id, caller)?;
        if contract.chain != *chain {
            return Err(SimError::WrongChain);
        }
        self.require_unlisted(contract, token_id)?;
        if price == 0 {
            return Err(SimError::ZeroPrice);
        }
        // listing implies settleability: approval granted here
        self.grant_market_approval(contract, token_id)?;
        self.market.listing_count += 1;
        let id = self.market.listing_count;
        self.market.listings.insert(
            id,
            Listing {
                id,
                seller: caller.clone(),
                contract: contract.clone(),
                token_id,
                price,
                chain: chain.clone(),
                active: true,
                sold: false,
            },
        );
        self.log(Event::NftListed {
            listing_id: id,
            seller: caller.clone(),
            contract: contract.clone(),
            token_id,
            price,
            chain: chain.clone(),
        });
        Ok(id)
    }

    pub fn sell_nft(
        &mut self,
        caller: &Address,
        contract: &ContractId,
        token_id: TokenId,
        price: Amount,
    ) -> Result<u64> {
        self.require_kyc(caller)?;
        self.require_live_owner(contract, token_id, caller)?;
        self.require_unlisted(contract, token_id)?;
        if price == 0 {
            return Err(SimError::ZeroPrice);
        }
        self.grant_market_approval(contract, token_id)?;
        self.market.order_count += 1;
        let id = self.market.order_count;
        self.market.orders.insert(
            id,
            SellingOrder {
                id,
                seller: caller.clone(),
                contract: contract.clone(),
                token_id,
                price,
                status: OrderStatus::Open,
            },
        );
        self.log(Event::NftListedForSale {
            order_id: id,
            seller: caller.clone(),
            contract: contract.clone(),
            token_id,
            price,
        });
        Ok(id)
    }

    /// Shared settlement: buyer pays the full price, seller receives price
    /// minus the floor commission, the deployer receives the commission, the
    /// NFT moves via the marketplace approval. Returns (sale_id, commission).
    fn settle_sale(
        &mut self,
        chain: &ChainId,
        buyer: &Address,
        seller: &Address,
        contract: &ContractId,
        token_id: TokenId,
        price: Amount,
    ) -> Result<(u64, Amount)> {
        let commission = commission_of(price);
        let owner = self.market.owner.clone();
        let buyer_balance = self.balance_native(chain, buyer)?;
        if buyer_balance < price {
            return Err(SimError::InsufficientBalance {
                account: buyer.0.clone(),
                have: buyer_balance,
                need: price,
            });
        }
        self.transfer_native(chain, buyer, seller, price - commission)?;
        self.transfer_native(chain, buyer, &owner, commission)?;
        let operator = Address::new(MARKET_OPERATOR);
        self.transfer_nft(contract, &operator, token_id, buyer)?;
        self.market.sale_count += 1;
        let sale_id = self.market.sale_count;
        self.market.sales.insert(
            sale_id,
            SaleRecord {
                buyer: buyer.clone(),
                seller: seller.clone(),
                price,
                raters: BTreeSet::new(),
            },
        );
        Ok((sale_id, commission))
    }

    pub fn buy_nft(&mut self, caller: &Address, listing_id: u64, payment: Amount) -> Result<u64> {
        self.require_kyc(caller)?;
        let l = self
            .market
            .listings
            .get(&listing_id)
            .ok_or(SimError::UnknownListing(listing_id))?
            .clone();
        if !l.active {
            return Err(SimError::ListingInactive);
        }
        if payment != l.price {
            return Err(SimError::WrongValue);
        }
        if !self.market.preserved_contracts.contains(&l.contract) {
            return Err(SimError::ContractNotPreserved);
        }
        // the seller may have moved the token or re-approved someone else
        // since listing
        let rec = self.nft(&l.contract, l.token_id)?;
        if rec.status != NftStatus::Live
            || rec.owner != l.seller
            || rec.approved != Some(Address::new(MARKET_OPERATOR))
        {
            return Err(SimError::OwnershipChanged);
        }
        let buyer_balance = self.balance_native(&l.chain, caller)?;
        if buyer_balance < payment {
            return Err(SimError::InsufficientBalance {
                account: caller.0.clone(),
                have: buyer_balance,
                need: payment,
            });
        }
        let (sale_id, commission) = self.settle_sale(
            &l.chain,
            caller,
            &l.seller,
            &l.contract,
            l.token_id,
            l.price,
        )?;
        let l = self.market.listings.get_mut(&listing_id).unwrap();
        l.active = false;
        l.sold = true;
        let seller = l.seller.clone();
        self.log(Event::NftBought {
            listing_id,
            sale_id,
            buyer: caller.clone(),
            seller,
            price: payment,
            commission,
        });
        Ok(sale_id)
    }

    /// Fills an open selling order through the same settlement path as a
    /// fixed-price listing.
    pub fn buy_order(&mut self, caller: &Address, order_id: u64, payment: Amount) -> Result<u64> {
        self.require_kyc(caller)?;
        let o = self
            .market
            .orders
            .get(&order_id)
            .ok_or(SimError::UnknownOrder(order_id))?
            .clone();
        if o.status != OrderStatus::Open {
            return Err(SimError::OrderNotOpen);
        }
        if payment != o.price {
            return Err(SimError::WrongValue);
        }
        let rec = self.nft(&o.contract, o.token_id)?;
        if rec.status != NftStatus::Live
            || rec.owner != o.seller
            || rec.approved != Some(Address::new(MARKET_OPERATOR))
        {
            return Err(SimError::OwnershipChanged);
        }
        let chain = o.contract.chain.clone();
        let buyer_balance = self.balance_native(&chain, caller)?;
        if buyer_balance < payment {
            return Err(SimError::InsufficientBalance {
                account: caller.0.clone(),
                have: buyer_balance,
                need: payment,
            });
        }
        let (sale_id, commission) =
            self.settle_sale(&chain, caller, &o.seller, &o.contract, o.token_id, o.price)?;
        self.market.orders.get_mut(&order_id).unwrap().status = OrderStatus::Filled;
        let seller = o.seller.clone();
        self.log(Event::OrderFilled {
            order_id,
            sale_id,
            buyer: caller.clone(),
            seller,
            price: payment,
            commission,
        });
        Ok(sale_id)
    }

    pub fn cancel_order(&mut self, caller: &Address, order_id: u64) -> Result<()> {
        let o = self
            .market
            .orders
            .get(&order_id)
            .ok_or(SimError::UnknownOrder(order_id))?;
        if o.seller != *caller {
            return Err(SimError::NotListingOwner);
        }
        if o.status != OrderStatus::Open {
            return Err(SimError::OrderNotOpen);
        }
        let (contract, token_id) = (o.contract.clone(), o.token_id);
        if let Ok(rec) = self.nft_mut(&contract, token_id) {
            if rec.approved == Some(Address::new(MARKET_OPERATOR)) {
                rec.approved = None;
            }
        }
        self.market.orders.get_mut(&order_id).unwrap().status = OrderStatus::Cancelled;
        self.log(Event::OrderCancelled { order_id });
        Ok(())
    }

    pub fn unlist_nft(&mut self, caller: &Address, listing_id: u64) -> Result<()> {
        let l = self
            .market
            .listings
            .get(&listing_id)
            .ok_or(SimError::UnknownListing(listing_id))?;
        if l.seller != *caller {
            return Err(SimError::NotListingOwner);
        }
        if !l.active {
            return Err(SimError::ListingInactive);
        }
        let (contract, token_id) = (l.contract.clone(), l.token_id);
        if let Ok(rec) = self.nft_mut(&contract, token_id) {
            if rec.approved == Some(Address::new(MARKET_OPERATOR)) {
                rec.approved = None;
            }
        }
        self.market.listings.get_mut(&listing_id).unwrap().active = false;
        self.log(Event::NftUnlisted { listing_id });
        Ok(())
    }

    /// Starts a full-bid auction. When the start price is omitted, the
    /// record's stored mint price is the starting price.
    pub fn start_auction(
        &mut self,
        caller: &Address,
        contract: &ContractId,
        token_id: TokenId,
        start_price: Option<Amount>,
        duration_ticks: u64,
    ) -> Result<u64> {
        self.require_kyc(caller)?;
        self.require_live_owner(contract, token_id, caller)?;
        self.require_unlisted(contract, token_id)?;
        if duration_ticks == 0 {
            return Err(SimError::ZeroDuration);
        }
        let start_price = match start_price {
            Some(p) => p,
            None => self.nft(contract, token_id)?.mint_price,
        };
        self.grant_market_approval(contract, token_id)?;
        self.market.auction_count += 1;
        let id = self.market.auction_count;
        let deadline_tick = self.clock + duration_ticks;
        self.market.auctions.insert(
            id,
            Auction {
                id,
                seller: caller.clone(),
                contract: contract.clone(),
                token_id,
                start_price,
                deadline_tick,
                bids: Vec::new(),
                escrowed: BTreeMap::new(),
                status: AuctionStatus::Open,
            },
        );
        self.log(Event::AuctionStarted {
            auction_id: id,
            seller: caller.clone(),
            contract: contract.clone(),
            token_id,
            start_price,
            deadline_tick,
        });
        Ok(id)
    }

    /// Full-bid escrow: the whole bid amount moves to auction custody up
    /// front. A bidder may raise their own bid; the old escrow is released
    /// and the new full amount escrowed.
    pub fn place_bid(&mut self, caller: &Address, auction_id: u64, amount: Amount) -> Result<()> {
        self.require_kyc(caller)?;
        let a = self
            .market
            .auctions
            .get(&auction_id)
            .ok_or(SimError::UnknownAuction(auction_id))?;
        if a.status != AuctionStatus::Open || self.clock >= a.deadline_tick {
            return Err(SimError::AuctionClosed);
        }
        if a.seller == *caller {
            return Err(SimError::SelfBid);
        }
        let highest = a.bids.last().map(|(_, amt)| *amt);
        if amount < a.start_price || highest.is_some_and(|h| amount <= h) {
            return Err(SimError::BidTooLow);
        }
        let chain = a.contract.chain.clone();
        let previous = a.escrowed.get(caller).copied().unwrap_or(0);
        let balance = self.balance_native(&chain, caller)?;
        // the previous escrow comes back before the new full amount goes in
        if previous < amount && balance < amount - previous {
            return Err(SimError::InsufficientBalance {
                account: caller.0.clone(),
                have: balance,
                need: amount - previous,
            });
        }
        let custody = Address::new(AUCTION_CUSTODY);
        if previous > 0 {
            self.transfer_native(&chain, &custody, caller, previous)?;
        }
        self.transfer_native(&chain, caller, &custody, amount)?;
        let a = self.market.auctions.get_mut(&auction_id).unwrap();
        a.escrowed.insert(caller.clone(), amount);
        a.bids.push((caller.clone(), amount));
        self.log(Event::BidPlaced {
            auction_id,
            bidder: caller.clone(),
            amount,
        });
        Ok(())
    }

    /// Marks open auctions whose deadline has passed as Ended. Called from
    /// `advance_time`.
    pub(crate) fn end_due_auctions(&mut self) {
        let due: Vec<u64> = self
            .market
            .auctions
            .values()
            .filter(|a| a.status == AuctionStatus::Open && a.deadline_tick <= self.clock)
            .map(|a| a.id)
            .collect();
        for id in due {
            self.market.auctions.get_mut(&id).unwrap().status = AuctionStatus::Ended;
            self.log(Event::AuctionEnded { auction_id: id });
        }
    }

    /// Winner takes the token and pays their bid from custody; every other
    /// bidder is refunded in full. A zero-bid auction returns cleanly to the
    /// seller.
    pub fn settle_auction(&mut self, auction_id: u64) -> Result<()> {
        let a = self
            .market
            .auctions
            .get(&auction_id)
            .ok_or(SimError::UnknownAuction(auction_id))?
            .clone();
        match a.status {
            AuctionStatus::Open => return Err(SimError::AuctionStillOpen),
            AuctionStatus::Settled => return Err(SimError::AlreadySettled),
            AuctionStatus::Ended => {}
        }
        let chain = a.contract.chain.clone();
        let custody = Address::new(AUCTION_CUSTODY);
        // a direct owner transfer during the auction consumes the approval;
        // in that case the sale cannot settle and everyone is refunded
        let settleable = self.nft(&a.contract, a.token_id).is_ok_and(|rec| {
            rec.status == NftStatus::Live
                && rec.owner == a.seller
                && rec.approved == Some(Address::new(MARKET_OPERATOR))
        });
        let winner = a.bids.last().cloned().filter(|_| settleable);
        let mut sale_id = None;
        let mut commission = None;
        let mut price = None;
        if !settleable || winner.is_none() {
            for (bidder, escrow) in &a.escrowed {
                self.transfer_native(&chain, &custody, bidder, *escrow)?;
            }
        }
        if let Some((ref win_addr, win_amount)) = winner {
            let fee = commission_of(win_amount);
            let owner = self.market.owner.clone();
            self.transfer_native(&chain, &custody, &a.seller, win_amount - fee)?;
            self.transfer_native(&chain, &custody, &owner, fee)?;
            let operator = Address::new(MARKET_OPERATOR);
            self.transfer_nft(&a.contract, &operator, a.token_id, win_addr)?;
            for (bidder, escrow) in &a.escrowed {
                if bidder != win_addr {
                    self.transfer_native(&chain, &custody, bidder, *escrow)?;
                }
            }
            self.market.sale_count += 1;
            let sid = self.market.sale_count;
            self.market.sales.insert(
                sid,
                SaleRecord {
                    buyer: win_addr.clone(),
                    seller: a.seller.clone(),
                    price: win_amount,
                    raters: BTreeSet::new(),
                },
            );
            sale_id = Some(sid);
            commission = Some(fee);
            price = Some(win_amount);
        } else {
            // no bids: revoke the approval, seller keeps the token
            if let Ok(rec) = self.nft_mut(&a.contract, a.token_id) {
                if rec.approved == Some(Address::new(MARKET_OPERATOR)) {
                    rec.approved = None;
                }
            }
        }
        let a = self.market.auctions.get_mut(&auction_id).unwrap();
        a.status = AuctionStatus::Settled;
        a.escrowed.clear();
        self.log(Event::AuctionSettled {
            auction_id,
            sale_id,
            winner: winner.map(|(addr, _)| addr),
            price,
            commission,
        });
        Ok(())
    }

    /// Either party of a completed sale rates the other once.
    pub fn rate_counterparty(
        &mut self,
        caller: &Address,
        sale_id: u64,
        target: &Address,
        score: u8,
    ) -> Result<()> {
        let sale = self
            .market
            .sales
            .get(&sale_id)
            .ok_or(SimError::NotPartyToSale)?;
        let parties = [&sale.buyer, &sale.seller];
        if !parties.contains(&caller) || !parties.contains(&target) || caller == target {
            return Err(SimError::NotPartyToSale);
        }
        if !(1..=5).contains(&score) {
            return Err(SimError::InvalidScore);
        }
        if sale.raters.contains(caller) {
            return Err(SimError::DuplicateRating);
        }
        self.market
            .sales
            .get_mut(&sale_id)
            .unwrap()
            .raters
            .insert(caller.clone());
        if let Some(p) = self.market.participants.get_mut(target) {
            p.ratings_received.push(Rating {
                rater: caller.clone(),
                score,
                sale_id,
            });
        }
        self.log(Event::RatingSubmitted {
            sale_id,
            rater: caller.clone(),
            target: target.clone(),
            score,
        });
        Ok(())
    }
}
