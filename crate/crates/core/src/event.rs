//! Ordered event log. Field names and ordering are stable so structured
//! reports diff cleanly across runs.

use serde::Serialize;

use crate::ledger::{Address, Amount, ChainId};
use crate::metadata::ContentHash;
use crate::token::{ContractId, TokenId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "event")]
pub enum Event {
    ChainCreated {
        chain: ChainId,
    },
    Credit {
        chain: ChainId,
        to: Address,
        amount: Amount,
    },
    Transfer {
        chain: ChainId,
        from: Address,
        to: Address,
        amount: Amount,
    },
    FungibleTransfer {
        chain: ChainId,
        from: Address,
        to: Address,
        amount: Amount,
    },
    TimeAdvanced {
        to: u64,
    },
    MetadataStored {
        hash: ContentHash,
    },
    ContractRegistered {
        contract: ContractId,
    },
    Minted {
        contract: ContractId,
        token_id: TokenId,
        owner: Address,
    },
    Approval {
        contract: ContractId,
        token_id: TokenId,
        operator: Address,
    },
    NftTransferred {
        contract: ContractId,
        token_id: TokenId,
        from: Address,
        to: Address,
    },
    ParticipantRegistered {
        address: Address,
        kyc_verified: bool,
    },
    SellerContractRegistered {
        seller: Address,
        contract: ContractId,
    },
    #[serde(rename = "NFTListed")]
    NftListed {
        listing_id: u64,
        seller: Address,
        contract: ContractId,
        token_id: TokenId,
        price: Amount,
        chain: ChainId,
    },
    #[serde(rename = "NFTListedForSale")]
    NftListedForSale {
        order_id: u64,
        seller: Address,
        contract: ContractId,
        token_id: TokenId,
        price: Amount,
    },
    #[serde(rename = "NFTBought")]
    NftBought {
        listing_id: u64,
        sale_id: u64,
        buyer: Address,
        seller: Address,
        price: Amount,
        commission: Amount,
    },
    OrderFilled {
        order_id: u64,
        sale_id: u64,
        buyer: Address,
        seller: Address,
        price: Amount,
        commission: Amount,
    },
    OrderCancelled {
        order_id: u64,
    },
    #[serde(rename = "NFTUnlisted")]
    NftUnlisted {
        listing_id: u64,
    },
    AuctionStarted {
        auction_id: u64,
        seller: Address,
        contract: ContractId,
        token_id: TokenId,
        start_price: Amount,
        deadline_tick: u64,
    },
    BidPlaced {
        auction_id: u64,
        bidder: Address,
        amount: Amount,
    },
    AuctionEnded {
        auction_id: u64,
    },
    AuctionSettled {
        auction_id: u64,
        sale_id: Option<u64>,
        winner: Option<Address>,
        price: Option<Amount>,
        commission: Option<Amount>,
    },
    RatingSubmitted {
        sale_id: u64,
        rater: Address,
        target: Address,
        score: u8,
    },
    EscrowOpened {
        escrow_id: u64,
        chain: ChainId,
        buyer: Address,
        seller: Address,
        arbitrator: Address,
        amount: Amount,
    },
    EscrowPaymentConfirmed {
        escrow_id: u64,
    },
    EscrowCompleted {
        escrow_id: u64,
    },
    EscrowRefunded {
        escrow_id: u64,
    },
    BridgesSet {
        main_chain: ChainId,
        main_bridge: Address,
        side_bridge: Address,
    },
    // Field set and order fixed: (tokenId, fromChain, toChain, nftContract).
    #[serde(rename = "NFTLocked")]
    NftLocked {
        token_id: TokenId,
        from_chain: ChainId,
        to_chain: ChainId,
        nft_contract: Address,
    },
    #[serde(rename = "NFTUnlocked")]
    NftUnlocked {
        token_id: TokenId,
        from_chain: ChainId,
        to_chain: ChainId,
        nft_contract: Address,
    },
    WrappedMinted {
        contract: ContractId,
        token_id: TokenId,
        origin_contract: ContractId,
        origin_token_id: TokenId,
        owner: Address,
    },
    WrappedBurned {
        contract: ContractId,
        token_id: TokenId,
        burner: Address,
    },
    PegLocked {
        from_chain: ChainId,
        to_chain: ChainId,
        account: Address,
        amount: Amount,
    },
    PegMinted {
        chain: ChainId,
        account: Address,
        amount: Amount,
    },
    PegBurned {
        chain: ChainId,
        account: Address,
        amount: Amount,
    },
    PegReleased {
        chain: ChainId,
        account: Address,
        amount: Amount,
    },
    TransferScheduled {
        transfer_id: u64,
        kind: String,
        delivery_tick: u64,
    },
    TransferDelivered {
        transfer_id: u64,
    },
    TransferFailed {
        transfer_id: u64,
    },
    TransferRetried {
        transfer_id: u64,
        delivery_tick: u64,
    },
}
