//! Error type shared by every state-mutating operation.
//!
//! Each variant has a stable short code (see [`SimError::code`]) so scenario
//! files can assert on expected failures by name.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    // ledger
    #[error("chain already exists: {0}")]
    DuplicateChain(String),
    #[error("unknown chain: {0}")]
    UnknownChain(String),
    #[error("insufficient balance: {account} has {have}, needs {need}")]
    InsufficientBalance {
        account: String,
        have: u128,
        need: u128,
    },
    #[error("arithmetic overflow")]
    Overflow,

    // token
    #[error("contract already registered: {0}")]
    DuplicateContract(String),
    #[error("unknown contract: {0}")]
    UnknownContract(String),
    #[error("unknown token: {0}")]
    UnknownToken(String),
    #[error("caller is not the token owner")]
    NotOwner,
    #[error("caller is neither owner nor approved operator")]
    NotAuthorized,
    #[error("caller is not an authorized minter for this contract")]
    NotAuthorizedMinter,
    #[error("token is not live")]
    TokenNotLive,

    // metadata
    #[error("no blob stored under the given hash")]
    NotFound,

    // bridge
    #[error("bridge addresses already set")]
    AlreadySet,
    #[error("invalid bridge address")]
    InvalidAddress,
    #[error("bridge addresses not configured")]
    BridgesNotSet,
    #[error("destination chain equals source chain")]
    SameChain,
    #[error("token is not a wrapped representation")]
    NotWrapped,
    #[error("wrapped representations return home via burn, not lock")]
    CannotBridgeWrapped,
    #[error("caller is not the counterpart bridge contract")]
    UnauthorizedBridge,
    #[error("token is not bridge-locked")]
    TokenNotLocked,
    #[error("unknown bridge transfer: {0}")]
    UnknownTransfer(u64),
    #[error("transfer is not in a retryable state")]
    NotRetryable,

    // escrow
    #[error("buyer, seller and arbitrator must be pairwise distinct")]
    IdenticalParties,
    #[error("escrow amount must be positive")]
    ZeroAmount,
    #[error("unknown escrow: {0}")]
    UnknownEscrow(u64),
    #[error("caller is not the buyer")]
    NotBuyer,
    #[error("sent value must equal the escrow amount")]
    WrongValue,
    #[error("operation not allowed in the current escrow state")]
    WrongState,
    #[error("caller is neither buyer nor seller")]
    NotParty,
    #[error("caller is not the arbitrator")]
    NotArbitrator,

    // marketplace
    #[error("address already registered: {0}")]
    DuplicateRegistration(String),
    #[error("caller is not a registered, KYC-verified participant")]
    NotRegistered,
    #[error("contract is not in the marketplace's preserved seller list")]
    ContractNotPreserved,
    #[error("listing chain does not match the contract's chain")]
    WrongChain,
    #[error("token already has an active listing, order or auction")]
    AlreadyListed,
    #[error("price must be positive")]
    ZeroPrice,
    #[error("unknown listing: {0}")]
    UnknownListing(u64),
    #[error("listing is not active")]
    ListingInactive,
    #[error("NFT ownership changed since listing")]
    OwnershipChanged,
    #[error("caller is not the listing owner")]
    NotListingOwner,
    #[error("unknown selling order: {0}")]
    UnknownOrder(u64),
    #[error("selling order is not open")]
    OrderNotOpen,
    #[error("auction duration must be positive")]
    ZeroDuration,
    #[error("unknown auction: {0}")]
    UnknownAuction(u64),
    #[error("auction is closed to bidding")]
    AuctionClosed,
    #[error("bid must be at least the start price and above the current highest bid")]
    BidTooLow,
    #[error("seller cannot bid on their own auction")]
    SelfBid,
    #[error("auction deadline has not passed yet")]
    AuctionStillOpen,
    #[error("auction already settled")]
    AlreadySettled,
    #[error("caller or target was not a party to this sale")]
    NotPartyToSale,
    #[error("rating already submitted for this sale")]
    DuplicateRating,
    #[error("score must be between 1 and 5")]
    InvalidScore,
}

impl SimError {
    /// Stable code used by scenario `assert` commands.
    pub fn code(&self) -> &'static str {
        use SimError::*;
        match self {
            DuplicateChain(_) => "DuplicateChain",
            UnknownChain(_) => "UnknownChain",
            InsufficientBalance { .. } => "InsufficientBalance",
            Overflow => "Overflow",
            DuplicateContract(_) => "DuplicateContract",
            UnknownContract(_) => "UnknownContract",
            UnknownToken(_) => "UnknownToken",
            NotOwner => "NotOwner",
            NotAuthorized => "NotAuthorized",
            NotAuthorizedMinter => "NotAuthorizedMinter",
            TokenNotLive => "TokenNotLive",
            NotFound => "NotFound",
            AlreadySet => "AlreadySet",
            InvalidAddress => "InvalidAddress",
            BridgesNotSet => "BridgesNotSet",
            SameChain => "SameChain",
            NotWrapped => "NotWrapped",
            CannotBridgeWrapped => "CannotBridgeWrapped",
            UnauthorizedBridge => "UnauthorizedBridge",
            TokenNotLocked => "TokenNotLocked",
            UnknownTransfer(_) => "UnknownTransfer",
            NotRetryable => "NotRetryable",
            IdenticalParties => "IdenticalParties",
            ZeroAmount => "ZeroAmount",
            UnknownEscrow(_) => "UnknownEscrow",
            NotBuyer => "NotBuyer",
            WrongValue => "WrongValue",
            WrongState => "WrongState",
            NotParty => "NotParty",
            NotArbitrator => "NotArbitrator",
            DuplicateRegistration(_) => "DuplicateRegistration",
            NotRegistered => "NotRegistered",
            ContractNotPreserved => "ContractNotPreserved",
            WrongChain => "WrongChain",
            AlreadyListed => "AlreadyListed",
            ZeroPrice => "ZeroPrice",
            UnknownListing(_) => "UnknownListing",
            ListingInactive => "ListingInactive",
            OwnershipChanged => "OwnershipChanged",
            NotListingOwner => "NotListingOwner",
            UnknownOrder(_) => "UnknownOrder",
            OrderNotOpen => "OrderNotOpen",
            ZeroDuration => "ZeroDuration",
            UnknownAuction(_) => "UnknownAuction",
            AuctionClosed => "AuctionClosed",
            BidTooLow => "BidTooLow",
            SelfBid => "SelfBid",
            AuctionStillOpen => "AuctionStillOpen",
            AlreadySettled => "AlreadySettled",
            NotPartyToSale => "NotPartyToSale",
            DuplicateRating => "DuplicateRating",
            InvalidScore => "InvalidScore",
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
