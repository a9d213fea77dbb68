//! Scenario files: one JSON command object per line, applied through the
//! single-writer loop with invariant checks after every step.
//!
//! Blank lines and lines starting with `#` are skipped. Unknown command
//! tags are a parse error, not a skip.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::SimError;
use crate::ledger::{Address, ChainId};
use crate::metadata::ContentHash;
use crate::report::{RunReport, StepFailure};
use crate::token::{ContractId, TokenId};
use crate::world::WorldState;

#[derive(Debug, Clone, Error)]
#[error("parse error at line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelDelay {
    pub from: ChainId,
    pub to: ChainId,
    pub ticks: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "cmd", rename_all = "snake_case")]
pub enum Command {
    CreateChain {
        chain: ChainId,
    },
    Credit {
        chain: ChainId,
        to: Address,
        amount: u64,
    },
    RegisterParticipant {
        address: Address,
        #[serde(default)]
        roles: Vec<String>,
        kyc: bool,
    },
    RegisterContract {
        chain: ChainId,
        address: Address,
    },
    RegisterSellerContract {
        seller: Address,
        contract: ContractId,
    },
    PutMetadata {
        data: String,
    },
    MintNft {
        contract: ContractId,
        caller: Address,
        uri: String,
        /// Inline metadata stored before minting; mutually exclusive with
        /// `metadata_hash`.
        #[serde(default)]
        metadata: Option<String>,
        #[serde(default)]
        metadata_hash: Option<ContentHash>,
        mint_price: u64,
    },
    Approve {
        contract: ContractId,
        caller: Address,
        token_id: TokenId,
        operator: Address,
    },
    TransferNft {
        contract: ContractId,
        caller: Address,
        token_id: TokenId,
        to: Address,
    },
    TransferNative {
        chain: ChainId,
        from: Address,
        to: Address,
        amount: u64,
    },
    TransferFungible {
        chain: ChainId,
        caller: Address,
        to: Address,
        amount: u64,
    },
    ListNft {
        caller: Address,
        contract: ContractId,
        token_id: TokenId,
        price: u64,
        chain: ChainId,
    },
    SellNft {
        caller: Address,
        contract: ContractId,
        token_id: TokenId,
        price: u64,
    },
    BuyNft {
        caller: Address,
        listing_id: u64,
        payment: u64,
    },
    BuyOrder {
        caller: Address,
        order_id: u64,
        payment: u64,
    },
    CancelOrder {
        caller: Address,
        order_id: u64,
    },
    UnlistNft {
        caller: Address,
        listing_id: u64,
    },
    StartAuction {
        caller: Address,
        contract: ContractId,
        token_id: TokenId,
        #[serde(default)]
        start_price: Option<u64>,
        duration_ticks: u64,
    },
    PlaceBid {
        caller: Address,
        auction_id: u64,
        amount: u64,
    },
    SettleAuction {
        auction_id: u64,
    },
    RateCounterparty {
        caller: Address,
        sale_id: u64,
        target: Address,
        score: u8,
    },
    OpenEscrow {
        chain: ChainId,
        buyer: Address,
        seller: Address,
        arbitrator: Address,
        amount: u64,
    },
    ConfirmPayment {
        escrow_id: u64,
        caller: Address,
        sent_value: u64,
    },
    ConfirmDelivery {
        escrow_id: u64,
        caller: Address,
    },
    Refund {
        escrow_id: u64,
        caller: Address,
    },
    SetBridges {
        main_chain: ChainId,
        main_bridge: Address,
        side_bridge: Address,
    },
    LockNft {
        caller: Address,
        contract: ContractId,
        token_id: TokenId,
        to_chain: ChainId,
    },
    BurnWrapped {
        caller: Address,
        contract: ContractId,
        token_id: TokenId,
    },
    PegLock {
        caller: Address,
        amount: u64,
        to_chain: ChainId,
    },
    PegBurn {
        chain: ChainId,
        caller: Address,
        amount: u64,
    },
    AdvanceTime {
        ticks: u64,
    },
    InjectFault {
        #[serde(default)]
        fail_transfers: Vec<u64>,
        #[serde(default)]
        channel_delays: Vec<ChannelDelay>,
    },
    RetryTransfer {
        id: u64,
    },
    Assert(Assertion),
}

/// State and error expectations checkable from a scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Assertion {
    /// Runs the wrapped command, expects it to fail with the given error
    /// code, and checks the failure mutated no state.
    ExpectError {
        expect_error: String,
        run: Box<Command>,
    },
    Balance {
        chain: ChainId,
        address: Address,
        balance: u64,
    },
    FungibleBalance {
        chain: ChainId,
        address: Address,
        fungible_balance: u64,
    },
    Owner {
        contract: ContractId,
        token_id: TokenId,
        owner: Address,
    },
    Clock {
        clock: u64,
    },
}

/// Parses a scenario source into its command list.
pub fn parse_scenario(source: &str) -> Result<Vec<Command>, ParseError> {
    let mut commands = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let cmd: Command = serde_json::from_str(trimmed).map_err(|e| ParseError {
            line: idx + 1,
            reason: e.to_string(),
        })?;
        commands.push(cmd);
    }
    Ok(commands)
}

fn apply_command(world: &mut WorldState, cmd: &Command) -> Result<(), SimError> {
    match cmd {
        Command::CreateChain { chain } => world.create_chain(chain.clone()),
        Command::Credit { chain, to, amount } => world.credit(chain, to, u128::from(*amount)),
        Command::RegisterParticipant {
            address,
            roles,
            kyc,
        } => {
            let refs: Vec<&str> = roles.iter().map(|s| s.as_str()).collect();
            world.register_participant(address, &refs, *kyc)
        }
        Command::RegisterContract { chain, address } => {
            world.register_contract(chain, address).map(|_| ())
        }
        Command::RegisterSellerContract { seller, contract } => {
            world.register_seller_contract(seller, contract)
        }
        Command::PutMetadata { data } => {
            let hash = world.metadata.put(data.clone().into_bytes());
            world
                .events
                .push(crate::event::Event::MetadataStored { hash });
            Ok(())
        }
        Command::MintNft {
            contract,
            caller,
            uri,
            metadata,
            metadata_hash,
            mint_price,
        } => {
            let hash = match (metadata, metadata_hash) {
                (_, Some(h)) => *h,
                (Some(data), None) => world.metadata.put(data.clone().into_bytes()),
                (None, None) => ContentHash::of(uri.as_bytes()),
            };
            world
                .mint_nft(contract, caller, uri.clone(), hash, u128::from(*mint_price))
                .map(|_| ())
        }
        Command::Approve {
            contract,
            caller,
            token_id,
            operator,
        } => world.approve(contract, caller, *token_id, operator),
        Command::TransferNft {
            contract,
            caller,
            token_id,
            to,
        } => world.transfer_nft(contract, caller, *token_id, to),
        Command::TransferNative {
            chain,
            from,
            to,
            amount,
        } => world.transfer_native(chain, from, to, u128::from(*amount)),
        Command::TransferFungible {
            chain,
            caller,
            to,
            amount,
        } => world.transfer_fungible(chain, caller, to, u128::from(*amount)),
        Command::ListNft {
            caller,
            contract,
            token_id,
            price,
            chain,
        } => world
            .list_nft(caller, contract, *token_id, u128::from(*price), chain)
            .map(|_| ()),
        Command::SellNft {
            caller,
            contract,
            token_id,
            price,
        } => world
            .sell_nft(caller, contract, *token_id, u128::from(*price))
            .map(|_| ()),
        Command::BuyNft {
            caller,
            listing_id,
            payment,
        } => world
            .buy_nft(caller, *listing_id, u128::from(*payment))
            .map(|_| ()),
        Command::BuyOrder {
            caller,
            order_id,
            payment,
        } => world
            .buy_order(caller, *order_id, u128::from(*payment))
            .map(|_| ()),
        Command::CancelOrder { caller, order_id } => world.cancel_order(caller, *order_id),
        Command::UnlistNft { caller, listing_id } => world.unlist_nft(caller, *listing_id),
        Command::StartAuction {
            caller,
            contract,
            token_id,
            start_price,
            duration_ticks,
        } => world
            .start_auction(
                caller,
                contract,
                *token_id,
                start_price.map(u128::from),
                *duration_ticks,
            )
            .map(|_| ()),
        Command::PlaceBid {
            caller,
            auction_id,
            amount,
        } => world.place_bid(caller, *auction_id, u128::from(*amount)),
        Command::SettleAuction { auction_id } => world.settle_auction(*auction_id),
        Command::RateCounterparty {
            caller,
            sale_id,
            target,
            score,
        } => world.rate_counterparty(caller, *sale_id, target, *score),
        Command::OpenEscrow {
            chain,
            buyer,
            seller,
            arbitrator,
            amount,
        } => world
            .open_escrow(chain, buyer, seller, arbitrator, u128::from(*amount))
            .map(|_| ()),
        Command::ConfirmPayment {
            escrow_id,
            caller,
            sent_value,
        } => world.confirm_payment(*escrow_id, caller, u128::from(*sent_value)),
        Command::ConfirmDelivery { escrow_id, caller } => {
            world.confirm_delivery(*escrow_id, caller)
        }
        Command::Refund { escrow_id, caller } => world.refund(*escrow_id, caller),
        Command::SetBridges {
            main_chain,
            main_bridge,
            side_bridge,
        } => world.set_bridges(main_chain, main_bridge, side_bridge),
        Command::LockNft {
            caller,
            contract,
            token_id,
            to_chain,
        } => world
            .lock_nft(caller, contract, *token_id, to_chain)
            .map(|_| ()),
        Command::BurnWrapped {
            caller,
            contract,
            token_id,
        } => world.burn_wrapped(caller, contract, *token_id).map(|_| ()),
        Command::PegLock {
            caller,
            amount,
            to_chain,
        } => world
            .peg_lock(caller, u128::from(*amount), to_chain)
            .map(|_| ()),
        Command::PegBurn {
            chain,
            caller,
            amount,
        } => world
            .peg_burn(chain, caller, u128::from(*amount))
            .map(|_| ()),
        Command::AdvanceTime { ticks } => world.advance_time(*ticks),
        Command::InjectFault {
            fail_transfers,
            channel_delays,
        } => {
            for id in fail_transfers {
                world.bridge.fail_transfer(*id);
            }
            for d in channel_delays {
                world
                    .bridge
                    .set_channel_delay(d.from.clone(), d.to.clone(), d.ticks);
            }
            Ok(())
        }
        Command::RetryTransfer { id } => world.retry_transfer(*id),
        Command::Assert(_) => unreachable!("asserts are handled by the runner"),
    }
}

fn check_assertion(world: &mut WorldState, a: &Assertion) -> Result<(), String> {
    match a {
        Assertion::ExpectError { expect_error, run } => {
            let snapshot = world.clone();
            match apply_step(world, run) {
                Ok(()) => Err(format!("expected error {expect_error}, command succeeded")),
                Err(e) if e == *expect_error => {
                    if *world != snapshot {
                        Err(format!("error {e} mutated state"))
                    } else {
                        Ok(())
                    }
                }
                Err(e) => Err(format!("expected error {expect_error}, got {e}")),
            }
        }
        Assertion::Balance {
            chain,
            address,
            balance,
        } => {
            let actual = world
                .balance_native(chain, address)
                .map_err(|e| e.to_string())?;
            if actual == u128::from(*balance) {
                Ok(())
            } else {
                Err(format!(
                    "balance of {address} on {chain}: {actual} != {balance}"
                ))
            }
        }
        Assertion::FungibleBalance {
            chain,
            address,
            fungible_balance,
        } => {
            let actual = world
                .balance_of(chain, address)
                .map_err(|e| e.to_string())?;
            if actual == u128::from(*fungible_balance) {
                Ok(())
            } else {
                Err(format!(
                    "fungible balance of {address} on {chain}: {actual} != {fungible_balance}"
                ))
            }
        }
        Assertion::Owner {
            contract,
            token_id,
            owner,
        } => {
            let actual = world
                .owner_of(contract, *token_id)
                .map_err(|e| e.to_string())?;
            if actual == owner {
                Ok(())
            } else {
                Err(format!(
                    "owner of {contract}#{token_id}: {actual} != {owner}"
                ))
            }
        }
        Assertion::Clock { clock } => {
            if world.clock == *clock {
                Ok(())
            } else {
                Err(format!("clock {} != {clock}", world.clock))
            }
        }
    }
}

/// Applies one non-assert command; the error is the stable code string.
fn apply_step(world: &mut WorldState, cmd: &Command) -> Result<(), String> {
    apply_command(world, cmd).map_err(|e| e.code().to_string())
}

/// Runs the whole scenario: commands in order, invariants after every step.
pub fn run_scenario(
    source: &str,
    name: &str,
    seed: u64,
    strict: bool,
) -> Result<RunReport, ParseError> {
    let commands = parse_scenario(source)?;
    let mut world = WorldState::new();
    let mut failures: Vec<StepFailure> = Vec::new();
    let mut violations = Vec::new();
    'steps: for (step, cmd) in commands.iter().enumerate() {
        let result = match cmd {
            Command::Assert(a) => check_assertion(&mut world, a),
            other => apply_step(&mut world, other),
        };
        if let Err(message) = result {
            failures.push(StepFailure {
                step: step + 1,
                message,
            });
        }
        for v in world.check_invariants() {
            violations.push((step + 1, v));
            if strict {
                break 'steps;
            }
        }
    }
    Ok(RunReport::build(name, seed, &world, failures, violations))
}
