//! Property tests over the public API.

use proptest::prelude::*;

use multichain_sim::marketplace::commission_of;
use multichain_sim::{Address, ChainId, ContentHash, WorldState};

proptest! {
    /// Random transfer sequences never create or destroy native value.
    #[test]
    fn native_value_is_conserved(
        credits in proptest::collection::vec((0u8..4, 1u128..1_000_000), 1..8),
        transfers in proptest::collection::vec((0u8..4, 0u8..4, 1u128..1_000_000), 0..64),
    ) {
        let mut w = WorldState::new();
        let main = ChainId::new("main").unwrap();
        w.create_chain(main.clone()).unwrap();
        let who = |i: u8| Address::new(format!("acct{i}"));
        let mut supply = 0u128;
        for (i, amount) in credits {
            w.credit(&main, &who(i), amount).unwrap();
            supply += amount;
        }
        for (from, to, amount) in transfers {
            let _ = w.transfer_native(&main, &who(from), &who(to), amount);
            let held: u128 = (0..4).map(|i| w.balance_native(&main, &who(i)).unwrap()).sum();
            prop_assert_eq!(held, supply);
            prop_assert!(w.check_invariants().is_empty());
        }
    }

    /// Stored metadata always reads back bit-for-bit under its hash.
    #[test]
    fn metadata_round_trips(data in proptest::collection::vec(any::<u8>(), 0..512)) {
        let mut w = WorldState::new();
        let h = w.metadata.put(data.clone());
        prop_assert_eq!(h, ContentHash::of(&data));
        prop_assert_eq!(w.metadata.get(&h).unwrap(), &data[..]);
    }

    /// The commission never exceeds the price and the seller cut plus the
    /// commission always reassembles the price exactly.
    #[test]
    fn commission_splits_cleanly(price in 1u128..=u128::MAX / 250) {
        let c = commission_of(price);
        prop_assert!(c <= price);
        prop_assert_eq!(c + (price - c), price);
        prop_assert_eq!(c, price / 40);
    }
}
