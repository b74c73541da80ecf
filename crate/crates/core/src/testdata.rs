//! Shared fixtures for unit tests.

use crate::model::{Bid, Money, Timestamp};

pub(crate) fn money(text: &str) -> Money {
    Money::parse(text, 2).unwrap()
}

pub(crate) fn ts(seq: u64) -> Timestamp {
    Timestamp::new(seq).unwrap()
}

pub(crate) fn bid(id: &str, weight: u32, price: &str, time: u64) -> Bid {
    Bid::new(id, weight, money(price), ts(time))
}

/// The 20-bid instance with token supply 5 whose two equal-revenue groups
/// force the tie-break on the latest bid.
pub(crate) fn example_one() -> Vec<Bid> {
    let rows: [(u32, &str); 20] = [
        (4, "10"),
        (2, "4"),
        (1, "2"),
        (1, "3"),
        (5, "11"),
        (4, "7"),
        (2, "8"),
        (3, "4"),
        (3, "5"),
        (2, "3"),
        (1, "1"),
        (2, "6"),
        (1, "2"),
        (5, "10"),
        (1, "4"),
        (1, "2"),
        (3, "3"),
        (1, "3"),
        (3, "5"),
        (5, "11"),
    ];
    rows.iter()
        .enumerate()
        .map(|(i, (w, p))| bid(&format!("b_{}", i + 1), *w, p, i as u64 + 1))
        .collect()
}

/// The 21-bid extension with token supply 6 where both contending groups
/// share the same latest bid.
pub(crate) fn example_two() -> Vec<Bid> {
    let mut bids = example_one();
    bids.push(bid("b_21", 1, "5", 21));
    bids
}
