//! Winner determination for the token-capacity auction.
//!
//! Given bids `(weight, price, time)` and a token supply `k`, the solver
//! picks the subset maximizing combined price subject to combined weight
//! at most `k`. Among equal-revenue subsets it returns the unique group
//! whose descending time vector is lexicographically smallest, i.e. ties
//! go to the group that finished bidding earliest.
//!
//! [`solve`] is the production path: an exact dynamic program over
//! (bid prefix, capacity) with a minimal-prefix reconstruction that
//! realizes the tie-break. [`greedy`] is the classic price/weight-ratio
//! baseline, kept for comparison; it can miss revenue. [`oracle_solve`]
//! enumerates every subset and exists for tests only.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::error::AuctionError;
use crate::model::{time_vector, Bid, BidId, Money};

/// Upper bid count accepted by the enumeration oracles.
pub const ORACLE_MAX_BIDS: usize = 25;

/// A determined winner set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    /// Winning bid ids in ascending admission order.
    pub winner_ids: Vec<BidId>,
    /// Combined price of the winners.
    pub value: Money,
    /// Combined token weight of the winners.
    pub tokens: u32,
}

impl SolveResult {
    fn empty() -> SolveResult {
        SolveResult {
            winner_ids: Vec::new(),
            value: Money::ZERO,
            tokens: 0,
        }
    }

    fn from_winners(winners: &[&Bid]) -> SolveResult {
        SolveResult {
            winner_ids: winners.iter().map(|b| b.id.clone()).collect(),
            value: winners.iter().map(|b| b.price).sum(),
            tokens: winners.iter().map(|b| b.weight).sum(),
        }
    }
}

/// Returns the bids in ascending admission order, rejecting duplicate
/// timestamps.
pub fn sort_by_time(bids: &[Bid]) -> Result<Vec<Bid>, AuctionError> {
    let mut sorted = bids.to_vec();
    sorted.sort_by_key(|b| b.time);
    for pair in sorted.windows(2) {
        if pair[0].time == pair[1].time {
            return Err(AuctionError::DuplicateTimestamp {
                time: pair[0].time,
                first: pair[0].id.clone(),
                second: pair[1].id.clone(),
            });
        }
    }
    Ok(sorted)
}

/// Drops bids that cannot appear in any winning group.
///
/// At most `floor(k / w)` bids of weight `w` fit in the capacity, so each
/// weight class keeps only its `floor(k / w)` best bids by price, ties to
/// the earlier timestamp. The survivors come back in ascending time order.
/// Solving the reduced set yields exactly the same result as the full set.
pub fn prune(bids: &[Bid], capacity: u32) -> Vec<Bid> {
    let mut classes: BTreeMap<u32, Vec<&Bid>> = BTreeMap::new();
    for bid in bids {
        classes.entry(bid.weight).or_default().push(bid);
    }
    let mut kept: Vec<Bid> = Vec::new();
    for (weight, mut class) in classes {
        if weight == 0 {
            continue;
        }
        let bound = (capacity / weight) as usize;
        class.sort_by(|a, b| b.price.cmp(&a.price).then(a.time.cmp(&b.time)));
        kept.extend(class.into_iter().take(bound).cloned());
    }
    kept.sort_by_key(|b| b.time);
    kept
}

/// Price/weight-ratio baseline.
///
/// Scans bids by descending exact ratio (ties: earlier time, then smaller
/// id) and takes each bid that still fits the remaining capacity. Fast,
/// deterministic, and not always optimal.
pub fn greedy(bids: &[Bid], capacity: u32) -> SolveResult {
    let mut order: Vec<&Bid> = bids.iter().collect();
    order.sort_by(|a, b| {
        ratio_cmp(b, a)
            .then_with(|| a.time.cmp(&b.time))
            .then_with(|| a.id.cmp(&b.id))
    });
    let mut remaining = capacity;
    let mut winners: Vec<&Bid> = Vec::new();
    for bid in order {
        if bid.weight >= 1 && bid.weight <= remaining {
            remaining -= bid.weight;
            winners.push(bid);
        }
    }
    winners.sort_by_key(|b| b.time);
    SolveResult::from_winners(&winners)
}

/// Exact comparison of `a.price / a.weight` against `b.price / b.weight`
/// by cross-multiplication of scaled integer units.
fn ratio_cmp(a: &Bid, b: &Bid) -> Ordering {
    let scale = a.price.scale().max(b.price.scale());
    let lhs = a
        .price
        .to_scaled_units(scale)
        .checked_mul(b.weight as i128)
        .expect("price ratio overflow");
    let rhs = b
        .price
        .to_scaled_units(scale)
        .checked_mul(a.weight as i128)
        .expect("price ratio overflow");
    lhs.cmp(&rhs)
}

/// Compares two bid groups by their time vectors: latest bids first,
/// earlier timestamp precedes at the first difference, a strict prefix
/// precedes its extensions. `Less` means `a` wins the tie.
pub fn compare_groups(a: &[Bid], b: &[Bid]) -> Ordering {
    time_vector(a).cmp(&time_vector(b))
}

/// Dense table of optimal values over (bid prefix, capacity).
///
/// `value(i, j)` is the best combined price achievable using only the
/// first `i` bids (in ascending time order) within capacity `j`. Row 0
/// and column 0 are zero; values are non-decreasing in both directions.
/// Cells hold minor units at one common scale so the fill stays integer
/// arithmetic end to end.
pub struct ValueTable {
    cells: Vec<i128>,
    scale: u8,
    prefixes: usize,
    capacity: u32,
}

impl ValueTable {
    /// Fills the table for `bids`, which must already be in ascending
    /// time order when the table feeds winner reconstruction.
    pub fn build(bids: &[Bid], capacity: u32) -> ValueTable {
        let scale = bids.iter().map(|b| b.price.scale()).max().unwrap_or(0);
        let width = capacity as usize + 1;
        let mut cells = vec![0i128; (bids.len() + 1) * width];
        for (i, bid) in bids.iter().enumerate() {
            let row = i + 1;
            let weight = bid.weight as usize;
            let price = bid.price.to_scaled_units(scale);
            let (prev_rows, cur_row) = cells.split_at_mut(row * width);
            let prev = &prev_rows[(row - 1) * width..];
            for j in 0..width {
                let skip = prev[j];
                cur_row[j] = if weight >= 1 && weight <= j {
                    let take = prev[j - weight]
                        .checked_add(price)
                        .expect("value table overflow");
                    skip.max(take)
                } else {
                    skip
                };
            }
        }
        ValueTable {
            cells,
            scale,
            prefixes: bids.len(),
            capacity,
        }
    }

    /// Optimal value over the first `prefix` bids within `capacity`.
    pub fn value(&self, prefix: usize, capacity: u32) -> Money {
        Money::from_scaled(self.raw(prefix, capacity as usize), self.scale)
    }

    fn raw(&self, prefix: usize, capacity: usize) -> i128 {
        self.cells[prefix * (self.capacity as usize + 1) + capacity]
    }

    /// Number of bid prefixes covered, i.e. the bid count.
    pub fn prefix_count(&self) -> usize {
        self.prefixes
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    /// Total allocated cells: (bids + 1) * (capacity + 1).
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Smallest prefix in `0..=bound` whose value at `capacity` reaches
    /// `target`. `target` must be attained at `bound`; monotonicity in the
    /// prefix makes binary search exact.
    fn first_prefix_reaching(&self, target: i128, capacity: usize, bound: usize) -> usize {
        debug_assert!(self.raw(bound, capacity) >= target);
        let mut lo = 0usize;
        let mut hi = bound;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.raw(mid, capacity) < target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Determines the unique winning group.
///
/// The winners maximize combined price within the capacity; among
/// equal-revenue groups, the one whose time vector is lexicographically
/// smallest wins. Reconstruction walks the value table by repeated
/// minimal-prefix extraction: the smallest prefix attaining the optimum
/// ends with the group's latest member, and the search recurses on the
/// remaining capacity and value.
pub fn solve(bids: &[Bid], capacity: u32) -> Result<SolveResult, AuctionError> {
    let sorted = sort_by_time(bids)?;
    let table = ValueTable::build(&sorted, capacity);
    Ok(reconstruct(&sorted, &table))
}

fn reconstruct(sorted: &[Bid], table: &ValueTable) -> SolveResult {
    let scale = table.scale;
    let mut target = table.raw(sorted.len(), table.capacity() as usize);
    if target == 0 {
        return SolveResult::empty();
    }
    let mut capacity = table.capacity() as usize;
    let mut bound = sorted.len();
    let mut winners: Vec<&Bid> = Vec::new();
    while target > 0 {
        let m = table.first_prefix_reaching(target, capacity, bound);
        // Prefix m attains the target and prefix m-1 does not, so bid m is
        // the latest member of the remaining winners.
        debug_assert!(m >= 1);
        let bid = &sorted[m - 1];
        winners.push(bid);
        target -= bid.price.to_scaled_units(scale);
        capacity -= bid.weight as usize;
        bound = m - 1;
        debug_assert_eq!(table.raw(bound, capacity), target);
    }
    winners.reverse();
    SolveResult::from_winners(&winners)
}

/// Exhaustive reference solver: every subset is scored and the best group
/// under the value-then-time-vector order is returned. Test harness only;
/// refuses more than [`ORACLE_MAX_BIDS`] bids.
pub fn oracle_solve(bids: &[Bid], capacity: u32) -> Result<SolveResult, AuctionError> {
    let sorted = sort_by_time(bids)?;
    let best = enumerate_best(&sorted, capacity, |_| true)?;
    Ok(match best {
        Some(mask) => SolveResult::from_winners(&mask_bids(&sorted, mask)),
        None => SolveResult::empty(),
    })
}

/// Shared enumeration core: scans all subsets passing `admit`, keeps the
/// maximum-value one, breaking value ties by [`compare_groups`]. Returns
/// the winning bitmask over `sorted`, or `None` when only the empty group
/// is admissible or no bids exist.
pub(crate) fn enumerate_best(
    sorted: &[Bid],
    capacity: u32,
    admit: impl Fn(u32) -> bool,
) -> Result<Option<u32>, AuctionError> {
    if sorted.len() > ORACLE_MAX_BIDS {
        return Err(AuctionError::TooManyBids {
            count: sorted.len(),
            max: ORACLE_MAX_BIDS,
        });
    }
    let n = sorted.len();
    let mut best: Option<(Money, u32)> = None;
    for mask in 1u32..(1u32 << n) {
        let mut weight: u64 = 0;
        let mut value = Money::ZERO;
        for (i, bid) in sorted.iter().enumerate() {
            if mask & (1 << i) != 0 {
                weight += bid.weight as u64;
                value += bid.price;
            }
        }
        if weight > capacity as u64 || !admit(mask) {
            continue;
        }
        let better = match &best {
            None => true,
            Some((best_value, best_mask)) => match value.cmp(best_value) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => {
                    compare_groups(
                        &mask_bid_vec(sorted, mask),
                        &mask_bid_vec(sorted, *best_mask),
                    ) == Ordering::Less
                }
            },
        };
        if better {
            best = Some((value, mask));
        }
    }
    Ok(best.map(|(_, mask)| mask))
}

pub(crate) fn mask_bids(sorted: &[Bid], mask: u32) -> Vec<&Bid> {
    sorted
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, b)| b)
        .collect()
}

fn mask_bid_vec(sorted: &[Bid], mask: u32) -> Vec<Bid> {
    mask_bids(sorted, mask).into_iter().cloned().collect()
}
