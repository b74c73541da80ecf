//! Winner determination with a category-majority side constraint.
//!
//! Every bid carries a binary category flag. The winners maximize combined
//! price within the token capacity as usual, with one extra rule: if any
//! flagged (category 1) bid is selected, the flagged winners' combined
//! token weight must strictly exceed the unflagged winners' combined
//! weight. Ties between equal-revenue feasible groups break to the
//! earliest group, exactly as in the unconstrained solver.
//!
//! The dynamic program runs over states (bid prefix, total tokens,
//! category-0 tokens) with exact token sums, O(n * k^2) cells; the
//! majority rule is checked on final states, where category-1 tokens are
//! the difference of the two sums.

use crate::error::AuctionError;
use crate::model::{Bid, BidId, Money};
use crate::solver::{self, sort_by_time};

/// A winner set satisfying the majority rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedResult {
    /// Winning bid ids in ascending admission order.
    pub winner_ids: Vec<BidId>,
    /// Combined price of the winners.
    pub value: Money,
    /// Combined token weight of the winners.
    pub tokens: u32,
    /// Token weight held by category-1 winners; zero, or a strict
    /// majority of `tokens`.
    pub category_tokens: u32,
}

impl ConstrainedResult {
    fn empty() -> ConstrainedResult {
        ConstrainedResult {
            winner_ids: Vec::new(),
            value: Money::ZERO,
            tokens: 0,
            category_tokens: 0,
        }
    }

    fn from_winners(winners: &[&Bid]) -> ConstrainedResult {
        ConstrainedResult {
            winner_ids: winners.iter().map(|b| b.id.clone()).collect(),
            value: winners.iter().map(|b| b.price).sum(),
            tokens: winners.iter().map(|b| b.weight).sum(),
            category_tokens: winners
                .iter()
                .filter(|b| b.category == Some(true))
                .map(|b| b.weight)
                .sum(),
        }
    }
}

fn require_categories(bids: &[Bid]) -> Result<(), AuctionError> {
    for bid in bids {
        if bid.category.is_none() {
            return Err(AuctionError::MissingCategory { id: bid.id.clone() });
        }
    }
    Ok(())
}

/// Total tokens `j` with category-0 tokens `b0` satisfy the majority rule
/// iff no category-1 tokens were taken or they outweigh the rest.
fn majority_ok(total: usize, cat0: usize) -> bool {
    let cat1 = total - cat0;
    cat1 == 0 || cat1 > cat0
}

const UNREACHABLE: i128 = -1;

/// Exact-sum value table over (prefix, total tokens, category-0 tokens).
struct StateTable {
    cells: Vec<i128>,
    scale: u8,
    width: usize,
}

impl StateTable {
    fn build(sorted: &[Bid], capacity: u32) -> StateTable {
        let scale = sorted.iter().map(|b| b.price.scale()).max().unwrap_or(0);
        let width = capacity as usize + 1;
        let mut cells = vec![UNREACHABLE; (sorted.len() + 1) * width * width];
        cells[0] = 0; // empty prefix, zero tokens in both classes
        for (i, bid) in sorted.iter().enumerate() {
            let row = i + 1;
            let weight = bid.weight as usize;
            let cat0_weight = if bid.category == Some(false) {
                weight
            } else {
                0
            };
            let price = bid.price.to_scaled_units(scale);
            let plane = width * width;
            let (prev_rows, cur_row) = cells.split_at_mut(row * plane);
            let prev = &prev_rows[(row - 1) * plane..];
            for j in 0..width {
                for b0 in 0..=j {
                    let slot = j * width + b0;
                    let mut best = prev[slot];
                    if weight <= j && cat0_weight <= b0 {
                        let from = prev[(j - weight) * width + (b0 - cat0_weight)];
                        if from != UNREACHABLE {
                            best = best.max(from + price);
                        }
                    }
                    cur_row[slot] = best;
                }
            }
        }
        StateTable {
            cells,
            scale,
            width,
        }
    }

    fn raw(&self, prefix: usize, total: usize, cat0: usize) -> i128 {
        self.cells[(prefix * self.width + total) * self.width + cat0]
    }

    /// Smallest prefix in `0..=bound` whose value at the state reaches
    /// `target`; exact by monotonicity in the prefix.
    fn first_prefix_reaching(&self, target: i128, state: (usize, usize), bound: usize) -> usize {
        let mut lo = 0usize;
        let mut hi = bound;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.raw(mid, state.0, state.1) < target {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// Determines the unique winning group under the majority rule.
///
/// Requires a category flag on every bid. Reconstruction generalizes the
/// unconstrained minimal-prefix walk: it tracks the set of final states
/// still consistent with an optimal feasible group and, at each step,
/// takes the smallest prefix reaching the remaining value in any of them.
pub fn solve_constrained(bids: &[Bid], capacity: u32) -> Result<ConstrainedResult, AuctionError> {
    require_categories(bids)?;
    let sorted = sort_by_time(bids)?;
    let table = StateTable::build(&sorted, capacity);
    let n = sorted.len();
    let width = capacity as usize + 1;

    let mut opt = 0i128;
    for j in 0..width {
        for b0 in 0..=j {
            if majority_ok(j, b0) {
                opt = opt.max(table.raw(n, j, b0));
            }
        }
    }
    if opt == 0 {
        return Ok(ConstrainedResult::empty());
    }

    let mut targets: Vec<(usize, usize)> = Vec::new();
    for j in 0..width {
        for b0 in 0..=j {
            if majority_ok(j, b0) && table.raw(n, j, b0) == opt {
                targets.push((j, b0));
            }
        }
    }

    let mut value = opt;
    let mut bound = n;
    let mut winners: Vec<&Bid> = Vec::new();
    while value > 0 {
        let m = targets
            .iter()
            .map(|&state| table.first_prefix_reaching(value, state, bound))
            .min()
            .expect("at least one live target state");
        debug_assert!(m >= 1);
        let bid = &sorted[m - 1];
        winners.push(bid);
        let weight = bid.weight as usize;
        let cat0_weight = if bid.category == Some(false) {
            weight
        } else {
            0
        };
        value -= bid.price.to_scaled_units(table.scale);
        bound = m - 1;
        targets = targets
            .iter()
            .filter_map(|&(j, b0)| {
                if j >= weight && b0 >= cat0_weight {
                    let next = (j - weight, b0 - cat0_weight);
                    (table.raw(bound, next.0, next.1) == value).then_some(next)
                } else {
                    None
                }
            })
            .collect();
        debug_assert!(!targets.is_empty());
    }
    winners.reverse();
    Ok(ConstrainedResult::from_winners(&winners))
}

/// Exhaustive reference for [`solve_constrained`]: enumerates all subsets,
/// filters by capacity and the majority rule, breaks value ties by time
/// vector. Test harness only.
pub fn oracle_solve_constrained(
    bids: &[Bid],
    capacity: u32,
) -> Result<ConstrainedResult, AuctionError> {
    require_categories(bids)?;
    let sorted = sort_by_time(bids)?;
    let admit = |mask: u32| {
        let mut total = 0u64;
        let mut cat0 = 0u64;
        for (i, bid) in sorted.iter().enumerate() {
            if mask & (1 << i) != 0 {
                total += bid.weight as u64;
                if bid.category == Some(false) {
                    cat0 += bid.weight as u64;
                }
            }
        }
        let cat1 = total - cat0;
        cat1 == 0 || cat1 > cat0
    };
    let best = solver::enumerate_best(&sorted, capacity, admit)?;
    Ok(match best {
        Some(mask) => ConstrainedResult::from_winners(&solver::mask_bids(&sorted, mask)),
        None => ConstrainedResult::empty(),
    })
}
