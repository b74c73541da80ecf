//! Domain types shared by the solvers and the auction engine.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;

use crate::error::AuctionError;

mod money;

pub use money::{Money, ParseMoneyError, MAX_SCALE};

/// Opaque bid identifier supplied by the caller. The engine never derives
/// meaning from its contents.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BidId(String);

impl BidId {
    pub fn new(id: impl Into<String>) -> BidId {
        BidId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BidId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for BidId {
    fn from(s: &str) -> BidId {
        BidId::new(s)
    }
}

impl From<String> for BidId {
    fn from(s: String) -> BidId {
        BidId(s)
    }
}

/// Logical admission instant: a strictly positive sequence number.
///
/// Admission order is a total order; no two bids of one auction share a
/// timestamp. Wall-clock time is never used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(u64);

impl Timestamp {
    /// Returns `None` for zero, which is outside the domain.
    pub fn new(seq: u64) -> Option<Timestamp> {
        (seq > 0).then_some(Timestamp(seq))
    }

    pub fn seq(&self) -> u64 {
        self.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One sealed all-or-none offer: `price` for `weight` tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bid {
    pub id: BidId,
    /// Token count requested; all tokens are taken or none.
    pub weight: u32,
    /// Price for the whole token count, not per token.
    pub price: Money,
    /// Admission instant; the tie-break key between equal-revenue groups.
    pub time: Timestamp,
    /// Category flag for the majority-constrained variant. `true` marks a
    /// bid whose class must jointly hold a strict token majority whenever
    /// any such bid wins.
    pub category: Option<bool>,
}

impl Bid {
    pub fn new(id: impl Into<BidId>, weight: u32, price: Money, time: Timestamp) -> Bid {
        Bid {
            id: id.into(),
            weight,
            price,
            time,
            category: None,
        }
    }

    pub fn with_category(mut self, category: bool) -> Bid {
        self.category = Some(category);
        self
    }
}

/// Auction parameters fixed before bidding starts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuctionConfig {
    /// Number of fungible tokens the asset is divided into. Also the
    /// capacity bound on the winning group's combined weight.
    pub token_supply: u32,
    /// Minimum acceptable revenue; below it nothing is sold.
    pub reserve: Money,
    /// Enables the category-majority side constraint.
    pub constrained: bool,
}

impl AuctionConfig {
    pub fn new(token_supply: u32, reserve: Money) -> AuctionConfig {
        AuctionConfig {
            token_supply,
            reserve,
            constrained: false,
        }
    }

    pub fn constrained(mut self) -> AuctionConfig {
        self.constrained = true;
        self
    }
}

/// Exact ownership fraction `weight / total winning tokens`.
pub type Share = Ratio<u64>;

/// Outcome of a finalized auction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    /// Winning bid ids in ascending admission order; empty when unsold.
    pub winners: Vec<BidId>,
    /// Combined winning price. Zero when unsold.
    pub total_value: Money,
    /// Combined winning weight. The share denominator.
    pub total_tokens: u32,
    /// Per-winner ownership fraction; the fractions sum to one exactly.
    pub shares: BTreeMap<BidId, Share>,
    pub sold: bool,
}

impl Allocation {
    pub fn unsold() -> Allocation {
        Allocation {
            winners: Vec::new(),
            total_value: Money::ZERO,
            total_tokens: 0,
            shares: BTreeMap::new(),
            sold: false,
        }
    }
}

/// A group's admission timestamps sorted descending: the comparison key
/// that makes the winning group unique.
///
/// Groups are compared latest bid first; at the first position where the
/// vectors differ, the smaller timestamp precedes. When one vector is a
/// strict prefix of the other, the shorter precedes. The derived ordering
/// on the descending vector implements exactly that rule.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TimeVector(Vec<Timestamp>);

impl TimeVector {
    pub fn times(&self) -> &[Timestamp] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when `self` equals the leading timestamps of `other`.
    pub fn is_strict_prefix_of(&self, other: &TimeVector) -> bool {
        self.0.len() < other.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

/// Builds the comparison key for a group of bids.
pub fn time_vector(group: &[Bid]) -> TimeVector {
    let mut times: Vec<Timestamp> = group.iter().map(|b| b.time).collect();
    times.sort_unstable_by(|a, b| b.cmp(a));
    TimeVector(times)
}

/// Checks a bid against the auction's domain: `1 <= weight <= token_supply`
/// and a strictly positive price.
pub fn validate_bid(bid: &Bid, config: &AuctionConfig) -> Result<(), AuctionError> {
    if bid.weight < 1 || bid.weight > config.token_supply {
        return Err(AuctionError::WeightOutOfRange {
            id: bid.id.clone(),
            weight: bid.weight,
            max: config.token_supply,
        });
    }
    if !bid.price.is_positive() {
        return Err(AuctionError::NonPositivePrice { id: bid.id.clone() });
    }
    Ok(())
}
