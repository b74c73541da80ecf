//! Auction lifecycle: bid admission, the anonymous standings snapshot,
//! and reserve-gated finalization with ownership certificates.
//!
//! The engine serializes admissions into a single total order and stamps
//! each accepted bid with the next sequence number; those sequence numbers
//! are the tie-break order between equal-revenue groups. An auction is a
//! pure function of its config and bid log, so replaying the log
//! reproduces the identical outcome.

use std::collections::BTreeMap;

use crate::constrained::solve_constrained;
use crate::error::AuctionError;
use crate::model::{validate_bid, Allocation, AuctionConfig, Bid, BidId, Money, Share, Timestamp};
use crate::solver::solve;

/// A sealed-bid auction accepting admissions until finalized.
#[derive(Debug, Clone)]
pub struct Auction {
    id: String,
    config: AuctionConfig,
    bids: Vec<Bid>,
    next_seq: u64,
    finalized: bool,
}

/// Ownership record issued to one winner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub auction_id: String,
    pub bid_id: BidId,
    /// Token count the winner bid for.
    pub tokens: u32,
    /// Exact fraction of the asset: tokens over the winners' total.
    pub share: Share,
    pub paid: Money,
}

/// Anonymous view of the currently best group: sizes and weights only,
/// never identities, individual prices, or timestamps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    pub group_size: usize,
    pub total_value: Money,
    pub total_tokens: u32,
    /// Winning weights as a sorted multiset.
    pub weights: Vec<u32>,
}

/// Result of [`Auction::finalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalizeOutcome {
    pub allocation: Allocation,
    pub certificates: Vec<Certificate>,
}

impl Auction {
    /// Opens an auction with a default id.
    pub fn open(config: AuctionConfig) -> Result<Auction, AuctionError> {
        Auction::open_named("auction", config)
    }

    /// Opens an auction carrying the caller's id, used on certificates.
    pub fn open_named(
        id: impl Into<String>,
        config: AuctionConfig,
    ) -> Result<Auction, AuctionError> {
        if config.token_supply < 1 {
            return Err(AuctionError::InvalidConfig);
        }
        Ok(Auction {
            id: id.into(),
            config,
            bids: Vec::new(),
            next_seq: 1,
            finalized: false,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn config(&self) -> &AuctionConfig {
        &self.config
    }

    /// Admitted bids in timestamp order.
    pub fn bids(&self) -> &[Bid] {
        &self.bids
    }

    pub fn is_open(&self) -> bool {
        !self.finalized
    }

    /// Validates and admits a bid, stamping it with the next sequence
    /// number. Constrained auctions require a category flag on every bid.
    pub fn submit(
        &mut self,
        id: impl Into<BidId>,
        weight: u32,
        price: Money,
        category: Option<bool>,
    ) -> Result<Timestamp, AuctionError> {
        if self.finalized {
            return Err(AuctionError::AuctionClosed);
        }
        let id = id.into();
        if self.bids.iter().any(|b| b.id == id) {
            return Err(AuctionError::DuplicateBidId { id });
        }
        if self.config.constrained && category.is_none() {
            return Err(AuctionError::MissingCategory { id });
        }
        let time = Timestamp::new(self.next_seq).expect("sequence numbers start at 1");
        let bid = Bid {
            id,
            weight,
            price,
            time,
            category,
        };
        validate_bid(&bid, &self.config)?;
        self.next_seq += 1;
        self.bids.push(bid);
        Ok(time)
    }

    fn best_group(&self) -> (Vec<BidId>, Money, u32) {
        if self.config.constrained {
            let result = solve_constrained(&self.bids, self.config.token_supply)
                .expect("admitted bids are valid");
            (result.winner_ids, result.value, result.tokens)
        } else {
            let result =
                solve(&self.bids, self.config.token_supply).expect("admitted bids are valid");
            (result.winner_ids, result.value, result.tokens)
        }
    }

    /// Anonymized standings over the bids admitted so far.
    pub fn snapshot(&self) -> Snapshot {
        let (winner_ids, value, tokens) = self.best_group();
        let mut weights: Vec<u32> = winner_ids
            .iter()
            .map(|id| self.bid_by_id(id).weight)
            .collect();
        weights.sort_unstable();
        Snapshot {
            group_size: winner_ids.len(),
            total_value: value,
            total_tokens: tokens,
            weights,
        }
    }

    /// Closes the auction. Sells iff a nonempty winning group meets the
    /// reserve; winners then receive certificates with shares recomputed
    /// against their combined token count.
    pub fn finalize(&mut self) -> Result<FinalizeOutcome, AuctionError> {
        if self.finalized {
            return Err(AuctionError::AuctionClosed);
        }
        self.finalized = true;
        let (winner_ids, value, tokens) = self.best_group();
        let sold = !winner_ids.is_empty() && value >= self.config.reserve;
        if !sold {
            return Ok(FinalizeOutcome {
                allocation: Allocation::unsold(),
                certificates: Vec::new(),
            });
        }
        let mut shares: BTreeMap<BidId, Share> = BTreeMap::new();
        let mut certificates = Vec::with_capacity(winner_ids.len());
        for id in &winner_ids {
            let bid = self.bid_by_id(id);
            let share = Share::new(bid.weight as u64, tokens as u64);
            shares.insert(id.clone(), share);
            certificates.push(Certificate {
                auction_id: self.id.clone(),
                bid_id: id.clone(),
                tokens: bid.weight,
                share,
                paid: bid.price,
            });
        }
        Ok(FinalizeOutcome {
            allocation: Allocation {
                winners: winner_ids,
                total_value: value,
                total_tokens: tokens,
                shares,
                sold: true,
            },
            certificates,
        })
    }

    fn bid_by_id(&self, id: &BidId) -> &Bid {
        self.bids
            .iter()
            .find(|b| &b.id == id)
            .expect("winner ids come from admitted bids")
    }
}
