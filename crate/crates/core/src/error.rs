use thiserror::Error;

use crate::model::{BidId, Timestamp};

/// Errors surfaced by bid validation, the solvers, and the auction engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuctionError {
    #[error("bid {id}: weight {weight} outside 1..={max}")]
    WeightOutOfRange { id: BidId, weight: u32, max: u32 },

    #[error("bid {id}: price must be positive")]
    NonPositivePrice { id: BidId },

    #[error("bids {first} and {second} share timestamp {time}")]
    DuplicateTimestamp {
        time: Timestamp,
        first: BidId,
        second: BidId,
    },

    #[error("bid id {id} already admitted")]
    DuplicateBidId { id: BidId },

    #[error("bid {id}: category flag required but missing")]
    MissingCategory { id: BidId },

    #[error("{count} bids exceed the enumeration bound of {max}")]
    TooManyBids { count: usize, max: usize },

    #[error("auction already finalized")]
    AuctionClosed,

    #[error("invalid auction config: token supply must be at least 1")]
    InvalidConfig,
}

impl AuctionError {
    /// Stable variant name, used by machine-readable diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            AuctionError::WeightOutOfRange { .. } => "WeightOutOfRange",
            AuctionError::NonPositivePrice { .. } => "NonPositivePrice",
            AuctionError::DuplicateTimestamp { .. } => "DuplicateTimestamp",
            AuctionError::DuplicateBidId { .. } => "DuplicateBidId",
            AuctionError::MissingCategory { .. } => "MissingCategory",
            AuctionError::TooManyBids { .. } => "TooManyBids",
            AuctionError::AuctionClosed => "AuctionClosed",
            AuctionError::InvalidConfig => "InvalidConfig",
        }
    }
}
