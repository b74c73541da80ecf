//! Winner determination for sealed-bid auctions over a fixed supply of
//! fungible tokens.
//!
//! An asset is divided into `k` equal tokens. Bidders submit sealed
//! all-or-none offers of a price for some token count, and the engine
//! selects the group of bids that maximizes the seller's revenue without
//! exceeding `k` tokens. Equal-revenue ties break deterministically to
//! the group that finished bidding earliest, so the outcome is always
//! unique. Prices are exact fixed-point decimals and ownership shares are
//! exact rationals; no floating point enters any solver path.
//!
//! Modules:
//! - [`model`]: domain types, money arithmetic, bid validation.
//! - [`solver`]: pruning, the greedy baseline, the exact dynamic-program
//!   solver with lexicographic tie-break, and an enumeration oracle.
//! - [`constrained`]: the category-majority variant of the solver.
//! - [`engine`]: auction lifecycle from admission to certificates.

pub mod constrained;
pub mod engine;
mod error;
pub mod model;
pub mod solver;

#[cfg(test)]
pub(crate) mod testdata;

pub use error::AuctionError;
pub use model::{
    time_vector, validate_bid, Allocation, AuctionConfig, Bid, BidId, Money, ParseMoneyError,
    Share, TimeVector, Timestamp,
};
