//! Deterministic machine-readable reports.
//!
//! Identical inputs and flags render byte-identical text: winners are
//! listed in ascending admission order, prices at the configured scale,
//! shares as reduced fractions.

use fracbid_core::{Bid, BidId, Money, Share};

/// One winning bid as reported.
#[derive(Debug, Clone)]
pub struct WinnerLine {
    pub id: BidId,
    pub weight: u32,
    pub price: Money,
    pub time: u64,
    /// Ownership fraction; present only on sold outcomes.
    pub share: Option<Share>,
}

/// Outcome of a solve or oracle run.
#[derive(Debug, Clone)]
pub struct ResultReport {
    pub algorithm: &'static str,
    pub digest: String,
    pub sold: bool,
    pub f_star: Money,
    pub k_star: u32,
    pub winners: Vec<WinnerLine>,
}

impl ResultReport {
    /// Assembles the report from winner ids resolved against the bid list.
    pub fn new(
        algorithm: &'static str,
        digest: String,
        bids: &[Bid],
        winner_ids: &[BidId],
        f_star: Money,
        k_star: u32,
        sold: bool,
    ) -> ResultReport {
        let mut winners: Vec<WinnerLine> = winner_ids
            .iter()
            .map(|id| {
                let bid = bids
                    .iter()
                    .find(|b| &b.id == id)
                    .expect("winner ids come from the bid list");
                WinnerLine {
                    id: id.clone(),
                    weight: bid.weight,
                    price: bid.price,
                    time: bid.time.seq(),
                    share: (sold && k_star > 0)
                        .then(|| Share::new(bid.weight as u64, k_star as u64)),
                }
            })
            .collect();
        winners.sort_by_key(|w| w.time);
        ResultReport {
            algorithm,
            digest,
            sold,
            f_star,
            k_star,
            winners,
        }
    }

    pub fn render(&self, scale: u8) -> String {
        let mut out = String::new();
        out.push_str(&format!("algorithm: {}\n", self.algorithm));
        out.push_str(&format!("input: {}\n", self.digest));
        out.push_str(&format!("sold: {}\n", self.sold));
        out.push_str(&format!("f-star: {}\n", self.f_star.format_scaled(scale)));
        out.push_str(&format!("k-star: {}\n", self.k_star));
        for winner in &self.winners {
            out.push_str(&format!(
                "winner: {} w={} p={} t={}",
                winner.id,
                winner.weight,
                winner.price.format_scaled(scale),
                winner.time
            ));
            if let Some(share) = &winner.share {
                out.push_str(&format!(" share={}/{}", share.numer(), share.denom()));
            }
            out.push('\n');
        }
        out
    }
}

/// One algorithm's row in a comparison report.
#[derive(Debug, Clone)]
pub struct CompareRow {
    pub label: &'static str,
    pub value: Money,
    pub tokens: u32,
    pub winner_ids: Vec<BidId>,
}

/// Side-by-side greedy / exact / oracle comparison.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub digest: String,
    pub rows: Vec<CompareRow>,
    /// Revenue the greedy baseline left on the table, when any.
    pub greedy_shortfall: Option<Money>,
}

impl CompareReport {
    pub fn render(&self, scale: u8) -> String {
        let mut out = String::new();
        out.push_str(&format!("input: {}\n", self.digest));
        for row in &self.rows {
            let ids: Vec<&str> = row.winner_ids.iter().map(|id| id.as_str()).collect();
            out.push_str(&format!(
                "{}: value={} tokens={} winners=[{}]\n",
                row.label,
                row.value.format_scaled(scale),
                row.tokens,
                ids.join(",")
            ));
        }
        if let Some(shortfall) = &self.greedy_shortfall {
            out.push_str(&format!(
                "greedy-shortfall: {}\n",
                shortfall.format_scaled(scale)
            ));
        }
        out
    }
}
