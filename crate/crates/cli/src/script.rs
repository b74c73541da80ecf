//! Auction lifecycle scripts.
//!
//! A script drives one auction through the engine, line by line:
//!
//! ```text
//! open k=5 reserve=0 [constrained] [id=<name>]
//! submit id=b_1 w=4 p=10 [c=0|1]
//! snapshot
//! finalize
//! ```
//!
//! Blank lines and `#` comments are skipped. Each command appends one or
//! more events to the log, so replaying the same script always produces
//! the same bytes. Structurally invalid scripts abort with the offending
//! line; bids the engine rejects become `error` events and the replay
//! continues.

use fracbid_core::engine::Auction;
use fracbid_core::{AuctionConfig, Money};

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: u64,
    pub message: String,
}

/// Replay result: the event log plus the sale status of the finalize
/// step, when one ran.
#[derive(Debug)]
pub struct ScriptOutcome {
    pub log: String,
    pub sold: Option<bool>,
}

pub fn run(script: &str, scale: u8) -> Result<ScriptOutcome, ScriptError> {
    let mut auction: Option<Auction> = None;
    let mut log = String::new();
    let mut sold = None;

    for (index, raw_line) in script.lines().enumerate() {
        let line = index as u64 + 1;
        let text = raw_line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fail = |message: String| ScriptError { line, message };
        let mut tokens = text.split_whitespace();
        let command = tokens.next().expect("nonempty line");
        let args = Params::parse(tokens, line)?;

        match command {
            "open" => {
                if auction.is_some() {
                    return Err(fail("auction already open".to_string()));
                }
                let k: u32 = args.require_parsed("k", line)?;
                let reserve = args.money("reserve", scale, line)?.unwrap_or(Money::ZERO);
                let constrained = args.flag("constrained");
                let id = args.get("id").unwrap_or("auction").to_string();
                args.reject_unknown(&["k", "reserve", "constrained", "id"], line)?;
                let mut config = AuctionConfig::new(k, reserve);
                if constrained {
                    config = config.constrained();
                }
                match Auction::open_named(id, config) {
                    Ok(opened) => {
                        log.push_str(&format!(
                            "line {line}: open k={} reserve={}{}\n",
                            k,
                            reserve.format_scaled(scale),
                            if constrained { " constrained" } else { "" }
                        ));
                        auction = Some(opened);
                    }
                    Err(e) => return Err(fail(e.to_string())),
                }
            }
            "submit" => {
                let auction = auction
                    .as_mut()
                    .ok_or_else(|| fail("submit before open".to_string()))?;
                let id = args
                    .get("id")
                    .ok_or_else(|| fail("submit requires id=".to_string()))?
                    .to_string();
                let weight: u32 = args.require_parsed("w", line)?;
                let price = args
                    .money("p", scale, line)?
                    .ok_or_else(|| fail("submit requires p=".to_string()))?;
                let category = match args.get("c") {
                    None => None,
                    Some("0") => Some(false),
                    Some("1") => Some(true),
                    Some(other) => {
                        return Err(fail(format!("c must be 0 or 1, got '{other}'")));
                    }
                };
                args.reject_unknown(&["id", "w", "p", "c"], line)?;
                match auction.submit(id.clone(), weight, price, category) {
                    Ok(time) => {
                        log.push_str(&format!("line {line}: submit {id} t={time}\n"));
                    }
                    Err(e) => {
                        log.push_str(&format!("line {line}: error {}: {e}\n", e.name()));
                    }
                }
            }
            "snapshot" => {
                let auction = auction
                    .as_ref()
                    .ok_or_else(|| fail("snapshot before open".to_string()))?;
                args.reject_unknown(&[], line)?;
                let snap = auction.snapshot();
                let weights: Vec<String> = snap.weights.iter().map(|w| w.to_string()).collect();
                log.push_str(&format!(
                    "line {line}: snapshot size={} value={} tokens={} weights=[{}]\n",
                    snap.group_size,
                    snap.total_value.format_scaled(scale),
                    snap.total_tokens,
                    weights.join(",")
                ));
            }
            "finalize" => {
                let auction = auction
                    .as_mut()
                    .ok_or_else(|| fail("finalize before open".to_string()))?;
                args.reject_unknown(&[], line)?;
                match auction.finalize() {
                    Ok(outcome) => {
                        let alloc = &outcome.allocation;
                        sold = Some(alloc.sold);
                        if alloc.sold {
                            log.push_str(&format!(
                                "line {line}: finalize sold f-star={} k-star={}\n",
                                alloc.total_value.format_scaled(scale),
                                alloc.total_tokens
                            ));
                            for cert in &outcome.certificates {
                                log.push_str(&format!(
                                    "line {line}: certificate {} w={} share={}/{} paid={}\n",
                                    cert.bid_id,
                                    cert.tokens,
                                    cert.share.numer(),
                                    cert.share.denom(),
                                    cert.paid.format_scaled(scale)
                                ));
                            }
                        } else {
                            log.push_str(&format!("line {line}: finalize unsold\n"));
                        }
                    }
                    Err(e) => {
                        log.push_str(&format!("line {line}: error {}: {e}\n", e.name()));
                    }
                }
            }
            other => {
                return Err(fail(format!(
                    "unknown command '{other}' (expected open, submit, snapshot, finalize)"
                )));
            }
        }
    }
    Ok(ScriptOutcome { log, sold })
}

/// key=value arguments plus bare flags.
struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
    flags: Vec<&'a str>,
}

impl<'a> Params<'a> {
    fn parse(tokens: impl Iterator<Item = &'a str>, line: u64) -> Result<Params<'a>, ScriptError> {
        let mut pairs = Vec::new();
        let mut flags = Vec::new();
        for token in tokens {
            match token.split_once('=') {
                Some((key, value)) => {
                    if pairs.iter().any(|(k, _)| *k == key) {
                        return Err(ScriptError {
                            line,
                            message: format!("duplicate argument '{key}'"),
                        });
                    }
                    pairs.push((key, value));
                }
                None => flags.push(token),
            }
        }
        Ok(Params { pairs, flags })
    }

    fn get(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
    }

    fn flag(&self, name: &str) -> bool {
        self.flags.contains(&name)
    }

    fn require_parsed<T: std::str::FromStr>(&self, key: &str, line: u64) -> Result<T, ScriptError> {
        let raw = self.get(key).ok_or_else(|| ScriptError {
            line,
            message: format!("missing argument '{key}='"),
        })?;
        raw.parse().map_err(|_| ScriptError {
            line,
            message: format!("argument '{key}' has invalid value '{raw}'"),
        })
    }

    fn money(&self, key: &str, scale: u8, line: u64) -> Result<Option<Money>, ScriptError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => Money::parse(raw, scale).map(Some).map_err(|e| ScriptError {
                line,
                message: e.to_string(),
            }),
        }
    }

    fn reject_unknown(&self, known: &[&str], line: u64) -> Result<(), ScriptError> {
        for (key, _) in &self.pairs {
            if !known.contains(key) {
                return Err(ScriptError {
                    line,
                    message: format!("unknown argument '{key}='"),
                });
            }
        }
        for flag in &self.flags {
            if !known.contains(flag) {
                return Err(ScriptError {
                    line,
                    message: format!("unknown flag '{flag}'"),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replays_a_small_auction() {
        let script = "\
# two bids, then close
open k=5 reserve=0
submit id=a w=2 p=8
submit id=b w=2 p=6
snapshot
finalize
";
        let outcome = run(script, 2).unwrap();
        assert_eq!(outcome.sold, Some(true));
        assert_eq!(
            outcome.log,
            "line 2: open k=5 reserve=0.00\n\
             line 3: submit a t=1\n\
             line 4: submit b t=2\n\
             line 5: snapshot size=2 value=14.00 tokens=4 weights=[2,2]\n\
             line 6: finalize sold f-star=14.00 k-star=4\n\
             line 6: certificate a w=2 share=1/2 paid=8.00\n\
             line 6: certificate b w=2 share=1/2 paid=6.00\n"
        );
    }

    #[test]
    fn engine_rejections_become_events() {
        let script = "open k=5 reserve=0\nsubmit id=a w=1 p=1\nfinalize\nsubmit id=b w=1 p=1\n";
        let outcome = run(script, 2).unwrap();
        assert!(
            outcome.log.contains("line 4: error AuctionClosed"),
            "{}",
            outcome.log
        );
    }

    #[test]
    fn unsold_finalize_is_reported() {
        let script = "open k=5 reserve=99\nsubmit id=a w=1 p=1\nfinalize\n";
        let outcome = run(script, 2).unwrap();
        assert_eq!(outcome.sold, Some(false));
        assert!(outcome.log.contains("finalize unsold"), "{}", outcome.log);
    }

    #[test]
    fn structural_errors_abort_with_line() {
        let err = run("open k=5\nopen k=5\n", 2).unwrap_err();
        assert_eq!(err.line, 2);

        let err = run("submit id=a w=1 p=1\n", 2).unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.message.contains("before open"));

        let err = run("open k=5\nshout\n", 2).unwrap_err();
        assert!(err.message.contains("unknown command"));
    }

    #[test]
    fn rejected_weight_is_an_event_not_an_abort() {
        let script = "open k=5 reserve=0\nsubmit id=a w=9 p=1\nsubmit id=b w=1 p=1\nfinalize\n";
        let outcome = run(script, 2).unwrap();
        assert!(
            outcome.log.contains("line 2: error WeightOutOfRange"),
            "{}",
            outcome.log
        );
        assert_eq!(outcome.sold, Some(true));
    }

    #[test]
    fn shares_recompute_against_winning_total() {
        // 2 of 5 tokens sell; the sole winner owns the whole asset.
        let script = "open k=5 reserve=0\nsubmit id=solo w=2 p=10\nfinalize\n";
        let outcome = run(script, 2).unwrap();
        assert!(
            outcome.log.contains("certificate solo w=2 share=1/1"),
            "{}",
            outcome.log
        );
    }
}
