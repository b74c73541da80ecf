//! Command implementations shared by the binary and the test suite.
//!
//! Each command takes the already-read input text and returns the bytes
//! for standard output plus the process exit code: 0 for sold/success,
//! 2 for an unsold or winnerless outcome, errors map to 1 in `main`.

use fracbid_core::constrained::{oracle_solve_constrained, solve_constrained};
use fracbid_core::solver::{greedy, oracle_solve, prune, solve};
use fracbid_core::{validate_bid, AuctionConfig, AuctionError, BidId, Money};

use crate::input::{self, BidFile, Format, InputError, Locus};
use crate::report::{CompareReport, CompareRow, ResultReport};
use crate::script::{self, ScriptError};

/// Bid count up to which `compare` includes the oracle row unprompted.
pub const COMPARE_ORACLE_MAX: usize = 15;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Input {
        path: String,
        #[source]
        source: InputError,
    },

    #[error("{path}: {locus}: {message}")]
    Record {
        path: String,
        locus: Locus,
        message: String,
    },

    #[error("{path}: {message}")]
    File { path: String, message: String },

    #[error("{0}")]
    Script(#[from] ScriptError),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub stdout: String,
    pub code: u8,
}

/// Which solver backs a result report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    Oracle,
}

pub struct SolveOptions {
    pub format: Format,
    pub scale: u8,
    pub k: Option<u32>,
    pub reserve: Option<Money>,
    pub constrained: bool,
    pub engine: Engine,
}

pub fn solve_command(
    content: &str,
    path: &str,
    opts: &SolveOptions,
) -> Result<CommandOutput, CliError> {
    let file = parse(content, path, opts.format, opts.scale)?;
    let k = resolve_k(path, opts.k, &file)?;
    let reserve = resolve_reserve(path, opts.reserve, &file, opts.scale);
    validate_file(&file, path, k)?;

    let tag;
    let (winner_ids, value, tokens) = match (opts.engine, opts.constrained) {
        (Engine::Exact, false) => {
            tag = "dp";
            let r = solve(&file.bids, k).map_err(|e| record_error(path, &file, e))?;
            (r.winner_ids, r.value, r.tokens)
        }
        (Engine::Exact, true) => {
            tag = "dp-constrained";
            let r = solve_constrained(&file.bids, k).map_err(|e| record_error(path, &file, e))?;
            (r.winner_ids, r.value, r.tokens)
        }
        (Engine::Oracle, false) => {
            tag = "oracle";
            let r = oracle_solve(&file.bids, k).map_err(|e| record_error(path, &file, e))?;
            (r.winner_ids, r.value, r.tokens)
        }
        (Engine::Oracle, true) => {
            tag = "oracle-constrained";
            let r = oracle_solve_constrained(&file.bids, k)
                .map_err(|e| record_error(path, &file, e))?;
            (r.winner_ids, r.value, r.tokens)
        }
    };

    let sold = !winner_ids.is_empty() && value >= reserve;
    let report = ResultReport::new(
        tag,
        input::digest(&file.bids),
        &file.bids,
        &winner_ids,
        value,
        tokens,
        sold,
    );
    Ok(CommandOutput {
        stdout: report.render(opts.scale),
        code: if sold { 0 } else { 2 },
    })
}

pub struct CompareOptions {
    pub format: Format,
    pub scale: u8,
    pub k: Option<u32>,
    pub with_oracle: bool,
}

pub fn compare_command(
    content: &str,
    path: &str,
    opts: &CompareOptions,
) -> Result<CommandOutput, CliError> {
    let file = parse(content, path, opts.format, opts.scale)?;
    let k = resolve_k(path, opts.k, &file)?;
    validate_file(&file, path, k)?;

    let greedy_result = greedy(&file.bids, k);
    let exact = solve(&file.bids, k).map_err(|e| record_error(path, &file, e))?;
    let mut rows = vec![
        CompareRow {
            label: "greedy",
            value: greedy_result.value,
            tokens: greedy_result.tokens,
            winner_ids: greedy_result.winner_ids,
        },
        CompareRow {
            label: "dp",
            value: exact.value,
            tokens: exact.tokens,
            winner_ids: exact.winner_ids.clone(),
        },
    ];
    if opts.with_oracle || file.bids.len() <= COMPARE_ORACLE_MAX {
        let oracle = oracle_solve(&file.bids, k).map_err(|e| record_error(path, &file, e))?;
        rows.push(CompareRow {
            label: "oracle",
            value: oracle.value,
            tokens: oracle.tokens,
            winner_ids: oracle.winner_ids,
        });
    }
    let greedy_shortfall = exact
        .value
        .checked_sub(rows[0].value)
        .filter(|d| d.is_positive());
    let report = CompareReport {
        digest: input::digest(&file.bids),
        rows,
        greedy_shortfall,
    };
    Ok(CommandOutput {
        stdout: report.render(opts.scale),
        code: 0,
    })
}

pub struct PruneOptions {
    pub format: Format,
    pub scale: u8,
    pub k: Option<u32>,
}

pub fn prune_command(
    content: &str,
    path: &str,
    opts: &PruneOptions,
) -> Result<CommandOutput, CliError> {
    let file = parse(content, path, opts.format, opts.scale)?;
    let k = resolve_k(path, opts.k, &file)?;
    validate_file(&file, path, k)?;
    let kept = prune(&file.bids, k);
    let stdout = input::serialize(&kept, opts.format, opts.scale, Some(k), file.reserve);
    Ok(CommandOutput { stdout, code: 0 })
}

pub fn auction_command(content: &str, scale: u8) -> Result<CommandOutput, CliError> {
    let outcome = script::run(content, scale)?;
    Ok(CommandOutput {
        stdout: outcome.log,
        code: if outcome.sold == Some(false) { 2 } else { 0 },
    })
}

fn parse(content: &str, path: &str, format: Format, scale: u8) -> Result<BidFile, CliError> {
    input::parse(content, format, scale).map_err(|source| CliError::Input {
        path: path.to_string(),
        source,
    })
}

fn resolve_k(path: &str, flag: Option<u32>, file: &BidFile) -> Result<u32, CliError> {
    match (flag, file.k) {
        (Some(flag_k), Some(file_k)) if flag_k != file_k => {
            eprintln!("fracbid: warning: --k {flag_k} overrides k = {file_k} carried in {path}");
            Ok(flag_k)
        }
        (Some(flag_k), _) => Ok(flag_k),
        (None, Some(file_k)) => Ok(file_k),
        (None, None) => Err(CliError::File {
            path: path.to_string(),
            message: "token supply required: pass --k or use a doc file carrying k".to_string(),
        }),
    }
}

fn resolve_reserve(path: &str, flag: Option<Money>, file: &BidFile, scale: u8) -> Money {
    match (flag, file.reserve) {
        (Some(flag_r), Some(file_r)) if flag_r != file_r => {
            eprintln!(
                "fracbid: warning: --reserve {} overrides reserve = {} carried in {path}",
                flag_r.format_scaled(scale),
                file_r.format_scaled(scale)
            );
            flag_r
        }
        (Some(flag_r), _) => flag_r,
        (None, Some(file_r)) => file_r,
        (None, None) => Money::ZERO,
    }
}

fn validate_file(file: &BidFile, path: &str, k: u32) -> Result<(), CliError> {
    if k < 1 {
        return Err(CliError::File {
            path: path.to_string(),
            message: "token supply must be at least 1".to_string(),
        });
    }
    let config = AuctionConfig::new(k, Money::ZERO);
    for bid in &file.bids {
        validate_bid(bid, &config).map_err(|e| record_error(path, file, e))?;
    }
    Ok(())
}

fn record_error(path: &str, file: &BidFile, error: AuctionError) -> CliError {
    let locus = offending_bid(&error).and_then(|id| file.locus_of(id));
    match locus {
        Some(locus) => CliError::Record {
            path: path.to_string(),
            locus,
            message: error.to_string(),
        },
        None => CliError::File {
            path: path.to_string(),
            message: error.to_string(),
        },
    }
}

fn offending_bid(error: &AuctionError) -> Option<&BidId> {
    match error {
        AuctionError::WeightOutOfRange { id, .. }
        | AuctionError::NonPositivePrice { id }
        | AuctionError::MissingCategory { id }
        | AuctionError::DuplicateBidId { id } => Some(id),
        AuctionError::DuplicateTimestamp { second, .. } => Some(second),
        AuctionError::TooManyBids { .. }
        | AuctionError::AuctionClosed
        | AuctionError::InvalidConfig => None,
    }
}
