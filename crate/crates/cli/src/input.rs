//! Bid file ingestion and emission.
//!
//! Two interchangeable formats carry the same records `(id, w, p, t, c)`:
//!
//! - `csv`: header `id,w,p,t` or `id,w,p,t,c`, one bid per row.
//! - `doc`: a TOML document with optional top-level `k` and `reserve`
//!   plus a `[[bids]]` table per bid; prices are strings or integers,
//!   never floats.
//!
//! Parsing is strict: timestamps must be unique positive integers, ids
//! unique, and prices must fit the configured decimal scale. Excess
//! precision is an error, never rounded away.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use fracbid_core::{Bid, BidId, Money, Timestamp};

/// Where a record came from, for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locus {
    /// 1-based source line of a csv row.
    Line(u64),
    /// 1-based ordinal of a doc `[[bids]]` entry.
    Record(u64),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Line(n) => write!(f, "line {n}"),
            Locus::Record(n) => write!(f, "record {n}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Doc(#[from] toml::de::Error),

    #[error("missing or invalid header: expected 'id,w,p,t' or 'id,w,p,t,c'")]
    Header,

    #[error("{locus}: bid {id}: {message}")]
    Field {
        locus: Locus,
        id: String,
        message: String,
    },

    #[error("bids {first_id} ({first}) and {second_id} ({second}) share timestamp {time}")]
    DuplicateTimestamp {
        time: u64,
        first_id: String,
        first: Locus,
        second_id: String,
        second: Locus,
    },

    #[error("bid id {id} appears twice ({first} and {second})")]
    DuplicateId {
        id: String,
        first: Locus,
        second: Locus,
    },
}

/// A parsed bid file: the records plus any auction parameters the doc
/// format carries inline.
#[derive(Debug, Clone)]
pub struct BidFile {
    pub bids: Vec<Bid>,
    pub k: Option<u32>,
    pub reserve: Option<Money>,
    loci: Vec<Locus>,
}

impl BidFile {
    /// Diagnostic position of the bid with the given id.
    pub fn locus_of(&self, id: &BidId) -> Option<Locus> {
        self.bids
            .iter()
            .position(|b| &b.id == id)
            .map(|i| self.loci[i])
    }
}

/// File format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Doc,
}

pub fn parse(content: &str, format: Format, scale: u8) -> Result<BidFile, InputError> {
    match format {
        Format::Csv => parse_csv(content, scale),
        Format::Doc => parse_doc(content, scale),
    }
}

/// Serializes bids in the requested format; `parse` of the output yields
/// the same records. The doc format additionally carries `k` and
/// `reserve`.
pub fn serialize(
    bids: &[Bid],
    format: Format,
    scale: u8,
    k: Option<u32>,
    reserve: Option<Money>,
) -> String {
    match format {
        Format::Csv => write_csv(bids, scale),
        Format::Doc => write_doc(bids, scale, k, reserve),
    }
}

fn parse_csv(content: &str, scale: u8) -> Result<BidFile, InputError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(content.as_bytes());
    let headers = reader.headers()?.clone();
    let with_category = match headers.len() {
        4 if headers.iter().eq(["id", "w", "p", "t"]) => false,
        5 if headers.iter().eq(["id", "w", "p", "t", "c"]) => true,
        _ => return Err(InputError::Header),
    };

    let mut builder = FileBuilder::default();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let locus = Locus::Line(line);
        let id = record.get(0).unwrap_or_default().to_string();
        let weight = parse_field(record.get(1), locus, &id, "w", "a non-negative integer")?;
        let price_text = record.get(2).unwrap_or_default();
        let price = parse_money(price_text, scale, locus, &id)?;
        let time = parse_field(record.get(3), locus, &id, "t", "a positive integer")?;
        let category = match record.get(4).filter(|_| with_category) {
            None | Some("") => None,
            Some("0") => Some(false),
            Some("1") => Some(true),
            Some(other) => {
                return Err(InputError::Field {
                    locus,
                    id,
                    message: format!("field 'c' must be empty, 0, or 1, got '{other}'"),
                })
            }
        };
        builder.push(locus, id, weight, price, time, category)?;
    }
    Ok(builder.finish(None, None))
}

fn parse_field<T: std::str::FromStr>(
    raw: Option<&str>,
    locus: Locus,
    id: &str,
    field: &str,
    expected: &str,
) -> Result<T, InputError> {
    let raw = raw.unwrap_or_default();
    raw.parse().map_err(|_| InputError::Field {
        locus,
        id: id.to_string(),
        message: format!("field '{field}' must be {expected}, got '{raw}'"),
    })
}

fn parse_money(text: &str, scale: u8, locus: Locus, id: &str) -> Result<Money, InputError> {
    Money::parse(text, scale).map_err(|e| InputError::Field {
        locus,
        id: id.to_string(),
        message: e.to_string(),
    })
}

/// Raw doc-format document. Prices are strings or integers; floats are
/// rejected by construction.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    k: Option<u32>,
    reserve: Option<RawPrice>,
    #[serde(default)]
    bids: Vec<RawDocBid>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocBid {
    id: String,
    w: u32,
    p: RawPrice,
    t: u64,
    c: Option<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged, expecting = "a price string like \"3.50\" or an integer")]
enum RawPrice {
    Int(u64),
    Text(String),
}

impl RawPrice {
    fn to_money(&self, scale: u8, locus: Locus, id: &str) -> Result<Money, InputError> {
        match self {
            RawPrice::Int(n) => Ok(Money::from_int(*n)),
            RawPrice::Text(text) => parse_money(text, scale, locus, id),
        }
    }
}

fn parse_doc(content: &str, scale: u8) -> Result<BidFile, InputError> {
    let raw: RawDoc = toml::from_str(content)?;
    let reserve = match &raw.reserve {
        Some(price) => Some(price.to_money(scale, Locus::Record(0), "<reserve>")?),
        None => None,
    };
    let mut builder = FileBuilder::default();
    for (i, bid) in raw.bids.iter().enumerate() {
        let locus = Locus::Record(i as u64 + 1);
        let price = bid.p.to_money(scale, locus, &bid.id)?;
        let category = match bid.c {
            None => None,
            Some(0) => Some(false),
            Some(1) => Some(true),
            Some(other) => {
                return Err(InputError::Field {
                    locus,
                    id: bid.id.clone(),
                    message: format!("field 'c' must be 0 or 1, got '{other}'"),
                })
            }
        };
        builder.push(locus, bid.id.clone(), bid.w, price, bid.t, category)?;
    }
    Ok(builder.finish(raw.k, reserve))
}

#[derive(Default)]
struct FileBuilder {
    bids: Vec<Bid>,
    loci: Vec<Locus>,
    by_time: BTreeMap<u64, usize>,
    by_id: BTreeMap<String, usize>,
}

impl FileBuilder {
    fn push(
        &mut self,
        locus: Locus,
        id: String,
        weight: u32,
        price: Money,
        time: u64,
        category: Option<bool>,
    ) -> Result<(), InputError> {
        let timestamp = Timestamp::new(time).ok_or_else(|| InputError::Field {
            locus,
            id: id.clone(),
            message: "field 't' must be a positive integer, got '0'".to_string(),
        })?;
        if let Some(&prev) = self.by_time.get(&time) {
            return Err(InputError::DuplicateTimestamp {
                time,
                first_id: self.bids[prev].id.to_string(),
                first: self.loci[prev],
                second_id: id,
                second: locus,
            });
        }
        if let Some(&prev) = self.by_id.get(&id) {
            return Err(InputError::DuplicateId {
                id,
                first: self.loci[prev],
                second: locus,
            });
        }
        let index = self.bids.len();
        self.by_time.insert(time, index);
        self.by_id.insert(id.clone(), index);
        let mut bid = Bid::new(id, weight, price, timestamp);
        bid.category = category;
        self.bids.push(bid);
        self.loci.push(locus);
        Ok(())
    }

    fn finish(self, k: Option<u32>, reserve: Option<Money>) -> BidFile {
        BidFile {
            bids: self.bids,
            k,
            reserve,
            loci: self.loci,
        }
    }
}

fn write_csv(bids: &[Bid], scale: u8) -> String {
    let with_category = bids.iter().any(|b| b.category.is_some());
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    let header: &[&str] = if with_category {
        &["id", "w", "p", "t", "c"]
    } else {
        &["id", "w", "p", "t"]
    };
    writer.write_record(header).expect("csv write to memory");
    for bid in bids {
        let mut fields = vec![
            bid.id.to_string(),
            bid.weight.to_string(),
            bid.price.format_scaled(scale),
            bid.time.seq().to_string(),
        ];
        if with_category {
            fields.push(match bid.category {
                None => String::new(),
                Some(false) => "0".to_string(),
                Some(true) => "1".to_string(),
            });
        }
        writer.write_record(&fields).expect("csv write to memory");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv output is utf-8")
}

fn write_doc(bids: &[Bid], scale: u8, k: Option<u32>, reserve: Option<Money>) -> String {
    let mut out = String::new();
    if let Some(k) = k {
        out.push_str(&format!("k = {k}\n"));
    }
    if let Some(reserve) = reserve {
        out.push_str(&format!(
            "reserve = {}\n",
            toml_string(&reserve.format_scaled(scale))
        ));
    }
    for bid in bids {
        out.push_str("\n[[bids]]\n");
        out.push_str(&format!("id = {}\n", toml_string(bid.id.as_str())));
        out.push_str(&format!("w = {}\n", bid.weight));
        out.push_str(&format!(
            "p = {}\n",
            toml_string(&bid.price.format_scaled(scale))
        ));
        out.push_str(&format!("t = {}\n", bid.time.seq()));
        if let Some(category) = bid.category {
            out.push_str(&format!("c = {}\n", category as u8));
        }
    }
    out
}

fn toml_string(value: &str) -> String {
    toml::Value::String(value.to_string()).to_string()
}

/// Canonical content digest over the records, independent of record
/// order and price formatting. Reports carry it so fixture drift shows
/// up as a digest change.
pub fn digest(bids: &[Bid]) -> String {
    let mut sorted: Vec<&Bid> = bids.iter().collect();
    sorted.sort_by_key(|b| b.time);
    let mut hasher = Sha256::new();
    for bid in sorted {
        let id = bid.id.as_str();
        let category = match bid.category {
            None => "-".to_string(),
            Some(flag) => (flag as u8).to_string(),
        };
        hasher.update(format!(
            "{}:{},{},{},{},{}\n",
            id.len(),
            id,
            bid.weight,
            bid.price,
            bid.time.seq(),
            category
        ));
    }
    format!("sha256:{}", hex::encode(hasher.finalize()))
}
