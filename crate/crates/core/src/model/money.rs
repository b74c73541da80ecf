//! Exact fixed-point decimal amounts.
//!
//! Every price and revenue figure in the solver is a [`Money`] value: a
//! non-negative integer count of minor units together with a decimal scale.
//! All arithmetic is integer arithmetic, so sums compare exactly; the
//! tie-break between equal-revenue winner groups depends on that.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

/// Largest supported number of fractional decimal digits.
pub const MAX_SCALE: u8 = 18;

/// A single value may not exceed this many minor units (10^24).
const MAX_UNITS: i128 = 1_000_000_000_000_000_000_000_000;

/// A non-negative decimal amount stored as `units / 10^scale`.
///
/// Values are kept in a canonical form with no trailing fractional zeros,
/// so amounts that are numerically equal are structurally equal regardless
/// of the scale they were written at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Money {
    units: i128,
    scale: u8,
}

/// Rejected textual amount.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseMoneyError {
    #[error("'{0}' is not a decimal amount")]
    Malformed(String),
    #[error("'{text}' has more than {max_scale} fractional digits")]
    ExcessPrecision { text: String, max_scale: u8 },
    #[error("'{0}' exceeds the supported magnitude")]
    TooLarge(String),
}

impl Money {
    pub const ZERO: Money = Money { units: 0, scale: 0 };

    /// Builds an amount from minor units at the given scale.
    ///
    /// Panics if `units` is negative or `scale` exceeds [`MAX_SCALE`].
    pub fn from_units(units: i128, scale: u8) -> Money {
        assert!(units >= 0, "money amounts are non-negative");
        assert!(scale <= MAX_SCALE, "scale above MAX_SCALE");
        Money { units, scale }.normalized()
    }

    /// Builds a whole-unit amount.
    pub fn from_int(amount: u64) -> Money {
        Money::from_units(amount as i128, 0)
    }

    /// Parses `text` as a decimal with at most `max_scale` fractional
    /// digits. Excess precision is an error, never rounded away.
    pub fn parse(text: &str, max_scale: u8) -> Result<Money, ParseMoneyError> {
        let max_scale = max_scale.min(MAX_SCALE);
        let malformed = || ParseMoneyError::Malformed(text.to_string());
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(malformed());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) && !int_part.is_empty() {
            return Err(malformed());
        }
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(malformed());
        }
        if text.contains('.') && frac_part.is_empty() {
            return Err(malformed());
        }
        if frac_part.len() > max_scale as usize {
            return Err(ParseMoneyError::ExcessPrecision {
                text: text.to_string(),
                max_scale,
            });
        }
        let scale = frac_part.len() as u8;
        let digits: String = [int_part, frac_part].concat();
        let units: i128 = digits.parse().map_err(|_| malformed())?;
        if units > MAX_UNITS {
            return Err(ParseMoneyError::TooLarge(text.to_string()));
        }
        Ok(Money { units, scale }.normalized())
    }

    fn normalized(mut self) -> Money {
        while self.scale > 0 && self.units % 10 == 0 {
            self.units /= 10;
            self.scale -= 1;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.units == 0
    }

    pub fn is_positive(&self) -> bool {
        self.units > 0
    }

    /// Canonical scale: the fewest fractional digits that represent the
    /// amount exactly.
    pub fn scale(&self) -> u8 {
        self.scale
    }

    /// Minor units at the requested scale, which must be at least the
    /// canonical scale.
    pub fn to_scaled_units(&self, scale: u8) -> i128 {
        assert!(
            scale >= self.scale,
            "requested scale {} below canonical scale {}",
            scale,
            self.scale
        );
        self.units
            .checked_mul(pow10(scale - self.scale))
            .expect("money magnitude overflow")
    }

    /// Rebuilds an amount from minor units produced by [`to_scaled_units`].
    ///
    /// [`to_scaled_units`]: Money::to_scaled_units
    pub fn from_scaled(units: i128, scale: u8) -> Money {
        Money::from_units(units, scale)
    }

    pub fn checked_add(self, other: Money) -> Option<Money> {
        let scale = self.scale.max(other.scale);
        let units = self
            .to_scaled_units(scale)
            .checked_add(other.to_scaled_units(scale))?;
        Some(Money { units, scale }.normalized())
    }

    /// Difference, or `None` when the result would be negative.
    pub fn checked_sub(self, other: Money) -> Option<Money> {
        let scale = self.scale.max(other.scale);
        let units = self.to_scaled_units(scale) - other.to_scaled_units(scale);
        if units < 0 {
            return None;
        }
        Some(Money { units, scale }.normalized())
    }

    /// Renders with exactly `scale` fractional digits.
    pub fn format_scaled(&self, scale: u8) -> String {
        let units = self.to_scaled_units(scale);
        if scale == 0 {
            return units.to_string();
        }
        let base = pow10(scale);
        format!(
            "{}.{:0width$}",
            units / base,
            units % base,
            width = scale as usize
        )
    }
}

fn pow10(exp: u8) -> i128 {
    10i128.pow(exp as u32)
}

impl Ord for Money {
    fn cmp(&self, other: &Self) -> Ordering {
        let scale = self.scale.max(other.scale);
        self.to_scaled_units(scale)
            .cmp(&other.to_scaled_units(scale))
    }
}

impl PartialOrd for Money {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Money {
    type Output = Money;
    fn add(self, other: Money) -> Money {
        self.checked_add(other).expect("money sum overflow")
    }
}

impl AddAssign for Money {
    fn add_assign(&mut self, other: Money) {
        *self = *self + other;
    }
}

impl Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Money> for Money {
    fn sum<I: Iterator<Item = &'a Money>>(iter: I) -> Money {
        iter.copied().sum()
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_scaled(self.scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_decimals() {
        assert_eq!(Money::parse("8", 2).unwrap(), Money::from_int(8));
        assert_eq!(Money::parse("0.5", 2).unwrap(), Money::from_units(5, 1));
        assert_eq!(
            Money::parse("10.25", 2).unwrap(),
            Money::from_units(1025, 2)
        );
        assert_eq!(Money::parse("0", 2).unwrap(), Money::ZERO);
    }

    #[test]
    fn equal_values_are_structurally_equal() {
        assert_eq!(
            Money::parse("3.50", 2).unwrap(),
            Money::parse("3.5", 1).unwrap()
        );
        assert_eq!(Money::parse("10.00", 2).unwrap(), Money::from_int(10));
    }

    #[test]
    fn rejects_excess_precision() {
        assert_eq!(
            Money::parse("1.005", 2),
            Err(ParseMoneyError::ExcessPrecision {
                text: "1.005".to_string(),
                max_scale: 2
            })
        );
    }

    #[test]
    fn rejects_malformed_text() {
        for bad in ["", ".", "1.", ".5x", "-1", "1,5", "1.2.3", "1e3", " 1"] {
            assert!(Money::parse(bad, 6).is_err(), "accepted {bad:?}");
        }
        // A bare fractional part is fine.
        assert_eq!(
            Money::parse(".5", 2).unwrap(),
            Money::parse("0.5", 2).unwrap()
        );
    }

    #[test]
    fn addition_is_exact_across_scales() {
        let a = Money::parse("0.5", 2).unwrap();
        let b = Money::parse("3", 2).unwrap();
        assert_eq!(a + b, Money::parse("3.5", 2).unwrap());
        let total: Money = [a, b, a].iter().sum();
        assert_eq!(total, Money::parse("4", 2).unwrap());
    }

    #[test]
    fn ordering_aligns_scales() {
        let half = Money::parse("0.5", 2).unwrap();
        let two = Money::from_int(2);
        assert!(half < two);
        assert!(two > half);
        assert_eq!(two.cmp(&Money::parse("2.00", 2).unwrap()), Ordering::Equal);
    }

    #[test]
    fn formats_at_requested_scale() {
        assert_eq!(Money::parse("8", 2).unwrap().format_scaled(2), "8.00");
        assert_eq!(Money::parse("3.5", 2).unwrap().format_scaled(2), "3.50");
        assert_eq!(Money::ZERO.format_scaled(0), "0");
        assert_eq!(Money::parse("0.5", 2).unwrap().format_scaled(4), "0.5000");
    }

    #[test]
    fn subtraction_stops_at_zero() {
        let a = Money::from_int(3);
        let b = Money::parse("3.5", 1).unwrap();
        assert_eq!(b.checked_sub(a), Some(Money::parse("0.5", 1).unwrap()));
        assert_eq!(a.checked_sub(b), None);
        assert_eq!(a.checked_sub(a), Some(Money::ZERO));
    }
}
