//! Exact decimal numbers for component state values.
//!
//! Signal levels in the text format appear both with a fractional marker
//! (`5.0`, `100.0`) and as bare integers (`770`). The two spellings compare
//! equal when their numeric values agree; only the printed form differs.
//! [`Decimal`] keeps the value as an integer mantissa and a base-ten scale,
//! so comparisons are exact and no float edge cases leak into formula
//! equality.

use core::fmt;
use core::hash::{Hash, Hasher};

/// An exact decimal: `mantissa / 10^scale`.
///
/// Values are stored normalized (no trailing zero digits in the fraction),
/// and equality ignores the printing style, so `Decimal::new(50, 1)` equals
/// `Decimal::from_int(5)`.
#[derive(Clone, Copy, Debug)]
pub struct Decimal {
    mantissa: i64,
    scale: u8,
    /// Printed with a fractional marker (`5.0`) rather than bare (`5`).
    marked: bool,
}

impl Decimal {
    /// A decimal that prints bare, e.g. `770`.
    pub fn from_int(value: i64) -> Self {
        Decimal {
            mantissa: value,
            scale: 0,
            marked: false,
        }
    }

    /// A decimal that prints with a fractional marker: `new(55, 1)` is `5.5`,
    /// `new(5, 0)` is `5.0`.
    pub fn new(mantissa: i64, scale: u8) -> Self {
        let (mantissa, scale) = normalize(mantissa, scale);
        Decimal {
            mantissa,
            scale,
            marked: true,
        }
    }

    /// Normalized mantissa.
    pub fn mantissa(&self) -> i64 {
        self.mantissa
    }

    /// Number of fractional digits after normalization.
    pub fn scale(&self) -> u8 {
        self.scale
    }

    /// Whether this value prints with a fractional marker.
    pub fn is_marked(&self) -> bool {
        self.marked
    }

    /// True when the value has no fractional part.
    pub fn is_integral(&self) -> bool {
        self.scale == 0
    }

    /// The value as an integer, if it is integral.
    pub fn as_int(&self) -> Option<i64> {
        if self.scale == 0 {
            Some(self.mantissa)
        } else {
            None
        }
    }
}

fn normalize(mut mantissa: i64, mut scale: u8) -> (i64, u8) {
    while scale > 0 && mantissa % 10 == 0 {
        mantissa /= 10;
        scale -= 1;
    }
    (mantissa, scale)
}

impl PartialEq for Decimal {
    fn eq(&self, other: &Self) -> bool {
        // Style is presentation only.
        self.mantissa == other.mantissa && self.scale == other.scale
    }
}

impl Eq for Decimal {}

impl Hash for Decimal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.mantissa.hash(state);
        self.scale.hash(state);
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.marked {
            return write!(f, "{}", self.mantissa);
        }
        if self.scale == 0 {
            return write!(f, "{}.0", self.mantissa);
        }
        let sign = if self.mantissa < 0 { "-" } else { "" };
        let abs = self.mantissa.unsigned_abs();
        let pow = 10u64.pow(u32::from(self.scale));
        let int = abs / pow;
        let frac = abs % pow;
        write!(
            f,
            "{sign}{int}.{frac:0width$}",
            width = usize::from(self.scale)
        )
    }
}
