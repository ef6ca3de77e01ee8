//! Fixed-point decimal used for metric values and targets.
//!
//! Values carry at most six fractional digits and compare exactly. On the
//! wire they are plain JSON numbers: integral values are written without a
//! fractional part, everything else uses the shortest round-tripping form.

use std::fmt;
use std::ops::{Neg, Sub};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const SCALE: i64 = 1_000_000;

/// Largest magnitude (in whole units) that survives an `f64` round trip
/// at micro precision.
pub const MAX_WHOLE: i64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Decimal {
    micros: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecimalError {
    #[error("not a decimal number: {0:?}")]
    Syntax(String),
    #[error("more than 6 fractional digits: {0:?}")]
    TooPrecise(String),
    #[error("magnitude out of range: {0:?}")]
    OutOfRange(String),
}

impl Decimal {
    pub const ZERO: Decimal = Decimal { micros: 0 };

    pub fn from_micros(micros: i64) -> Self {
        Decimal { micros }
    }

    pub fn from_int(whole: i64) -> Self {
        Decimal {
            micros: whole * SCALE,
        }
    }

    pub fn micros(self) -> i64 {
        self.micros
    }

    pub fn is_integral(self) -> bool {
        self.micros % SCALE == 0
    }

    pub fn to_f64(self) -> f64 {
        self.micros as f64 / SCALE as f64
    }

    /// Exact conversion from a float. Rejects values that need more than six
    /// fractional digits to be represented.
    pub fn try_from_f64(value: f64) -> Result<Self, DecimalError> {
        if !value.is_finite() || value.abs() > MAX_WHOLE as f64 {
            return Err(DecimalError::OutOfRange(value.to_string()));
        }
        let scaled = (value * SCALE as f64).round();
        let candidate = Decimal {
            micros: scaled as i64,
        };
        if candidate.to_f64() != value {
            return Err(DecimalError::TooPrecise(value.to_string()));
        }
        Ok(candidate)
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let abs = self.micros.unsigned_abs();
        let whole = abs / SCALE as u64;
        let frac = abs % SCALE as u64;
        let digits = if frac == 0 {
            whole.to_string()
        } else {
            format!("{whole}.{}", format!("{frac:06}").trim_end_matches('0'))
        };
        // Honors `{:+}` and width like the integer types do.
        f.pad_integral(self.micros >= 0, "", &digits)
    }
}

impl FromStr for Decimal {
    type Err = DecimalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text.strip_prefix('+').unwrap_or(text)),
        };
        let (whole, frac) = match body.split_once('.') {
            Some((w, f)) => (w, f),
            None => (body, ""),
        };
        let digits_ok = |part: &str| part.bytes().all(|b| b.is_ascii_digit());
        if whole.is_empty() && frac.is_empty() || !digits_ok(whole) || !digits_ok(frac) {
            return Err(DecimalError::Syntax(s.to_string()));
        }
        let frac = frac.trim_end_matches('0');
        if frac.len() > 6 {
            return Err(DecimalError::TooPrecise(s.to_string()));
        }
        let whole: i64 = if whole.is_empty() {
            0
        } else {
            whole
                .parse()
                .map_err(|_| DecimalError::OutOfRange(s.to_string()))?
        };
        if whole > MAX_WHOLE {
            return Err(DecimalError::OutOfRange(s.to_string()));
        }
        let frac_micros: i64 = if frac.is_empty() {
            0
        } else {
            format!("{frac:0<6}").parse().expect("six ascii digits")
        };
        let micros = whole * SCALE + frac_micros;
        Ok(Decimal {
            micros: if negative { -micros } else { micros },
        })
    }
}

impl Sub for Decimal {
    type Output = Decimal;

    fn sub(self, rhs: Decimal) -> Decimal {
        Decimal {
            micros: self.micros - rhs.micros,
        }
    }
}

impl Neg for Decimal {
    type Output = Decimal;

    fn neg(self) -> Decimal {
        Decimal {
            micros: -self.micros,
        }
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_integral() {
            serializer.serialize_i64(self.micros / SCALE)
        } else {
            serializer.serialize_f64(self.to_f64())
        }
    }
}

struct DecimalVisitor;

impl Visitor<'_> for DecimalVisitor {
    type Value = Decimal;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a number with at most 6 fractional digits")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Decimal, E> {
        if v.abs() > MAX_WHOLE {
            return Err(E::custom(DecimalError::OutOfRange(v.to_string())));
        }
        Ok(Decimal::from_int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Decimal, E> {
        if v > MAX_WHOLE as u64 {
            return Err(E::custom(DecimalError::OutOfRange(v.to_string())));
        }
        Ok(Decimal::from_int(v as i64))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Decimal, E> {
        Decimal::try_from_f64(v).map_err(E::custom)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Decimal, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(DecimalVisitor)
    }
}
