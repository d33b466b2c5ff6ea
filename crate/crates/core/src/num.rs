//! Fixed-point decimal literals.
//!
//! Every numeric literal in a program is held as an integer count of
//! millionths. Equality is therefore exact, the canonical text form is
//! unique, and the value survives print/parse round trips byte for byte.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Number of fractional digits kept by [`Num`].
pub const FRACTION_DIGITS: u32 = 6;
const SCALE: i64 = 1_000_000;

/// A decimal number with at most six fractional digits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Num(i64);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("malformed number `{0}`")]
    Malformed(String),
    #[error("number `{0}` is out of range")]
    Overflow(String),
}

impl Num {
    pub const ZERO: Num = Num(0);
    pub const ONE: Num = Num(SCALE);

    pub const fn from_micros(micros: i64) -> Num {
        Num(micros)
    }

    pub const fn from_int(v: i64) -> Num {
        Num(v * SCALE)
    }

    /// Rounds half away from zero to the nearest millionth.
    pub fn from_f64(v: f64) -> Num {
        let scaled = (v * SCALE as f64).round();
        let clamped = scaled.clamp(i64::MIN as f64, i64::MAX as f64);
        Num(clamped as i64)
    }

    pub const fn micros(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }

    pub fn is_integer(self) -> bool {
        self.0 % SCALE == 0
    }

    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / SCALE)
    }

    /// Linear interpolation carried out in millionths so that `t = 0` and
    /// `t = 1` reproduce the endpoints exactly.
    pub fn lerp(self, other: Num, t: f64) -> Num {
        let delta = (other.0 as i128 - self.0 as i128) as f64;
        Num(self.0 + (delta * t).round() as i64)
    }

    /// Rounds to the nearest integer, halves toward positive infinity.
    pub fn round_half_up(self) -> Num {
        Num((self.0 + SCALE / 2).div_euclid(SCALE) * SCALE)
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Num {
        Num::from_int(v)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let neg = self.0 < 0;
        let abs = self.0.unsigned_abs();
        let int = abs / SCALE as u64;
        let frac = abs % SCALE as u64;
        if neg {
            f.write_str("-")?;
        }
        write!(f, "{int}")?;
        if frac != 0 {
            let digits = format!("{frac:06}");
            write!(f, ".{}", digits.trim_end_matches('0'))?;
        }
        Ok(())
    }
}

impl FromStr for Num {
    type Err = NumError;

    /// Accepts `-?[0-9]+(\.[0-9]+)?`. Extra fractional digits are rounded
    /// half away from zero.
    fn from_str(s: &str) -> Result<Num, NumError> {
        let malformed = || NumError::Malformed(s.to_string());
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (body, None),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let int: i64 = int_part
            .parse()
            .map_err(|_| NumError::Overflow(s.to_string()))?;
        let mut micros = int
            .checked_mul(SCALE)
            .ok_or_else(|| NumError::Overflow(s.to_string()))?;
        if let Some(frac) = frac_part {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let kept: String = frac
                .chars()
                .chain(std::iter::repeat('0'))
                .take(FRACTION_DIGITS as usize)
                .collect();
            let mut frac_micros: i64 = kept.parse().map_err(|_| malformed())?;
            if frac.as_bytes().get(FRACTION_DIGITS as usize).is_some_and(|d| *d >= b'5') {
                frac_micros += 1;
            }
            micros = micros
                .checked_add(frac_micros)
                .ok_or_else(|| NumError::Overflow(s.to_string()))?;
        }
        Ok(Num(if neg { -micros } else { micros }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_text() {
        assert_eq!(Num::from_int(3).to_string(), "3");
        assert_eq!("0.500".parse::<Num>().unwrap().to_string(), "0.5");
        assert_eq!("-1.25".parse::<Num>().unwrap().to_string(), "-1.25");
        assert_eq!("-0.0".parse::<Num>().unwrap().to_string(), "0");
        assert_eq!("33.3333335".parse::<Num>().unwrap().to_string(), "33.333334");
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", "1.", ".5", "1e3", "abc", "1.2.3"] {
            assert!(bad.parse::<Num>().is_err(), "{bad}");
        }
    }

    #[test]
    fn lerp_endpoints_and_rounding() {
        let a = Num::from_int(2);
        let b = Num::from_int(4);
        assert_eq!(a.lerp(b, 0.0), a);
        assert_eq!(a.lerp(b, 1.0), b);
        assert_eq!(a.lerp(b, 0.5), Num::from_int(3));
        assert_eq!("2.5".parse::<Num>().unwrap().round_half_up(), Num::from_int(3));
        assert_eq!("-2.5".parse::<Num>().unwrap().round_half_up(), Num::from_int(-2));
    }

    proptest! {
        #[test]
        fn text_round_trip(m in -1_000_000_000_000i64..1_000_000_000_000) {
            let n = Num::from_micros(m);
            prop_assert_eq!(n.to_string().parse::<Num>().unwrap(), n);
        }
    }
}
