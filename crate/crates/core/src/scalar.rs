//! Coordinate scalars.
//!
//! The geometry is generic over the coordinate type: `f64`/`f32` for the
//! floating-point surface and `BigRational` where a computation must be
//! exact end to end.  Every scalar embeds exactly into the rationals
//! (finite floats are dyadic), so support combinatorics computed from any
//! instantiation are tie-safe.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

type Rat = BigRational;

pub trait Scalar:
    Clone
    + std::fmt::Debug
    + PartialEq
    + PartialOrd
    + num_traits::Zero
    + num_traits::One
    + std::ops::Neg<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    /// Exact embedding into the rationals.
    fn to_rat(&self) -> Rat;
    /// Nearest floating-point value (used only for metric output).
    fn to_f64(&self) -> f64;
    fn from_rat(r: &Rat) -> Self;
    fn is_negative_value(&self) -> bool;
}

impl Scalar for f64 {
    fn to_rat(&self) -> Rat {
        dyadic_to_rat(*self)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r)
    }
    fn is_negative_value(&self) -> bool {
        *self < 0.0
    }
}

impl Scalar for f32 {
    fn to_rat(&self) -> Rat {
        dyadic_to_rat(*self as f64)
    }
    fn to_f64(&self) -> f64 {
        *self as f64
    }
    fn from_rat(r: &Rat) -> Self {
        rat_to_f64(r) as f32
    }
    fn is_negative_value(&self) -> bool {
        *self < 0.0
    }
}

/// Exact dyadic rational of a finite float, built in reduced form
/// directly from the mantissa and exponent (no gcd pass).
fn dyadic_to_rat(f: f64) -> Rat {
    assert!(f.is_finite(), "finite coordinate");
    if f == 0.0 {
        return Rat::from_integer(BigInt::from(0u8));
    }
    let bits = f.to_bits();
    let negative = bits >> 63 == 1;
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    // f = m · 2^e with m odd after stripping trailing zeros.
    let (mut m, mut e) = if raw_exp == 0 {
        (frac, -1074i64) // subnormal
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    let shift = m.trailing_zeros();
    m >>= shift;
    e += shift as i64;
    let mantissa = if negative {
        -BigInt::from(m)
    } else {
        BigInt::from(m)
    };
    if e >= 0 {
        Rat::from_integer(mantissa << e)
    } else {
        // m is odd, so the fraction is already in lowest terms.
        Rat::new_raw(mantissa, BigInt::from(1u8) << (-e))
    }
}

impl Scalar for Rat {
    fn to_rat(&self) -> Rat {
        self.clone()
    }
    fn to_f64(&self) -> f64 {
        rat_to_f64(self)
    }
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }
    fn is_negative_value(&self) -> bool {
        self.is_negative()
    }
}

/// Rational to f64 without overflowing on large numerators/denominators.
pub fn rat_to_f64(r: &Rat) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(r) {
        if v.is_finite() {
            return v;
        }
    }
    // Scale down by a common power of two; exact values here are tiny in
    // practice so this path is essentially unreachable.
    let bits = r.numer().bits().max(r.denom().bits()) as i64 - 512;
    if bits > 0 {
        let scaled = r / Rat::from_integer(BigInt::from(2u8).pow(bits as u32));
        ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN) * 2f64.powi(bits as i32)
    } else {
        f64::NAN
    }
}

/// Parse a decimal literal (optionally signed, with fraction and exponent)
/// into an exact rational.
pub fn rat_from_decimal_str(s: &str) -> Result<Rat> {
    let err = || Error::InvalidInput(format!("not a decimal literal: {s:?}"));
    let s = s.trim();
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1i32, r),
        None => (1, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exp) = match rest.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = rest[i + 1..].parse().map_err(|_| err())?;
            (&rest[..i], e)
        }
        None => (rest, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(i) => (&mantissa[..i], &mantissa[i + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| err())?;
    let scale = frac_part.len() as i64;
    let mut r = Rat::from_integer(numer * BigInt::from(sign));
    let shift = exp - scale;
    let ten = BigInt::from(10u8);
    if shift >= 0 {
        r *= Rat::from_integer(ten.pow(shift as u32));
    } else {
        r /= Rat::from_integer(ten.pow((-shift) as u32));
    }
    Ok(r)
}

/// Format with the given number of significant digits, plain decimal
/// notation for ordinary magnitudes.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let formatted = format!("{:.*e}", sig.saturating_sub(1), x);
    let (mantissa, exp) = formatted.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-5..15).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let neg = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let point = exp + 1; // digits before the decimal point
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..-point {
            out.push('0');
        }
        out.push_str(&digits);
    } else if (point as usize) >= digits.len() {
        out.push_str(&digits);
        for _ in 0..(point as usize - digits.len()) {
            out.push('0');
        }
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    if out.contains('.') {
        let trimmed = out.trim_end_matches('0').trim_end_matches('.');
        out = trimmed.to_string();
    }
    if out.is_empty() || out == "-" {
        out.push('0');
    }
    out
}

/// True when the rational is an exact zero.
pub fn rat_is_zero(r: &Rat) -> bool {
    r.is_zero()
}
