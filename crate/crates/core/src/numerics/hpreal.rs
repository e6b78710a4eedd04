//! Binary floating-point reals with an explicit decimal working precision.
//!
//! A value is `mantissa * 2^exponent`. The mantissa is kept to
//! [`working_bits`] bits, which covers the requested decimal digits plus a
//! fixed number of guard bits. Results of binary operations carry the smaller
//! of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Guard bits carried beyond the requested decimal precision.
pub const GUARD_BITS: u64 = 64;

/// Smallest accepted working precision, in decimal digits.
pub const MIN_PRECISION: u32 = 10;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Mantissa width used for `digits` decimal digits of precision.
pub fn working_bits(digits: u32) -> u64 {
    (digits as f64 * LOG2_10).ceil() as u64 + GUARD_BITS
}

pub(crate) fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

#[derive(Clone, Debug)]
pub struct HPReal {
    mant: BigInt,
    exp: i64,
    precision: u32,
}

impl HPReal {
    pub fn zero(precision: u32) -> Self {
        HPReal {
            mant: BigInt::zero(),
            exp: 0,
            precision: precision.max(MIN_PRECISION),
        }
    }

    /// Builds `mant * 2^exp` and rounds it to the working width.
    pub fn from_parts(mant: BigInt, exp: i64, precision: u32) -> Self {
        let mut x = HPReal {
            mant,
            exp,
            precision: precision.max(MIN_PRECISION),
        };
        x.normalize();
        x
    }

    pub fn from_int(n: impl Into<BigInt>, precision: u32) -> Self {
        Self::from_parts(n.into(), 0, precision)
    }

    pub fn from_rational(r: &Rational, precision: u32) -> Self {
        Self::from_ratio(r.numer(), r.denom(), precision)
    }

    /// `num / den` rounded toward negative infinity at the working width.
    pub fn from_ratio(num: &BigInt, den: &BigInt, precision: u32) -> Self {
        assert!(!den.is_zero(), "HPReal::from_ratio with zero denominator");
        if num.is_zero() {
            return Self::zero(precision);
        }
        let wb = working_bits(precision.max(MIN_PRECISION)) as i64;
        let shift = (wb + den.bits() as i64 - num.bits() as i64 + 2).max(0);
        let q = (num << shift as usize).div_floor(den);
        Self::from_parts(q, -shift, precision)
    }

    /// Parses a plain decimal literal such as `-12.5e-3` or `0.9159`.
    pub fn parse_decimal(s: &str, precision: u32) -> Result<Self> {
        let r = parse_decimal_rational(s)?;
        Ok(Self::from_rational(&r, precision))
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Same value re-rounded to a different precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, precision)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        HPReal {
            mant: self.mant.abs(),
            ..self.clone()
        }
    }

    /// The exact dyadic rational this value represents.
    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// `floor(self * scale)` computed exactly.
    pub fn floor_scaled(&self, scale: &BigInt) -> BigInt {
        let prod = &self.mant * scale;
        if self.exp >= 0 {
            prod << self.exp as usize
        } else {
            // arithmetic shift on BigInt floors toward negative infinity
            prod >> (-self.exp) as usize
        }
    }

    /// Position of the leading bit: `2^(top-1) <= |x| < 2^top`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    fn normalize(&mut self) {
        let wb = working_bits(self.precision);
        let bits = self.mant.bits();
        if bits > wb {
            let drop = bits - wb;
            self.mant >>= drop as usize;
            self.exp += drop as i64;
        }
        if self.mant.is_zero() {
            self.exp = 0;
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = self.precision.min(other.precision);
        if self.is_zero() {
            return other.with_precision(precision);
        }
        if other.is_zero() {
            return self.with_precision(precision);
        }
        let wb = working_bits(precision) as i64;
        // An addend entirely below the working width cannot change the result.
        if self.top() - other.top() > wb + 2 {
            return self.with_precision(precision);
        }
        if other.top() - self.top() > wb + 2 {
            return other.with_precision(precision);
        }
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as usize;
        let b = &other.mant << (other.exp - exp) as usize;
        Self::from_parts(a + b, exp, precision)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_parts(
            &self.mant * &other.mant,
            self.exp + other.exp,
            self.precision.min(other.precision),
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::invalid("division by zero"));
        }
        let precision = self.precision.min(other.precision);
        if self.is_zero() {
            return Ok(Self::zero(precision));
        }
        let wb = working_bits(precision) as i64;
        let shift =
            (wb + other.mant.bits() as i64 - self.mant.bits() as i64 + 2).max(0);
        let q = (&self.mant << shift as usize).div_floor(&other.mant);
        Ok(Self::from_parts(q, self.exp - shift - other.exp, precision))
    }

    pub fn neg(&self) -> Self {
        HPReal {
            mant: -&self.mant,
            ..self.clone()
        }
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        self.add(&HPReal::from_int(n.clone(), self.precision))
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Self::from_parts(&self.mant * n, self.exp, self.precision)
    }

    /// Exact comparison of the represented values.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let exp = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - exp) as usize;
        let b = &other.mant << (other.exp - exp) as usize;
        a.cmp(&b)
    }

    /// Largest `e` with `10^e <= |x|`. Panics on zero.
    pub fn decimal_exponent(&self) -> i64 {
        assert!(!self.is_zero());
        let a = self.mant.abs();
        // initial guess from the bit length, then correct exactly
        let approx = ((self.top() - 1) as f64 / LOG2_10).floor() as i64;
        let mut e = approx;
        while cmp_dyadic_pow10(&a, self.exp, e) == Ordering::Less {
            e -= 1;
        }
        while cmp_dyadic_pow10(&a, self.exp, e + 1) != Ordering::Less {
            e += 1;
        }
        e
    }

    /// Renders `digits` significant digits, truncated toward zero.
    pub fn to_sig_string(&self, digits: u32) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let e10 = self.decimal_exponent();
        let shift = digits as i64 - 1 - e10;
        let int = scaled_trunc(&self.mant.abs(), self.exp, shift);
        let s = int.to_string();
        let sign = if self.signum() < 0 { "-" } else { "" };
        // s has exactly `digits` characters; the decimal point goes after e10+1 of them
        let point = e10 + 1;
        if point <= 0 {
            format!("{sign}0.{}{s}", "0".repeat((-point) as usize))
        } else if point as usize >= s.len() {
            format!("{sign}{s}{}", "0".repeat(point as usize - s.len()))
        } else {
            let (i, f) = s.split_at(point as usize);
            format!("{sign}{i}.{f}")
        }
    }

    /// Renders `frac_digits` digits after the decimal point, truncated toward zero.
    pub fn to_fixed_string(&self, frac_digits: u32) -> String {
        let int = scaled_trunc(&self.mant.abs(), self.exp, frac_digits as i64);
        let mut s = int.to_string();
        let fd = frac_digits as usize;
        if s.len() <= fd {
            s = format!("{}{s}", "0".repeat(fd + 1 - s.len()));
        }
        let (i, f) = s.split_at(s.len() - fd);
        let sign = if self.signum() < 0 && !int.is_zero() { "-" } else { "" };
        if fd == 0 {
            format!("{sign}{i}")
        } else {
            format!("{sign}{i}.{f}")
        }
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let keep = 60;
        if bits <= keep {
            return self.mant.to_f64().unwrap_or(f64::NAN) * 2f64.powi(self.exp as i32);
        }
        let m = (&self.mant >> (bits - keep) as usize).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powf((self.exp + bits - keep) as f64)
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32).unwrap_or(self.precision);
        f.write_str(&self.to_sig_string(digits))
    }
}

/// `trunc(|m| * 2^exp * 10^shift)` for nonnegative `m`.
fn scaled_trunc(m: &BigInt, exp: i64, shift: i64) -> BigInt {
    let mut num = m.clone();
    let mut den = BigInt::one();
    if shift >= 0 {
        num *= pow10(shift as u32);
    } else {
        den *= pow10((-shift) as u32);
    }
    if exp >= 0 {
        num <<= exp as usize;
    } else {
        den <<= (-exp) as usize;
    }
    num / den
}

/// Compares `m * 2^exp` with `10^e` (m > 0).
fn cmp_dyadic_pow10(m: &BigInt, exp: i64, e: i64) -> Ordering {
    let mut lhs = m.clone();
    let mut rhs = BigInt::one();
    if exp >= 0 {
        lhs <<= exp as usize;
    } else {
        rhs <<= (-exp) as usize;
    }
    if e >= 0 {
        rhs *= pow10(e as u32);
    } else {
        lhs *= pow10((-e) as u32);
    }
    lhs.cmp(&rhs)
}

/// Count of leading agreeing significant decimal digits of `a` and `b`:
/// `floor(log10(max(|a|,|b|) / |a-b|))`, capped at the smaller precision.
/// Values of different sign agree on 0 digits.
pub fn digits_agree(a: &HPReal, b: &HPReal) -> u32 {
    let cap = a.precision.min(b.precision);
    if a.signum() != b.signum() {
        return 0;
    }
    if a.is_zero() {
        return cap;
    }
    // exact difference on the common exponent
    let exp = a.exp.min(b.exp);
    let am = &a.mant << (a.exp - exp) as usize;
    let bm = &b.mant << (b.exp - exp) as usize;
    let diff = (&am - &bm).abs();
    if diff.is_zero() {
        return cap;
    }
    let big = am.abs().max(bm.abs());
    // k = floor(log10(big / diff)), found from a bit-length estimate and exact fixes
    let est = ((big.bits() as f64 - diff.bits() as f64) / LOG2_10).floor() as i64 - 1;
    let mut k = est.max(0);
    let fits = |k: i64| &diff * pow10(k as u32) <= big;
    if !fits(k) {
        while k > 0 && !fits(k) {
            k -= 1;
        }
        if !fits(k) {
            return 0;
        }
    }
    while k < cap as i64 && fits(k + 1) {
        k += 1;
    }
    (k.max(0) as u32).min(cap)
}

pub(crate) fn parse_decimal_rational(s: &str) -> Result<Rational> {
    let bad = || Error::invalid(format!("not a decimal number: {s:?}"));
    let t = s.trim();
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (ip, fp) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = digits.parse().map_err(|_| bad())?;
    if neg {
        num = -num;
    }
    let scale = exponent - fp.len() as i64;
    let r = if scale >= 0 {
        Rational::from_integer(num * pow10(scale as u32))
    } else {
        Rational::new(num, pow10((-scale) as u32))
    };
    Ok(r)
}
