//! Arbitrary-precision substrate: exact rationals, [`HPReal`], rational
//! reconstruction and the Catalan constant engine.

mod catalan;
mod hpreal;

pub use catalan::{catalan, CatalanEngine, CACHE_ENV, DEFAULT_HARD_CAP};
pub use hpreal::{digits_agree, working_bits, HPReal, GUARD_BITS, MIN_PRECISION};
pub(crate) use hpreal::pow10;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

/// Parses `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Renders `p/q`, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Recovers a rational `p/q` with `q <= den_bound` from `x`.
///
/// Walks the continued-fraction convergents of `x` and returns the first one
/// whose residual `|x - p/q|` is at most `10^(-precision/2)`.
pub fn rational_reconstruct(x: &HPReal, den_bound: &BigInt) -> Result<Rational> {
    if den_bound < &BigInt::one() {
        return Err(Error::invalid("den_bound must be >= 1"));
    }
    let exact = x.to_rational();
    let tol_exp = x.precision() / 2;
    let tol_scale = pow10(tol_exp);
    let within = |p: &BigInt, q: &BigInt| {
        // |exact - p/q| <= 10^-t  <=>  |n*q - p*d| * 10^t <= q*d
        let n = exact.numer();
        let d = exact.denom();
        (n * q - p * d).abs() * &tol_scale <= q * d
    };

    let (mut num, mut den) = (exact.numer().clone(), exact.denom().clone());
    // convergent recurrence seeds h_{-1}/k_{-1} = 1/0 and h_{-2}/k_{-2} = 0/1
    let (mut h1, mut k1) = (BigInt::one(), BigInt::zero());
    let (mut h2, mut k2) = (BigInt::zero(), BigInt::one());
    loop {
        let (a, r) = num.div_mod_floor(&den);
        let h = &a * &h1 + &h2;
        let k = &a * &k1 + &k2;
        if &k > den_bound {
            break;
        }
        if within(&h, &k) {
            return Ok(Rational::new(h, k));
        }
        if r.is_zero() {
            break;
        }
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
        num = den;
        den = r;
    }
    Err(Error::NoReconstruction)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstruct_one_eighth() {
        let x = HPReal::parse_decimal("0.125", 50).unwrap();
        let r = rational_reconstruct(&x, &BigInt::from(100)).unwrap();
        assert_eq!(r, Rational::new(1.into(), 8.into()));
    }

    #[test]
    fn reconstruct_rejects_perturbation() {
        let x = HPReal::parse_decimal("1.50000000000000000001", 50).unwrap();
        assert!(matches!(
            rational_reconstruct(&x, &BigInt::from(10)),
            Err(Error::NoReconstruction)
        ));
    }

    #[test]
    fn reconstruct_negative_and_integer() {
        let x = HPReal::from_ratio(&BigInt::from(-355), &BigInt::from(113), 60);
        let r = rational_reconstruct(&x, &BigInt::from(1000)).unwrap();
        assert_eq!(r, Rational::new((-355).into(), 113.into()));
        let y = HPReal::from_int(7, 40);
        assert_eq!(
            rational_reconstruct(&y, &BigInt::one()).unwrap(),
            Rational::from_integer(7.into())
        );
    }

    #[test]
    fn rational_text_roundtrip() {
        for s in ["8/5", "-3", "-2258335679/70"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_err());
    }
}
