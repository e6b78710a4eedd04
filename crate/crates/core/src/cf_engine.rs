//! Polynomial continued fractions `a(0) + b(1)/(a(1) + b(2)/(a(2) + ...))`.
//!
//! Two evaluation routes are provided: a backward fold in fixed point at a
//! chosen decimal precision, and exact rational convergents from the forward
//! three-term recurrence. The second serves as an oracle for the first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{digits_agree, pow10, working_bits, HPReal, Rational};

/// Dense integer polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PolyInt {
    coeffs: Vec<BigInt>,
}

impl PolyInt {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PolyInt { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `slope * x + offset`.
    pub fn linear(slope: i64, offset: i64) -> Self {
        Self::from_i64(&[offset, slope])
    }

    pub fn zero() -> Self {
        PolyInt { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        self.eval(&BigInt::from(x))
    }

    pub fn eval_rational(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a PolyInt>) -> Self {
        factors.into_iter().fold(Self::one(), |acc, f| acc.mul(f))
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact division of every coefficient by `k`.
    pub fn div_exact(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c / k).collect())
    }

    /// Renders with the given variable name, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one() && k > 0;
            if !unit {
                out.push_str(&mag.to_string());
            }
            match k {
                0 => {}
                1 => out.push_str(var),
                _ => out.push_str(&format!("{var}^{k}")),
            }
        }
        out
    }
}

impl fmt::Display for PolyInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("n"))
    }
}

/// Partial numerators, either expanded or as a scaled product of factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Numerator {
    Poly(PolyInt),
    Product { scale: BigInt, factors: Vec<PolyInt> },
}

impl Numerator {
    pub fn product(scale: i64, factors: Vec<PolyInt>) -> Self {
        Numerator::Product {
            scale: scale.into(),
            factors,
        }
    }

    pub fn eval(&self, n: &BigInt) -> BigInt {
        match self {
            Numerator::Poly(p) => p.eval(n),
            Numerator::Product { scale, factors } => {
                factors.iter().fold(scale.clone(), |acc, f| acc * f.eval(n))
            }
        }
    }

    pub fn expand(&self) -> PolyInt {
        match self {
            Numerator::Poly(p) => p.clone(),
            Numerator::Product { scale, factors } => PolyInt::product(factors).scale(scale),
        }
    }
}

impl fmt::Display for Numerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Numerator::Poly(p) => write!(f, "{p}"),
            Numerator::Product { scale, factors } => {
                write!(f, "{scale}")?;
                for p in factors {
                    if p.degree() == Some(1) && p.coeff(1).is_one() && p.coeff(0).is_zero() {
                        write!(f, "n")?;
                    } else {
                        write!(f, "({p})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// A continued fraction given by partial denominators `a` and numerators `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFSpec {
    a: PolyInt,
    b: Numerator,
    a0: BigInt,
}

impl CFSpec {
    pub fn new(a: PolyInt, b: Numerator) -> Self {
        let a0 = a.eval(&BigInt::zero());
        CFSpec { a, b, a0 }
    }

    pub fn a(&self) -> &PolyInt {
        &self.a
    }

    pub fn b(&self) -> &Numerator {
        &self.b
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    pub fn a_at(&self, n: u64) -> BigInt {
        self.a.eval(&BigInt::from(n))
    }

    pub fn b_at(&self, n: u64) -> BigInt {
        self.b.eval(&BigInt::from(n))
    }
}

impl fmt::Display for CFSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a(n) = {}, b(n) = {}", self.a, self.b)
    }
}

/// The kappa family: `a(n) = 3n^2 + (3+4k)n + 2k+1`, `b(n) = -2n^2(n+2k)(n+c)`.
pub fn kappa_cf(kappa: u32, c: i64) -> CFSpec {
    let k = kappa as i64;
    let n = PolyInt::linear(1, 0);
    CFSpec::new(
        PolyInt::from_i64(&[2 * k + 1, 3 + 4 * k, 3]),
        Numerator::product(
            -2,
            vec![n.clone(), n, PolyInt::linear(1, 2 * k), PolyInt::linear(1, c)],
        ),
    )
}

/// Backward fold `a0 + x_1`, `x_n = b(n)/(a(n) + x_{n+1})`, `x_{depth+1} = 0`,
/// in fixed point with `working_bits(precision)` fractional bits.
///
/// If some `b(n)` with `n <= depth` vanishes the tail beyond it is irrelevant
/// and the fold starts there.
pub fn eval_backward(cf: &CFSpec, depth: u64, precision: u32) -> Result<HPReal> {
    if depth < 1 {
        return Err(Error::invalid("depth must be >= 1"));
    }
    if precision < 20 {
        return Err(Error::invalid("precision must be >= 20 digits"));
    }
    let w = working_bits(precision) as usize;
    let mut bs = Vec::with_capacity(depth as usize);
    for n in 1..=depth {
        let b = cf.b_at(n);
        if b.is_zero() {
            break;
        }
        bs.push(b);
    }
    let threshold = (BigInt::one() << w) / pow10(precision - 5);
    let mut x = BigInt::zero();
    for n in (1..=bs.len()).rev() {
        let den = (cf.a_at(n as u64) << w) + &x;
        if den.abs() < threshold {
            return Err(Error::Breakdown { n: n as u64 });
        }
        x = (&bs[n - 1] << (2 * w)).div_floor(&den);
    }
    Ok(HPReal::from_parts((cf.a0() << w) + x, -(w as i64), precision))
}

/// Numerator and denominator of the `depth`-th convergent, unreduced.
pub fn convergent_terms(cf: &CFSpec, depth: u64) -> (BigInt, BigInt) {
    let (mut h2, mut h1) = (BigInt::one(), cf.a0().clone());
    let (mut k2, mut k1) = (BigInt::zero(), BigInt::one());
    for n in 1..=depth {
        let a = cf.a_at(n);
        let b = cf.b_at(n);
        let h = &a * &h1 + &b * &h2;
        let k = &a * &k1 + &b * &k2;
        h2 = std::mem::replace(&mut h1, h);
        k2 = std::mem::replace(&mut k1, k);
    }
    (h1, k1)
}

/// The exact `depth`-th convergent.
pub fn convergent_exact(cf: &CFSpec, depth: u64) -> Result<Rational> {
    let (h, k) = convergent_terms(cf, depth);
    if k.is_zero() {
        return Err(Error::DegenerateConvergent { depth });
    }
    Ok(Rational::new(h, k))
}

/// Converged digits estimated from agreement between depth `d` and `2d`,
/// less two guard digits.
pub fn estimate_converged_digits(cf: &CFSpec, depth: u64, precision: u32) -> Result<u32> {
    if depth < 2 {
        return Err(Error::invalid("depth must be >= 2"));
    }
    let a = eval_backward(cf, depth, precision)?;
    let b = eval_backward(cf, 2 * depth, precision)?;
    Ok(digits_agree(&a, &b).saturating_sub(2))
}

/// `Q_{c,k} - Q_{c-1,k} - 2`.
pub fn successive_limit_gap(kappa: u32, c: i64, depth: u64, precision: u32) -> Result<HPReal> {
    if c < 1 {
        return Err(Error::invalid("c must be >= 1"));
    }
    let hi = eval_backward(&kappa_cf(kappa, c), depth, precision)?;
    let lo = eval_backward(&kappa_cf(kappa, c - 1), depth, precision)?;
    Ok(hi.sub(&lo).sub(&HPReal::from_int(2, precision)))
}
