use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_SMOOTH_BOUND: u64 = 10_000;

/// Pollard-rho iterations spent per composite before giving up.
pub const DEFAULT_RHO_BUDGET: u64 = 200_000;

/// `sign * cofactor * prod p^e`; `cofactor > 1` means factoring stopped early.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInt {
    sign: i8,
    factors: BTreeMap<BigUint, u32>,
    cofactor: BigUint,
}

impl FactoredInt {
    pub fn new(sign: i8, factors: BTreeMap<BigUint, u32>, cofactor: BigUint) -> Result<Self> {
        if sign != 1 && sign != -1 {
            return Err(Error::invalid("sign must be +1 or -1"));
        }
        if cofactor.is_zero() || factors.values().any(|&e| e == 0) {
            return Err(Error::invalid("zero cofactor or exponent"));
        }
        Ok(FactoredInt {
            sign,
            factors,
            cofactor,
        })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    pub fn cofactor(&self) -> &BigUint {
        &self.cofactor
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_one()
    }

    /// Exponent of `p` among the found factors.
    pub fn exponent(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn reconstruct(&self) -> BigInt {
        let mag = self
            .factors
            .iter()
            .fold(self.cofactor.clone(), |acc, (p, &e)| acc * p.pow(e));
        BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, mag)
    }

    /// Parses `[-]p^e*q*...`, with an unfactored remainder written `[n]`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s),
        };
        let bad = || Error::invalid(format!("malformed factorization {s:?}"));
        let mut factors = BTreeMap::new();
        let mut cofactor = BigUint::one();
        if body != "1" {
            for part in body.split('*') {
                if let Some(inner) = part.strip_prefix('[').and_then(|p| p.strip_suffix(']')) {
                    cofactor *= inner.parse::<BigUint>().map_err(|_| bad())?;
                    continue;
                }
                let (p, e) = match part.split_once('^') {
                    Some((p, e)) => (p, e.parse::<u32>().map_err(|_| bad())?),
                    None => (part, 1),
                };
                let p: BigUint = p.parse().map_err(|_| bad())?;
                if p < BigUint::from(2u32) || e == 0 {
                    return Err(bad());
                }
                *factors.entry(p).or_insert(0) += e;
            }
        }
        FactoredInt::new(sign, factors, cofactor)
    }
}

impl fmt::Display for FactoredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign < 0 {
            f.write_str("-")?;
        }
        let mut parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, &e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        if !self.cofactor.is_one() {
            parts.push(format!("[{}]", self.cofactor));
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

fn small_primes(bound: u64) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let base = CACHE.get_or_init(|| sieve(DEFAULT_SMOOTH_BOUND));
    if bound <= DEFAULT_SMOOTH_BOUND {
        base.iter().copied().take_while(|&p| p <= bound).collect()
    } else {
        sieve(bound)
    }
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Miller-Rabin with the first twelve prime bases; exact below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &MR_BASES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `None` once the budget is spent.
fn pollard_brent(n: &BigUint, budget: u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let mut spent = 0u64;
    for seed in 1u32.. {
        let c = BigUint::from(seed);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let m: u64 = 64;
        let mut x;
        let mut ys;
        loop {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            let mut g = BigUint::one();
            ys = y.clone();
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
                spent += m.min(r);
                if spent > budget {
                    return None;
                }
            }
            if !g.is_one() {
                if &g == n {
                    // backtrack one step at a time
                    loop {
                        ys = f(&ys);
                        let diff = if x > ys { &x - &ys } else { &ys - &x };
                        g = diff.gcd(n);
                        if !g.is_one() {
                            break;
                        }
                    }
                }
                if &g != n {
                    return Some(g);
                }
                break;
            }
            r *= 2;
        }
        if seed > 16 {
            return None;
        }
    }
    None
}

/// Trial division by primes up to `smooth_bound`, then Pollard rho within
/// [`DEFAULT_RHO_BUDGET`]; whatever resists ends up in the cofactor.
pub fn factorize(n: &BigInt, smooth_bound: u64) -> Result<FactoredInt> {
    factorize_with_budget(n, smooth_bound, DEFAULT_RHO_BUDGET)
}

pub fn factorize_with_budget(n: &BigInt, smooth_bound: u64, rho_budget: u64) -> Result<FactoredInt> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factor zero"));
    }
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut m = n.magnitude().clone();
    let mut factors: BTreeMap<BigUint, u32> = BTreeMap::new();
    for p in small_primes(smooth_bound) {
        if m.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > m {
            break;
        }
        let mut e = 0;
        while (&m % p).is_zero() {
            m /= p;
            e += 1;
        }
        if e > 0 {
            factors.insert(pb, e);
        }
    }
    let mut cofactor = BigUint::one();
    let mut stack = vec![m];
    while let Some(x) = stack.pop() {
        if x.is_one() {
            continue;
        }
        let fits_small = x.to_u64().is_some_and(|v| v <= smooth_bound.saturating_mul(smooth_bound));
        if fits_small || is_probable_prime(&x) {
            // below the square of the trial bound every remainder is prime
            *factors.entry(x).or_insert(0) += 1;
            continue;
        }
        match pollard_brent(&x, rho_budget) {
            Some(d) => {
                let other = &x / &d;
                stack.push(d);
                stack.push(other);
            }
            None => cofactor *= x,
        }
    }
    FactoredInt::new(sign, factors, cofactor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: i64) -> String {
        factorize(&BigInt::from(n), DEFAULT_SMOOTH_BOUND).unwrap().to_string()
    }

    #[test]
    fn small_examples() {
        assert_eq!(fac(720), "2^4*3^2*5");
        assert_eq!(fac(450), "2*3^2*5^2");
        assert_eq!(fac(2182950), "2*3^4*5^2*7^2*11");
        assert_eq!(fac(-12), "-2^2*3");
        assert_eq!(fac(1), "1");
        assert!(factorize(&BigInt::zero(), 100).is_err());
    }

    #[test]
    fn rho_splits_semiprime() {
        let p: BigInt = "1000000007".parse().unwrap();
        let q: BigInt = "998244353".parse().unwrap();
        let f = factorize(&(&p * &q), 1000).unwrap();
        assert!(f.is_complete());
        assert_eq!(f.factors().len(), 2);
        assert_eq!(f.reconstruct(), p * q);
    }

    #[test]
    fn exhausted_budget_leaves_cofactor() {
        let p: BigInt = "1000000000000000003".parse().unwrap();
        let q: BigInt = "1000000000000000009".parse().unwrap();
        let n = &p * &q * 12;
        let f = factorize_with_budget(&n, 100, 10).unwrap();
        assert!(!f.is_complete());
        assert_eq!(f.reconstruct(), n);
        let text = f.to_string();
        assert_eq!(FactoredInt::parse(&text).unwrap(), f);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&BigUint::from(2u32)));
        assert!(is_probable_prime(&BigUint::from(1_000_000_007u64)));
        assert!(!is_probable_prime(&BigUint::from(561u32)));
        assert!(!is_probable_prime(&BigUint::from(1u32)));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["2^4*3^2*5", "-7", "1", "-1", "2*[91]"] {
            assert_eq!(FactoredInt::parse(s).unwrap().to_string(), s);
        }
        assert!(FactoredInt::parse("2^0").is_err());
        assert!(FactoredInt::parse("x").is_err());
    }
}
