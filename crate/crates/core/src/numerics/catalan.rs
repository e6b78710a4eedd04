//! Catalan's constant `G = 1 - 1/9 + 1/25 - ...` to arbitrary precision.
//!
//! Two linearly convergent series are summed in fixed point and must agree
//! before a value is handed out or written to the digit cache:
//!
//! * `G = (pi/8) ln(2 + sqrt 3) + (3/8) sum 1/((2n+1)^2 binom(2n,n))`
//! * `G = (1/2) sum 2^n n!^2/(2n+1)! * (1 + 1/3 + ... + 1/(2n+1))`

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::hpreal::{digits_agree, working_bits, HPReal, MIN_PRECISION};
use crate::error::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "CATCF_CACHE_DIR";

/// Refuse requests beyond this many digits unless configured otherwise.
pub const DEFAULT_HARD_CAP: u32 = 20_000;

/// Extra digits computed and stored beyond the requested count.
const EXTRA_DIGITS: u32 = 10;

const KNOWN_PREFIX: &str = "0.9159655941";

pub struct CatalanEngine {
    cache_dir: Option<PathBuf>,
    hard_cap: u32,
    memo: Mutex<HashMap<u32, HPReal>>,
    compute: Mutex<()>,
}

impl CatalanEngine {
    pub fn new(cache_dir: Option<PathBuf>, hard_cap: u32) -> Self {
        CatalanEngine {
            cache_dir,
            hard_cap,
            memo: Mutex::new(HashMap::new()),
            compute: Mutex::new(()),
        }
    }

    /// Engine configured from [`CACHE_ENV`], without a cache if unset.
    pub fn from_env() -> Self {
        let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
        Self::new(dir, DEFAULT_HARD_CAP)
    }

    pub fn cache_dir(&self) -> Option<&Path> {
        self.cache_dir.as_deref()
    }

    pub fn cache_path(&self, digits: u32) -> Option<PathBuf> {
        self.cache_dir
            .as_ref()
            .map(|d| d.join(format!("catalan_{digits}.txt")))
    }

    /// `G` correct to at least `digits` decimal digits.
    pub fn catalan(&self, digits: u32) -> Result<HPReal> {
        if digits > self.hard_cap {
            return Err(Error::PrecisionCap {
                requested: digits,
                cap: self.hard_cap,
            });
        }
        let digits = digits.max(MIN_PRECISION);
        if let Some(g) = self.memo.lock().unwrap().get(&digits) {
            return Ok(g.clone());
        }
        // one thread computes and writes the cache while the others wait
        let _guard = self.compute.lock().unwrap();
        if let Some(g) = self.memo.lock().unwrap().get(&digits) {
            return Ok(g.clone());
        }
        let g = match self.read_cache(digits) {
            Some(g) => g,
            None => {
                let g = compute_checked(digits)?;
                self.write_cache(digits, &g)?;
                g
            }
        };
        self.memo.lock().unwrap().insert(digits, g.clone());
        Ok(g)
    }

    fn read_cache(&self, digits: u32) -> Option<HPReal> {
        let path = self.cache_path(digits)?;
        let text = fs::read_to_string(path).ok()?;
        let mut lines = text.lines();
        let header: u32 = lines.next()?.trim().parse().ok()?;
        let body = lines.next()?.trim();
        let expected_len = 2 + (digits + EXTRA_DIGITS) as usize;
        let valid = header == digits
            && body.len() == expected_len
            && body.starts_with(KNOWN_PREFIX)
            && body[2..].bytes().all(|b| b.is_ascii_digit())
            && lines.next().is_none();
        if !valid {
            return None;
        }
        HPReal::parse_decimal(body, digits).ok()
    }

    fn write_cache(&self, digits: u32, g: &HPReal) -> Result<()> {
        let Some(path) = self.cache_path(digits) else {
            return Ok(());
        };
        let dir = path.parent().expect("cache file has a parent");
        fs::create_dir_all(dir)?;
        let tmp = dir.join(format!(
            ".catalan_{digits}.txt.{}.tmp",
            std::process::id()
        ));
        {
            let mut f = fs::File::create(&tmp)?;
            writeln!(f, "{digits}")?;
            writeln!(f, "{}", g.to_fixed_string(digits + EXTRA_DIGITS))?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(())
    }
}

/// `G` from the process-wide engine configured by [`CatalanEngine::from_env`].
pub fn catalan(digits: u32) -> Result<HPReal> {
    static ENGINE: OnceLock<CatalanEngine> = OnceLock::new();
    ENGINE.get_or_init(CatalanEngine::from_env).catalan(digits)
}

fn compute_checked(digits: u32) -> Result<HPReal> {
    let bits = working_bits(digits + EXTRA_DIGITS + 10);
    let a = HPReal::from_parts(catalan_ramanujan(bits), -(bits as i64), digits + EXTRA_DIGITS);
    let b = HPReal::from_parts(catalan_harmonic(bits), -(bits as i64), digits + EXTRA_DIGITS);
    let agreed = digits_agree(&a, &b);
    if agreed < digits {
        return Err(Error::SelfCheck {
            agreed,
            wanted: digits,
        });
    }
    Ok(a.with_precision(digits))
}

/// `atan(1/n)` scaled by `2^bits`.
fn atan_inv(n: u64, bits: u64) -> BigInt {
    let one = BigInt::one() << bits as usize;
    let n2 = BigInt::from(n * n);
    let mut power = &one / BigInt::from(n);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

fn pi_fixed(bits: u64) -> BigInt {
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    atan_inv(5, bits) * 16 - atan_inv(239, bits) * 4
}

/// `ln(2 + sqrt 3) = (2/sqrt 3) sum_k 3^-k/(2k+1)`, scaled by `2^bits`.
fn ln_2_plus_sqrt3(bits: u64) -> BigInt {
    let one = BigInt::one() << bits as usize;
    let mut power = one.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power /= 3;
        k += 1;
    }
    let three = BigUint::from(3u32) << (2 * bits) as usize;
    let sqrt3 = BigInt::from(three.sqrt());
    (sum << (bits as usize + 1)) / sqrt3
}

fn catalan_ramanujan(bits: u64) -> BigInt {
    let g = bits + 32;
    let one = BigInt::one() << g as usize;
    let mut central = BigInt::one(); // binom(2n, n)
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    loop {
        let odd = BigInt::from(2 * n + 1);
        let term = &one / (&odd * &odd * &central);
        if term.is_zero() {
            break;
        }
        sum += term;
        n += 1;
        central = central * BigInt::from(2 * n) * BigInt::from(2 * n - 1)
            / BigInt::from(n * n);
    }
    let pl = (pi_fixed(g) * ln_2_plus_sqrt3(g)) >> g as usize;
    ((pl + sum * 3) >> 3) >> 32
}

fn catalan_harmonic(bits: u64) -> BigInt {
    let g = bits + 32;
    let one = BigInt::one() << g as usize;
    let mut ratio = one.clone(); // 2^n n!^2 / (2n+1)!
    let mut harmonic = one.clone(); // 1 + 1/3 + ... + 1/(2n+1)
    let mut sum = BigInt::zero();
    let mut n: u64 = 0;
    while !ratio.is_zero() {
        sum += (&ratio * &harmonic) >> g as usize;
        n += 1;
        ratio = ratio * BigInt::from(n) / BigInt::from(2 * n + 1);
        harmonic += &one / BigInt::from(2 * n + 1);
    }
    (sum >> 1) >> 32
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_digits() {
        let engine = CatalanEngine::new(None, DEFAULT_HARD_CAP);
        let g = engine.catalan(8).unwrap();
        assert_eq!(g.to_fixed_string(8), "0.91596559");
        assert_eq!(
            engine.catalan(50).unwrap().to_fixed_string(50),
            "0.91596559417721901505460351493238411077414937428167"
        );
    }

    #[test]
    fn both_series_agree() {
        let bits = working_bits(300);
        let a = catalan_ramanujan(bits);
        let b = catalan_harmonic(bits);
        assert!((a - b).bits() < 40);
    }

    #[test]
    fn cap_is_enforced() {
        let engine = CatalanEngine::new(None, 100);
        assert!(matches!(
            engine.catalan(101),
            Err(Error::PrecisionCap { requested: 101, cap: 100 })
        ));
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let engine = CatalanEngine::new(Some(dir.path().to_path_buf()), 1000);
        let g = engine.catalan(60).unwrap();
        let path = engine.cache_path(60).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("60\n0.91596559417721901505"));

        // a fresh engine reads the file back
        let again = CatalanEngine::new(Some(dir.path().to_path_buf()), 1000)
            .catalan(60)
            .unwrap();
        assert!(digits_agree(&g, &again) >= 60);

        // corrupted file is recomputed and overwritten
        fs::write(&path, "60\n0.123\n").unwrap();
        let fixed = CatalanEngine::new(Some(dir.path().to_path_buf()), 1000)
            .catalan(60)
            .unwrap();
        assert!(digits_agree(&g, &fixed) >= 60);
        assert_eq!(fs::read_to_string(&path).unwrap(), text);
    }

    #[test]
    fn concurrent_first_use() {
        let dir = tempfile::tempdir().unwrap();
        let engine = CatalanEngine::new(Some(dir.path().to_path_buf()), 1000);
        let values: Vec<HPReal> = std::thread::scope(|s| {
            let handles: Vec<_> = (0..8).map(|_| s.spawn(|| engine.catalan(80).unwrap())).collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(values.iter().all(|v| digits_agree(v, &values[0]) >= 80));
        assert!(engine.cache_path(80).unwrap().exists());
    }
}
