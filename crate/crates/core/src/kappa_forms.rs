//! Closed forms for the kappa family
//! `Q_{c,k} = s_num (2c)! / (s_den ((2c-1)!!)^2 G + (2c-1)(2c-3)...(2c-2k+1) D_{c-1,k})`.
//!
//! `D_{c,k}` is linear in `c` on the seed range and follows a second-order
//! recursion with polynomial coefficients beyond it. kappa = 0 is exceptional:
//! its `beta` carries a minus sign and its sigma ratio is 1/2.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cf_engine::PolyInt;
use crate::error::{Error, Result};
use crate::lattice::{normalize, GLimit};
use crate::numerics::{format_rational, parse_rational, rational_reconstruct, HPReal, Rational};

/// Memo tables never grow beyond this `c` unless configured otherwise.
pub const DEFAULT_C_MAX: i64 = 200;

/// `n!! = n (n-2) ... 3 1` for odd `n >= -1`; `(-1)!! = 1`.
pub fn semifactorial(n: i64) -> Result<BigInt> {
    if n < -1 || n.is_even() {
        return Err(Error::invalid(format!("semifactorial needs odd n >= -1, got {n}")));
    }
    Ok((1..=n).step_by(2).map(BigInt::from).product())
}

pub fn factorial(n: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::invalid(format!("factorial of negative {n}")));
    }
    Ok((1..=n).map(BigInt::from).product())
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C_n = binom(2n, n)/(n+1)`.
pub fn catalan_number(n: i64) -> Result<BigInt> {
    if n < 0 {
        return Err(Error::invalid(format!("Catalan number of negative {n}")));
    }
    Ok(binomial(2 * n, n) / BigInt::from(n + 1))
}

/// Conjectured `s_num/s_den = 4^(k-1) / ((2k-1) C_{k-1})` for `k >= 1`.
pub fn rho(kappa: u32) -> Result<Rational> {
    if kappa == 0 {
        return Err(Error::invalid("kappa = 0 is an exception not covered by the ratio rule"));
    }
    let k = kappa as i64;
    let num = BigInt::from(4).pow(kappa - 1);
    let den = BigInt::from(2 * k - 1) * catalan_number(k - 1)?;
    Ok(Rational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamSource {
    Published,
    Bootstrapped { digits: u32, depth: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaParams {
    pub kappa: u32,
    pub sigma_num: BigInt,
    pub sigma_den: BigInt,
    /// `D_{c,k} = seed_a * c + seed_b` for `c < seed_limit`.
    pub seed_a: Rational,
    pub seed_b: Rational,
    pub seed_limit: i64,
    pub source: ParamSource,
}

impl KappaParams {
    pub fn sigma_ratio(&self) -> Rational {
        Rational::new(self.sigma_num.clone(), self.sigma_den.clone())
    }

    /// Writes `key=value` lines; rationals as `p/q`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("kappa={}\n", self.kappa));
        s.push_str(&format!("sigma_num={}\n", self.sigma_num));
        s.push_str(&format!("sigma_den={}\n", self.sigma_den));
        s.push_str(&format!("seed_a={}\n", format_rational(&self.seed_a)));
        s.push_str(&format!("seed_b={}\n", format_rational(&self.seed_b)));
        s.push_str(&format!("seed_limit={}\n", self.seed_limit));
        match &self.source {
            ParamSource::Published => s.push_str("source=published\n"),
            ParamSource::Bootstrapped { digits, depth } => {
                s.push_str(&format!("source=bootstrap digits={digits} depth={depth}\n"))
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("bad params line {line:?}")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        let get = |k: &str| {
            map.get(k)
                .cloned()
                .ok_or_else(|| Error::invalid(format!("missing key {k}")))
        };
        let int = |k: &str| -> Result<BigInt> {
            get(k)?.parse().map_err(|_| Error::invalid(format!("bad integer for {k}")))
        };
        let source_text = get("source")?;
        let source = if source_text == "published" {
            ParamSource::Published
        } else {
            let mut digits = 0;
            let mut depth = 0;
            for part in source_text.split_whitespace().skip(1) {
                match part.split_once('=') {
                    Some(("digits", v)) => digits = v.parse().unwrap_or(0),
                    Some(("depth", v)) => depth = v.parse().unwrap_or(0),
                    _ => {}
                }
            }
            ParamSource::Bootstrapped { digits, depth }
        };
        Ok(KappaParams {
            kappa: get("kappa")?
                .parse()
                .map_err(|_| Error::invalid("bad kappa"))?,
            sigma_num: int("sigma_num")?,
            sigma_den: int("sigma_den")?,
            seed_a: parse_rational(&get("seed_a")?)?,
            seed_b: parse_rational(&get("seed_b")?)?,
            seed_limit: get("seed_limit")?
                .parse()
                .map_err(|_| Error::invalid("bad seed_limit"))?,
            source,
        })
    }

    pub fn file_name(kappa: u32) -> String {
        format!("kappa_{kappa}.params")
    }

    /// Atomically writes the parameters under `dir`.
    pub fn save(&self, dir: &Path) -> Result<PathBuf> {
        fs::create_dir_all(dir)?;
        let path = dir.join(Self::file_name(self.kappa));
        let tmp = dir.join(format!(".{}.{}.tmp", Self::file_name(self.kappa), std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(self.to_text().as_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn load(dir: &Path, kappa: u32) -> Result<Self> {
        let text = fs::read_to_string(dir.join(Self::file_name(kappa)))?;
        Self::from_text(&text)
    }
}

impl fmt::Display for KappaParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kappa={} sigma=({}, {}) seed=({})c + ({})",
            self.kappa,
            self.sigma_num,
            self.sigma_den,
            format_rational(&self.seed_a),
            format_rational(&self.seed_b)
        )
    }
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Published parameters for `0 <= kappa <= 7`.
pub fn kappa_params(kappa: u32) -> Result<KappaParams> {
    let f = |n| factorial(n).expect("small factorial");
    let sf = |n| semifactorial(n).expect("small semifactorial");
    let (sigma_num, sigma_den, seed_a, seed_b) = match kappa {
        0 => (BigInt::from(1), BigInt::from(2), int(10), int(1)),
        1 => (2.into(), 2.into(), int(-2), int(1)),
        2 => (8.into(), 6.into(), int(12), int(1)),
        // 3^3 + 4^3 + 5^3 + 6^3 = 432
        3 => (432.into(), 270.into(), int(22), int(-31)),
        // printed as 1327 - 10448c; the limits at c = 1, 2 require 1373
        4 => (f(5) * f(6), BigInt::from(14) * BigInt::from(15).pow(3), int(-10448), int(1373)),
        5 => (
            BigInt::from(2 * 140 * 140) * f(5),
            BigInt::from(2) * BigInt::from(105).pow(3),
            int(150002),
            int(-10891),
        ),
        6 => (
            BigInt::from(12) * sf(7) * f(10),
            BigInt::from(2) * sf(7) * sf(9) * sf(11),
            int(-23021852),
            int(1167809),
        ),
        7 => {
            let s11 = sf(11);
            let sq = &s11 * &s11;
            (
                1024.into(),
                429.into(),
                Rational::new(2258335679i64.into(), BigInt::from(35) * &sq),
                Rational::new((-176673487i64).into(), BigInt::from(70) * &sq),
            )
        }
        k => return Err(Error::MissingParams(k)),
    };
    Ok(KappaParams {
        kappa,
        sigma_num,
        sigma_den,
        seed_a,
        seed_b,
        seed_limit: 2,
        source: ParamSource::Published,
    })
}

/// Coefficient pair `(p1, p2)` of `D_c = p1(c) D_{c-1} + p2(c) D_{c-2}`:
/// `8c^2 + (2-8k)c - 2k + 1` and `-2c(2c-1)(2(c-k)-1)^2`.
pub fn generic_recursion(kappa: u32) -> (PolyInt, PolyInt) {
    let k = kappa as i64;
    let p1 = PolyInt::from_i64(&[1 - 2 * k, 2 - 8 * k, 8]);
    let p2 = PolyInt::product(&[
        PolyInt::linear(-2, 0),
        PolyInt::linear(2, -1),
        PolyInt::linear(2, -2 * k - 1).pow(2),
    ]);
    (p1, p2)
}

/// The per-kappa recursion coefficients exactly as listed with each closed
/// form (factor by factor), for `0 <= kappa <= 6`.
pub fn published_recursion(kappa: u32) -> Option<(PolyInt, PolyInt)> {
    let c = |s: i64, o: i64| PolyInt::linear(s, o);
    let m2c = PolyInt::linear(-2, 0);
    let (p1, p2_factors) = match kappa {
        0 => (PolyInt::from_i64(&[1, 2, 8]), vec![m2c, c(2, -1).pow(3)]),
        1 => (PolyInt::from_i64(&[-1, -6, 8]), vec![m2c, c(2, -1), c(2, -3).pow(2)]),
        2 => (PolyInt::from_i64(&[-3, -14, 8]), vec![m2c, c(2, -5).pow(2), c(2, -1)]),
        3 => (PolyInt::from_i64(&[-5, -22, 8]), vec![m2c, c(2, -1), c(2, -7).pow(2)]),
        4 => (PolyInt::from_i64(&[-7, -30, 8]), vec![m2c, c(2, -1), c(2, -9).pow(2)]),
        5 => (PolyInt::from_i64(&[-9, -38, 8]), vec![m2c, c(2, -1), c(2, -11).pow(2)]),
        6 => (PolyInt::from_i64(&[-11, -46, 8]), vec![m2c, c(2, -1), c(2, -13).pow(2)]),
        _ => return None,
    };
    Some((p1, PolyInt::product(&p2_factors)))
}

/// Memoized `D_{c,k}` for one parameter set.
#[derive(Clone, Debug)]
pub struct DeltaSeq {
    params: KappaParams,
    p1: PolyInt,
    p2: PolyInt,
    values: Vec<Rational>,
    c_max: i64,
}

impl DeltaSeq {
    pub fn new(params: KappaParams) -> Self {
        Self::with_c_max(params, DEFAULT_C_MAX)
    }

    pub fn with_c_max(params: KappaParams, c_max: i64) -> Self {
        let (p1, p2) = generic_recursion(params.kappa);
        DeltaSeq {
            params,
            p1,
            p2,
            values: Vec::new(),
            c_max,
        }
    }

    pub fn params(&self) -> &KappaParams {
        &self.params
    }

    pub fn get(&mut self, c: i64) -> Result<Rational> {
        if c < 0 {
            return Err(Error::invalid("delta index must be >= 0"));
        }
        if c > self.c_max {
            return Err(Error::invalid(format!("c = {c} beyond c_max = {}", self.c_max)));
        }
        while self.values.len() as i64 <= c {
            let n = self.values.len() as i64;
            let v = if n < self.params.seed_limit || n < 2 {
                &self.params.seed_a * int(n) + &self.params.seed_b
            } else {
                let cn = BigInt::from(n);
                let a = Rational::from_integer(self.p1.eval(&cn));
                let b = Rational::from_integer(self.p2.eval(&cn));
                a * &self.values[n as usize - 1] + b * &self.values[n as usize - 2]
            };
            self.values.push(v);
        }
        Ok(self.values[c as usize].clone())
    }
}

/// Published and bootstrapped parameters with per-kappa memo tables.
pub struct KappaRegistry {
    entries: RwLock<BTreeMap<u32, Arc<Mutex<DeltaSeq>>>>,
    c_max: i64,
}

impl Default for KappaRegistry {
    fn default() -> Self {
        Self::new(DEFAULT_C_MAX)
    }
}

impl KappaRegistry {
    pub fn new(c_max: i64) -> Self {
        KappaRegistry {
            entries: RwLock::new(BTreeMap::new()),
            c_max,
        }
    }

    /// Registers (or replaces) parameters for their kappa.
    pub fn insert(&self, params: KappaParams) {
        let seq = DeltaSeq::with_c_max(params.clone(), self.c_max);
        self.entries
            .write()
            .unwrap()
            .insert(params.kappa, Arc::new(Mutex::new(seq)));
    }

    /// Loads every `kappa_*.params` file in `dir`.
    pub fn load_dir(&self, dir: &Path) -> Result<usize> {
        let mut count = 0;
        let Ok(entries) = fs::read_dir(dir) else {
            return Ok(0);
        };
        for entry in entries {
            let path = entry?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("kappa_") && name.ends_with(".params") {
                self.insert(KappaParams::from_text(&fs::read_to_string(&path)?)?);
                count += 1;
            }
        }
        Ok(count)
    }

    fn seq(&self, kappa: u32) -> Result<Arc<Mutex<DeltaSeq>>> {
        if let Some(s) = self.entries.read().unwrap().get(&kappa) {
            return Ok(s.clone());
        }
        let params = kappa_params(kappa)?;
        let mut w = self.entries.write().unwrap();
        Ok(w
            .entry(kappa)
            .or_insert_with(|| Arc::new(Mutex::new(DeltaSeq::with_c_max(params, self.c_max))))
            .clone())
    }

    pub fn params(&self, kappa: u32) -> Result<KappaParams> {
        Ok(self.seq(kappa)?.lock().unwrap().params().clone())
    }

    pub fn delta(&self, kappa: u32, c: i64) -> Result<Rational> {
        self.seq(kappa)?.lock().unwrap().get(c)
    }

    pub fn q_closed(&self, kappa: u32, c: i64) -> Result<ClosedForm> {
        let seq = self.seq(kappa)?;
        let mut seq = seq.lock().unwrap();
        q_closed_with(&mut seq, c)
    }
}

/// `D_{c,k}` from the published parameters.
pub fn delta(kappa: u32, c: i64) -> Result<Rational> {
    DeltaSeq::new(kappa_params(kappa)?).get(c)
}

/// `D_{c,0}` via `D_c = (2c)! + (2c+1)^2 D_{c-1}`, `D_0 = 1`.
pub fn delta0_compact(c: i64) -> Result<BigInt> {
    if c < 0 {
        return Err(Error::invalid("c must be >= 0"));
    }
    let mut d = BigInt::one();
    let mut fact = BigInt::one(); // (2n)!
    for n in 1..=c {
        fact *= BigInt::from(2 * n - 1) * BigInt::from(2 * n);
        d = &fact + BigInt::from((2 * n + 1) * (2 * n + 1)) * d;
    }
    Ok(d)
}

/// Closed-form triple before and after normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    pub raw: [BigInt; 3],
    pub limit: GLimit,
}

/// `(2c-1)(2c-3)...(2c-2k+1)`.
pub fn odd_descending_product(kappa: u32, c: i64) -> BigInt {
    (1..=kappa as i64).map(|t| BigInt::from(2 * c - (2 * t - 1))).product()
}

/// The closed form of `Q_{c,k}` with rational `D` cleared to integers.
pub fn q_closed(kappa: u32, c: i64) -> Result<ClosedForm> {
    q_closed_with(&mut DeltaSeq::new(kappa_params(kappa)?), c)
}

pub fn q_closed_with(seq: &mut DeltaSeq, c: i64) -> Result<ClosedForm> {
    if c < 1 {
        return Err(Error::invalid("q_closed needs c >= 1"));
    }
    let kappa = seq.params().kappa;
    let d = seq.get(c - 1)?;
    let p = seq.params();
    let dfac = semifactorial(2 * c - 1)?;
    let alpha = &p.sigma_num * factorial(2 * c)?;
    let gamma = &p.sigma_den * &dfac * &dfac;
    let beta = if kappa == 0 {
        -d
    } else {
        d * Rational::from_integer(odd_descending_product(kappa, c))
    };
    let scale = beta.denom().clone();
    let raw = [alpha * &scale, beta.numer().clone(), gamma * &scale];
    let limit = normalize(&raw)?;
    Ok(ClosedForm { raw, limit })
}

/// Recovers `(s_num, s_den, A, B)` from numeric `Q_{1,k}`, `Q_{2,k}`.
///
/// With `s_num = 1` and `s_den = 1/rho(k)`, the two closed-form equations are
/// linear in `B = D_0` and `A + B = D_1`; the solutions are rationalized and
/// the whole tuple is scaled to the smallest integers.
pub fn bootstrap(kappa: u32, q1: &HPReal, q2: &HPReal, g: &HPReal) -> Result<KappaParams> {
    let precision = q1.precision().min(q2.precision()).min(g.precision());
    if precision < 150 {
        return Err(Error::invalid("bootstrap needs limits at >= 150 digits"));
    }
    let sd = rho(kappa)?.recip();
    let sd_real = HPReal::from_rational(&sd, precision);
    let solve = |c: i64, q: &HPReal| -> Result<HPReal> {
        let dfac = semifactorial(2 * c - 1)?;
        let lhs = HPReal::from_int(factorial(2 * c)?, precision).div(q)?;
        let g_term = g.mul(&sd_real).mul_int(&(&dfac * &dfac));
        lhs.sub(&g_term)
            .div(&HPReal::from_int(odd_descending_product(kappa, c), precision))
    };
    let d0 = solve(1, q1)?;
    let d1 = solve(2, q2)?;
    let bound = crate::numerics::pow10(precision / 3);
    let b = rational_reconstruct(&d0, &bound).map_err(|_| Error::NoRelation { precision })?;
    let ab = rational_reconstruct(&d1, &bound).map_err(|_| Error::NoRelation { precision })?;
    let a = ab - &b;

    let tuple = [Rational::one(), sd, a, b];
    let lcm = tuple.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let mut ints: Vec<BigInt> = tuple
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    for x in ints.iter_mut() {
        *x /= &g;
    }
    if ints[0].is_negative() {
        ints.iter_mut().for_each(|x| *x = -&*x);
    }
    Ok(KappaParams {
        kappa,
        sigma_num: ints[0].clone(),
        sigma_den: ints[1].clone(),
        seed_a: Rational::from_integer(ints[2].clone()),
        seed_b: Rational::from_integer(ints[3].clone()),
        seed_limit: 2,
        source: ParamSource::Bootstrapped { digits: precision, depth: 0 },
    })
}

/// True when two parameter sets describe the same closed forms, i.e. the
/// tuples `(s_num, s_den, A, B)` are proportional.
pub fn params_equivalent(a: &KappaParams, b: &KappaParams) -> bool {
    if a.kappa != b.kappa || a.sigma_num.is_zero() || b.sigma_num.is_zero() {
        return false;
    }
    let r = Rational::new(b.sigma_num.clone(), a.sigma_num.clone());
    Rational::from_integer(a.sigma_den.clone()) * &r == Rational::from_integer(b.sigma_den.clone())
        && &a.seed_a * &r == b.seed_a
        && &a.seed_b * &r == b.seed_b
}

/// Number of decimal digits of `|n|`, used for lattice coefficient bounds.
pub fn decimal_len(n: &BigInt) -> u32 {
    let s = n.abs().to_string();
    s.len() as u32
}
