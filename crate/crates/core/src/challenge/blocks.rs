use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::FactoredInt;
use crate::error::{Error, Result};
use crate::kappa_forms::{binomial, catalan_number, factorial, semifactorial};
use crate::numerics::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Factorial,
    Semifactorial,
    Power2,
    CatalanNumber,
    CentralBinomial,
}

impl BlockKind {
    pub const ALL: [BlockKind; 5] = [
        BlockKind::Factorial,
        BlockKind::Semifactorial,
        BlockKind::Power2,
        BlockKind::CatalanNumber,
        BlockKind::CentralBinomial,
    ];
}

/// `kind(a c + b)^exponent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockTemplate {
    pub kind: BlockKind,
    pub a: i64,
    pub b: i64,
    pub exponent: i64,
}

impl BlockTemplate {
    pub fn new(kind: BlockKind, a: i64, b: i64, exponent: i64) -> Self {
        BlockTemplate { kind, a, b, exponent }
    }

    pub fn argument(&self, c: i64) -> i64 {
        self.a * c + self.b
    }

    pub fn in_domain(&self, c: i64) -> bool {
        let x = self.argument(c);
        match self.kind {
            BlockKind::Factorial | BlockKind::CatalanNumber | BlockKind::CentralBinomial => x >= 0,
            BlockKind::Semifactorial => x >= -1 && x.is_odd(),
            BlockKind::Power2 => true,
        }
    }

    fn check_domain(&self, c: i64) -> Result<i64> {
        if self.in_domain(c) {
            Ok(self.argument(c))
        } else {
            Err(Error::invalid(format!("{} outside its domain at c = {c}", self.base())))
        }
    }

    /// The base value at `c`, before the exponent.
    pub fn base_value(&self, c: i64) -> Result<Rational> {
        let x = self.check_domain(c)?;
        let v = match self.kind {
            BlockKind::Factorial => factorial(x)?,
            BlockKind::Semifactorial => semifactorial(x)?,
            BlockKind::Power2 => {
                let p = BigInt::one() << x.unsigned_abs() as usize;
                return Ok(if x < 0 {
                    Rational::new(BigInt::one(), p)
                } else {
                    Rational::from_integer(p)
                });
            }
            BlockKind::CatalanNumber => catalan_number(x)?,
            BlockKind::CentralBinomial => binomial(2 * x, x),
        };
        Ok(Rational::from_integer(v))
    }

    pub fn value(&self, c: i64) -> Result<Rational> {
        let b = self.base_value(c)?;
        let e = self.exponent.unsigned_abs() as i32;
        Ok(if self.exponent < 0 { b.recip().pow(e) } else { b.pow(e) })
    }

    /// Exact `p`-adic valuation at `c`, exponent included.
    pub fn valuation(&self, p: u64, c: i64) -> Result<i64> {
        let x = self.check_domain(c)?;
        let v = match self.kind {
            BlockKind::Factorial => legendre(x as u64, p),
            BlockKind::Semifactorial => semifactorial_valuation(x, p),
            BlockKind::Power2 => {
                if p == 2 {
                    x
                } else {
                    0
                }
            }
            BlockKind::CatalanNumber => {
                central_binomial_valuation(x as u64, p) - valuation_of(x as u64 + 1, p)
            }
            BlockKind::CentralBinomial => central_binomial_valuation(x as u64, p),
        };
        Ok(v * self.exponent)
    }

    fn base(&self) -> String {
        let arg = render_linear(self.a, self.b);
        let simple = self.b == 0 && self.a == 1;
        match self.kind {
            BlockKind::Factorial if simple => "c!".into(),
            BlockKind::Factorial => format!("({arg})!"),
            BlockKind::Semifactorial => format!("({arg})!!"),
            BlockKind::Power2 if simple => "2^c".into(),
            BlockKind::Power2 => format!("2^({arg})"),
            BlockKind::CatalanNumber => format!("C({arg})"),
            BlockKind::CentralBinomial => format!("binom(2({arg}),{arg})"),
        }
    }
}

impl fmt::Display for BlockTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exponent {
            1 => f.write_str(&self.base()),
            e => write!(f, "({})^{e}", self.base()),
        }
    }
}

fn render_linear(a: i64, b: i64) -> String {
    let head = match a {
        0 => String::new(),
        1 => "c".to_string(),
        -1 => "-c".to_string(),
        a => format!("{a}c"),
    };
    match (head.is_empty(), b.signum()) {
        (true, _) => b.to_string(),
        (false, 0) => head,
        (false, 1) => format!("{head}+{b}"),
        (false, _) => format!("{head}{b}"),
    }
}

/// `v_p(n!)` by Legendre's formula.
pub fn legendre(n: u64, p: u64) -> i64 {
    let mut v = 0;
    let mut q = n / p;
    while q > 0 {
        v += q as i64;
        q /= p;
    }
    v
}

pub fn valuation_of(mut n: u64, p: u64) -> i64 {
    if n == 0 {
        return 0;
    }
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// `(2m+1)!! = (2m+1)! / (2^m m!)`.
fn semifactorial_valuation(x: i64, p: u64) -> i64 {
    if x < 1 {
        return 0;
    }
    let m = ((x - 1) / 2) as u64;
    let two = if p == 2 { m as i64 } else { 0 };
    legendre(x as u64, p) - two - legendre(m, p)
}

fn central_binomial_valuation(x: u64, p: u64) -> i64 {
    legendre(2 * x, p) - 2 * legendre(x, p)
}

/// Bounds of the template search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchSpace {
    pub max_abs_a: i64,
    pub max_abs_b: i64,
    pub max_abs_exponent: i64,
    pub kinds: Vec<BlockKind>,
}

impl SearchSpace {
    /// `|a| <= 2`, `|b| <= 2 kappa + 4`, `|e| <= 2`.
    pub fn for_kappa(kappa: u32) -> Self {
        SearchSpace {
            max_abs_a: 2,
            max_abs_b: 2 * kappa as i64 + 4,
            max_abs_exponent: 2,
            kinds: BlockKind::ALL.to_vec(),
        }
    }

    /// Base templates (exponent 1) valid at every `c` in `cs`, with those
    /// differing only by a constant factor removed.
    pub fn bases(&self, cs: &[i64]) -> Vec<BlockTemplate> {
        let mut out = Vec::new();
        for &kind in &self.kinds {
            for a in -self.max_abs_a..=self.max_abs_a {
                if a == 0 {
                    continue;
                }
                for b in -self.max_abs_b..=self.max_abs_b {
                    // 2^(ac+b) = 2^b 2^(ac)
                    if kind == BlockKind::Power2 && b != 0 {
                        continue;
                    }
                    let t = BlockTemplate::new(kind, a, b, 1);
                    if cs.iter().all(|&c| t.in_domain(c)) {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

/// `constant * prod terms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub constant: Rational,
    pub terms: Vec<BlockTemplate>,
}

impl Candidate {
    pub fn value(&self, c: i64) -> Result<Rational> {
        self.terms
            .iter()
            .try_fold(self.constant.clone(), |acc, t| Ok(acc * t.value(c)?))
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.constant.is_one() || self.terms.is_empty() {
            parts.push(crate::numerics::format_rational(&self.constant));
        }
        parts.extend(self.terms.iter().map(|t| t.to_string()));
        f.write_str(&parts.join("*"))
    }
}

type Q = Ratio<i128>;

/// Solves `cols * e = y` exactly; `None` if inconsistent or underdetermined.
fn solve_exact(cols: &[&Vec<i64>], y: &[i64]) -> Option<Vec<Q>> {
    let k = cols.len();
    let rows = y.len();
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Q> = cols.iter().map(|c| Q::from_integer(c[r] as i128)).collect();
            row.push(Q::from_integer(y[r] as i128));
            row
        })
        .collect();
    let mut pivot_row = 0;
    for col in 0..k {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][col].recip();
        for x in m[pivot_row].iter_mut() {
            *x *= inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col];
                for cc in col..=k {
                    let delta = f * m[pivot_row][cc];
                    m[r][cc] -= delta;
                }
            }
        }
        pivot_row += 1;
    }
    if (k..rows).any(|r| !m[r][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|r| m[r][k]).collect())
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        visit(&idx);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Products of at most `max_terms` templates times a rational constant that
/// reproduce every data point; only the smallest term count found is kept.
pub fn fit_building_blocks(
    series: &[(i64, FactoredInt)],
    space: &SearchSpace,
    max_terms: usize,
) -> Result<Vec<Candidate>> {
    if series.len() < 5 {
        return Err(Error::InsufficientData {
            needed: 5,
            got: series.len(),
        });
    }
    if let Some((c, _)) = series.iter().find(|(_, f)| !f.is_complete()) {
        return Err(Error::invalid(format!("data point at c = {c} is not fully factored")));
    }
    let cs: Vec<i64> = series.iter().map(|(c, _)| *c).collect();
    let targets: Vec<BigInt> = series.iter().map(|(_, f)| f.reconstruct()).collect();
    let bases = space.bases(&cs);

    // primes that can occur in any template value or in the data
    let max_arg = bases
        .iter()
        .flat_map(|t| cs.iter().map(move |&c| 2 * t.argument(c).abs() + 2))
        .max()
        .unwrap_or(2);
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    for p in 2..=max_arg as u64 {
        if (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            primes.insert(p);
        }
    }
    for (_, f) in series {
        for p in f.factors().keys() {
            if let Some(p) = p.to_u64() {
                primes.insert(p);
            }
        }
    }
    let big_primes: Vec<&BigUint> = series
        .iter()
        .flat_map(|(_, f)| f.factors().keys())
        .filter(|p| p.to_u64().is_none())
        .collect();
    if !big_primes.is_empty() {
        return Ok(Vec::new());
    }

    // rows are (p, c_i) with valuations taken relative to c_0
    let target_vec: Vec<i64> = primes
        .iter()
        .flat_map(|&p| {
            let base = series[0].1.exponent(&BigUint::from(p)) as i64;
            series[1..]
                .iter()
                .map(move |(_, f)| f.exponent(&BigUint::from(p)) as i64 - base)
        })
        .collect();
    let mut vecs: Vec<Vec<i64>> = Vec::with_capacity(bases.len());
    for t in &bases {
        let mut v = Vec::with_capacity(target_vec.len());
        for &p in &primes {
            let base = t.valuation(p, cs[0])?;
            for &c in &cs[1..] {
                v.push(t.valuation(p, c)? - base);
            }
        }
        vecs.push(v);
    }

    for k in 0..=max_terms {
        let mut found: Vec<Candidate> = Vec::new();
        let mut seen: HashSet<Vec<String>> = HashSet::new();
        let mut failure: Option<Error> = None;
        combinations(bases.len(), k, |idx| {
            if failure.is_some() {
                return;
            }
            let cols: Vec<&Vec<i64>> = idx.iter().map(|&i| &vecs[i]).collect();
            let Some(sol) = solve_exact(&cols, &target_vec) else {
                return;
            };
            let mut terms = Vec::with_capacity(k);
            for (&i, e) in idx.iter().zip(&sol) {
                if !e.is_integer() || e.is_zero() || e.abs() > Q::from_integer(space.max_abs_exponent as i128) {
                    return;
                }
                let mut t = bases[i];
                t.exponent = e.to_integer() as i64;
                terms.push(t);
            }
            match verify_candidate(&terms, &cs, &targets) {
                Ok(Some(cand)) => {
                    let key: Vec<String> = cs
                        .iter()
                        .map(|&c| cand.value(c).map(|v| v.to_string()).unwrap_or_default())
                        .chain(std::iter::once(cand.to_string()))
                        .collect();
                    if seen.insert(key) {
                        found.push(cand);
                    }
                }
                Ok(None) => {}
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        if !found.is_empty() {
            found.sort_by_key(|c| c.to_string());
            return Ok(found);
        }
    }
    Ok(Vec::new())
}

/// Fixes the constant from the first point and checks every point exactly.
fn verify_candidate(
    terms: &[BlockTemplate],
    cs: &[i64],
    targets: &[BigInt],
) -> Result<Option<Candidate>> {
    let mut cand = Candidate {
        constant: Rational::one(),
        terms: terms.to_vec(),
    };
    let first = cand.value(cs[0])?;
    cand.constant = Rational::from_integer(targets[0].clone()) / first;
    for (&c, t) in cs.iter().zip(targets) {
        if cand.value(c)? != Rational::from_integer(t.clone()) {
            return Ok(None);
        }
    }
    Ok(Some(cand))
}
