//! Lattice reduction and recovery of limits `Q = alpha / (beta + gamma*G)`.
//!
//! Reduction is the integral LLL variant (all Gram-Schmidt data kept as
//! integers `d_i` and `lambda_ij`), so no rounding ever enters the basis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{digits_agree, pow10, HPReal, Rational};

/// Canonical triple `(alpha, beta, gamma)` for `Q = alpha/(beta + gamma*G)`.
///
/// gcd is 1 and the first nonzero of `(gamma, beta, alpha)` is positive.
/// The zero limit is represented by `(0, 0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GLimit {
    alpha: BigInt,
    beta: BigInt,
    gamma: BigInt,
}

impl GLimit {
    pub fn alpha(&self) -> &BigInt {
        &self.alpha
    }

    pub fn beta(&self) -> &BigInt {
        &self.beta
    }

    pub fn gamma(&self) -> &BigInt {
        &self.gamma
    }

    pub fn zero_limit() -> Self {
        GLimit {
            alpha: BigInt::zero(),
            beta: BigInt::zero(),
            gamma: BigInt::one(),
        }
    }

    pub fn triple(&self) -> [BigInt; 3] {
        [self.alpha.clone(), self.beta.clone(), self.gamma.clone()]
    }

    /// `alpha/gamma`, or `None` when `gamma = 0`.
    pub fn rho(&self) -> Option<Rational> {
        (!self.gamma.is_zero()).then(|| Rational::new(self.alpha.clone(), self.gamma.clone()))
    }

    /// The limit representing `-Q`.
    pub fn negated(&self) -> GLimit {
        normalize(&[-&self.alpha, self.beta.clone(), self.gamma.clone()])
            .expect("negation of a valid triple is valid")
    }

    /// `alpha / (beta + gamma*g)`.
    pub fn value(&self, g: &HPReal) -> Result<HPReal> {
        let p = g.precision();
        let den = g.mul_int(&self.gamma).add_int(&self.beta);
        if den.is_zero() {
            return Err(Error::VanishingDenominator);
        }
        HPReal::from_int(self.alpha.clone(), p).div(&den)
    }

    /// True when `other` is the same limit, or the same triple with every
    /// entry negated (identical as a limit).
    pub fn same_up_to_sign(&self, other: &[BigInt; 3]) -> bool {
        normalize(other).is_ok_and(|o| &o == self)
    }
}

impl fmt::Display for GLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// Divides by the gcd and applies the canonical sign rule.
pub fn normalize(t: &[BigInt; 3]) -> Result<GLimit> {
    let [a, b, c] = t;
    let g = a.gcd(b).gcd(c);
    if g.is_zero() {
        return Err(Error::invalid("zero triple has no canonical form"));
    }
    let (mut alpha, mut beta, mut gamma) = (a / &g, b / &g, c / &g);
    if beta.is_zero() && gamma.is_zero() {
        return Err(Error::invalid("beta and gamma both zero"));
    }
    let lead = if !gamma.is_zero() { &gamma } else { &beta };
    if lead.is_negative() {
        alpha = -alpha;
        beta = -beta;
        gamma = -gamma;
    }
    if alpha.is_zero() {
        return Ok(GLimit::zero_limit());
    }
    Ok(GLimit { alpha, beta, gamma })
}

/// Integer lattice basis, one vector per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    rows: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || dim == 0 {
            return Err(Error::invalid("empty basis"));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::invalid("basis rows differ in length"));
        }
        Ok(LatticeBasis { rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }
}

fn dot(u: &[BigInt], v: &[BigInt]) -> BigInt {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Nearest integer to `n/d` for `d > 0`, halves rounded up.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    (n * BigInt::from(2) + d).div_floor(&(d * BigInt::from(2)))
}

/// The default Lovász parameter, 99/100.
pub fn default_delta() -> Rational {
    Rational::new(99.into(), 100.into())
}

/// LLL-reduces `basis` with Lovász parameter `delta` in (1/4, 1).
pub fn lll(basis: &LatticeBasis, delta: &Rational) -> Result<LatticeBasis> {
    let quarter = Rational::new(1.into(), 4.into());
    if delta <= &quarter || delta >= &Rational::one() {
        return Err(Error::invalid("delta must lie in (1/4, 1)"));
    }
    let (dp, dq) = (delta.numer().clone(), delta.denom().clone());
    let mut b = basis.rows.clone();
    let n = b.len();
    if n == 1 {
        if b[0].iter().all(Zero::is_zero) {
            return Err(Error::DegenerateBasis);
        }
        return Ok(LatticeBasis { rows: b });
    }

    // d[i+1] is the Gram determinant of the first i+1 rows; d[0] = 1.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::one();
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::DegenerateBasis);
    }

    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::DegenerateBasis);
                    }
                    d[k + 1] = u;
                }
            }
        }
        size_reduce(&mut b, &mut lam, &d, k, k - 1);
        let lhs = &dq * (&d[k + 1] * &d[k - 1] + &lam[k][k - 1] * &lam[k][k - 1]);
        let rhs = &dp * &d[k] * &d[k];
        if lhs < rhs {
            swap_rows(&mut b, &mut lam, &mut d, k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                size_reduce(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    Ok(LatticeBasis { rows: b })
}

fn size_reduce(b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize) {
    let dl = &d[l + 1];
    if (&lam[k][l] * BigInt::from(2)).abs() <= *dl {
        return;
    }
    let r = round_div(&lam[k][l], dl);
    let bl = b[l].clone();
    for (x, y) in b[k].iter_mut().zip(&bl) {
        *x -= &r * y;
    }
    lam[k][l] -= &r * dl;
    for i in 0..l {
        let t = &r * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap_rows(
    b: &mut [Vec<BigInt>],
    lam: &mut [Vec<BigInt>],
    d: &mut [BigInt],
    k: usize,
    kmax: usize,
) {
    b.swap(k, k - 1);
    for j in 0..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let big_b = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
        lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k + 1];
    }
    d[k] = big_b;
}

/// Finds `(alpha, beta, gamma)` with `alpha = q*(beta + gamma*g)` and every
/// entry below `10^max_coeff_digits` in magnitude, verified to
/// `precision - 20` digits.
pub fn find_g_relation(q: &HPReal, g: &HPReal, max_coeff_digits: u32) -> Result<GLimit> {
    let precision = q.precision().min(g.precision());
    if precision < 3 * max_coeff_digits + 20 {
        return Err(Error::invalid(format!(
            "precision {precision} too low for {max_coeff_digits}-digit coefficients"
        )));
    }
    let tol = HPReal::from_ratio(&BigInt::one(), &pow10(precision - 20), precision);
    if q.abs().cmp_value(&tol).is_lt() {
        return Ok(GLimit::zero_limit());
    }
    let scale = pow10(precision - 10);
    let qg = q.mul(g);
    let rows = vec![
        vec![BigInt::one(), BigInt::zero(), BigInt::zero(), scale.clone()],
        vec![BigInt::zero(), BigInt::one(), BigInt::zero(), q.floor_scaled(&scale)],
        vec![BigInt::zero(), BigInt::zero(), BigInt::one(), qg.floor_scaled(&scale)],
    ];
    let reduced = lll(&LatticeBasis::new(rows)?, &default_delta())?;
    let bound = pow10(max_coeff_digits);
    for row in reduced.rows() {
        let triple = [row[0].clone(), -&row[1], -&row[2]];
        if triple.iter().any(|x| x.abs() >= bound) {
            continue;
        }
        let Ok(limit) = normalize(&triple) else {
            continue;
        };
        let Ok(value) = limit.value(g) else {
            continue;
        };
        if value.sub(q).abs().cmp_value(&tol).is_lt() {
            return Ok(limit);
        }
    }
    Err(Error::NoRelation { precision })
}

/// Leading digits on which `q` and `alpha/(beta + gamma*g)` agree.
pub fn verify_relation(t: &GLimit, q: &HPReal, g: &HPReal) -> Result<u32> {
    if t == &GLimit::zero_limit() {
        let p = q.precision().min(g.precision());
        return Ok(if q.is_zero() {
            p
        } else {
            digits_agree(q, &HPReal::zero(p))
        });
    }
    Ok(digits_agree(q, &t.value(g)?))
}
