use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cf_engine::PolyInt;
use crate::error::{Error, Result};
use crate::numerics::Rational;

/// `sum_{i=0}^{order} coeffs[i](c) v_{c-i} = 0` for `first <= c <= last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceGuess {
    pub order: usize,
    pub coeffs: Vec<PolyInt>,
    pub first: i64,
    pub last: i64,
}

impl RecurrenceGuess {
    /// Residual of the recurrence at `c` on the data (`values[c]`).
    pub fn residual(&self, values: &[Rational], c: i64) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, p)| Rational::from_integer(p.eval_i64(c)) * &values[(c - i as i64) as usize])
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// True if both recurrences agree up to a common polynomial factor of
    /// degree zero, i.e. a nonzero rational multiple.
    pub fn proportional_to(&self, other: &[PolyInt]) -> bool {
        if self.coeffs.len() != other.len() {
            return false;
        }
        let mut ratio: Option<Rational> = None;
        for (a, b) in self.coeffs.iter().zip(other) {
            let n = a.coeffs().len().max(b.coeffs().len());
            for k in 0..n {
                let (x, y) = (a.coeff(k), b.coeff(k));
                match (x.is_zero(), y.is_zero()) {
                    (true, true) => continue,
                    (true, false) | (false, true) => return false,
                    _ => {}
                }
                let r = Rational::new(x, y);
                match &ratio {
                    None => ratio = Some(r),
                    Some(q) if *q != r => return false,
                    _ => {}
                }
            }
        }
        ratio.is_some()
    }
}

impl fmt::Display for RecurrenceGuess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| {
                let v = if i == 0 { "v(c)".to_string() } else { format!("v(c-{i})") };
                format!("({}) {v}", p.display_in("c"))
            })
            .collect();
        write!(f, "{} = 0", terms.join(" + "))
    }
}

/// Minimum number of values for [`guess_p_recurrence`].
pub fn required_points(order: usize, max_degree: usize) -> usize {
    (order + 1) * (max_degree + 1) + order + 3
}

/// Finds polynomials `P_0..P_order` of degree `<= max_degree` with
/// `sum_i P_i(c) v_{c-i} = 0` on the whole data range, `values[c]` being
/// `v_c`. Degrees are tried upward and the first nontrivial kernel vector is
/// returned with content removed and the leading coefficient of the first
/// nonzero polynomial positive.
pub fn guess_p_recurrence(values: &[Rational], order: usize, max_degree: usize) -> Result<RecurrenceGuess> {
    let needed = required_points(order, max_degree);
    if values.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: values.len(),
        });
    }
    for degree in 0..=max_degree {
        if let Some(g) = guess_at_degree(values, order, degree) {
            return Ok(g);
        }
    }
    Err(Error::NoRecurrence)
}

fn guess_at_degree(values: &[Rational], order: usize, degree: usize) -> Option<RecurrenceGuess> {
    let unknowns = (order + 1) * (degree + 1);
    let rows: Vec<Vec<Rational>> = (order..values.len())
        .map(|c| {
            let mut row = Vec::with_capacity(unknowns);
            for i in 0..=order {
                let v = &values[c - i];
                let mut pow = Rational::one();
                for _ in 0..=degree {
                    row.push(v * &pow);
                    pow *= Rational::from_integer(BigInt::from(c));
                }
            }
            row
        })
        .collect();
    let kernel = kernel_vector(rows, unknowns)?;

    let lcm = kernel.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
    let mut ints: Vec<BigInt> = kernel
        .iter()
        .map(|r| (r * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter_mut().for_each(|x| *x /= &g);
    let coeffs: Vec<PolyInt> = ints.chunks(degree + 1).map(|ch| PolyInt::new(ch.to_vec())).collect();
    let flip = coeffs
        .iter()
        .find(|p| !p.is_zero())
        .map(|p| p.coeff(p.degree().unwrap()).is_negative())
        .unwrap_or(false);
    let coeffs = if flip {
        coeffs.iter().map(|p| p.scale(&BigInt::from(-1))).collect()
    } else {
        coeffs
    };
    let guess = RecurrenceGuess {
        order,
        coeffs,
        first: order as i64,
        last: values.len() as i64 - 1,
    };
    (guess.first..=guess.last)
        .all(|c| guess.residual(values, c).is_zero())
        .then_some(guess)
}

/// A nonzero kernel vector via reduced row echelon form, choosing the first
/// free column.
fn kernel_vector(mut m: Vec<Vec<Rational>>, cols: usize) -> Option<Vec<Rational>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for k in col..cols {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free].clone();
    }
    Some(v)
}
