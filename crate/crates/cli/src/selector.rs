//! Continued-fraction selection from command-line flags.

use clap::Args;

use catalan_cf::cf_engine::{kappa_cf, CFSpec, Numerator, PolyInt};
use catalan_cf::families::{family_cf, ij_family, FamilySpec};

use crate::CliError;

#[derive(Args, Clone, Debug, Default)]
pub struct SelectorArgs {
    /// Kappa of Q(c, kappa); use with --c.
    #[arg(long)]
    pub kappa: Option<u32>,
    /// Running index c of Q(c, kappa).
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<i64>,
    /// Family parameters delta,epsilon,tau,eta; use with --mu.
    #[arg(long, value_name = "D,E,T,H")]
    pub family: Option<String>,
    /// Generator table entry i,j; use with --mu.
    #[arg(long, value_name = "I,J")]
    pub ij: Option<String>,
    /// Family parameter mu.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<i64>,
    /// Partial denominators a(n) as ascending coefficients, e.g. 1,2 for 1+2n.
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Partial numerators b(n) as ascending coefficients.
    #[arg(long, value_name = "COEFFS", allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Selector {
    Kappa { kappa: u32, c: i64 },
    Family(FamilySpec),
    Ij { i: i64, j: i64, mu: i64 },
    Raw { a: Vec<i64>, b: Vec<i64> },
}

fn ints(s: &str, what: &str, n: Option<usize>) -> Result<Vec<i64>, CliError> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::usage(format!("{what}: expected comma-separated integers, got {s:?}")))?;
    if v.is_empty() || n.is_some_and(|n| n != v.len()) {
        return Err(CliError::usage(format!(
            "{what}: expected {} integers, got {s:?}",
            n.map(|n| n.to_string()).unwrap_or_else(|| "some".into())
        )));
    }
    Ok(v)
}

impl SelectorArgs {
    pub fn selector(&self) -> Result<Selector, CliError> {
        let chosen = [
            self.kappa.is_some() || self.c.is_some(),
            self.family.is_some(),
            self.ij.is_some(),
            self.a.is_some() || self.b.is_some(),
        ]
        .iter()
        .filter(|x| **x)
        .count();
        if chosen != 1 {
            return Err(CliError::usage(
                "select exactly one fraction: --kappa/--c, --family with --mu, --ij with --mu, or --a/--b",
            ));
        }
        if self.kappa.is_some() || self.c.is_some() {
            let (Some(kappa), Some(c)) = (self.kappa, self.c) else {
                return Err(CliError::usage("--kappa and --c must be given together"));
            };
            return Ok(Selector::Kappa { kappa, c });
        }
        if let Some(f) = &self.family {
            let v = ints(f, "--family", Some(4))?;
            let mu = self.mu.ok_or_else(|| CliError::usage("--family needs --mu"))?;
            return Ok(Selector::Family(FamilySpec::new(v[0], v[1], v[2], v[3], mu)));
        }
        if let Some(s) = &self.ij {
            let v = ints(s, "--ij", Some(2))?;
            let mu = self.mu.ok_or_else(|| CliError::usage("--ij needs --mu"))?;
            return Ok(Selector::Ij { i: v[0], j: v[1], mu });
        }
        let (Some(a), Some(b)) = (&self.a, &self.b) else {
            return Err(CliError::usage("--a and --b must be given together"));
        };
        Ok(Selector::Raw {
            a: ints(a, "--a", None)?,
            b: ints(b, "--b", None)?,
        })
    }
}

impl Selector {
    pub fn cf(&self) -> Result<CFSpec, CliError> {
        Ok(match self {
            Selector::Kappa { kappa, c } => kappa_cf(*kappa, *c),
            Selector::Family(spec) => family_cf(spec),
            Selector::Ij { i, j, mu } => ij_family(*i, *j, *mu).map_err(|e| CliError::usage(e.to_string()))?,
            Selector::Raw { a, b } => CFSpec::new(PolyInt::from_i64(a), Numerator::Poly(PolyInt::from_i64(b))),
        })
    }

    pub fn label(&self) -> String {
        match self {
            Selector::Kappa { kappa, c } => format!("Q(c={c}, kappa={kappa})"),
            Selector::Family(spec) => format!("family {spec}"),
            Selector::Ij { i, j, mu } => format!("(i, j) = ({i}, {j}), mu = {mu}"),
            Selector::Raw { a, b } => {
                let pa = PolyInt::from_i64(a).display_in("n");
                let pb = PolyInt::from_i64(b).display_in("n");
                format!("a(n) = {pa}, b(n) = {pb}")
            }
        }
    }
}
