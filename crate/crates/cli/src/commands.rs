use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use catalan_cf::cf_engine::{eval_backward, estimate_converged_digits, kappa_cf, PolyInt};
use catalan_cf::challenge::{
    factorize_with_budget, fit_building_blocks, guess_p_recurrence, read_data_file, SearchSpace,
    DEFAULT_RHO_BUDGET, DEFAULT_SMOOTH_BOUND,
};
use catalan_cf::checks::{bootstrap_from_fraction, run_check, CheckConfig, CheckKind};
use catalan_cf::discovery::{discover_escalating, DiscoveryConfig};
use catalan_cf::kappa_forms::{
    kappa_params, params_equivalent, q_closed_with, DeltaSeq, KappaRegistry, DEFAULT_C_MAX,
};
use catalan_cf::lattice::GLimit;
use catalan_cf::numerics::{catalan, digits_agree, format_rational, parse_rational};
use catalan_cf::Rational;

use crate::config::{parse_range, RunConfig};
use crate::selector::{Selector, SelectorArgs};
use crate::CliError;

/// `alpha/(gamma G + beta)`, or the rational `alpha/beta` when `gamma = 0`.
pub fn formula(limit: &GLimit) -> String {
    let (a, b, g) = (limit.alpha(), limit.beta(), limit.gamma());
    if g.is_zero() {
        return format_rational(&Rational::new(a.clone(), b.clone()));
    }
    let gterm = if g.is_one() { "G".to_string() } else { format!("{g}G") };
    let bterm = if b.is_zero() {
        String::new()
    } else if b.is_negative() {
        format!("-{}", b.abs())
    } else {
        format!("+{b}")
    };
    format!("{a}/({gterm}{bterm})")
}

/// Registry with published parameters plus any persisted in the params dir.
pub fn registry(cfg: &RunConfig, c_max: i64) -> Result<KappaRegistry, CliError> {
    let reg = KappaRegistry::new(c_max.max(DEFAULT_C_MAX));
    reg.load_dir(&cfg.params_dir)?;
    Ok(reg)
}

fn discovery_config(cfg: &RunConfig, min_verified: u32, max_digits: u32) -> DiscoveryConfig {
    DiscoveryConfig {
        digits: cfg.digits,
        depth: cfg.depth,
        min_verified,
        max_digits: max_digits.max(cfg.digits),
        ..DiscoveryConfig::default()
    }
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub select: SelectorArgs,
    /// Significant digits to print (defaults to the converged digits).
    #[arg(long)]
    pub show: Option<u32>,
    /// Skip the search for an alpha/(beta + gamma G) form.
    #[arg(long)]
    pub no_match: bool,
}

pub fn eval(args: &EvalArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let sel = args.select.selector()?;
    let cf = sel.cf()?;
    let value = eval_backward(&cf, cfg.depth, cfg.digits)?;
    let converged = estimate_converged_digits(&cf, cfg.depth, cfg.digits)?;
    let shown = args.show.unwrap_or(converged).clamp(1, cfg.digits);
    println!("{}", sel.label());
    println!("value = {}", value.to_sig_string(shown));
    println!("converged digits ~ {converged} (precision {}, depth {})", cfg.digits, cfg.depth);
    if args.no_match {
        return Ok(());
    }
    if let Selector::Kappa { kappa, c } = sel {
        let reg = registry(cfg, c)?;
        if let Ok(closed) = reg.q_closed(kappa, c) {
            let g = catalan(cfg.digits)?;
            let agree = digits_agree(&value, &closed.limit.value(&g)?);
            println!("matches {} to {agree} digits (closed form)", formula(&closed.limit));
            return Ok(());
        }
    }
    match discover_escalating(&cf, &discovery_config(cfg, 30, cfg.digits)) {
        Ok(d) => println!("matches {} to {} digits", formula(&d.limit), d.verified_digits),
        Err(_) => println!("no alpha/(beta + gamma G) form found at this precision"),
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DiscoverArgs {
    #[command(flatten)]
    pub select: SelectorArgs,
    /// Digits the relation must reproduce.
    #[arg(long, default_value_t = 50)]
    pub min_verified: u32,
    /// Precision ceiling when raising digits automatically.
    #[arg(long, default_value_t = 2000)]
    pub max_digits: u32,
}

pub fn discover(args: &DiscoverArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let sel = args.select.selector()?;
    let cf = sel.cf()?;
    let d = discover_escalating(&cf, &discovery_config(cfg, args.min_verified, args.max_digits)).map_err(|e| {
        CliError::numeric(format!(
            "{e}; try a larger --digits or --depth (tried up to {} digits)",
            args.max_digits.max(cfg.digits)
        ))
    })?;
    println!("{}", sel.label());
    println!("{}, {}, {}", d.limit.alpha(), d.limit.beta(), d.limit.gamma());
    println!("limit = {}", formula(&d.limit));
    println!(
        "verified digits = {} (precision {}, depth {})",
        d.verified_digits, d.digits, d.depth
    );
    if let Selector::Kappa { kappa, c } = sel {
        let reg = registry(cfg, c)?;
        if let Ok(closed) = reg.q_closed(kappa, c) {
            if closed.limit != d.limit {
                return Err(CliError::verify(format!(
                    "closed form gives {}, discovery gives {}",
                    closed.limit, d.limit
                )));
            }
            println!("closed form agrees");
        }
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Checks to run, comma separated (see --list).
    #[arg(long, value_delimiter = ',')]
    pub check: Vec<String>,
    /// Running index range, e.g. 2..10.
    #[arg(long)]
    pub c: Option<String>,
    /// Kappa range, e.g. 0..6.
    #[arg(long)]
    pub kappa: Option<String>,
    /// List the available checks.
    #[arg(long)]
    pub list: bool,
    /// Print only failures and the summary.
    #[arg(long)]
    pub quiet: bool,
}

pub fn verify(args: &VerifyArgs, cfg: &RunConfig) -> Result<(), CliError> {
    if args.list {
        for k in CheckKind::ALL {
            let mark = if CheckKind::DEFAULT.contains(&k) { " (default)" } else { "" };
            println!("{}{mark}", k.name());
        }
        return Ok(());
    }
    let kinds: Vec<CheckKind> = if args.check.is_empty() {
        CheckKind::DEFAULT.to_vec()
    } else {
        args.check
            .iter()
            .map(|s| CheckKind::parse(s.trim()))
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::usage(e.to_string()))?
    };
    let check_cfg = CheckConfig {
        digits: cfg.digits,
        depth: cfg.depth,
        c_range: args.c.as_deref().map(parse_range).transpose()?.or_else(|| cfg.c_range.clone()),
        kappas: args.kappa.as_deref().map(parse_range).transpose()?.or_else(|| cfg.kappa_range.clone()),
    };
    let (mut passed, mut failed) = (0, 0);
    for kind in kinds {
        for o in run_check(kind, &check_cfg) {
            if o.passed {
                passed += 1;
            } else {
                failed += 1;
            }
            if !args.quiet || !o.passed {
                println!("{o}");
            }
        }
    }
    println!("{passed} passed, {failed} failed");
    if failed > 0 {
        return Err(CliError::verify(format!("{failed} check(s) failed")));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct BootstrapArgs {
    /// Kappa to bootstrap.
    #[arg(long)]
    pub kappa: u32,
    /// Running indices used to test the recovered closed form.
    #[arg(long, default_value = "3..6")]
    pub predict: String,
}

pub fn bootstrap(args: &BootstrapArgs, cfg: &RunConfig) -> Result<(), CliError> {
    if args.kappa == 0 {
        return Err(CliError::usage("bootstrap needs kappa >= 1"));
    }
    let predict: RangeInclusive<i64> = parse_range(&args.predict)?;
    if *predict.start() < 1 {
        return Err(CliError::usage("prediction range must start at c >= 1"));
    }
    let params = bootstrap_from_fraction(args.kappa, cfg.digits, cfg.depth)?;
    println!("{params}");
    if let Ok(published) = kappa_params(args.kappa) {
        println!(
            "published parameters: {}",
            if params_equivalent(&params, &published) { "equivalent" } else { "DIFFERENT" }
        );
    }
    let path = params.save(&cfg.params_dir)?;
    println!("saved {}", path.display());

    let g = catalan(cfg.digits)?;
    let needed = cfg.digits / 2;
    let mut seq = DeltaSeq::with_c_max(params, (*predict.end()).max(DEFAULT_C_MAX));
    let mut worst = u32::MAX;
    for c in predict {
        let closed = q_closed_with(&mut seq, c)?;
        let q = eval_backward(&kappa_cf(args.kappa, c), cfg.depth, cfg.digits)?;
        let agree = digits_agree(&q, &closed.limit.value(&g)?);
        worst = worst.min(agree);
        println!("predict c = {c}: {} agrees to {agree} digits", formula(&closed.limit));
    }
    if worst < needed {
        return Err(CliError::verify(format!(
            "forward prediction agrees to only {worst} digits (need {needed})"
        )));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct FactorArgs {
    /// Integers to factor.
    #[arg(required = true, allow_hyphen_values = true)]
    pub values: Vec<String>,
    /// Trial division bound.
    #[arg(long, default_value_t = DEFAULT_SMOOTH_BOUND)]
    pub smooth_bound: u64,
    /// Pollard rho iteration budget per cofactor.
    #[arg(long, default_value_t = DEFAULT_RHO_BUDGET)]
    pub rho_budget: u64,
}

pub fn factor(args: &FactorArgs) -> Result<(), CliError> {
    for v in &args.values {
        let n: BigInt = v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("not an integer: {v:?}")))?;
        let f = factorize_with_budget(&n, args.smooth_bound, args.rho_budget)?;
        let note = if f.is_complete() { "" } else { "  (cofactor not fully factored)" };
        println!("{n} = {f}{note}");
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Alpha,
    Gamma,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Data file (brace, .csv or .fac).
    #[arg(long, required_unless_present = "closed_form", conflicts_with = "closed_form")]
    pub input: Option<PathBuf>,
    /// Use closed-form triples instead of a data file.
    #[arg(long)]
    pub closed_form: bool,
    /// Kappa whose series is fitted.
    #[arg(long)]
    pub kappa: u32,
    #[arg(long, value_enum, default_value = "gamma")]
    pub target: Target,
    /// Running index range (closed-form default 1..10, otherwise every record).
    #[arg(long)]
    pub c: Option<String>,
    /// Largest number of building blocks in a product.
    #[arg(long, default_value_t = 3)]
    pub max_terms: usize,
}

pub fn fit(args: &FitArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let range: Option<RangeInclusive<i64>> = args.c.as_deref().map(parse_range).transpose()?;
    let pick = |a: &BigInt, g: &BigInt| match args.target {
        Target::Alpha => a.clone(),
        Target::Gamma => g.clone(),
    };
    let mut points: Vec<(i64, BigInt)> = Vec::new();
    if let Some(path) = &args.input {
        for r in read_data_file(path)? {
            if r.kappa == args.kappa && range.as_ref().is_none_or(|rg| rg.contains(&r.c)) {
                points.push((r.c, pick(&r.alpha, &r.gamma)));
            }
        }
    } else {
        let range = range.unwrap_or(1..=10);
        let reg = registry(cfg, *range.end())?;
        for c in range {
            let q = reg.q_closed(args.kappa, c)?;
            points.push((c, pick(&q.raw[0], &q.raw[2])));
        }
    }
    points.sort_by_key(|p| p.0);
    points.dedup_by_key(|p| p.0);
    let series = points
        .iter()
        .map(|(c, v)| Ok((*c, factorize_with_budget(v, DEFAULT_SMOOTH_BOUND, DEFAULT_RHO_BUDGET)?)))
        .collect::<Result<Vec<_>, catalan_cf::Error>>()?;
    let target = match args.target {
        Target::Alpha => "alpha",
        Target::Gamma => "gamma",
    };
    println!("{} points of {target}(c, {})", series.len(), args.kappa);
    let found = fit_building_blocks(&series, &SearchSpace::for_kappa(args.kappa), args.max_terms)?;
    if found.is_empty() {
        return Err(CliError::verify(format!(
            "no product of at most {} building blocks fits the data",
            args.max_terms
        )));
    }
    for cand in found {
        println!("{cand}");
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct GuessArgs {
    /// File of `c,value` or `value` lines with consecutive c.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    /// Largest coefficient degree tried.
    #[arg(long, default_value_t = 4)]
    pub degree: usize,
}

/// `(c0, values)` from a sequence file; a non-numeric first line is a header.
pub fn read_sequence(path: &Path) -> Result<(i64, Vec<Rational>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let mut start = None;
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |what: &str| CliError::usage(format!("{}:{}: {what}", path.display(), i + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let (c, v) = match fields.as_slice() {
            [v] => (None, *v),
            [c, v] => match c.parse::<i64>() {
                Ok(c) => (Some(c), *v),
                Err(_) if values.is_empty() && start.is_none() => continue,
                Err(_) => return Err(bad("bad index")),
            },
            _ => return Err(bad("expected `c,value` or `value`")),
        };
        let value = match parse_rational(v) {
            Ok(v) => v,
            Err(_) if values.is_empty() && c.is_none() => continue,
            Err(_) => return Err(bad("bad rational value")),
        };
        let expect = start.unwrap_or(c.unwrap_or(0)) + values.len() as i64;
        if let Some(c) = c {
            if c != expect {
                return Err(bad(&format!("expected c = {expect}, found {c}")));
            }
        }
        start.get_or_insert(expect);
        values.push(value);
    }
    Ok((start.unwrap_or(0), values))
}

/// `p(x - shift)`.
fn shift_poly(p: &PolyInt, shift: i64) -> PolyInt {
    let x = PolyInt::linear(1, -shift);
    p.coeffs()
        .iter()
        .rev()
        .fold(PolyInt::zero(), |acc, a| acc.mul(&x).add(&PolyInt::constant(a.clone())))
}

pub fn guess(args: &GuessArgs) -> Result<(), CliError> {
    let (c0, values) = read_sequence(&args.input)?;
    let mut g = guess_p_recurrence(&values, args.order, args.degree)?;
    if c0 != 0 {
        g.coeffs = g.coeffs.iter().map(|p| shift_poly(p, c0)).collect();
        g.first += c0;
        g.last += c0;
    }
    println!("{g}");
    println!("valid for {} <= c <= {}", g.first, g.last);
    for (i, p) in g.coeffs.iter().enumerate() {
        println!("P{i}(c) = {}", p.display_in("c"));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct DeltaArgs {
    #[arg(long)]
    pub kappa: u32,
    /// Range of c.
    #[arg(long, default_value = "0..19")]
    pub c: String,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn delta(args: &DeltaArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let range: RangeInclusive<i64> = parse_range(&args.c)?;
    if *range.start() < 0 {
        return Err(CliError::usage("c must be >= 0"));
    }
    let reg = registry(cfg, *range.end())?;
    let mut out = String::from("c,delta\n");
    for c in range {
        out.push_str(&format!("{c},{}\n", format_rational(&reg.delta(args.kappa, c)?)));
    }
    match &args.out {
        Some(p) => catalan_cf::challenge::write_atomic(p, &out)?,
        None => print!("{out}"),
    }
    Ok(())
}
