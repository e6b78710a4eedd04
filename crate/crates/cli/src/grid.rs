//! Data-file generation over a (kappa, c) grid.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use rayon::prelude::*;

use catalan_cf::cf_engine::{eval_backward, kappa_cf};
use catalan_cf::challenge::{emit_data_file, parse_data, write_atomic, DataFormat, DataRecord};
use catalan_cf::discovery::discover_escalating;
use catalan_cf::kappa_forms::KappaRegistry;
use catalan_cf::numerics::{catalan, digits_agree};

use crate::commands::registry;
use crate::config::{parse_range, RunConfig};
use crate::CliError;

#[derive(Args, Debug)]
pub struct GridArgs {
    /// Kappa range, e.g. 0..2.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Running index range, e.g. 1..40.
    #[arg(long)]
    pub c: Option<String>,
    /// Output file; a factored copy is written next to it with extension .fac.
    #[arg(long, default_value = "grid.txt")]
    pub out: PathBuf,
    /// Format of the main file (brace, csv or factored).
    #[arg(long)]
    pub format: Option<String>,
    /// Store gcd-reduced triples even where the closed form is known.
    #[arg(long)]
    pub canonical: bool,
    /// Digits a record must be verified to.
    #[arg(long, default_value_t = 50)]
    pub min_verified: u32,
    /// Precision ceiling when discovery raises digits automatically.
    #[arg(long, default_value_t = 2000)]
    pub max_digits: u32,
}

fn sidecar(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".failures");
    PathBuf::from(s)
}

/// Record from the closed form, if one is known; `None` otherwise.
fn expected(reg: &KappaRegistry, kappa: u32, c: i64, canonical: bool) -> Option<DataRecord> {
    let q = reg.q_closed(kappa, c).ok()?;
    if canonical {
        DataRecord::from_limit(c, kappa, &q.limit).ok()
    } else {
        DataRecord::new(c, kappa, q.raw[0].clone(), q.raw[2].clone()).ok()
    }
}

fn compute(reg: &KappaRegistry, kappa: u32, c: i64, args: &GridArgs, cfg: &RunConfig) -> Result<DataRecord, String> {
    let cf = kappa_cf(kappa, c);
    if let Some(rec) = expected(reg, kappa, c, args.canonical) {
        let closed = reg.q_closed(kappa, c).map_err(|e| e.to_string())?;
        let q = eval_backward(&cf, cfg.depth, cfg.digits).map_err(|e| e.to_string())?;
        let g = catalan(cfg.digits).map_err(|e| e.to_string())?;
        let agree = digits_agree(&q, &closed.limit.value(&g).map_err(|e| e.to_string())?);
        if agree < args.min_verified {
            return Err(format!("closed form agrees to only {agree} digits"));
        }
        return Ok(rec);
    }
    let dc = catalan_cf::discovery::DiscoveryConfig {
        digits: cfg.digits,
        depth: cfg.depth,
        min_verified: args.min_verified,
        max_digits: args.max_digits.max(cfg.digits),
        ..Default::default()
    };
    let d = discover_escalating(&cf, &dc).map_err(|e| e.to_string())?;
    DataRecord::from_limit(c, kappa, &d.limit).map_err(|e| format!("{e} (limit {})", d.limit))
}

pub fn grid(args: &GridArgs, cfg: &RunConfig) -> Result<(), CliError> {
    let kappas = match &args.kappa {
        Some(s) => parse_range::<u32>(s)?,
        None => cfg
            .kappa_range
            .clone()
            .ok_or_else(|| CliError::usage("grid needs --kappa (or kappa in the config)"))?,
    };
    let cs = match &args.c {
        Some(s) => parse_range::<i64>(s)?,
        None => cfg
            .c_range
            .clone()
            .ok_or_else(|| CliError::usage("grid needs --c (or c in the config)"))?,
    };
    if *cs.start() < 1 {
        return Err(CliError::usage("grid needs c >= 1"));
    }
    let format = match &args.format {
        Some(f) => DataFormat::parse(f)?,
        None => cfg.format,
    };
    let reg = registry(cfg, *cs.end())?;

    let mut records: BTreeMap<(u32, i64), DataRecord> = BTreeMap::new();
    let mut reused = 0;
    if args.out.exists() {
        let text = fs::read_to_string(&args.out)?;
        for r in parse_data(&text, format, &args.out)? {
            let ok = expected(&reg, r.kappa, r.c, args.canonical).is_none_or(|e| e == r);
            if ok {
                records.insert((r.kappa, r.c), r);
            }
        }
    }
    let todo: Vec<(u32, i64)> = kappas
        .clone()
        .flat_map(|k| cs.clone().map(move |c| (k, c)))
        .filter(|cell| {
            let cached = records.contains_key(cell);
            if cached {
                reused += 1;
            }
            !cached
        })
        .collect();
    eprintln!("grid: {} cells cached, {} to compute", reused, todo.len());

    let results: Vec<((u32, i64), Result<DataRecord, String>)> = todo
        .par_iter()
        .map(|&(k, c)| ((k, c), compute(&reg, k, c, args, cfg)))
        .collect();
    let mut failures = Vec::new();
    for ((k, c), r) in results {
        match r {
            Ok(rec) => {
                records.insert((k, c), rec);
            }
            Err(e) => failures.push(format!("kappa={k} c={c}: {e}")),
        }
    }

    let all: Vec<DataRecord> = records.into_values().collect();
    emit_data_file(&all, &args.out, format)?;
    if format != DataFormat::Factored {
        let fac = args.out.with_extension("fac");
        emit_data_file(&all, &fac, DataFormat::Factored)?;
        println!("wrote {} and {} ({} records)", args.out.display(), fac.display(), all.len());
    } else {
        println!("wrote {} ({} records)", args.out.display(), all.len());
    }
    let report = sidecar(&args.out);
    if failures.is_empty() {
        if report.exists() {
            fs::remove_file(&report)?;
        }
        Ok(())
    } else {
        let mut text = failures.join("\n");
        text.push('\n');
        write_atomic(&report, &text)?;
        Err(CliError::verify(format!(
            "{} cell(s) failed; see {}",
            failures.len(),
            report.display()
        )))
    }
}
