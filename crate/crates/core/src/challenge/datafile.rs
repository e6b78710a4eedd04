use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_traits::Zero;

use super::factor::{factorize, FactoredInt, DEFAULT_SMOOTH_BOUND};
use crate::error::{Error, Result};
use crate::lattice::GLimit;
use crate::numerics::{format_rational, parse_rational, Rational};

/// One `{c, kappa, rho, alpha, gamma}` record.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DataRecord {
    pub kappa: u32,
    pub c: i64,
    pub alpha: BigInt,
    pub gamma: BigInt,
}

impl DataRecord {
    pub fn new(c: i64, kappa: u32, alpha: BigInt, gamma: BigInt) -> Result<Self> {
        if gamma.is_zero() {
            return Err(Error::invalid("gamma must be nonzero for a data record"));
        }
        Ok(DataRecord { kappa, c, alpha, gamma })
    }

    pub fn from_limit(c: i64, kappa: u32, limit: &GLimit) -> Result<Self> {
        Self::new(c, kappa, limit.alpha().clone(), limit.gamma().clone())
    }

    pub fn rho(&self) -> Rational {
        Rational::new(self.alpha.clone(), self.gamma.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DataFormat {
    Brace,
    Csv,
    Factored,
}

impl DataFormat {
    /// `.csv` and `.fac` by extension, brace otherwise.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => DataFormat::Csv,
            Some("fac") => DataFormat::Factored,
            _ => DataFormat::Brace,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "brace" => Ok(DataFormat::Brace),
            "csv" => Ok(DataFormat::Csv),
            "factored" | "fac" => Ok(DataFormat::Factored),
            _ => Err(Error::invalid(format!("unknown data format {name:?}"))),
        }
    }
}

impl fmt::Display for DataFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataFormat::Brace => "brace",
            DataFormat::Csv => "csv",
            DataFormat::Factored => "factored",
        })
    }
}

pub const CSV_HEADER: &str = "c,kappa,rho,alpha,gamma";

fn factored(n: &BigInt) -> String {
    factorize(n, DEFAULT_SMOOTH_BOUND)
        .map(|f| f.to_string())
        .unwrap_or_else(|_| n.to_string())
}

pub fn render_record(r: &DataRecord, format: DataFormat) -> String {
    let rho = format_rational(&r.rho());
    match format {
        DataFormat::Brace => format!("{{{}, {}, {}, {}, {}}}", r.c, r.kappa, rho, r.alpha, r.gamma),
        DataFormat::Csv => format!("{},{},{},{},{}", r.c, r.kappa, rho, r.alpha, r.gamma),
        DataFormat::Factored => format!(
            "{{{}, {}, {}, {}, {}}}",
            r.c,
            r.kappa,
            rho,
            factored(&r.alpha),
            factored(&r.gamma)
        ),
    }
}

pub fn render_data(records: &[DataRecord], format: DataFormat) -> String {
    let mut out = String::new();
    if format == DataFormat::Csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for r in records {
        out.push_str(&render_record(r, format));
        out.push('\n');
    }
    out
}

/// Writes the whole file through a temporary and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    static NEXT: AtomicU64 = AtomicU64::new(0);
    let tmp = dir.join(format!(
        ".{name}.{}.{}.tmp",
        std::process::id(),
        NEXT.fetch_add(1, Ordering::Relaxed)
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn emit_data_file(records: &[DataRecord], path: &Path, format: DataFormat) -> Result<()> {
    write_atomic(path, &render_data(records, format))
}

pub fn read_data_file(path: &Path) -> Result<Vec<DataRecord>> {
    let text = fs::read_to_string(path)?;
    parse_data(&text, DataFormat::from_path(path), path)
}

/// Parses file contents; `path` only labels errors.
pub fn parse_data(text: &str, format: DataFormat, path: &Path) -> Result<Vec<DataRecord>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = i + 1;
        if line.is_empty() || (format == DataFormat::Csv && line == CSV_HEADER) {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: lineno,
            message,
        };
        let fields: Vec<&str> = match format {
            DataFormat::Csv => line.split(',').map(str::trim).collect(),
            DataFormat::Brace | DataFormat::Factored => line
                .strip_prefix('{')
                .and_then(|l| l.strip_suffix('}'))
                .ok_or_else(|| err("expected {c, kappa, rho, alpha, gamma}".into()))?
                .split(',')
                .map(str::trim)
                .collect(),
        };
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let c: i64 = fields[0].parse().map_err(|_| err(format!("bad c {:?}", fields[0])))?;
        let kappa: u32 = fields[1]
            .parse()
            .map_err(|_| err(format!("bad kappa {:?}", fields[1])))?;
        let rho = parse_rational(fields[2]).map_err(|_| err(format!("bad rho {:?}", fields[2])))?;
        let int = |s: &str| -> Result<BigInt> {
            if format == DataFormat::Factored {
                FactoredInt::parse(s)
                    .map(|f| f.reconstruct())
                    .map_err(|_| err(format!("bad factorization {s:?}")))
            } else {
                s.parse().map_err(|_| err(format!("bad integer {s:?}")))
            }
        };
        let alpha = int(fields[3])?;
        let gamma = int(fields[4])?;
        let rec = DataRecord::new(c, kappa, alpha, gamma).map_err(|e| err(e.to_string()))?;
        if rec.rho() != rho {
            return Err(Error::RhoMismatch {
                path: path.to_path_buf(),
                line: lineno,
                rho: fields[2].to_string(),
            });
        }
        out.push(rec);
    }
    Ok(out)
}
