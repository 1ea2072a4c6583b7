//! On-disk formats: JSON matrix specifications and line-oriented vectors.
//!
//! Matrix files are JSON objects tagged by `kind`. Toeplitz and Hankel
//! matrices carry a sparse `entries` map from diagonal offset (as a string
//! key) to an `[re, im]` pair; circulants carry the first row as an ordered
//! list of pairs. Vector files hold one `re im` pair per line, optionally
//! preceded by a single `# dim N` header.

use crate::error::CliError;
use num_complex::Complex64;
use qtoeplitz::structured::{CirculantSpec, HankelSpec, ToeplitzSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// Serialized form of a structured matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MatrixFile {
    Toeplitz {
        n: usize,
        entries: BTreeMap<String, [f64; 2]>,
    },
    Hankel {
        n: usize,
        entries: BTreeMap<String, [f64; 2]>,
    },
    Circulant {
        n: usize,
        entries: Vec<[f64; 2]>,
    },
}

/// A matrix file resolved into its in-memory spec.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedMatrix {
    Toeplitz(ToeplitzSpec),
    Hankel(HankelSpec),
    Circulant(CirculantSpec),
}

impl ParsedMatrix {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedMatrix::Toeplitz(_) => "toeplitz",
            ParsedMatrix::Hankel(_) => "hankel",
            ParsedMatrix::Circulant(_) => "circulant",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ParsedMatrix::Toeplitz(t) => t.dimension(),
            ParsedMatrix::Hankel(h) => h.dimension(),
            ParsedMatrix::Circulant(c) => c.dimension(),
        }
    }
}

fn parse_entry_map(
    entries: &BTreeMap<String, [f64; 2]>,
) -> Result<Vec<(i64, Complex64)>, String> {
    let mut out = Vec::with_capacity(entries.len());
    for (key, [re, im]) in entries {
        let offset: i64 = key
            .trim()
            .parse()
            .map_err(|_| format!("offset key {key:?} is not an integer"))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(format!("entry at offset {offset} is not finite"));
        }
        out.push((offset, Complex64::new(*re, *im)));
    }
    Ok(out)
}

impl MatrixFile {
    pub fn to_parsed(&self) -> Result<ParsedMatrix, String> {
        match self {
            MatrixFile::Toeplitz { n, entries } => {
                let pairs = parse_entry_map(entries)?;
                ToeplitzSpec::new(*n, pairs)
                    .map(ParsedMatrix::Toeplitz)
                    .map_err(|e| e.to_string())
            }
            MatrixFile::Hankel { n, entries } => {
                let pairs = parse_entry_map(entries)?;
                HankelSpec::new(*n, pairs)
                    .map(ParsedMatrix::Hankel)
                    .map_err(|e| e.to_string())
            }
            MatrixFile::Circulant { n, entries } => {
                if entries.len() != *n {
                    return Err(format!(
                        "circulant declares n = {n} but lists {} first-row entries",
                        entries.len()
                    ));
                }
                let row: Vec<Complex64> = entries
                    .iter()
                    .map(|[re, im]| {
                        if re.is_finite() && im.is_finite() {
                            Ok(Complex64::new(*re, *im))
                        } else {
                            Err("first-row entry is not finite".to_string())
                        }
                    })
                    .collect::<Result<_, _>>()?;
                CirculantSpec::new(row)
                    .map(ParsedMatrix::Circulant)
                    .map_err(|e| e.to_string())
            }
        }
    }

    pub fn from_toeplitz(t: &ToeplitzSpec) -> Self {
        MatrixFile::Toeplitz {
            n: t.dimension(),
            entries: t
                .diagonals()
                .map(|(k, v)| (k.to_string(), [v.re, v.im]))
                .collect(),
        }
    }

    pub fn from_hankel(h: &HankelSpec) -> Self {
        MatrixFile::Hankel {
            n: h.dimension(),
            entries: h
                .skew_diagonals()
                .map(|(k, v)| (k.to_string(), [v.re, v.im]))
                .collect(),
        }
    }

    pub fn from_circulant(c: &CirculantSpec) -> Self {
        MatrixFile::Circulant {
            n: c.dimension(),
            entries: c.first_row().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

pub fn read_matrix(path: &Path) -> Result<ParsedMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        action: "read",
        path: path.to_path_buf(),
        source,
    })?;
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| CliError::ParseMatrix {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    file.to_parsed().map_err(|message| CliError::ParseMatrix {
        path: path.to_path_buf(),
        message,
    })
}

pub fn write_matrix(path: &Path, file: &MatrixFile) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(file).expect("matrix files always serialize");
    fs::write(path, text + "\n").map_err(|source| CliError::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}

/// Parses the `re im` line format. Exposed for tests; command code goes
/// through [`read_vector`].
pub fn parse_vector(text: &str) -> Result<Vec<Complex64>, String> {
    let mut declared: Option<usize> = None;
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if declared.is_some() || !values.is_empty() {
                return Err(format!("line {}: unexpected second header", lineno + 1));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            match fields.as_slice() {
                ["dim", count] => {
                    declared = Some(count.parse().map_err(|_| {
                        format!("line {}: bad dimension in header", lineno + 1)
                    })?);
                }
                _ => return Err(format!("line {}: header must read '# dim N'", lineno + 1)),
            }
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(format!(
                "line {}: expected 're im', found {} fields",
                lineno + 1,
                fields.len()
            ));
        }
        let re: f64 = fields[0]
            .parse()
            .map_err(|_| format!("line {}: bad real part {:?}", lineno + 1, fields[0]))?;
        let im: f64 = fields[1]
            .parse()
            .map_err(|_| format!("line {}: bad imaginary part {:?}", lineno + 1, fields[1]))?;
        if !re.is_finite() || !im.is_finite() {
            return Err(format!("line {}: entries must be finite", lineno + 1));
        }
        values.push(Complex64::new(re, im));
    }
    if let Some(count) = declared {
        if count != values.len() {
            return Err(format!(
                "header declares dim {count} but file holds {} entries",
                values.len()
            ));
        }
    }
    if values.is_empty() {
        return Err("no entries found".to_string());
    }
    Ok(values)
}

pub fn read_vector(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        action: "read",
        path: path.to_path_buf(),
        source,
    })?;
    parse_vector(&text).map_err(|message| CliError::ParseVector {
        path: path.to_path_buf(),
        message,
    })
}

/// Renders a vector in the line format, headed by `# dim N`. The float
/// formatting is shortest-round-trip, so re-parsing reproduces the values
/// bit for bit.
pub fn format_vector(v: &[Complex64]) -> String {
    let mut out = format!("# dim {}\n", v.len());
    for z in v {
        let _ = writeln!(out, "{} {}", z.re, z.im);
    }
    out
}

pub fn write_vector(path: &Path, v: &[Complex64]) -> Result<(), CliError> {
    fs::write(path, format_vector(v)).map_err(|source| CliError::Io {
        action: "write",
        path: path.to_path_buf(),
        source,
    })
}
