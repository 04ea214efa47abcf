//! Persistent height table: one JSON record per line, append-only, guarded
//! by whole-file advisory locks so concurrent invocations do not interleave
//! writes. Records re-validate on load — the witness must certify and must
//! send lambda into {0, 1} at the recorded degree.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::ffi::OsString;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};

use belyi_core::height::HeightBounds;
use belyi_core::{certify, Poly, Rational};
use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable overriding the default table location; the
/// --table flag overrides both.
pub const TABLE_ENV: &str = "BELYI_TABLE";
pub const DEFAULT_TABLE: &str = "belyi_heights.jsonl";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("height table {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("height table {path} line {line}: {source}")]
    Record {
        path: PathBuf,
        line: usize,
        #[source]
        source: serde_json::Error,
    },
}

/// One table line. Deserialization re-validates, so any record read back
/// carries a checked witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RecordRepr", into = "RecordRepr")]
pub struct HeightRecord {
    lambda: Rational,
    lower: u64,
    upper: u64,
    exact: bool,
    witness_coeffs: Vec<Rational>,
    timestamp: String,
}

#[derive(Serialize, Deserialize)]
struct RecordRepr {
    lambda: Rational,
    lower: u64,
    upper: u64,
    exact: bool,
    witness_coeffs: Vec<Rational>,
    timestamp: String,
}

impl From<HeightRecord> for RecordRepr {
    fn from(r: HeightRecord) -> RecordRepr {
        RecordRepr {
            lambda: r.lambda,
            lower: r.lower,
            upper: r.upper,
            exact: r.exact,
            witness_coeffs: r.witness_coeffs,
            timestamp: r.timestamp,
        }
    }
}

impl TryFrom<RecordRepr> for HeightRecord {
    type Error = String;

    fn try_from(r: RecordRepr) -> Result<HeightRecord, String> {
        if r.lower > r.upper {
            return Err(format!(
                "lower bound {} exceeds upper bound {}",
                r.lower, r.upper
            ));
        }
        let witness = Poly::new(r.witness_coeffs.clone());
        certify(&witness).map_err(|e| format!("witness fails certification: {e}"))?;
        if witness.degree() != Some(r.upper as usize) {
            return Err(format!(
                "witness degree {:?} disagrees with upper bound {}",
                witness.degree(),
                r.upper
            ));
        }
        let image = witness.evaluate(&r.lambda);
        if !(image.is_zero() || image.is_one()) {
            return Err(format!(
                "witness sends {} to {}, not into {{0, 1}}",
                r.lambda, image
            ));
        }
        DateTime::parse_from_rfc3339(&r.timestamp)
            .map_err(|e| format!("bad timestamp {:?}: {e}", r.timestamp))?;
        Ok(HeightRecord {
            lambda: r.lambda,
            lower: r.lower,
            upper: r.upper,
            exact: r.exact,
            witness_coeffs: r.witness_coeffs,
            timestamp: r.timestamp,
        })
    }
}

impl HeightRecord {
    pub fn from_bounds(bounds: &HeightBounds, at: DateTime<Utc>) -> HeightRecord {
        HeightRecord {
            lambda: bounds.lambda.clone(),
            lower: bounds.lower,
            upper: bounds.upper,
            exact: bounds.exact,
            witness_coeffs: bounds.witness.subject().coeffs().to_vec(),
            timestamp: at.to_rfc3339_opts(SecondsFormat::Secs, true),
        }
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn lower(&self) -> u64 {
        self.lower
    }

    pub fn upper(&self) -> u64 {
        self.upper
    }

    pub fn exact(&self) -> bool {
        self.exact
    }

    pub fn witness_coeffs(&self) -> &[Rational] {
        &self.witness_coeffs
    }

    pub fn timestamp(&self) -> &str {
        &self.timestamp
    }
}

/// --table flag first, then the environment override, then the default
/// file in the working directory.
pub fn resolve_path(flag: Option<PathBuf>, env: Option<OsString>) -> PathBuf {
    flag.or_else(|| env.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_TABLE))
}

fn io_err(path: &Path, source: io::Error) -> TableError {
    TableError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Append one record under an exclusive lock, creating the table on first
/// use.
pub fn append(path: &Path, record: &HeightRecord) -> Result<(), TableError> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| io_err(path, e))?;
    file.lock().map_err(|e| io_err(path, e))?;
    let line = serde_json::to_string(record).expect("records serialize");
    writeln!(file, "{line}").map_err(|e| io_err(path, e))
}

fn parse_lines(path: &Path, lines: impl Iterator<Item = io::Result<String>>) -> Result<Vec<HeightRecord>, TableError> {
    let mut records = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| TableError::Record {
            path: path.to_path_buf(),
            line: idx + 1,
            source: e,
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Read and re-validate every record; a missing table is empty.
pub fn load(path: &Path) -> Result<Vec<HeightRecord>, TableError> {
    let file = match File::open(path) {
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        other => other.map_err(|e| io_err(path, e))?,
    };
    file.lock_shared().map_err(|e| io_err(path, e))?;
    parse_lines(path, BufReader::new(&file).lines())
}

/// Rewrite the table keeping one record per lambda: the lowest upper
/// bound wins and the earliest record wins ties, in first-appearance
/// order. Returns the number of records dropped.
pub fn compact(path: &Path) -> Result<usize, TableError> {
    let mut file = match OpenOptions::new().read(true).write(true).open(path) {
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(0),
        other => other.map_err(|e| io_err(path, e))?,
    };
    file.lock().map_err(|e| io_err(path, e))?;
    let mut text = String::new();
    file.read_to_string(&mut text).map_err(|e| io_err(path, e))?;
    let records = parse_lines(path, text.lines().map(|l| Ok(l.to_owned())))?;

    let total = records.len();
    let mut kept: Vec<HeightRecord> = Vec::new();
    let mut slot_of: HashMap<Rational, usize> = HashMap::new();
    for record in records {
        match slot_of.entry(record.lambda.clone()) {
            Entry::Occupied(slot) => {
                let at = *slot.get();
                if record.upper < kept[at].upper {
                    kept[at] = record;
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(kept.len());
                kept.push(record);
            }
        }
    }

    file.set_len(0).map_err(|e| io_err(path, e))?;
    file.seek(SeekFrom::Start(0)).map_err(|e| io_err(path, e))?;
    for record in &kept {
        let line = serde_json::to_string(record).expect("records serialize");
        writeln!(file, "{line}").map_err(|e| io_err(path, e))?;
    }
    Ok(total - kept.len())
}
