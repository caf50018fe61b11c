//! Artifacts of one run: CSV and JSON files plus `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};

use kite_core::continuation::{BranchRow, CurvePoint};
use kite_core::Interval;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::CliError;

/// How a command's verdict came out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
    BudgetExceeded,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Holds => 0,
            Status::Fails => 2,
            Status::BudgetExceeded => 3,
        }
    }

    pub fn from_checks(holds: bool, budget_exceeded: bool) -> Self {
        match (holds, budget_exceeded) {
            (true, _) => Status::Holds,
            (false, true) => Status::BudgetExceeded,
            (false, false) => Status::Fails,
        }
    }
}

/// Result of a command: files to write, a verdict and summary counts.
pub struct Outcome {
    pub files: Vec<(&'static str, String)>,
    pub status: Status,
    pub counts: Value,
}

impl Outcome {
    pub fn new(status: Status, counts: Value) -> Self {
        Outcome {
            files: Vec::new(),
            status,
            counts,
        }
    }

    pub fn json(mut self, name: &'static str, value: &impl Serialize) -> Self {
        let text = serde_json::to_string_pretty(value).expect("output serializes");
        self.files.push((name, text + "\n"));
        self
    }

    pub fn text(mut self, name: &'static str, text: String) -> Self {
        self.files.push((name, text));
        self
    }
}

/// Enclosure bound with 17 significant digits.
pub fn bound(x: f64) -> String {
    format!("{x:.16e}")
}

fn push_interval(record: &mut Vec<String>, x: Interval) {
    record.push(bound(x.lo()));
    record.push(bound(x.hi()));
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let rows = points.iter().map(|p| {
        let mut r = Vec::new();
        for x in [p.a, p.b, p.m] {
            push_interval(&mut r, x);
        }
        r
    });
    csv_text(&["a_lo", "a_hi", "b_lo", "b_hi", "m_lo", "m_hi"], rows)
}

pub const BRANCH_HEADER: [&str; 11] = [
    "m",
    "branch",
    "q3x_lo",
    "q3x_hi",
    "q3y_lo",
    "q3y_hi",
    "q4x_lo",
    "q4x_hi",
    "q4y_lo",
    "q4y_hi",
    "symmetric",
];

pub fn branch_record(
    m: String,
    branch: String,
    q3: [Interval; 2],
    q4: [Interval; 2],
    symmetric: bool,
) -> Vec<String> {
    let mut r = vec![m, branch];
    for x in q3.into_iter().chain(q4) {
        push_interval(&mut r, x);
    }
    r.push(symmetric.to_string());
    r
}

pub fn branches_csv(rows: &[BranchRow]) -> String {
    let records = rows.iter().map(|b| {
        branch_record(
            b.m.to_string(),
            b.branch.to_string(),
            b.q3,
            b.q4,
            b.symmetric,
        )
    });
    csv_text(&BRANCH_HEADER, records)
}

pub fn table_csv(header: &[&str], rows: Vec<Vec<String>>) -> String {
    csv_text(header, rows)
}

fn sha256(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Serialize)]
struct FileRecord {
    path: PathBuf,
    sha256: String,
    bytes: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: &'a [String],
    config: &'a RunConfig,
    inputs: Vec<FileRecord>,
    outputs: Vec<FileRecord>,
    status: Status,
    exit_code: u8,
    wall_time_seconds: f64,
    counts: &'a Value,
}

/// Checks that every JSON output parses and every CSV output has rows of
/// equal length.
fn validate(name: &str, text: &str) -> Result<(), CliError> {
    let bad = |e: String| CliError::BadInput(format!("{name} failed validation: {e}"));
    if name.ends_with(".json") {
        serde_json::from_str::<Value>(text).map_err(|e| bad(e.to_string()))?;
    } else if name.ends_with(".csv") {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        for rec in r.records() {
            rec.map_err(|e| bad(e.to_string()))?;
        }
    }
    Ok(())
}

/// Writes the outputs and the manifest into `cfg.out`.
pub fn write_run(
    outcome: &Outcome,
    argv: &[String],
    cfg: &RunConfig,
    inputs: &[(PathBuf, Vec<u8>)],
    wall_time_seconds: f64,
) -> Result<PathBuf, CliError> {
    let dir: &Path = &cfg.out;
    fs::create_dir_all(dir)?;
    let mut outputs = Vec::new();
    for (name, text) in &outcome.files {
        validate(name, text)?;
        let path = dir.join(name);
        fs::write(&path, text)?;
        outputs.push(FileRecord {
            path,
            sha256: sha256(text.as_bytes()),
            bytes: text.len(),
        });
    }
    let manifest = Manifest {
        command: argv,
        config: cfg,
        inputs: inputs
            .iter()
            .map(|(path, bytes)| FileRecord {
                path: path.clone(),
                sha256: sha256(bytes),
                bytes: bytes.len(),
            })
            .collect(),
        outputs,
        status: outcome.status,
        exit_code: outcome.status.exit_code(),
        wall_time_seconds,
        counts: &outcome.counts,
    };
    let path = dir.join("manifest.json");
    fs::write(
        &path,
        serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n",
    )?;
    Ok(path)
}
