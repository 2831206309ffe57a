//! CSV schema of experiment results.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

pub const HEADER: [&str; 13] = [
    "problem",
    "n",
    "mode",
    "sequence",
    "L",
    "steps_req",
    "steps_taken",
    "halvings",
    "eps_r",
    "eps_a",
    "max_rel_err",
    "elapsed_s",
    "status",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Breakdown,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Breakdown => "breakdown",
            Status::Error => "error",
        })
    }
}

impl FromStr for Status {
    type Err = RowError;

    fn from_str(s: &str) -> Result<Self, RowError> {
        match s {
            "ok" => Ok(Status::Ok),
            "breakdown" => Ok(Status::Breakdown),
            "error" => Ok(Status::Error),
            other => Err(RowError::Field { field: "status", value: other.to_string() }),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RowError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("bad value {value:?} in column {field}")]
    Field { field: &'static str, value: String },
}

/// One line of the results file. Failed runs carry `max_rel_err = NaN`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub problem: String,
    pub n: usize,
    pub mode: String,
    pub sequence: String,
    pub stages: usize,
    pub steps_req: usize,
    pub steps_taken: usize,
    pub halvings: usize,
    pub eps_r: f64,
    pub eps_a: f64,
    pub max_rel_err: f64,
    pub elapsed_s: f64,
    pub status: Status,
}

impl ResultRow {
    /// Bitwise comparison, so NaN fields compare equal to themselves.
    pub fn same_bits(&self, other: &ResultRow) -> bool {
        let f = |a: f64, b: f64| a.to_bits() == b.to_bits();
        self.problem == other.problem
            && self.n == other.n
            && self.mode == other.mode
            && self.sequence == other.sequence
            && self.stages == other.stages
            && self.steps_req == other.steps_req
            && self.steps_taken == other.steps_taken
            && self.halvings == other.halvings
            && f(self.eps_r, other.eps_r)
            && f(self.eps_a, other.eps_a)
            && f(self.max_rel_err, other.max_rel_err)
            && f(self.elapsed_s, other.elapsed_s)
            && self.status == other.status
    }

    fn record(&self) -> [String; 13] {
        [
            self.problem.clone(),
            self.n.to_string(),
            self.mode.clone(),
            self.sequence.clone(),
            self.stages.to_string(),
            self.steps_req.to_string(),
            self.steps_taken.to_string(),
            self.halvings.to_string(),
            sci(self.eps_r),
            sci(self.eps_a),
            sci(self.max_rel_err),
            sci(self.elapsed_s),
            self.status.to_string(),
        ]
    }

    fn from_record(r: &csv::StringRecord) -> Result<Self, RowError> {
        fn field<T: FromStr>(r: &csv::StringRecord, k: usize) -> Result<T, RowError> {
            let s = r.get(k).unwrap_or_default();
            s.parse().map_err(|_| RowError::Field { field: HEADER[k], value: s.to_string() })
        }
        Ok(Self {
            problem: field(r, 0)?,
            n: field(r, 1)?,
            mode: field(r, 2)?,
            sequence: field(r, 3)?,
            stages: field(r, 4)?,
            steps_req: field(r, 5)?,
            steps_taken: field(r, 6)?,
            halvings: field(r, 7)?,
            eps_r: field(r, 8)?,
            eps_a: field(r, 9)?,
            max_rel_err: field(r, 10)?,
            elapsed_s: field(r, 11)?,
            status: field(r, 12)?,
        })
    }
}

/// 17 significant digits in scientific notation; parses back to the same bits.
pub fn sci(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn write_csv<W: Write>(out: W, rows: &[ResultRow]) -> Result<(), RowError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ResultRow>, RowError> {
    let mut rd = csv::Reader::from_reader(input);
    let header = rd.headers()?;
    if header.iter().ne(HEADER) {
        return Err(RowError::Header(header.iter().map(String::from).collect()));
    }
    rd.records().map(|r| ResultRow::from_record(&r?)).collect()
}
