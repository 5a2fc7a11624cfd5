//! Report rows and their CSV / JSON serialisation.
//!
//! CSV columns are fixed; floats are written with 17 significant digits so
//! two runs of the same config differ only in the `seconds` column.

use std::io::Write;

use serde::Serialize;

use crate::analysis::UNRELIABLE_REFINEMENT;
use crate::config::RunConfig;
use crate::cylinder::CylinderSpace;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 13] =
    ["command", "d", "m", "mu", "alpha", "beta", "n", "delta", "quantity", "value", "refinement", "flag", "seconds"];

pub const FLAG_UNRELIABLE: &str = "unreliable";
pub const FLAG_PASS: &str = "pass";
pub const FLAG_FAIL: &str = "fail";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub command: String,
    pub d: usize,
    pub m: usize,
    pub mu: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub quantity: String,
    pub value: f64,
    /// Relative change under node doubling; absent for exact quantities.
    pub refinement: Option<f64>,
    pub flag: String,
    pub seconds: f64,
}

impl Row {
    pub fn new(command: &str, space: &CylinderSpace, quantity: impl Into<String>, value: f64) -> Self {
        Row {
            command: command.to_string(),
            d: space.d(),
            m: space.m(),
            mu: space.mu(),
            alpha: space.alpha().to_vec(),
            beta: space.beta().to_vec(),
            n: None,
            delta: None,
            quantity: quantity.into(),
            value,
            refinement: None,
            flag: String::new(),
            seconds: 0.0,
        }
    }

    pub fn at(mut self, n: usize, delta: f64) -> Self {
        self.n = Some(n);
        self.delta = Some(delta);
        self
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    /// Attaches a refinement figure and flags it when above the threshold.
    pub fn refined(mut self, refinement: f64) -> Self {
        self.refinement = Some(refinement);
        if !(refinement <= UNRELIABLE_REFINEMENT) {
            self.flag = FLAG_UNRELIABLE.to_string();
        }
        self
    }

    pub fn flagged(mut self, flag: impl Into<String>) -> Self {
        self.flag = flag.into();
        self
    }

    pub fn timed(mut self, seconds: f64) -> Self {
        self.seconds = seconds;
        self
    }
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| fmt_float(*x)).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub config: RunConfig,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, rows: Vec<Row>) -> Self {
        Report {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            rows,
        }
    }

    /// True when any row carries the `fail` flag.
    pub fn has_failure(&self) -> bool {
        self.rows.iter().any(|r| r.flag == FLAG_FAIL)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::InvalidParameter(format!("writing CSV: {e}"));
        w.write_record(CSV_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.command.clone(),
                r.d.to_string(),
                r.m.to_string(),
                fmt_float(r.mu),
                fmt_list(&r.alpha),
                fmt_list(&r.beta),
                r.n.map(|n| n.to_string()).unwrap_or_default(),
                r.delta.map(fmt_float).unwrap_or_default(),
                r.quantity.clone(),
                fmt_float(r.value),
                r.refinement.map(fmt_float).unwrap_or_default(),
                r.flag.clone(),
                format!("{:.6e}", r.seconds),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(format!("writing CSV: {e}")))
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, self)
            .map_err(|e| Error::InvalidParameter(format!("writing JSON: {e}")))?;
        out.write_all(b"\n").map_err(|e| Error::InvalidParameter(format!("writing JSON: {e}")))
    }
}
