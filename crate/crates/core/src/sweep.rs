//! Seeded verification sweeps producing one CSV row per sample.
//!
//! Sample `i` draws from its own ChaCha8 stream (master seed, stream `i`), so
//! the output does not depend on how samples are scheduled across threads.

mod samplers;

pub use samplers::closure as library_closure;

use crate::error::{domain, Result};
use crate::surface::SurfaceKind;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub kind: SurfaceKind,
    #[serde(default = "default_lengths")]
    pub lengths: [f64; 2],
    #[serde(default = "default_twist")]
    pub twist_max: f64,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_lengths() -> [f64; 2] {
    [0.1, 5.0]
}

fn default_twist() -> f64 {
    3.0
}

impl RunConfig {
    pub fn new(seed: u64, samples: usize, kind: SurfaceKind) -> Self {
        Self { seed, samples, kind, lengths: default_lengths(), twist_max: default_twist(), out: None }
    }

    pub fn validate(&self) -> Result<()> {
        SurfaceKind::new(self.kind.genus, self.kind.boundary)?;
        let [lo, hi] = self.lengths;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return domain(format!("length range [{lo}, {hi}] must satisfy 0 < min <= max"));
        }
        if self.samples == 0 {
            return domain("samples must be at least 1");
        }
        if !(self.twist_max >= 0.0 && self.twist_max.is_finite()) {
            return domain("twist range must be finite and non-negative");
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| crate::GeomError::Domain(format!("bad run config: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    Hexagon,
    Prop51,
    Thm52,
    Derivatives,
    Sliding,
    Quadrilateral,
    Holonomy,
    Upper,
    Triangle,
    Ineq11,
    Ineq12,
    Moves,
    Lemma41,
    Limit,
}

impl SweepKind {
    pub const ALL: [SweepKind; 14] = [
        SweepKind::Hexagon,
        SweepKind::Prop51,
        SweepKind::Thm52,
        SweepKind::Derivatives,
        SweepKind::Sliding,
        SweepKind::Quadrilateral,
        SweepKind::Holonomy,
        SweepKind::Upper,
        SweepKind::Triangle,
        SweepKind::Ineq11,
        SweepKind::Ineq12,
        SweepKind::Moves,
        SweepKind::Lemma41,
        SweepKind::Limit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepKind::Hexagon => "hexagon",
            SweepKind::Prop51 => "prop51",
            SweepKind::Thm52 => "thm52",
            SweepKind::Derivatives => "derivatives",
            SweepKind::Sliding => "sliding",
            SweepKind::Quadrilateral => "quadrilateral",
            SweepKind::Holonomy => "holonomy",
            SweepKind::Upper => "upper",
            SweepKind::Triangle => "triangle",
            SweepKind::Ineq11 => "ineq11",
            SweepKind::Ineq12 => "ineq12",
            SweepKind::Moves => "moves",
            SweepKind::Lemma41 => "lemma41",
            SweepKind::Limit => "limit",
        }
    }

    /// Input columns written before `lhs, rhs, margin, pass`.
    pub fn input_columns(self) -> &'static [&'static str] {
        match self {
            SweepKind::Hexagon | SweepKind::Prop51 | SweepKind::Derivatives => &["a", "b", "x"],
            SweepKind::Thm52 => &["a", "b", "x", "lambda", "mu", "side_from", "side_to"],
            SweepKind::Sliding => &["alpha", "d_q"],
            SweepKind::Quadrilateral => &["c", "t", "e"],
            SweepKind::Holonomy => &["fn", "slot", "delta_t"],
            SweepKind::Upper => &["fn", "curve"],
            SweepKind::Triangle => &["fn", "a", "b", "product"],
            SweepKind::Ineq11 => &["fn", "a", "b"],
            SweepKind::Ineq12 => &["fn1", "fn2", "curve", "mode"],
            SweepKind::Moves => &["fn", "target", "check"],
            SweepKind::Lemma41 => &["fn", "dt", "n"],
            SweepKind::Limit => &["fn", "direction", "n", "dt_n"],
        }
    }

    /// Whether the sweep needs exact lengths, available on `F_{1,1}` and
    /// `F_{0,4}` only.
    pub fn needs_words(self) -> bool {
        matches!(
            self,
            SweepKind::Holonomy
                | SweepKind::Upper
                | SweepKind::Triangle
                | SweepKind::Ineq11
                | SweepKind::Ineq12
                | SweepKind::Moves
                | SweepKind::Limit
        )
    }
}

impl fmt::Display for SweepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        SweepKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown sweep '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub index: usize,
    pub inputs: Vec<String>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub kind: SweepKind,
    pub samples: usize,
    pub failures: usize,
    pub min_margin: f64,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} samples, {} failures, min margin {}",
            self.kind,
            self.samples,
            self.failures,
            fmt_float(self.min_margin)
        )
    }
}

/// Seventeen significant digits, so every value reads back bit for bit.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Runs every sample of a sweep; rows come back in index order.
pub fn run(config: &RunConfig, kind: SweepKind) -> Result<Vec<Row>> {
    config.validate()?;
    let sampler = samplers::Sampler::new(config, kind)?;
    Ok((0..config.samples)
        .into_par_iter()
        .map(|i| sampler.row(i, &mut sample_rng(config.seed, i)))
        .collect())
}

pub fn summarize(kind: SweepKind, rows: &[Row]) -> Summary {
    Summary {
        kind,
        samples: rows.len(),
        failures: rows.iter().filter(|r| !r.pass).count(),
        min_margin: rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
    }
}

pub fn write_csv<W: Write>(kind: SweepKind, rows: &[Row], out: W) -> Result<()> {
    let io = |e: csv::Error| crate::GeomError::Internal(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["index"];
    header.extend(kind.input_columns());
    header.extend(["lhs", "rhs", "margin", "pass"]);
    w.write_record(&header).map_err(io)?;
    for r in rows {
        let mut rec = vec![r.index.to_string()];
        rec.extend(r.inputs.iter().cloned());
        rec.extend([fmt_float(r.lhs), fmt_float(r.rhs), fmt_float(r.margin), r.pass.to_string()]);
        w.write_record(&rec).map_err(io)?;
    }
    w.flush().map_err(|e| crate::GeomError::Internal(format!("csv output failed: {e}")))?;
    Ok(())
}
