//! File formats and persisted records for the command-line harness.
//!
//! Complex numbers are encoded as two-element `[re, im]` arrays and
//! matrices as row-major nested arrays, so state and unitary files are
//! unambiguous without language-specific conventions. CSV output is
//! RFC-4180-style with a header row and 17-significant-digit decimals,
//! enough to round-trip doubles bit-faithfully.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::AnalyticReport;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, LogBase, Spectrum, UnitaryMatrix};
use crate::search::{Measure, SearchResult};
use num_complex::Complex64;

/// Row-major complex matrix as `[re, im]` pairs.
pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    let d = m.dim();
    (0..d)
        .map(|i| (0..d).map(|j| [m.get(i, j).re, m.get(i, j).im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix> {
    let d = rows.len();
    if d == 0 {
        return Err(Error::Parse("matrix must have at least one row".into()));
    }
    let mut entries = Vec::with_capacity(d * d);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(Error::Parse(format!(
                "row {i} has {} entries, expected {d} (matrix must be square)",
                row.len()
            )));
        }
        for &[re, im] in row {
            entries.push(Complex64::new(re, im));
        }
    }
    ComplexMatrix::new(d, entries)
}

/// On-disk state: either a spectrum (diagonal state) or a full matrix.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixJson>,
}

impl StateFile {
    pub fn into_density(self) -> Result<DensityMatrix> {
        match (self.spectrum, self.matrix) {
            (Some(spec), None) => {
                DensityMatrix::from_spectrum(&Spectrum::in_given_order(spec)?)
            }
            (None, Some(rows)) => DensityMatrix::new(matrix_from_json(&rows)?),
            (Some(_), Some(_)) => Err(Error::Parse(
                "state file must contain either \"spectrum\" or \"matrix\", not both".into(),
            )),
            (None, None) => Err(Error::Parse(
                "state file must contain a \"spectrum\" or \"matrix\" key".into(),
            )),
        }
    }
}

/// On-disk unitary with optional sampling provenance.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitaryFile {
    pub unitary: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stream: Option<u64>,
}

impl UnitaryFile {
    pub fn from_unitary(u: &UnitaryMatrix, seed: Option<u64>, stream: Option<u64>) -> Self {
        Self {
            unitary: matrix_to_json(u.matrix()),
            seed,
            stream,
        }
    }

    pub fn into_unitary(self) -> Result<UnitaryMatrix> {
        UnitaryMatrix::new(matrix_from_json(&self.unitary)?)
    }
}

pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    read_json::<StateFile>(path)?.into_density()
}

pub fn load_unitary(path: &Path) -> Result<UnitaryMatrix> {
    read_json::<UnitaryFile>(path)?.into_unitary()
}

/// Parse a JSON file, naming the file and line/column on failure.
pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Echo of a search invocation; exactly one state source is set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dimension: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_path: Option<String>,
    pub measure: Measure,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub log_base: LogBase,
    pub top_k: usize,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        match (&self.spectrum, &self.state_path) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidState(
                    "spectrum and state file are mutually exclusive".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidState(
                    "a spectrum or a state file is required".into(),
                ))
            }
            _ => {}
        }
        if self.samples == 0 {
            return Err(Error::InvalidState("sample count must be >= 1".into()));
        }
        if self.top_k == 0 {
            return Err(Error::InvalidState("top-k must be >= 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidState("worker count must be >= 1".into()));
        }
        Ok(())
    }
}

/// Search summary stored inside a [`ResultRecord`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSummary {
    pub samples: u64,
    pub best_value: f64,
    pub reference: f64,
    pub best_margin: f64,
    pub violation_count: u64,
    pub top_values: Vec<f64>,
    pub best_unitary: MatrixJson,
}

impl From<&SearchResult> for SearchSummary {
    fn from(r: &SearchResult) -> Self {
        Self {
            samples: r.samples,
            best_value: r.best_value,
            reference: r.reference,
            best_margin: r.best_margin,
            violation_count: r.violation_count,
            top_values: r.top_values.clone(),
            best_unitary: matrix_to_json(r.best_unitary.matrix()),
        }
    }
}

/// Wall-clock metadata, kept apart from the deterministic payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMeta {
    pub timestamp_unix: u64,
}

impl RunMeta {
    pub fn now() -> Self {
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self { timestamp_unix }
    }
}

/// Full record of a search run: config echo, freshly recomputed analytic
/// references, the search summary, and segregated metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultRecord {
    pub version: String,
    pub config: ExperimentConfig,
    pub analytic: AnalyticReport,
    pub search: SearchSummary,
    pub meta: RunMeta,
}

impl ResultRecord {
    pub fn new(config: ExperimentConfig, analytic: AnalyticReport, search: &SearchResult) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            analytic,
            search: SearchSummary::from(search),
            meta: RunMeta::now(),
        }
    }

    /// Internal consistency of a (possibly re-parsed) record.
    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if let Some(&top) = self.search.top_values.first() {
            if (top - self.search.best_value).abs() > 0.0 {
                return Err(Error::InvalidState(
                    "best value must equal the first top value".into(),
                ));
            }
        }
        if !self
            .search
            .top_values
            .windows(2)
            .all(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidState("top values must be descending".into()));
        }
        let margin = self.search.best_value - self.search.reference;
        if (margin - self.search.best_margin).abs() > 1e-15 {
            return Err(Error::InvalidState("margin inconsistent".into()));
        }
        Ok(())
    }
}

/// Top-k table as CSV: `rank,value,violation`.
pub fn top_k_csv(result: &SearchResult) -> String {
    let mut out = String::from("rank,value,violation\n");
    for (i, v) in result.top_values.iter().enumerate() {
        out.push_str(&format!(
            "{},{:.16e},{}\n",
            i + 1,
            v,
            *v > result.reference
        ));
    }
    out
}

/// Static scatter of top-k values (rank on x, value on y) with a dashed
/// reference line.
pub fn scatter_svg(top_values: &[f64], reference: f64, title: &str) -> String {
    let width = 640.0;
    let height = 400.0;
    let margin = 60.0;
    let n = top_values.len().max(1);

    let mut lo = reference;
    let mut hi = reference;
    for &v in top_values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    let span = (hi - lo).max(1e-9);
    lo -= 0.15 * span;
    hi += 0.15 * span;

    let x = |rank: usize| margin + (rank as f64) * (width - 2.0 * margin) / (n as f64 + 1.0);
    let y = |v: f64| height - margin - (v - lo) / (hi - lo) * (height - 2.0 * margin);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{title}</text>\n",
        width / 2.0
    ));
    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n  \
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>\n",
        m = margin,
        b = height - margin,
        r = width - margin,
        t = margin
    ));
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">rank</text>\n",
        width / 2.0,
        height - margin / 3.0
    ));
    svg.push_str(&format!(
        "  <text x=\"12\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" \
         transform=\"rotate(-90 12 {})\">value</text>\n",
        height / 2.0,
        height / 2.0
    ));
    for (label, v) in [(format!("{lo:.6}"), lo), (format!("{hi:.6}"), hi)] {
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"10\">{label}</text>\n",
            margin - 6.0,
            y(v) + 4.0
        ));
    }
    // Dashed reference line.
    svg.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{ry}\" x2=\"{}\" y2=\"{ry}\" stroke=\"red\" \
         stroke-dasharray=\"6,4\"/>\n  <text x=\"{}\" y=\"{}\" text-anchor=\"end\" \
         font-family=\"sans-serif\" font-size=\"10\" fill=\"red\">reference {reference:.6}</text>\n",
        margin,
        width - margin,
        width - margin,
        y(reference) - 6.0,
        ry = y(reference)
    ));
    for (i, &v) in top_values.iter().enumerate() {
        let fill = if v > reference { "red" } else { "steelblue" };
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{fill}\"/>\n",
            x(i + 1),
            y(v)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}
