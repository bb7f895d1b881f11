use std::io::Write;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};

use qmc::core::json::{isometry_from_str, matrix_from_str};
use qmc::ergodic::{ErgodicTol, DEFAULT_TENSOR_CAP};
use qmc::qubit_example::QubitModel;
use qmc::{ComplexMatrix, Isometry, QmcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Settings shared by every subcommand. They are echoed into each output so
/// that a table can be reproduced from itself.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Eigenvalues with modulus at least 1 - this value count as peripheral.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_peripheral: f64,
    /// Smallest eigenvalue of the stationary state accepted as faithful.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_faithful: f64,
    /// Distance to 1 below which an eigenvalue is counted as 1.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_simplicity: f64,
    /// Largest k^n allowed for dense output tensors.
    #[arg(long, global = true, default_value_t = DEFAULT_TENSOR_CAP)]
    pub cap_tensor: usize,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn tol(&self) -> Result<ErgodicTol> {
        let t = ErgodicTol {
            peripheral_band: self.tol_peripheral,
            faithfulness_floor: self.tol_faithful,
            simplicity_gap: self.tol_simplicity,
        };
        t.validate()?;
        if self.cap_tensor == 0 {
            return Err(QmcError::InvalidInput("--cap-tensor must be positive".into()));
        }
        Ok(t)
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn settings(&self) -> Value {
        json!({
            "tol_peripheral": self.tol_peripheral,
            "tol_faithful": self.tol_faithful,
            "tol_simplicity": self.tol_simplicity,
            "cap_tensor": self.cap_tensor,
        })
    }

    fn comment_lines(&self) -> Vec<String> {
        vec![
            format!(
                "# tol_peripheral={} tol_faithful={} tol_simplicity={} cap_tensor={}",
                self.tol_peripheral, self.tol_faithful, self.tol_simplicity, self.cap_tensor
            ),
        ]
    }
}

/// An isometry either read from a JSON file or taken from a qubit family.
#[derive(Debug, Clone, Args)]
pub struct IsoSource {
    /// Isometry JSON file.
    pub input: Option<PathBuf>,
    /// Qubit family instead of a file: m1, m2, m3 or shift.
    #[arg(long, conflicts_with = "input")]
    pub model: Option<String>,
    /// Parameter of the family; defaults to its reference point.
    #[arg(long, requires = "model")]
    pub theta: Option<f64>,
}

pub struct Loaded {
    pub iso: Isometry,
    pub model: Option<(QubitModel, f64)>,
}

impl IsoSource {
    pub fn load_or(&self, default_model: Option<&str>) -> Result<Loaded> {
        if let Some(path) = &self.input {
            return Ok(Loaded { iso: read_isometry(path)?, model: None });
        }
        let name = self
            .model
            .as_deref()
            .or(default_model)
            .ok_or_else(|| QmcError::InvalidInput("give an isometry file or --model".into()))?;
        let model = QubitModel::parse(name)?;
        let theta = self.theta.unwrap_or(model.reference_theta());
        Ok(Loaded { iso: model.isometry(theta)?, model: Some((model, theta)) })
    }

    pub fn describe(&self, loaded: &Loaded) -> Value {
        match (&self.input, loaded.model) {
            (Some(p), _) => json!({ "file": p.display().to_string() }),
            (None, Some((m, t))) => json!({ "model": m.name(), "theta": t }),
            _ => Value::Null,
        }
    }
}

pub fn read_isometry(path: &PathBuf) -> Result<Isometry> {
    isometry_from_str(&std::fs::read_to_string(path)?)
}

pub fn read_matrix(path: &PathBuf) -> Result<ComplexMatrix> {
    matrix_from_str(&std::fs::read_to_string(path)?)
}

/// A closed stdout (`qmc ... | head`) is not an error.
fn quiet_pipe(r: std::io::Result<()>) -> Result<()> {
    match r {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        other => Ok(other?),
    }
}

pub fn print_json(v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v)?;
    let mut out = std::io::stdout().lock();
    quiet_pipe(writeln!(out, "{text}"))
}

/// CSV table preceded by `#` comment lines carrying the run settings.
pub struct Table {
    comments: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(cfg: &RunConfig, header: &[&str]) -> Self {
        Table {
            comments: cfg.comment_lines(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_header(cfg: &RunConfig, header: Vec<String>) -> Self {
        Table { comments: cfg.comment_lines(), header, rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(format!("# {}", line.into()));
    }

    pub fn row(&mut self, values: Vec<String>) {
        self.rows.push(values);
    }

    pub fn render(&self) -> Result<String> {
        let mut text = String::new();
        for c in &self.comments {
            text.push_str(c);
            text.push('\n');
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        let body = w.into_inner().map_err(|e| QmcError::Io(std::io::Error::other(e.to_string())))?;
        text.push_str(&String::from_utf8_lossy(&body));
        Ok(text)
    }

    pub fn print(&self) -> Result<()> {
        let text = self.render()?;
        quiet_pipe(std::io::stdout().lock().write_all(text.as_bytes()))
    }
}

fn csv_err(e: csv::Error) -> QmcError {
    QmcError::Io(std::io::Error::other(e.to_string()))
}

pub fn num(x: f64) -> String {
    format!("{x:e}")
}
