//! Sweeps and the CSV convergence table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "r,t,epsilon,exact,asymptotic,ratio";

/// How t is chosen at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Coupling {
    /// The same t everywhere.
    FixedTime { t: f64 },
    /// t solved from epsilon(t, r) = target at every point.
    Epsilon { target: f64 },
    /// Target epsilon log-interpolated from `from` at the first point to `to` at the last.
    EpsilonRamp { from: f64, to: f64 },
}

impl Coupling {
    /// Parses `t=<value>`, `eps=<value>` or `eps=<from>:<to>`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad coupling {text:?}; use t=<value>, eps=<value> or eps=<from>:<to>"));
        let (key, value) = text.split_once('=').ok_or_else(bad)?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
        let coupling = match key.trim() {
            "t" => Coupling::FixedTime { t: num(value)? },
            "eps" | "epsilon" => match value.split_once(':') {
                Some((a, b)) => Coupling::EpsilonRamp { from: num(a)?, to: num(b)? },
                None => Coupling::Epsilon { target: num(value)? },
            },
            _ => return Err(bad()),
        };
        coupling.validate()?;
        Ok(coupling)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v.is_finite();
        let valid = match *self {
            Coupling::FixedTime { t } => ok(t),
            Coupling::Epsilon { target } => ok(target),
            Coupling::EpsilonRamp { from, to } => ok(from) && ok(to) && to < from,
        };
        if valid {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid coupling {self:?}: values must be positive and a ramp must decrease")))
        }
    }

    pub fn is_epsilon(&self) -> bool {
        !matches!(self, Coupling::FixedTime { .. })
    }

    /// Target epsilon at point i of n, if epsilon-coupled.
    pub fn target(&self, i: usize, n: usize) -> Option<f64> {
        match *self {
            Coupling::FixedTime { .. } => None,
            Coupling::Epsilon { target } => Some(target),
            Coupling::EpsilonRamp { from, to } => {
                let s = i as f64 / (n.max(2) - 1) as f64;
                Some((from.ln() + s * (to.ln() - from.ln())).exp())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVariable {
    /// Tail level of a subordinator or an isotropic process.
    R,
    /// Density radius.
    Radius,
}

/// Log-spaced sweep over r with a rule for t.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub coupling: Coupling,
}

impl SweepSpec {
    /// Parses `start:stop:steps`.
    pub fn parse(variable: SweepVariable, sweep: &str, coupling: Coupling) -> Result<Self> {
        let bad = || Error::Config(format!("bad sweep {sweep:?}; use start:stop:steps"));
        let parts: Vec<&str> = sweep.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let start = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
        let stop = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
        let steps = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
        let spec = SweepSpec { variable, start, stop, steps, coupling };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start > 0.0 && self.start < self.stop && self.stop.is_finite()) {
            return Err(Error::Config(format!("sweep needs 0 < start < stop, got {}:{}", self.start, self.stop)));
        }
        if self.steps < 2 {
            return Err(Error::Config("sweep needs at least 2 steps".into()));
        }
        self.coupling.validate()
    }

    pub fn points(&self) -> Vec<f64> {
        let (a, b) = (self.start.ln(), self.stop.ln());
        (0..self.steps)
            .map(|i| {
                if i == 0 {
                    self.start
                } else if i == self.steps - 1 {
                    self.stop
                } else {
                    (a + (b - a) * i as f64 / (self.steps - 1) as f64).exp()
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub r: f64,
    pub t: f64,
    pub epsilon: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub ratio: f64,
}

impl Row {
    pub fn new(r: f64, t: f64, epsilon: f64, exact: f64, asymptotic: f64) -> Self {
        Row { r, t, epsilon, exact, asymptotic, ratio: exact / asymptotic }
    }

    /// A row whose oracle or prediction failed.
    pub fn failed(r: f64, t: f64) -> Self {
        Row { r, t, epsilon: f64::NAN, exact: f64::NAN, asymptotic: f64::NAN, ratio: f64::NAN }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowError {
    pub row: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub process: String,
    pub params: BTreeMap<String, f64>,
    pub theorem: String,
    pub regime: String,
    pub sweep: SweepSpec,
    pub oracle: String,
    #[serde(default)]
    pub row_errors: Vec<RowError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub meta: TableMeta,
    pub rows: Vec<Row>,
}

fn parse_field(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad number {s:?} in table")))
}

impl ConvergenceTable {
    /// `# {json}` line, header, then one line per row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.meta).expect("metadata serializes");
        writeln!(out, "# {meta}").unwrap();
        writeln!(out, "{CSV_HEADER}").unwrap();
        for row in &self.rows {
            writeln!(out, "{:e},{:e},{:e},{:e},{:e},{:e}", row.r, row.t, row.epsilon, row.exact, row.asymptotic, row.ratio).unwrap();
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let first = lines.next().ok_or_else(|| Error::Config("empty table".into()))?;
        let json = first.strip_prefix("# ").ok_or_else(|| Error::Config("missing metadata line".into()))?;
        let meta: TableMeta = serde_json::from_str(json).map_err(|e| Error::Config(format!("bad metadata: {e}")))?;
        if lines.next().map(str::trim) != Some(CSV_HEADER) {
            return Err(Error::Config("missing or wrong CSV header".into()));
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(Error::Config(format!("expected 6 columns, got {line:?}")));
            }
            rows.push(Row {
                r: parse_field(f[0])?,
                t: parse_field(f[1])?,
                epsilon: parse_field(f[2])?,
                exact: parse_field(f[3])?,
                asymptotic: parse_field(f[4])?,
                ratio: parse_field(f[5])?,
            });
        }
        Ok(ConvergenceTable { meta, rows })
    }

    /// |ratio - 1| at the last row; NaN when that row failed.
    pub fn final_deviation(&self) -> f64 {
        self.rows.last().map(|r| (r.ratio - 1.0).abs()).unwrap_or(f64::NAN)
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.final_deviation() <= threshold
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ConvergenceTable {
        let sweep = SweepSpec::parse(SweepVariable::R, "10:1e6:6", Coupling::parse("eps=1e-4").unwrap()).unwrap();
        let rows = sweep.points().iter().map(|&r| Row::new(r, 1e-4 * r.sqrt(), 1e-4, 1.0 / 3.0 + r * 1e-9, 1.0 / 3.0)).collect();
        ConvergenceTable {
            meta: TableMeta {
                process: "stable-sub".into(),
                params: BTreeMap::from([("gamma".to_string(), 0.5)]),
                theorem: "T1_1".into(),
                regime: "at-zero".into(),
                sweep,
                oracle: "closed-form".into(),
                row_errors: vec![RowError { row: 2, error: "example".into() }],
            },
            rows,
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = table();
        let text = t.to_csv();
        assert!(text.starts_with("# {"));
        assert_eq!(text.lines().nth(1), Some(CSV_HEADER));
        let back = ConvergenceTable::from_csv(&text).unwrap();
        assert_eq!(back, t);
        for row in &back.rows {
            assert!((row.exact / row.asymptotic - row.ratio).abs() <= 1e-12 * row.ratio.abs());
        }
    }

    #[test]
    fn nan_rows_survive() {
        let mut t = table();
        t.rows.push(Row::failed(2e6, 1.0));
        let back = ConvergenceTable::from_csv(&t.to_csv()).unwrap();
        assert!(back.rows.last().unwrap().ratio.is_nan());
        assert!(!back.passes(0.5));
    }

    #[test]
    fn sweep_parsing() {
        let c = Coupling::parse("t=0.01").unwrap();
        let s = SweepSpec::parse(SweepVariable::Radius, "1e1:1e5:5", c).unwrap();
        let p = s.points();
        assert_eq!(p.len(), 5);
        assert_eq!(p[0], 10.0);
        assert_eq!(p[4], 1e5);
        assert!((p[2] - 1e3).abs() < 1e-9);
        assert!(SweepSpec::parse(SweepVariable::R, "5:1:3", c).is_err());
        assert!(SweepSpec::parse(SweepVariable::R, "1:5:1", c).is_err());
        assert!(SweepSpec::parse(SweepVariable::R, "1:5", c).is_err());
        assert!(Coupling::parse("eps=-1").is_err());
        assert!(Coupling::parse("eps=1e-6:1e-3").is_err());
        assert!(Coupling::parse("x=1").is_err());
        let ramp = Coupling::parse("eps=1e-2:1e-6").unwrap();
        assert!((ramp.target(0, 5).unwrap() - 1e-2).abs() < 1e-15);
        assert!((ramp.target(4, 5).unwrap() - 1e-6).abs() < 1e-18);
        assert!(ramp.target(2, 5).unwrap() < ramp.target(1, 5).unwrap());
    }
}
