use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Where a table's ordinates came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    File(PathBuf),
    Computed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::File(p) => write!(f, "{}", p.display()),
            Provenance::Computed => f.write_str("computed"),
        }
    }
}

/// Immutable, strictly increasing sequence of positive zero ordinates.
///
/// `t_max` is the height up to which the table is complete; it never exceeds
/// the last ordinate of the underlying source.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    ordinates: Arc<[f64]>,
    t_max: f64,
    source: Provenance,
}

impl ZeroTable {
    /// Checks ordering and positivity. `t_max` defaults to the last ordinate.
    pub fn new(ordinates: Vec<f64>, t_max: Option<f64>, source: Provenance) -> Result<Self> {
        let path = match &source {
            Provenance::File(p) => p.clone(),
            Provenance::Computed => PathBuf::from("computed"),
        };
        for (i, w) in ordinates.windows(2).enumerate() {
            if !(w[1] > w[0]) {
                return Err(Error::CorruptDataset {
                    path,
                    line: i + 2,
                    reason: format!("ordinates not strictly increasing: {} then {}", w[0], w[1]),
                });
            }
        }
        if let Some(&first) = ordinates.first() {
            if !(first > 0.0) {
                return Err(Error::CorruptDataset {
                    path,
                    line: 1,
                    reason: format!("non-positive ordinate {first}"),
                });
            }
        }
        let last = ordinates.last().copied().unwrap_or(0.0);
        let t_max = t_max.unwrap_or(last);
        Ok(Self {
            ordinates: ordinates.into(),
            t_max,
            source,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> &Provenance {
        &self.source
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Ordinates `γ ≤ t`.
    pub fn up_to(&self, t: f64) -> &[f64] {
        let n = self.ordinates.partition_point(|&g| g <= t);
        &self.ordinates[..n]
    }

    /// Sub-table of the first `n` ordinates, complete up to the `n`-th.
    pub fn truncate(&self, n: usize) -> Self {
        let n = n.min(self.count());
        let t_max = if n == self.count() {
            self.t_max
        } else {
            self.ordinates[n - 1].max(0.0)
        };
        Self {
            ordinates: self.ordinates[..n].into(),
            t_max: if n == 0 { 0.0 } else { t_max },
            source: self.source.clone(),
        }
    }

    /// Ensures the table is complete at height `t`.
    pub fn check_coverage(&self, t: f64) -> Result<()> {
        if t > self.t_max {
            return Err(Error::OutOfCoverage { t, t_max: self.t_max });
        }
        Ok(())
    }

    /// Writes one ordinate per line in shortest round-trip decimal form.
    pub fn export<W: Write>(&self, mut w: W) -> Result<()> {
        let io = |source| Error::Io {
            path: PathBuf::from("<export>"),
            source,
        };
        for g in self.ordinates.iter() {
            writeln!(w, "{g}").map_err(io)?;
        }
        w.flush().map_err(io)
    }

    pub fn export_to(&self, path: &Path) -> Result<()> {
        let f = fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        self.export(std::io::BufWriter::new(f))
    }

    /// Compares the count with the smooth Riemann–von Mangoldt term.
    pub fn validate_count(&self) -> CountReport {
        let t = self.t_max;
        let count = self.up_to(t).len();
        let expected = smooth_count(t);
        let deviation = count as f64 - expected;
        CountReport {
            source: self.source.to_string(),
            t_max: t,
            count,
            expected,
            deviation,
            tolerance: COUNT_TOLERANCE,
            ok: deviation.abs() <= COUNT_TOLERANCE,
        }
    }
}

const COUNT_TOLERANCE: f64 = 2.0;

/// `(t/2π) log(t/2πe) + 7/8`, or 0 for `t ≤ 0`.
pub fn smooth_count(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let u = t / (2.0 * std::f64::consts::PI);
    u * (u.ln() - 1.0) + 0.875
}

/// Result of [`ZeroTable::validate_count`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub source: String,
    pub t_max: f64,
    pub count: usize,
    pub expected: f64,
    pub deviation: f64,
    pub tolerance: f64,
    pub ok: bool,
}

impl CountReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Reads a zero file: one decimal ordinate per line, ascending. Blank lines
/// and lines starting with `#` are skipped; repeated identical lines are
/// collapsed. Keeps ordinates `≤ t_max`; the table's `t_max` is the smaller
/// of the request and the file's last ordinate.
pub fn load_zeros(path: &Path, t_max: f64) -> Result<ZeroTable> {
    let f = fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    let corrupt = |line: usize, reason: String| Error::CorruptDataset {
        path: path.to_owned(),
        line,
        reason,
    };
    let mut out: Vec<f64> = Vec::new();
    let mut last_in_file = f64::NEG_INFINITY;
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line.map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let g: f64 = s
            .parse()
            .map_err(|e| corrupt(i + 1, format!("cannot parse {s:?}: {e}")))?;
        if !(g > 0.0) || !g.is_finite() {
            return Err(corrupt(i + 1, format!("non-positive ordinate {g}")));
        }
        if g == last_in_file {
            continue;
        }
        if g < last_in_file {
            return Err(corrupt(
                i + 1,
                format!("ordinates decrease: {last_in_file} then {g}"),
            ));
        }
        last_in_file = g;
        if g <= t_max {
            out.push(g);
        }
    }
    if last_in_file == f64::NEG_INFINITY {
        return Err(Error::NoOrdinates(path.to_owned()));
    }
    ZeroTable::new(out, Some(t_max.min(last_in_file)), Provenance::File(path.to_owned()))
}
