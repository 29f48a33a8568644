//! Piecewise-linear continuous paths, grid-sampled paths, exact atom
//! time-set extraction, and the `⌊nt⌋/n` grid projection.

use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::timeset::{Interval, IntervalSet, RegionSet, TimeSet};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("trace must contain at least one sample")]
    Empty,

    #[error("breakpoint times must be strictly increasing and start at 0")]
    NonMonotone,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A continuous piecewise-linear path: breakpoints `(t, x)` with strictly
/// increasing times starting at 0, linearly interpolated in between.
#[derive(Debug, Clone, PartialEq)]
pub struct PlTrace {
    points: Vec<(f64, f64)>,
}

impl PlTrace {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, TraceError> {
        if points.is_empty() {
            return Err(TraceError::Empty);
        }
        if points[0].0 != 0.0
            || points.windows(2).any(|w| w[0].0 >= w[1].0)
            || points.iter().any(|(t, x)| !t.is_finite() || !x.is_finite())
        {
            return Err(TraceError::NonMonotone);
        }
        Ok(PlTrace { points })
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn horizon(&self) -> f64 {
        self.points.last().unwrap().0
    }

    /// Value at `t` by linear interpolation; exact at breakpoints.
    ///
    /// `t` must lie in `[0, horizon]` — evaluators check horizons up front.
    pub fn value(&self, t: f64) -> f64 {
        assert!(
            t >= 0.0 && t <= self.horizon(),
            "time {t} outside trace domain [0, {}]",
            self.horizon()
        );
        let idx = self.points.partition_point(|&(bt, _)| bt <= t);
        if idx == 0 {
            return self.points[0].1;
        }
        let (t0, x0) = self.points[idx - 1];
        if t == t0 || idx == self.points.len() {
            return x0;
        }
        let (t1, x1) = self.points[idx];
        x0 + (t - t0) * (x1 - x0) / (t1 - t0)
    }

    /// PL interpolation of a grid trace: breakpoints at `k/n`.
    pub fn from_grid(grid: &GridTrace) -> Self {
        let n = grid.resolution() as f64;
        let points = grid
            .values()
            .iter()
            .enumerate()
            .map(|(k, &x)| (k as f64 / n, x))
            .collect();
        PlTrace { points }
    }

    /// Exactly `{t ∈ [0, horizon] : x(t) ∈ region}` as a canonical time set.
    ///
    /// Per linear segment, the preimage of each region interval is solved in
    /// closed form; endpoint flags are inherited from the region flags and
    /// the crossing direction. A constant segment lying on a region boundary
    /// is included iff that boundary is closed.
    pub fn atom_timeset(&self, region: &RegionSet) -> TimeSet {
        let mut parts = Vec::new();
        if self.points.len() == 1 {
            let (t0, x0) = self.points[0];
            if region.contains(x0) {
                parts.push(Interval::point(t0));
            }
            return IntervalSet::canonicalize(parts);
        }
        for seg in self.points.windows(2) {
            let (t0, x0) = seg[0];
            let (t1, x1) = seg[1];
            let domain = Interval::closed(t0, t1);
            for riv in region.intervals() {
                if x0 == x1 {
                    if riv.contains(x0) {
                        parts.push(domain);
                    }
                    continue;
                }
                // strictly monotone segment: map region levels to times
                let cross = |level: f64| -> f64 {
                    if level == x0 {
                        t0
                    } else if level == x1 {
                        t1
                    } else {
                        t0 + (level - x0) * (t1 - t0) / (x1 - x0)
                    }
                };
                let (lo, hi) = (riv.lo(), riv.hi());
                let cand = if x1 > x0 {
                    let a = if lo.value == f64::NEG_INFINITY { t0 } else { cross(lo.value) };
                    let b = if hi.value == f64::INFINITY { t1 } else { cross(hi.value) };
                    Interval::try_new(
                        a,
                        lo.closed || lo.value == f64::NEG_INFINITY,
                        b,
                        hi.closed || hi.value == f64::INFINITY,
                    )
                } else {
                    let a = if hi.value == f64::INFINITY { t0 } else { cross(hi.value) };
                    let b = if lo.value == f64::NEG_INFINITY { t1 } else { cross(lo.value) };
                    Interval::try_new(
                        a,
                        hi.closed || hi.value == f64::INFINITY,
                        b,
                        lo.closed || lo.value == f64::NEG_INFINITY,
                    )
                };
                if let Some(cand) = cand {
                    if let Some(clipped) = cand.intersect(&domain) {
                        parts.push(clipped);
                    }
                }
            }
        }
        IntervalSet::canonicalize(parts)
    }

    /// Samples the trace on the grid `ℕ/n` for every `k/n ≤ horizon`.
    pub fn grid_project(&self, n: u32) -> GridTrace {
        assert!(n >= 1);
        let horizon = self.horizon();
        let nf = n as f64;
        let mut k_max = (horizon * nf).floor() as u64;
        while (k_max + 1) as f64 / nf <= horizon {
            k_max += 1;
        }
        while k_max > 0 && k_max as f64 / nf > horizon {
            k_max -= 1;
        }
        let values = (0..=k_max).map(|k| self.value(k as f64 / nf)).collect();
        GridTrace::new(n, values).expect("projection is nonempty")
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), TraceError> {
        writeln!(out, "t,x")?;
        for (t, x) in &self.points {
            writeln!(out, "{t},{x}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, TraceError> {
        let mut points = Vec::new();
        let mut last_line = 0;
        for (idx, line) in BufReader::new(input).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let lineno = idx + 1;
            if line.is_empty() || (idx == 0 && line == "t,x") {
                continue;
            }
            let (t, x) = parse_pair(line, lineno)?;
            points.push((t, x));
            last_line = lineno;
        }
        PlTrace::new(points).map_err(|e| match e {
            TraceError::NonMonotone => TraceError::Format {
                line: last_line,
                message: "times must be strictly increasing from 0".into(),
            },
            other => other,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TraceError> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TraceError> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

/// A path sampled on the grid `ℕ/n`: values at `k/n` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridTrace {
    n: u32,
    values: Vec<f64>,
}

impl GridTrace {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self, TraceError> {
        if n < 1 {
            return Err(TraceError::Format {
                line: 0,
                message: "resolution must be >= 1".into(),
            });
        }
        if values.is_empty() {
            return Err(TraceError::Empty);
        }
        Ok(GridTrace { n, values })
    }

    pub fn resolution(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest grid index `K`; the horizon is `K/n`.
    pub fn max_index(&self) -> u64 {
        (self.values.len() - 1) as u64
    }

    pub fn horizon(&self) -> f64 {
        self.max_index() as f64 / self.n as f64
    }

    pub fn value_at(&self, k: u64) -> f64 {
        self.values[k as usize]
    }

    /// Restriction to the coarser grid `ℕ/m`; `None` unless `m` divides `n`.
    /// Values are taken verbatim, so the result is the same path observed on
    /// the nested grid.
    pub fn restrict(&self, m: u32) -> Option<GridTrace> {
        if m < 1 || self.n % m != 0 {
            return None;
        }
        let stride = (self.n / m) as usize;
        let values: Vec<f64> = self.values.iter().copied().step_by(stride).collect();
        Some(GridTrace { n: m, values })
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<(), TraceError> {
        writeln!(out, "# n={}", self.n)?;
        writeln!(out, "k,x")?;
        for (k, x) in self.values.iter().enumerate() {
            writeln!(out, "{k},{x}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self, TraceError> {
        let mut n: Option<u32> = None;
        let mut values = Vec::new();
        for (idx, line) in BufReader::new(input).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            let lineno = idx + 1;
            if line.is_empty() || line == "k,x" {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let meta = meta.trim();
                if let Some(res) = meta.strip_prefix("n=") {
                    n = Some(res.trim().parse().map_err(|_| TraceError::Format {
                        line: lineno,
                        message: format!("bad resolution `{res}`"),
                    })?);
                }
                continue;
            }
            let (k, x) = parse_pair(line, lineno)?;
            if k != values.len() as f64 {
                return Err(TraceError::Format {
                    line: lineno,
                    message: format!("expected index {}, found {k}", values.len()),
                });
            }
            values.push(x);
        }
        let n = n.ok_or(TraceError::Format {
            line: 0,
            message: "missing `# n=<resolution>` metadata line".into(),
        })?;
        GridTrace::new(n, values)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TraceError> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TraceError> {
        Self::read_csv(std::fs::File::open(path)?)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(f64, f64), TraceError> {
    let (a, b) = line.split_once(',').ok_or_else(|| TraceError::Format {
        line: lineno,
        message: "expected two comma-separated fields".into(),
    })?;
    let parse = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| TraceError::Format {
            line: lineno,
            message: format!("bad number `{}`", s.trim()),
        })
    };
    Ok((parse(a)?, parse(b)?))
}

/// The grid projection `Λₙ(t) = ⌊nt⌋/n`.
pub fn lambda_n(t: f64, n: u32) -> f64 {
    lambda_index(t, n) as f64 / n as f64
}

/// `⌊nt⌋` as a grid index.
pub fn lambda_index(t: f64, n: u32) -> u64 {
    assert!(t >= 0.0 && n >= 1);
    let nf = n as f64;
    let mut k = (t * nf).floor() as u64;
    while (k + 1) as f64 / nf <= t {
        k += 1;
    }
    while k > 0 && k as f64 / nf > t {
        k -= 1;
    }
    k
}
