//! Inclusive evaluation grids and the `start:stop:count` spec syntax.

use std::fmt;
use std::str::FromStr;

/// Evenly spaced points from `start` to `stop` inclusive.
///
/// `count == 1` yields just `[start]`; otherwise both endpoints are hit
/// exactly (the last point is forced to `stop` rather than accumulated).
pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    assert!(count >= 1, "linspace: empty grid");
    if count == 1 {
        return vec![start];
    }
    let step = (stop - start) / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count).map(|i| start + i as f64 * step).collect();
    out[count - 1] = stop;
    out
}

/// A parsed `start:stop:count` grid description (inclusive endpoints).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, GridParseError> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(GridParseError("grid endpoints must be finite".into()));
        }
        if count == 0 {
            return Err(GridParseError("grid count must be at least 1".into()));
        }
        if count == 1 && start != stop {
            return Err(GridParseError(
                "grid with a single point needs start == stop".into(),
            ));
        }
        if start > stop {
            return Err(GridParseError(format!(
                "grid start {start} exceeds stop {stop}"
            )));
        }
        Ok(GridSpec { start, stop, count })
    }

    pub fn to_vec(self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

/// Error from parsing a grid description.
#[derive(Debug, Clone, PartialEq)]
pub struct GridParseError(pub String);

impl fmt::Display for GridParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for GridParseError {}

impl FromStr for GridSpec {
    type Err = GridParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(GridParseError(format!(
                "expected start:stop:count, got {s:?}"
            )));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| GridParseError(format!("bad grid start {:?}", parts[0])))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| GridParseError(format!("bad grid stop {:?}", parts[1])))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| GridParseError(format!("bad grid count {:?}", parts[2])))?;
        GridSpec::new(start, stop, count)
    }
}
