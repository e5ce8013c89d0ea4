//! Inclusive grid ranges written `start:stop:count`.

use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self, CliError> {
        if !start.is_finite() || !stop.is_finite() {
            return Err(CliError::Input("range endpoints must be finite".into()));
        }
        if count == 0 {
            return Err(CliError::Input("range count must be at least 1".into()));
        }
        if count == 1 && start != stop {
            return Err(CliError::Input("a one-point range needs start = stop".into()));
        }
        Ok(Range { start, stop, count })
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|k| if k + 1 == self.count { self.stop } else { self.start + step * k as f64 })
            .collect()
    }
}

impl FromStr for Range {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || CliError::Input(format!("expected start:stop:count, got '{s}'"));
        let [a, b, n] = parts.as_slice() else { return Err(bad()) };
        let start = a.trim().parse().map_err(|_| bad())?;
        let stop = b.trim().parse().map_err(|_| bad())?;
        let count = n.trim().parse().map_err(|_| bad())?;
        Range::new(start, stop, count)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inclusive_endpoints() {
        let r: Range = "0:1:101".parse().unwrap();
        let v = r.values();
        assert_eq!(v.len(), 101);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[100], 1.0);
        assert!((v[37] - 0.37).abs() < 1e-15);
        let neg: Range = "-3:3:301".parse().unwrap();
        assert_eq!(neg.values()[0], -3.0);
        assert_eq!("2:2:1".parse::<Range>().unwrap().values(), vec![2.0]);
    }

    #[test]
    fn rejects_bad_ranges() {
        for s in ["0:1", "0:1:0", "a:1:3", "0:1:2:3", "0:1:1", "0:inf:3"] {
            assert!(s.parse::<Range>().is_err(), "{s}");
        }
    }
}
