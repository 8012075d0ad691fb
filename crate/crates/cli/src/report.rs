//! The machine-readable verification report.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// passes when value < tolerance
    Below,
    /// passes when value > tolerance
    Above,
    /// reported only
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Measurement {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Measurement {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64, bound: Bound) -> Self {
        let pass = match bound {
            Bound::Below => value < tolerance,
            Bound::Above => value > tolerance,
            Bound::Info => true,
        };
        Self {
            name: name.into(),
            value,
            tolerance,
            bound,
            pass,
        }
    }

    /// How close to failing, as a fraction of the allowed range; above 1 fails.
    fn severity(&self) -> f64 {
        let s = match self.bound {
            Bound::Below => self.value / self.tolerance,
            Bound::Above => self.tolerance / self.value,
            Bound::Info => return f64::NEG_INFINITY,
        };
        if s.is_nan() {
            f64::INFINITY
        } else {
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub criterion: u8,
    pub suite: String,
    pub description: String,
    pub inputs: BTreeMap<String, String>,
    pub measurements: Vec<Measurement>,
    /// the value and tolerance of the measurement closest to failing
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
    pub wall_ms: f64,
}

impl CheckRecord {
    pub fn finish(&mut self) {
        let worst = self
            .measurements
            .iter()
            .filter(|m| m.bound != Bound::Info)
            .max_by(|a, b| a.severity().total_cmp(&b.severity()));
        if let Some(w) = worst {
            self.residual = w.value;
            self.tolerance = w.tolerance;
        }
        self.pass = self.error.is_none() && worst.is_some() && self.measurements.iter().all(|m| m.pass);
    }

    pub fn failing(&self) -> Vec<&Measurement> {
        self.measurements.iter().filter(|m| !m.pass).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: Vec<String>,
    pub pass: bool,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub summary: Summary,
    pub checks: Vec<CheckRecord>,
}

impl RunReport {
    pub fn new(suite: &str, mut checks: Vec<CheckRecord>, wall_ms: f64) -> Self {
        checks.sort_by_key(|c| c.criterion);
        let failed: Vec<String> = checks.iter().filter(|c| !c.pass).map(|c| c.id.clone()).collect();
        Self {
            summary: Summary {
                suite: suite.to_string(),
                total: checks.len(),
                passed: checks.len() - failed.len(),
                pass: failed.is_empty(),
                failed,
                wall_ms,
            },
            checks,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(ms: Vec<Measurement>) -> CheckRecord {
        let mut r = CheckRecord {
            id: "x".into(),
            criterion: 1,
            suite: "s".into(),
            description: String::new(),
            inputs: BTreeMap::new(),
            measurements: ms,
            residual: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            error: None,
            wall_ms: 0.0,
        };
        r.finish();
        r
    }

    #[test]
    fn worst_measurement_is_reported() {
        let r = record(vec![
            Measurement::new("a", 1e-9, 1e-6, Bound::Below),
            Measurement::new("b", 5e-7, 1e-6, Bound::Below),
            Measurement::new("c", 10.0, 3.0, Bound::Above),
            Measurement::new("d", 1e3, 0.0, Bound::Info),
        ]);
        assert!(r.pass);
        assert_eq!((r.residual, r.tolerance), (5e-7, 1e-6));
    }

    #[test]
    fn nan_and_empty_fail() {
        assert!(!record(vec![Measurement::new("a", f64::NAN, 1.0, Bound::Below)]).pass);
        assert!(!record(vec![]).pass);
        assert!(!record(vec![Measurement::new("c", 2.0, 3.0, Bound::Above)]).pass);
    }
}
