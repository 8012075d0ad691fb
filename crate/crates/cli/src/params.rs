//! `--name value` parameters for the function registry.

use crate::error::CliError;
use massive_core::{Complex64, TorusPoint, UpperHalfPoint};
use std::collections::BTreeMap;

/// Parse "a+bi", "a-bi", "bi", "a" or "i" into a complex number.
pub fn parse_complex(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::usage(format!("cannot read {s:?} as a complex number (expected a+bi)"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Named parameters; every parameter must be consumed exactly once.
#[derive(Debug, Default, Clone)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn parse(args: &[String]) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        let mut it = args.iter();
        while let Some(key) = it.next() {
            let name = key
                .strip_prefix("--")
                .ok_or_else(|| CliError::usage(format!("expected --name, got {key:?}")))?;
            let (name, value) = match name.split_once('=') {
                Some((n, v)) => (n.to_string(), v.to_string()),
                None => {
                    let v = it.next().ok_or_else(|| CliError::usage(format!("--{name} needs a value")))?;
                    (name.to_string(), v.clone())
                }
            };
            if values.insert(name.replace('-', "_"), value).is_some() {
                return Err(CliError::usage(format!("--{name} given twice")));
            }
        }
        Ok(Self { values })
    }

    pub fn set(&mut self, name: &str, value: String) {
        self.values.insert(name.to_string(), value);
    }

    pub fn take_str(&mut self, name: &str) -> Option<String> {
        self.values.remove(name)
    }

    pub fn f64(&mut self, name: &str) -> Result<f64, CliError> {
        self.opt_f64(name)?
            .ok_or_else(|| CliError::usage(format!("missing --{name}")))
    }

    pub fn opt_f64(&mut self, name: &str) -> Result<Option<f64>, CliError> {
        self.values
            .remove(name)
            .map(|v| v.parse::<f64>().map_err(|_| CliError::usage(format!("--{name}: not a number: {v:?}"))))
            .transpose()
    }

    pub fn f64_or(&mut self, name: &str, default: f64) -> Result<f64, CliError> {
        Ok(self.opt_f64(name)?.unwrap_or(default))
    }

    pub fn complex(&mut self, name: &str) -> Result<Complex64, CliError> {
        let v = self
            .values
            .remove(name)
            .ok_or_else(|| CliError::usage(format!("missing --{name}")))?;
        parse_complex(&v)
    }

    pub fn int(&mut self, name: &str) -> Result<i64, CliError> {
        let v = self
            .values
            .remove(name)
            .ok_or_else(|| CliError::usage(format!("missing --{name}")))?;
        v.parse::<i64>()
            .map_err(|_| CliError::usage(format!("--{name}: not an integer: {v:?}")))
    }

    pub fn int_or(&mut self, name: &str, default: i64) -> Result<i64, CliError> {
        if self.values.contains_key(name) {
            self.int(name)
        } else {
            Ok(default)
        }
    }

    pub fn tau(&mut self) -> Result<UpperHalfPoint, CliError> {
        let t = self.complex("tau")?;
        Ok(UpperHalfPoint::from_complex(t)?)
    }

    /// The characteristics (alpha, beta) of z = alpha tau + beta under the given prefix.
    pub fn torus(&mut self, prefix: &str) -> Result<TorusPoint, CliError> {
        let a = self.f64(&format!("{prefix}alpha"))?;
        let b = self.f64(&format!("{prefix}beta"))?;
        Ok(TorusPoint::new(a, b)?)
    }

    pub fn torus_or_origin(&mut self, prefix: &str) -> Result<TorusPoint, CliError> {
        let a = self.f64_or(&format!("{prefix}alpha"), 0.0)?;
        let b = self.f64_or(&format!("{prefix}beta"), 0.0)?;
        Ok(TorusPoint::new(a, b)?)
    }

    /// Fails on anything left unread.
    pub fn finish(self) -> Result<(), CliError> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(CliError::usage(format!("unknown parameter --{k}"))),
        }
    }
}
