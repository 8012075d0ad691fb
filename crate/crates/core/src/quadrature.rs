//! Adaptive quadrature on finite intervals and on the half-line.
//!
//! Both rules refine by step halving and report the difference between the last
//! two levels as the error estimate.

use crate::error::{check_tol, Error, Result};
use crate::special_fns::Approx;
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// tanh-sinh on intervals, exp-sinh on the half-line
    DoubleExponential,
    /// trapezoid in the logarithmic variable u = ln x
    Trapezoid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    tol: f64,
    max_nodes: usize,
    kind: QuadratureKind,
}

impl QuadratureSpec {
    pub fn new(tol: f64, max_nodes: usize, kind: QuadratureKind) -> Result<Self> {
        check_tol(tol)?;
        if max_nodes < 16 {
            return Err(Error::Domain(format!(
                "node budget must be at least 16, got {max_nodes}"
            )));
        }
        Ok(Self {
            tol,
            max_nodes,
            kind,
        })
    }

    pub fn default_params() -> Self {
        Self {
            tol: 1e-12,
            max_nodes: 1 << 15,
            kind: QuadratureKind::DoubleExponential,
        }
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_nodes(&self) -> usize {
        self.max_nodes
    }

    pub fn kind(&self) -> QuadratureKind {
        self.kind
    }

    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        check_tol(tol)?;
        self.tol = tol;
        Ok(self)
    }
}

/// A substitution x = phi(t) together with phi'(t), used by the trapezoid driver.
trait Substitution {
    fn map(&self, t: f64) -> (f64, f64);
}

struct ExpSinh;

impl Substitution for ExpSinh {
    fn map(&self, t: f64) -> (f64, f64) {
        let x = (FRAC_PI_2 * t.sinh()).exp();
        (x, x * FRAC_PI_2 * t.cosh())
    }
}

struct LogMap;

impl Substitution for LogMap {
    fn map(&self, t: f64) -> (f64, f64) {
        let x = t.exp();
        (x, x)
    }
}

struct TanhSinh {
    mid: f64,
    half: f64,
}

impl Substitution for TanhSinh {
    fn map(&self, t: f64) -> (f64, f64) {
        let s = FRAC_PI_2 * t.sinh();
        let c = s.cosh();
        (
            self.mid + self.half * s.tanh(),
            self.half * FRAC_PI_2 * t.cosh() / (c * c),
        )
    }
}

fn trapezoid_driver<F, S>(f: F, sub: S, h0: f64, t_max: f64, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> Complex64,
    S: Substitution,
{
    let mut nodes = 0usize;
    let eval = |t: f64, nodes: &mut usize| -> Complex64 {
        *nodes += 1;
        let (x, dx) = sub.map(t);
        if dx == 0.0 || !x.is_finite() {
            return Complex64::new(0.0, 0.0);
        }
        let v = f(x) * dx;
        if v.re.is_finite() && v.im.is_finite() {
            v
        } else {
            Complex64::new(0.0, 0.0)
        }
    };

    // Level 0 scans the whole window, then trims it to where the integrand matters.
    let n0 = (t_max / h0).floor() as i64;
    let level0: Vec<(f64, Complex64)> = (-n0..=n0)
        .map(|k| {
            let t = k as f64 * h0;
            (t, eval(t, &mut nodes))
        })
        .collect();
    let peak = level0.iter().map(|(_, v)| v.norm()).fold(0.0, f64::max);
    let keep = |v: &Complex64| v.norm() > 1e-20 * peak;
    let first = level0.iter().position(|(_, v)| keep(v)).unwrap_or(n0 as usize);
    let last = level0.iter().rposition(|(_, v)| keep(v)).unwrap_or(n0 as usize);
    let lo = first.saturating_sub(1);
    let hi = (last + 1).min(level0.len() - 1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for (_, v) in &level0[lo..=hi] {
        sum += v;
        abs_sum += v.norm();
    }
    let limits = [level0[hi].0, level0[lo].0];
    let (t_hi, t_lo) = (limits[0], limits[1]);
    let mut h = h0;
    let mut estimate = sum * h;
    loop {
        let half = h / 2.0;
        let count = ((t_hi - t_lo) / h).round() as usize;
        if nodes + count > spec.max_nodes {
            return Err(Error::Accuracy {
                target: spec.tol,
                achieved: f64::NAN,
                best: estimate,
            });
        }
        for j in 0..count {
            let v = eval(t_lo + half + j as f64 * h, &mut nodes);
            sum += v;
            abs_sum += v.norm();
        }
        let next = sum * half;
        let err = (next - estimate).norm();
        h = half;
        estimate = next;
        let floor = 64.0 * f64::EPSILON * abs_sum * h;
        if err <= spec.tol * next.norm() || err <= floor {
            return Ok(Approx {
                value: next,
                error: err.max(floor),
            });
        }
    }
}

/// Integral of f over (0, inf).
pub fn integrate_half_line<F>(f: F, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> Complex64,
{
    match spec.kind {
        QuadratureKind::DoubleExponential => trapezoid_driver(f, ExpSinh, 0.5, 6.5, spec),
        QuadratureKind::Trapezoid => trapezoid_driver(f, LogMap, 0.5, 700.0, spec),
    }
}

/// Integral of f over [a, b].
pub fn integrate_interval<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Approx>
where
    F: Fn(f64) -> Complex64,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("interval endpoints must be finite".into()));
    }
    if a == b {
        return Ok(Approx::exact(Complex64::new(0.0, 0.0)));
    }
    let sub = TanhSinh {
        mid: 0.5 * (a + b),
        half: 0.5 * (b - a),
    };
    trapezoid_driver(f, sub, 0.5, 3.5, spec)
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn half_line_gaussian() {
        let spec = QuadratureSpec::default_params();
        let r = integrate_half_line(|x| c((-x * x).exp()), &spec).unwrap();
        assert!((r.value.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn half_line_bessel_integral() {
        // int_0^inf exp(-x - 1/x) dx = 2 K_1(2)
        let spec = QuadratureSpec::default_params();
        let r = integrate_half_line(|x| c((-x - 1.0 / x).exp()), &spec).unwrap();
        assert!((r.value.re - 2.0 * 0.139_865_881_816_522_43).abs() < 1e-13);
    }

    #[test]
    fn log_trapezoid_matches() {
        let spec = QuadratureSpec::new(1e-12, 1 << 15, QuadratureKind::Trapezoid).unwrap();
        let r = integrate_half_line(|x| c(x * (-x).exp()), &spec).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_rule() {
        let spec = QuadratureSpec::default_params();
        let r = integrate_interval(|x| c(x.sqrt()), 0.0, 1.0, &spec).unwrap();
        assert!((r.value.re - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(12);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((s - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn node_budget_enforced() {
        let spec = QuadratureSpec::new(1e-15, 16, QuadratureKind::DoubleExponential).unwrap();
        assert!(integrate_half_line(|x| c((-x).exp() * (50.0 * x).sin()), &spec).is_err());
    }
}
