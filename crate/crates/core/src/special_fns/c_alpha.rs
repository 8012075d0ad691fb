//! Vacuum-energy coefficients
//! c_{alpha,m} = (2 pi)^-2 sum_{l>=1} cos(2 pi l alpha) int_0^inf exp(-l^2 x - pi^2 m^2 / x) dx
//!             = (m / 2 pi) sum_{l>=1} cos(2 pi l alpha) K_1(2 pi l m) / l.

use super::bessel::bessel_k_fast;
use super::Approx;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_half_line, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

fn k1(x: f64) -> f64 {
    bessel_k_fast(Complex64::new(1.0, 0.0), x).re
}

fn check_mass(m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return domain(format!("c_alpha_m needs m > 0, got {m}"));
    }
    if m < 1e-3 {
        log::warn!("c_alpha_m at m = {m:e} < 1e-3: the l-sum needs O(1/m) terms and loses accuracy");
    }
    Ok(())
}

/// Number of terms and the geometric tail bound for the l-sum, using K_1(x + y) <= K_1(x) e^-y.
fn truncation(m: f64, tol: f64) -> (u64, f64) {
    let ratio = 1.0 / (1.0 - (-2.0 * PI * m).exp());
    let mut l = 1u64;
    loop {
        let next = (l + 1) as f64;
        let tail = m / (2.0 * PI) * k1(2.0 * PI * next * m) / next * ratio;
        if tail <= tol || tail == 0.0 {
            return (l, tail);
        }
        // jump ahead while far from the cutoff
        let step = if 2.0 * PI * next * m < 1.0 {
            ((1.0 / (2.0 * PI * m)) as u64 / 4).max(1)
        } else {
            1
        };
        l += step;
    }
}

/// Bessel-sum form with an error estimate.
pub fn c_alpha_m_bessel(alpha: f64, m: f64, tol: f64) -> Result<Approx> {
    check_mass(m)?;
    let (n, tail) = truncation(m, tol);
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut abs = 0.0;
    // smallest terms first
    for l in (1..=n).rev() {
        let lf = l as f64;
        let t = (2.0 * PI * lf * alpha).cos() * k1(2.0 * PI * lf * m) / lf;
        abs += t.abs();
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    }
    let scale = m / (2.0 * PI);
    Ok(Approx {
        value: Complex64::new(scale * (sum + comp), 0.0),
        error: tail + scale * abs * 8.0 * f64::EPSILON,
    })
}

/// Integral form, each l-term by half-line quadrature.
pub fn c_alpha_m_integral(alpha: f64, m: f64, quad: &QuadratureSpec) -> Result<Approx> {
    check_mass(m)?;
    let (n, tail) = truncation(m, quad.tol());
    let b = PI * PI * m * m;
    let mut sum = 0.0;
    let mut err = tail;
    for l in (1..=n).rev() {
        let l2 = (l * l) as f64;
        let r = integrate_half_line(|x| Complex64::new((-l2 * x - b / x).exp(), 0.0), quad)?;
        let c = (2.0 * PI * l as f64 * alpha).cos();
        sum += c * r.value.re;
        err += r.error / (4.0 * PI * PI);
    }
    Ok(Approx {
        value: Complex64::new(sum / (4.0 * PI * PI), 0.0),
        error: err,
    })
}

/// c_{alpha,m}: the Bessel form, after checking it against the integral form.
pub fn c_alpha_m(alpha: f64, m: f64, quad: &QuadratureSpec) -> Result<f64> {
    let bessel = c_alpha_m_bessel(alpha, m, quad.tol())?;
    let integral = c_alpha_m_integral(alpha, m, quad)?;
    let diff = (bessel.value - integral.value).norm();
    let allowed = bessel.error + integral.error + 1e-13 * bessel.value.norm().max(1e-3);
    if diff > allowed {
        return Err(Error::Accuracy {
            target: allowed,
            achieved: diff,
            best: bessel.value,
        });
    }
    Ok(bessel.value.re)
}
