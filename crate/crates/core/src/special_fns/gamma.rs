use crate::error::{domain, Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// log Gamma(s) on a branch that is continuous away from the negative real axis.
pub fn ln_gamma(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("Gamma at {s}")));
    }
    if s.re < 0.5 {
        // reflection
        let sin = (PI * s).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - sin.ln() - ln_gamma(1.0 - s)?);
    }
    let z = s - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln())
}

pub fn gamma(s: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(s) {
        return Err(Error::Pole(format!("Gamma at {s}")));
    }
    if s.im == 0.0 && s.re > 0.0 && s.re < 171.0 && s.re == s.re.round() {
        let mut f = 1.0;
        for k in 2..(s.re as u32) {
            f *= k as f64;
        }
        return Ok(Complex64::new(f, 0.0));
    }
    if s.re < 0.5 {
        let sin = (PI * s).sin();
        return Ok(PI / (sin * gamma(1.0 - s)?));
    }
    Ok(ln_gamma(s)?.exp())
}

/// Legendre continued fraction for exp(x) x^-a Gamma(a, x), valid for x >= 1.
fn gamma_cf(a: Complex64, x: f64) -> Result<Complex64> {
    // modified Lentz on b0 + a1/(b1 + a2/(b2 + ...)); the tail integral is its reciprocal
    let tiny = Complex64::new(1e-150, 0.0);
    let guard = |v: Complex64| if v.norm() < 1e-150 { tiny } else { v };
    let mut b = Complex64::new(x + 1.0, 0.0) - a;
    let mut f = guard(b);
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for i in 1..200_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = 1.0 / guard(an * d + b);
        c = guard(b + an / c);
        let del = d * c;
        f *= del;
        if (del - 1.0).norm() < 1e-16 {
            return Ok(1.0 / f);
        }
    }
    Err(Error::Accuracy {
        target: 1e-16,
        achieved: f64::NAN,
        best: 1.0 / f,
    })
}

/// (1 - c^e) / e, continuous through e = 0.
fn one_minus_pow_over(e: Complex64, lnc: f64) -> Complex64 {
    let y = e * lnc;
    if y.norm() < 1e-3 {
        -lnc * (1.0 + y / 2.0 + y * y / 6.0 + y * y * y / 24.0)
    } else {
        (1.0 - y.exp()) / e
    }
}

/// Tail integral T(a, c) = int_1^inf x^(a-1) exp(-c x) dx for c > 0 and any complex a.
pub fn gamma_tail_integral(a: Complex64, c: f64) -> Result<Complex64> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("tail integral needs c > 0, got {c}"));
    }
    if c >= 1.0 {
        return Ok((-c).exp() * gamma_cf(a, c)?);
    }
    // Gamma(a, c) = Gamma(a, 1) + int_c^1 t^(a-1) e^-t dt, expanded termwise.
    let lnc = c.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut fact = 1.0;
    for k in 0..200 {
        if k > 0 {
            fact *= -1.0 / k as f64;
        }
        let term = fact * one_minus_pow_over(a + k as f64, lnc);
        sum += term;
        if k > 4 && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    let upper = (-1.0f64).exp() * gamma_cf(a, 1.0)? + sum;
    Ok(upper * (-a * lnc).exp())
}

/// Upper incomplete gamma Gamma(s, x) for x > 0.
pub fn upper_incomplete_gamma(s: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) {
        return domain(format!("upper incomplete gamma needs x > 0, got {x}"));
    }
    Ok((s * x.ln()).exp() * gamma_tail_integral(s, x)?)
}
