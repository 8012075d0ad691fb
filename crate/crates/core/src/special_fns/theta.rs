//! Jacobi theta functions and the Dedekind eta function from their product and
//! series representations, truncated once the remaining factors are below 1e-17.

use crate::point::UpperHalfPoint;
use num_complex::Complex64;
use std::f64::consts::PI;

const TRUNCATION: f64 = 1e-17;

fn nome(tau: &UpperHalfPoint) -> Complex64 {
    Complex64::from_polar((-2.0 * PI * tau.tau2()).exp(), 2.0 * PI * tau.tau1())
}

/// theta_1(z; tau) = -2 q^(1/8) sin(pi z) prod_n (1 - q^n)(1 - e^(2 pi i z) q^n)(1 - e^(-2 pi i z) q^n)
pub fn theta1(z: Complex64, tau: &UpperHalfPoint) -> Complex64 {
    let q = nome(tau);
    let y = (2.0 * PI * Complex64::i() * z).exp();
    let yi = 1.0 / y;
    let big = y.norm().max(yi.norm());
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = q;
    loop {
        prod *= (1.0 - qn) * (1.0 - y * qn) * (1.0 - yi * qn);
        if qn.norm() * (1.0 + 2.0 * big) < TRUNCATION {
            break;
        }
        qn *= q;
    }
    let q8 = (2.0 * PI * Complex64::i() * tau.tau() / 8.0).exp();
    -2.0 * q8 * (PI * z).sin() * prod
}

/// theta_3(tau) = sum_n exp(pi i tau n^2)
pub fn theta3(tau: &UpperHalfPoint) -> Complex64 {
    let mut sum = Complex64::new(1.0, 0.0);
    let mut n = 1.0f64;
    loop {
        let t = (PI * Complex64::i() * tau.tau() * (n * n)).exp();
        sum += 2.0 * t;
        if t.norm() < TRUNCATION {
            break;
        }
        n += 1.0;
    }
    sum
}

/// eta(tau) = q^(1/24) prod_n (1 - q^n)
pub fn eta(tau: &UpperHalfPoint) -> Complex64 {
    let q = nome(tau);
    let mut prod = Complex64::new(1.0, 0.0);
    let mut qn = q;
    while qn.norm() >= TRUNCATION {
        prod *= 1.0 - qn;
        qn *= q;
    }
    (2.0 * PI * Complex64::i() * tau.tau() / 24.0).exp() * prod
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_at_i() {
        // eta(i) = Gamma(1/4) / (2 pi^(3/4))
        let v = eta(&UpperHalfPoint::new(0.0, 1.0).unwrap());
        assert!((v.re - 0.768_225_422_326_056_7).abs() < 1e-15 && v.im.abs() < 1e-16);
    }

    #[test]
    fn eta_modular_transformation() {
        // eta(-1/tau) = sqrt(-i tau) eta(tau)
        let tau = UpperHalfPoint::new(0.31, 0.8).unwrap();
        let lhs = eta(&tau.invert());
        let rhs = (-Complex64::i() * tau.tau()).sqrt() * eta(&tau);
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn theta3_at_i() {
        // theta_3(i) = pi^(1/4) / Gamma(3/4)
        let v = theta3(&UpperHalfPoint::new(0.0, 1.0).unwrap());
        assert!((v.re - 1.086_434_811_213_308).abs() < 1e-15);
    }

    #[test]
    fn theta1_quasiperiodicity_and_jacobi_derivative() {
        let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
        let z = Complex64::new(0.13, 0.27);
        let t = theta1(z, &tau);
        // theta_1(z + 1) = -theta_1(z)
        assert!((theta1(z + 1.0, &tau) + t).norm() < 1e-14);
        // theta_1(z + tau) = -exp(-pi i tau - 2 pi i z) theta_1(z)
        let f = -(-PI * Complex64::i() * (tau.tau() + 2.0 * z)).exp();
        assert!((theta1(z + tau.tau(), &tau) - f * t).norm() < 1e-13);
        // theta_1'(0) = -2 pi eta^3 with this sign convention
        let h = 1e-5;
        let d = (theta1(Complex64::new(h, 0.0), &tau) - theta1(Complex64::new(-h, 0.0), &tau)) / (2.0 * h);
        let e = eta(&tau);
        assert!((d + 2.0 * PI * e * e * e).norm() < 1e-8);
    }
}
