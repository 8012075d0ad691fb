//! Special functions: K-Bessel, Gamma and incomplete Gamma, theta and eta,
//! and the vacuum-energy coefficients c_{alpha,m}.

mod bessel;
mod c_alpha;
mod gamma;
mod theta;

pub use bessel::{bessel_k, bessel_k_derivs, bessel_k_fast};
pub use c_alpha::{c_alpha_m, c_alpha_m_bessel, c_alpha_m_integral};
pub use gamma::{gamma, gamma_tail_integral, ln_gamma, upper_incomplete_gamma};
pub use theta::{eta, theta1, theta3};

use num_complex::Complex64;

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: Complex64,
    pub error: f64,
}

impl Approx {
    pub fn exact(value: Complex64) -> Self {
        Self { value, error: 0.0 }
    }
}
