//! Coefficient triples (c0, c1, c2) of the mu-operator c2 d^2/dmu^2 + c1 d/dmu + c0.

use crate::error::{domain, Error, Result};
use crate::massive::families::RadialProfile;
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

type TripleFn = Arc<dyn Fn(f64) -> [Complex64; 3] + Send + Sync>;

#[derive(Clone)]
pub struct CoefficientTriple {
    f: TripleFn,
}

impl fmt::Debug for CoefficientTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2] = (self.f)(1.0);
        write!(f, "CoefficientTriple {{ at mu=1: [{c0}, {c1}, {c2}] }}")
    }
}

impl CoefficientTriple {
    /// Build from a function returning [c0(mu), c1(mu), c2(mu)].
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> [Complex64; 3] + Send + Sync + 'static,
    {
        Self { f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::from_fn(|_| [Complex64::new(0.0, 0.0); 3])
    }

    pub fn eval(&self, mu: f64) -> [Complex64; 3] {
        (self.f)(mu)
    }

    /// c2 f'' + c1 f' + c0 f given [f, f', f''] at mu.
    pub fn apply(&self, mu: f64, f: [Complex64; 3]) -> Complex64 {
        let [c0, c1, c2] = self.eval(mu);
        c2 * f[2] + c1 * f[1] + c0 * f[0]
    }
}

/// G-coefficients for the normalized family with profile h and index L, read off the
/// ODE x^2 h'' + gamma x h' + (kappa - nu x^(1/a)) h = 0 attached to the profile.
pub fn jacobi_g_coefficients(profile: &RadialProfile, index: i32) -> Result<CoefficientTriple> {
    let ode = profile
        .ode()
        .ok_or_else(|| Error::DegenerateOde("profile carries no ODE data".into()))?;
    if ode.nu == 0.0 {
        return Err(Error::DegenerateOde("nu must be nonzero".into()));
    }
    let l2 = (index as f64).powi(2);
    let k = l2 * 2.0 * PI * PI / ode.nu;
    let p = 1.0 / ode.a;
    Ok(CoefficientTriple::from_fn(move |mu| {
        let m = mu.powf(-p);
        [k * ode.kappa * m, k * ode.gamma * mu * m, k * mu * mu * m].map(|v| Complex64::new(v, 0.0))
    }))
}

/// g-coefficients of the weight-zero Maass family mu^c-normalized by (b, c).
pub fn maass_g_coefficients(b: f64, c: f64) -> Result<CoefficientTriple> {
    if !(b > 0.0 && b.is_finite() && c.is_finite()) {
        return domain(format!("need b > 0 and finite c, got b = {b}, c = {c}"));
    }
    Ok(CoefficientTriple::from_fn(move |mu| {
        [-c * c - c, -(b * b + 2.0 * b * c + b) * mu, -b * b * mu * mu].map(|v| Complex64::new(v, 0.0))
    }))
}
