//! F_mu = g(mu) f_{phi(mu)}: rescaling and reparametrizing the mass of a form.

use crate::error::{domain, Result};
use crate::jet::Field;
use crate::massive::coefficients::{jacobi_g_coefficients, maass_g_coefficients, CoefficientTriple};
use crate::massive::families::{general_series, FamilyParams, GeneralKernel, MassiveSeries, RadialProfile};
use crate::series::{Evaluator, Point};
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

type MapFn = Arc<dyn Fn(f64) -> [f64; 4] + Send + Sync>;

/// A smooth real function on mu > 0 with its first three derivatives.
#[derive(Clone)]
pub struct SmoothMap {
    f: MapFn,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmoothMap {{ at 1: {:?} }}", (self.f)(1.0))
    }
}

impl SmoothMap {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> [f64; 4] + Send + Sync + 'static,
    {
        Self { f: Arc::new(f) }
    }

    pub fn identity() -> Self {
        Self::from_fn(|x| [x, 1.0, 0.0, 0.0])
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| [c, 0.0, 0.0, 0.0])
    }

    /// k x^p
    pub fn power(k: f64, p: f64) -> Self {
        Self::from_fn(move |x| {
            let v = k * x.powf(p);
            [v, p * v / x, p * (p - 1.0) * v / (x * x), p * (p - 1.0) * (p - 2.0) * v / (x * x * x)]
        })
    }

    /// a + b x
    pub fn affine(a: f64, b: f64) -> Self {
        Self::from_fn(move |x| [a + b * x, b, 0.0, 0.0])
    }

    pub fn eval(&self, x: f64) -> [f64; 4] {
        (self.f)(x)
    }

    fn compose<T: Field>(&self, x: &T) -> T {
        x.compose(|v, _| self.eval(v.re).map(|d| Complex64::new(d, 0.0)))
    }
}

fn samples() -> impl Iterator<Item = f64> {
    (-12..=12).map(|k| 10f64.powf(k as f64 / 3.0))
}

/// Evaluator for g(mu) f_{phi(mu)}.
#[derive(Debug, Clone)]
pub struct Equivalent<E> {
    pub base: E,
    g: SmoothMap,
    phi: SmoothMap,
}

impl<E> Equivalent<E> {
    pub fn g(&self) -> &SmoothMap {
        &self.g
    }

    pub fn phi(&self) -> &SmoothMap {
        &self.phi
    }

    /// The triple satisfied by g f_phi when f satisfies `triple`.
    pub fn transform_triple(&self, triple: &CoefficientTriple) -> CoefficientTriple {
        let (g, phi, t) = (self.g.clone(), self.phi.clone(), triple.clone());
        CoefficientTriple::from_fn(move |mu| {
            let [gv, g1, g2, _] = g.eval(mu);
            let [pv, p1, p2, _] = phi.eval(mu);
            let [c0, c1, c2] = t.eval(pv);
            let n2 = c2 / (p1 * p1);
            let n1 = (gv * c1 - n2 * (2.0 * g1 * p1 + gv * p2)) / (gv * p1);
            let n0 = c0 - (n2 * g2 + n1 * g1) / gv;
            [n0, n1, n2]
        })
    }
}

impl<E: Evaluator> Evaluator for Equivalent<E> {
    fn evaluate<T: Field>(&self, p: &Point<T>, tol: f64) -> Result<T> {
        let gv = self.g.compose(&p.mu);
        let scale = gv.value().norm().max(1.0);
        let inner = Point {
            tau1: p.tau1,
            tau2: p.tau2,
            z1: p.z1,
            z2: p.z2,
            mu: self.phi.compose(&p.mu),
        };
        Ok(gv * self.base.evaluate(&inner, tol / scale)?)
    }
}

/// Wrap `base` as g(mu) base_{phi(mu)} after checking on a log-spaced grid of mu
/// that g does not vanish, phi stays positive and phi' keeps one sign.
pub fn equivalence_transform<E: Evaluator>(base: E, g: SmoothMap, phi: SmoothMap) -> Result<Equivalent<E>> {
    let mut sign = 0.0;
    for mu in samples() {
        let gv = g.eval(mu);
        let pv = phi.eval(mu);
        if !gv.iter().chain(pv.iter()).all(|v| v.is_finite()) {
            return domain(format!("g or phi is not finite at mu = {mu}"));
        }
        if gv[0] == 0.0 {
            return domain(format!("g vanishes at mu = {mu}"));
        }
        if !(pv[0] > 0.0) {
            return domain(format!("phi leaves the positive reals at mu = {mu}"));
        }
        if pv[1] == 0.0 || pv[1].signum() * sign < 0.0 {
            return domain(format!("phi is not strictly monotone at mu = {mu}"));
        }
        sign = pv[1].signum();
    }
    Ok(Equivalent { base, g, phi })
}

/// E_{s,mu} written as mu^(s/2) times the normalized family [1, 1/2, -s/2, 0, 1]
/// with h = 2K_s(2 pi x), evaluated at mass sqrt(mu).
pub fn es_equivalent(s: f64) -> Result<Equivalent<MassiveSeries<GeneralKernel>>> {
    let base = general_series(
        RadialProfile::bessel(Complex64::new(s, 0.0)),
        FamilyParams::normalized(0.5, -s / 2.0, 1)?,
    );
    equivalence_transform(base, SmoothMap::power(1.0, s / 2.0), SmoothMap::power(1.0, 0.5))
}

/// G-triple of E_{s,mu} for the z-Laplacian, carried over from the normalized family.
pub fn es_jacobi_coefficients(s: f64) -> Result<CoefficientTriple> {
    let e = es_equivalent(s)?;
    let t = jacobi_g_coefficients(&e.base.kernel.profile, 1)?;
    Ok(e.transform_triple(&t))
}

/// g-triple of E_{s,mu}(0; tau) for the tau-Laplacian.
pub fn es_maass_coefficients(s: f64) -> Result<CoefficientTriple> {
    let e = es_equivalent(s)?;
    Ok(e.transform_triple(&maass_g_coefficients(0.5, -s / 2.0)?))
}
