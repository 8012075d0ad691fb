//! Classical Kronecker-Eisenstein series
//!
//!   E_s(w, z; tau) = Gamma(s) (tau2/pi)^s sum* exp(2 pi i Im((w + lambda) conj z)/tau2) / |w + lambda|^(2s)
//!
//! by the direct sum (Re s > 1), by Riemann's continuation in incomplete gamma
//! functions (all s), and at s = 1, w = 0 by Kronecker's second limit formula.

use crate::error::{domain, Error, Result};
use crate::jet::{exp, powc, Field};
use crate::point::{reflection_phase, TorusPoint, UpperHalfPoint};
use crate::series::{Decay, EvalResult, Evaluator, Kernel, LatticeSeries, Point, TermVars};
use crate::special_fns::{eta, gamma, gamma_tail_integral, theta1};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Gamma(s) pi^-s X^-s
pub struct PowerKernel {
    s: Complex64,
    prefactor: Complex64,
}

impl PowerKernel {
    pub fn new(s: Complex64) -> Result<Self> {
        Ok(Self {
            s,
            prefactor: gamma(s)? * (-s * PI.ln()).exp(),
        })
    }
}

impl Kernel for PowerKernel {
    fn eval<T: Field>(&self, x: &T, _mu: &T) -> T {
        powc(x, -self.s).scale(self.prefactor)
    }
    fn magnitude(&self, x: f64, _mu: f64) -> f64 {
        self.prefactor.norm() * x.powf(-self.s.re)
    }
    fn decay(&self, _tau2: f64, _mu: f64) -> Decay {
        Decay::Power {
            exponent: 2.0 * self.s.re,
        }
    }
}

/// T(a, pi X) = int_1^inf t^(a-1) exp(-pi X t) dt
pub struct TailGammaKernel {
    a: Complex64,
}

impl TailGammaKernel {
    pub fn new(a: Complex64) -> Self {
        Self { a }
    }
}

impl Kernel for TailGammaKernel {
    fn eval<T: Field>(&self, x: &T, _mu: &T) -> T {
        let a = self.a;
        x.compose(|v, n| {
            let c = PI * v.re;
            let t = |k: f64| gamma_tail_integral(a + k, c).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            let zero = Complex64::new(0.0, 0.0);
            if n == 0 {
                return [t(0.0), zero, zero, zero];
            }
            [t(0.0), -PI * t(1.0), PI * PI * t(2.0), -PI * PI * PI * t(3.0)]
        })
    }
    fn magnitude(&self, x: f64, _mu: f64) -> f64 {
        gamma_tail_integral(Complex64::new(self.a.re, 0.0), PI * x)
            .map(|v| v.re)
            .unwrap_or(f64::INFINITY)
    }
    fn decay(&self, tau2: f64, _mu: f64) -> Decay {
        Decay::Stretched {
            rate: PI / tau2,
            power: 2.0,
        }
    }
}

/// Direct lattice sum, Re s > 1.
pub fn eisenstein_direct(
    s: Complex64,
    w: &TorusPoint,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    tol: f64,
) -> Result<EvalResult> {
    if s.re <= 1.0 {
        return Err(Error::Divergence(format!(
            "direct sum needs Re s > 1, got {s}; use the continued representation"
        )));
    }
    let k = PowerKernel::new(s)?;
    LatticeSeries::new(&k, *tau, 1.0)
        .with_shift(w.z(tau))
        .with_phase(z.z(tau), 1.0)
        .evaluate(tol)
}

/// E_s(w, z) as a function of (tau, z) for fixed complex w, by the continued representation.
#[derive(Debug, Clone, Copy)]
pub struct ContinuedEisenstein {
    pub s: Complex64,
    pub w: Complex64,
}

struct ContinuedParts<T> {
    value: T,
    bound: f64,
    radius: u32,
    terms: u64,
}

impl ContinuedEisenstein {
    fn parts<T: Field>(&self, p: &Point<T>, tol: f64) -> Result<ContinuedParts<T>> {
        let (s, w) = (self.s, self.w);
        let tau = p.tau()?;
        let z = p.z();
        let zp = TorusPoint::from_z(z, &tau);
        let wp = TorusPoint::from_z(w, &tau);
        if s == Complex64::new(0.0, 0.0) && wp.is_lattice_point() {
            return Err(Error::Pole("E_s(w, z) at s = 0 with w in the lattice".into()));
        }
        if s == Complex64::new(1.0, 0.0) && zp.is_lattice_point() {
            return Err(Error::Pole("E_s(w, z) at s = 1 with z in the lattice".into()));
        }
        let ka = TailGammaKernel::new(1.0 - s);
        let kb = TailGammaKernel::new(s);
        let sa = LatticeSeries::new(&ka, tau, 1.0).with_shift(z).with_phase(w, 1.0);
        let sb = LatticeSeries::new(&kb, tau, 1.0).with_shift(w).with_phase(z, 1.0);
        let ca = sa.plan(tol / 2.0, T::IS_JET)?;
        let cb = sb.plan(tol / 2.0, T::IS_JET)?;
        let wc = (T::real(w.re), T::real(w.im));
        let va = TermVars {
            tau1: p.tau1,
            tau2: p.tau2,
            shift: (p.z1, p.z2),
            phase: wc,
            mu: p.mu,
        };
        let vb = TermVars {
            shift: wc,
            phase: (p.z1, p.z2),
            ..va
        };
        let a = sa.sum(&va, ca.radius);
        let b = sb.sum(&vb, cb.radius);
        // exp(2 pi i Im(w conj z) / tau2)
        let arg = (p.z1.scale_re(w.im) - p.z2.scale_re(w.re)) * crate::jet::recip(&p.tau2);
        let ph = exp(&arg.scale(Complex64::new(0.0, 2.0 * PI)));
        let mut value = ph * a + b;
        if wp.is_lattice_point() {
            value = value.add_const(-1.0 / s);
        }
        if zp.is_lattice_point() {
            value = value + ph.scale(1.0 / (s - 1.0));
        }
        Ok(ContinuedParts {
            value,
            bound: ca.bound + cb.bound,
            radius: ca.radius.max(cb.radius),
            terms: sa.term_count(ca.radius) + sb.term_count(cb.radius),
        })
    }
}

impl Evaluator for ContinuedEisenstein {
    fn evaluate<T: Field>(&self, p: &Point<T>, tol: f64) -> Result<T> {
        Ok(self.parts(p, tol)?.value)
    }
}

/// Continued representation, valid for all s away from the poles.
pub fn eisenstein_continued(
    s: Complex64,
    w: &TorusPoint,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    tol: f64,
) -> Result<EvalResult> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return domain("s must be finite");
    }
    let e = ContinuedEisenstein { s, w: w.z(tau) };
    let parts = e.parts(&Point::scalar(tau, z.z(tau), 1.0), tol)?;
    Ok(EvalResult {
        value: parts.value,
        err_bound: parts.bound + 8.0 * f64::EPSILON * parts.value.norm(),
        radius: parts.radius,
        terms: parts.terms,
    })
}

/// The cheaper convergent representation for the given s.
pub fn eisenstein(s: Complex64, w: &TorusPoint, z: &TorusPoint, tau: &UpperHalfPoint, tol: f64) -> Result<EvalResult> {
    if s.re >= 3.0 {
        eisenstein_direct(s, w, z, tau, tol)
    } else {
        eisenstein_continued(s, w, z, tau, tol)
    }
}

/// E_1(0, z; tau) = -log|theta_1(z; tau) / eta(tau)|^2 + 2 pi z2^2 / tau2
pub fn kronecker_limit_e1(z: &TorusPoint, tau: &UpperHalfPoint) -> Result<Complex64> {
    if z.is_lattice_point() {
        return Err(Error::Singular("E_1(0, z) is logarithmically singular on the lattice".into()));
    }
    let zc = z.z(tau);
    let ratio = theta1(zc, tau) / eta(tau);
    let v = -2.0 * ratio.norm().ln() + 2.0 * PI * zc.im * zc.im / tau.tau2();
    Ok(Complex64::new(v, 0.0))
}

/// Relative deviations from the (quasi-)periodicity laws of E_s(w, z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quasiperiodicity {
    /// |E(w+1, z) - E(w, z)| / |E|
    pub w_plus_one: f64,
    /// |E(w+tau, z) - E(w, z)| / |E|
    pub w_plus_tau: f64,
    /// |E(w, z+1) - exp(2 pi i A) E(w, z)| / |E|
    pub z_plus_one: f64,
    /// |E(w, z+tau) - exp(-2 pi i B) E(w, z)| / |E|
    pub z_plus_tau: f64,
}

impl Quasiperiodicity {
    pub fn max(&self) -> f64 {
        self.w_plus_one
            .max(self.w_plus_tau)
            .max(self.z_plus_one)
            .max(self.z_plus_tau)
    }
}

pub fn quasiperiodicity_residual(
    s: Complex64,
    w: &TorusPoint,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    tol: f64,
) -> Result<Quasiperiodicity> {
    let e = |w: TorusPoint, z: TorusPoint| eisenstein(s, &w, &z, tau, tol).map(|r| r.value);
    let base = e(*w, *z)?;
    let shift = |p: &TorusPoint, da: f64, db: f64| TorusPoint {
        alpha: p.alpha + da,
        beta: p.beta + db,
    };
    let n = base.norm().max(f64::MIN_POSITIVE);
    let pa = Complex64::from_polar(1.0, 2.0 * PI * w.alpha);
    let pb = Complex64::from_polar(1.0, -2.0 * PI * w.beta);
    Ok(Quasiperiodicity {
        w_plus_one: (e(shift(w, 0.0, 1.0), *z)? - base).norm() / n,
        w_plus_tau: (e(shift(w, 1.0, 0.0), *z)? - base).norm() / n,
        z_plus_one: (e(*w, shift(z, 0.0, 1.0))? - pa * base).norm() / n,
        z_plus_tau: (e(*w, shift(z, 1.0, 0.0))? - pb * base).norm() / n,
    })
}

/// Right-hand side of the reflection formula: exp(2 pi i Im(w conj z)/tau2) E_{1-s}(z, w).
pub fn reflected(s: Complex64, w: &TorusPoint, z: &TorusPoint, tau: &UpperHalfPoint, tol: f64) -> Result<EvalResult> {
    let r = eisenstein_continued(1.0 - s, z, w, tau, tol)?;
    Ok(EvalResult {
        value: reflection_phase(w, z, tau) * r.value,
        ..r
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn tp(a: f64, b: f64) -> TorusPoint {
        TorusPoint::new(a, b).unwrap()
    }

    #[test]
    fn direct_at_i_is_catalan() {
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let r = eisenstein_direct(c(2.0), &TorusPoint::origin(), &TorusPoint::origin(), &tau, 1e-6).unwrap();
        let exact = 2.0 / 3.0 * 0.915_965_594_177_219;
        assert!((r.value.re - exact).abs() <= r.err_bound + 1e-12, "{} {}", r.value, exact);
    }

    #[test]
    fn direct_rejects_small_s() {
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let o = TorusPoint::origin();
        assert!(matches!(eisenstein_direct(c(1.0), &o, &o, &tau, 1e-6), Err(Error::Divergence(_))));
    }

    #[test]
    fn continued_matches_direct() {
        let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
        let z = tp(0.3, 0.4);
        for w in [TorusPoint::origin(), tp(0.2, 0.1)] {
            let d = eisenstein_direct(c(2.5), &w, &z, &tau, 1e-9).unwrap();
            let k = eisenstein_continued(c(2.5), &w, &z, &tau, 1e-12).unwrap();
            assert!((d.value - k.value).norm() <= d.err_bound + k.err_bound, "{} {}", d.value, k.value);
        }
    }

    #[test]
    fn kronecker_limit_matches_continuation() {
        let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
        let z = tp(0.3, 0.4);
        let k = kronecker_limit_e1(&z, &tau).unwrap();
        let e = eisenstein_continued(c(1.0), &TorusPoint::origin(), &z, &tau, 1e-12).unwrap();
        assert!((k - e.value).norm() < 1e-8);
    }

    #[test]
    fn reflection_formula() {
        let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
        let (w, z) = (tp(0.2, 0.1), tp(0.4, 0.7));
        for s in [0.3, 0.5, 1.4] {
            let l = eisenstein_continued(c(s), &w, &z, &tau, 1e-12).unwrap();
            let r = reflected(c(s), &w, &z, &tau, 1e-12).unwrap();
            assert!((l.value - r.value).norm() < 1e-10, "s = {s}");
        }
    }

    #[test]
    fn quasiperiodicity() {
        let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
        let q = quasiperiodicity_residual(c(1.7), &tp(0.2, 0.3), &tp(0.35, 0.1), &tau, 1e-12).unwrap();
        assert!(q.max() < 1e-8, "{q:?}");
    }

    #[test]
    fn lattice_point_handling() {
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let o = TorusPoint::origin();
        assert!(matches!(kronecker_limit_e1(&o, &tau), Err(Error::Singular(_))));
        assert!(matches!(eisenstein_continued(c(1.0), &o, &o, &tau, 1e-10), Err(Error::Pole(_))));
        // E_3(0, 0) from both representations
        let d = eisenstein_direct(c(3.0), &o, &o, &tau, 1e-10).unwrap();
        let k = eisenstein_continued(c(3.0), &o, &o, &tau, 1e-12).unwrap();
        assert!((d.value - k.value).norm() < 1e-9);
    }
}
