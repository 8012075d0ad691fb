//! Lattice-sum families with radial kernels:
//! E_{s,mu}, the general profile family mu^d X^c h(mu^a X^b) and the evaluator
//! that sums them with the Jacobi phase exp(2 pi i L Im(lambda conj z) / tau2).

use crate::error::{domain, Error, Result};
use crate::jet::{powc, powf, sqrt, Field};
use crate::point::{TorusPoint, UpperHalfPoint};
use crate::series::{Decay, EvalResult, Evaluator, Kernel, LatticeSeries, Point, TermVars};
use crate::special_fns::{bessel_k_derivs, bessel_k_fast};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub(crate) fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        domain(format!("mass parameter mu must be positive, got {mu}"))
    }
}

/// Constants of x^2 h'' + gamma x h' + (kappa - nu x^(1/a)) h = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeData {
    pub gamma: f64,
    pub kappa: f64,
    pub nu: f64,
    pub a: f64,
}

type ProfileFn = Arc<dyn Fn(f64) -> [Complex64; 4] + Send + Sync>;

#[derive(Clone)]
enum ProfileKind {
    /// 2 K_s(2 pi x)
    Bessel(Complex64),
    /// exp(-rate x)
    Exponential(f64),
    Custom(ProfileFn),
}

/// A radial profile h with a declared exponential decay rate and optional ODE data.
#[derive(Clone)]
pub struct RadialProfile {
    kind: ProfileKind,
    decay_rate: f64,
    ode: Option<OdeData>,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.kind {
            ProfileKind::Bessel(s) => format!("2K_{s}(2 pi x)"),
            ProfileKind::Exponential(r) => format!("exp(-{r} x)"),
            ProfileKind::Custom(_) => "custom".to_string(),
        };
        f.debug_struct("RadialProfile")
            .field("kind", &kind)
            .field("decay_rate", &self.decay_rate)
            .field("ode", &self.ode)
            .finish()
    }
}

impl RadialProfile {
    /// h(x) = 2 K_s(2 pi x); for real s it solves x^2 h'' + x h' - (4 pi^2 x^2 + s^2) h = 0.
    pub fn bessel(s: Complex64) -> Self {
        let ode = (s.im == 0.0).then(|| OdeData {
            gamma: 1.0,
            kappa: -s.re * s.re,
            nu: 4.0 * PI * PI,
            a: 0.5,
        });
        Self {
            kind: ProfileKind::Bessel(s),
            decay_rate: 2.0 * PI,
            ode,
        }
    }

    /// h(x) = exp(-rate x), which solves x^2 h'' - rate^2 x^2 h = 0.
    pub fn exponential(rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return domain(format!("decay rate must be positive, got {rate}"));
        }
        Ok(Self {
            kind: ProfileKind::Exponential(rate),
            decay_rate: rate,
            ode: Some(OdeData {
                gamma: 0.0,
                kappa: 0.0,
                nu: rate * rate,
                a: 0.5,
            }),
        })
    }

    /// A user profile returning [h, h', h'', h'''] with |h(x)| = O(exp(-decay_rate x)).
    /// The declared rate is checked by sampling h at ten geometric points.
    pub fn custom<F>(h: F, decay_rate: f64) -> Result<Self>
    where
        F: Fn(f64) -> [Complex64; 4] + Send + Sync + 'static,
    {
        if !(decay_rate > 0.0 && decay_rate.is_finite()) {
            return domain("a positive decay rate must be declared for a custom profile");
        }
        let p = Self {
            kind: ProfileKind::Custom(Arc::new(h)),
            decay_rate,
            ode: None,
        };
        p.check_decay()?;
        Ok(p)
    }

    fn check_decay(&self) -> Result<()> {
        let g: Vec<f64> = (0..10)
            .map(|j| {
                let x = 2f64.powi(j - 2) / self.decay_rate;
                self.derivs(x)[0].norm() * (self.decay_rate * x).exp()
            })
            .collect();
        let early = g[..5].iter().cloned().fold(0.0, f64::max);
        let late = g[5..].iter().cloned().fold(0.0, f64::max);
        if g.iter().any(|v| !v.is_finite()) || late > 10.0 * early + 1e-300 {
            return domain(format!(
                "profile does not decay at the declared rate {}",
                self.decay_rate
            ));
        }
        Ok(())
    }

    /// Attach ODE data after checking that h satisfies the equation at sample points.
    pub fn with_ode(mut self, ode: OdeData) -> Result<Self> {
        if ode.nu == 0.0 {
            return Err(Error::DegenerateOde("nu must be nonzero".into()));
        }
        if ode.a == 0.0 {
            return Err(Error::DegenerateOde("a must be nonzero".into()));
        }
        for &x in &[0.15, 0.4, 0.8, 1.3, 2.2] {
            let x = x / self.decay_rate * 2.0 * PI / 2.0;
            let [h, d1, d2, _] = self.derivs(x);
            let terms = [x * x * d2, ode.gamma * x * d1, ode.kappa * h, -ode.nu * x.powf(1.0 / ode.a) * h];
            let res: Complex64 = terms.iter().sum();
            let scale: f64 = terms.iter().map(|t| t.norm()).sum();
            if res.norm() > 1e-8 * scale {
                return Err(Error::DegenerateOde(format!(
                    "profile violates the declared ODE at x = {x}: residual {:e}",
                    res.norm() / scale
                )));
            }
        }
        self.ode = Some(ode);
        Ok(self)
    }

    pub fn ode(&self) -> Option<OdeData> {
        self.ode
    }

    pub fn decay_rate(&self) -> f64 {
        self.decay_rate
    }

    /// [h, h', h'', h'''] at x > 0.
    pub fn derivs(&self, x: f64) -> [Complex64; 4] {
        match &self.kind {
            ProfileKind::Bessel(s) => {
                let d = bessel_k_derivs(*s, 2.0 * PI * x);
                let k = 2.0 * PI;
                [2.0 * d[0], 2.0 * k * d[1], 2.0 * k * k * d[2], 2.0 * k * k * k * d[3]]
            }
            ProfileKind::Exponential(r) => {
                let e = (-r * x).exp();
                [e, -r * e, r * r * e, -r * r * r * e].map(|v| Complex64::new(v, 0.0))
            }
            ProfileKind::Custom(f) => f(x),
        }
    }

    fn value(&self, x: f64) -> Complex64 {
        match &self.kind {
            ProfileKind::Bessel(s) => 2.0 * bessel_k_fast(*s, 2.0 * PI * x),
            _ => self.derivs(x)[0],
        }
    }

    fn compose<T: Field>(&self, y: &T) -> T {
        y.compose(|v, n| {
            if n == 0 {
                let z = Complex64::new(0.0, 0.0);
                [self.value(v.re), z, z, z]
            } else {
                self.derivs(v.re)
            }
        })
    }
}

/// Exponents [a, b, c, d] and phase index L of the general family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub index: i32,
}

impl FamilyParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, index: i32) -> Result<Self> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return domain("family exponents must be finite");
        }
        if b <= 0.0 {
            return domain(format!("family exponent b must be positive, got {b}"));
        }
        Ok(Self { a, b, c, d, index })
    }

    /// The normalized shape [1, a, b, 0, L] used with Jacobi coefficient triples.
    pub fn normalized(a: f64, b: f64, index: i32) -> Result<Self> {
        Self::new(1.0, a, b, 0.0, index)
    }
}

/// 2 (mu / X)^(s/2) K_s(2 pi sqrt(mu X))
#[derive(Debug, Clone, Copy)]
pub struct BesselKernel {
    pub s: Complex64,
}

impl Kernel for BesselKernel {
    fn eval<T: Field>(&self, x: &T, mu: &T) -> T {
        let s = self.s;
        let y = sqrt(&(*mu * *x));
        let k = y.compose(|v, n| {
            let arg = 2.0 * PI * v.re;
            if n == 0 {
                let z = Complex64::new(0.0, 0.0);
                return [bessel_k_fast(s, arg), z, z, z];
            }
            let d = bessel_k_derivs(s, arg);
            let c = 2.0 * PI;
            [d[0], c * d[1], c * c * d[2], c * c * c * d[3]]
        });
        let ratio = *mu * crate::jet::recip(x);
        powc(&ratio, s * 0.5) * k.scale_re(2.0)
    }
    fn magnitude(&self, x: f64, mu: f64) -> f64 {
        let s = self.s.re;
        2.0 * (mu / x).powf(s / 2.0) * bessel_k_fast(Complex64::new(s, 0.0), 2.0 * PI * (mu * x).sqrt()).re
    }
    fn decay(&self, tau2: f64, mu: f64) -> Decay {
        Decay::Stretched {
            rate: 2.0 * PI * (mu / tau2).sqrt(),
            power: 1.0,
        }
    }
}

/// mu^d X^c h(mu^a X^b)
#[derive(Debug, Clone)]
pub struct GeneralKernel {
    pub profile: RadialProfile,
    pub params: FamilyParams,
}

impl Kernel for GeneralKernel {
    fn eval<T: Field>(&self, x: &T, mu: &T) -> T {
        let p = &self.params;
        let y = powf(mu, p.a) * powf(x, p.b);
        let h = self.profile.compose(&y);
        let mut out = h;
        if p.c != 0.0 {
            out = out * powf(x, p.c);
        }
        if p.d != 0.0 {
            out = out * powf(mu, p.d);
        }
        out
    }
    fn magnitude(&self, x: f64, mu: f64) -> f64 {
        let p = &self.params;
        let y = mu.powf(p.a) * x.powf(p.b);
        mu.powf(p.d) * x.powf(p.c) * self.profile.value(y).norm()
    }
    fn decay(&self, tau2: f64, mu: f64) -> Decay {
        let p = &self.params;
        Decay::Stretched {
            rate: self.profile.decay_rate * mu.powf(p.a) / tau2.powf(p.b),
            power: 2.0 * p.b,
        }
    }
}

/// sum* F(|lambda|^2/tau2, mu) exp(2 pi i L Im(lambda conj z) / tau2)
#[derive(Debug, Clone)]
pub struct MassiveSeries<K: Kernel> {
    pub kernel: K,
    pub index: f64,
}

impl<K: Kernel> MassiveSeries<K> {
    pub fn new(kernel: K, index: f64) -> Self {
        Self { kernel, index }
    }

    fn series(&self, tau: UpperHalfPoint, z: Complex64, mu: f64) -> LatticeSeries<'_, K> {
        LatticeSeries::new(&self.kernel, tau, mu).with_phase(z, self.index)
    }

    pub fn evaluate_at(&self, z: &TorusPoint, tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
        check_mu(mu)?;
        self.series(*tau, z.z(tau), mu).evaluate(tol)
    }
}

impl<K: Kernel> Evaluator for MassiveSeries<K> {
    fn evaluate<T: Field>(&self, p: &Point<T>, tol: f64) -> Result<T> {
        let mu = p.mu_value();
        check_mu(mu)?;
        let series = self.series(p.tau()?, p.z(), mu);
        let cert = series.plan(tol, T::IS_JET)?;
        let vars = TermVars {
            tau1: p.tau1,
            tau2: p.tau2,
            shift: (T::zero(), T::zero()),
            phase: (p.z1, p.z2),
            mu: p.mu,
        };
        Ok(series.sum(&vars, cert.radius))
    }
}

/// E_{s,mu}(z; tau) = 2 sum* (sqrt(mu tau2)/|lambda|)^s K_s(2 pi sqrt(mu/tau2) |lambda|) exp(2 pi i (r beta - l alpha))
pub fn es_series(s: Complex64) -> MassiveSeries<BesselKernel> {
    MassiveSeries::new(BesselKernel { s }, 1.0)
}

pub fn es_massive(s: Complex64, z: &TorusPoint, tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
    if !(s.re.is_finite() && s.im.is_finite()) {
        return domain("s must be finite");
    }
    es_series(s).evaluate_at(z, tau, mu, tol)
}

pub fn e1_massive(z: &TorusPoint, tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
    es_massive(Complex64::new(1.0, 0.0), z, tau, mu, tol)
}

/// The Bessel sum with the lattice shifted by w: sum over w + lambda != 0.
pub fn e1_massive_twisted(
    w: &TorusPoint,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    tol: f64,
) -> Result<EvalResult> {
    check_mu(mu)?;
    let k = BesselKernel {
        s: Complex64::new(1.0, 0.0),
    };
    LatticeSeries::new(&k, *tau, mu)
        .with_shift(w.z(tau))
        .with_phase(z.z(tau), 1.0)
        .evaluate(tol)
}

pub fn general_series(profile: RadialProfile, params: FamilyParams) -> MassiveSeries<GeneralKernel> {
    let index = params.index as f64;
    MassiveSeries::new(GeneralKernel { profile, params }, index)
}

/// mu^d / tau2^c sum* |lambda|^(2c) h(mu^a |lambda|^(2b) / tau2^b) exp(2 pi i L Im(lambda conj z) / tau2)
pub fn e_general(
    profile: &RadialProfile,
    params: &FamilyParams,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    tol: f64,
) -> Result<EvalResult> {
    general_series(profile.clone(), *params).evaluate_at(z, tau, mu, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::massive::log_partition_z;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn tp(a: f64, b: f64) -> TorusPoint {
        TorusPoint::new(a, b).unwrap()
    }

    #[test]
    fn bessel_sum_is_minus_log_partition() {
        let tau = UpperHalfPoint::new(0.2, 1.1).unwrap();
        let (a, b, mu) = (0.3, 0.7, 0.5);
        let e = e1_massive(&tp(a, b), &tau, mu, 1e-12).unwrap();
        let z = log_partition_z(a, b, (mu / tau.tau2()).sqrt(), &tau, 1e-12).unwrap();
        assert!((e.value + z.value).norm() < 1e-8, "{} {}", e.value, -z.value);
        assert!(e.value.im.abs() < 1e-14);
    }

    #[test]
    fn general_family_reproduces_es() {
        let tau = UpperHalfPoint::new(0.1, 0.9).unwrap();
        let z = tp(0.25, 0.6);
        let s = 1.7;
        let params = FamilyParams::new(0.5, 0.5, -s / 2.0, s / 2.0, 1).unwrap();
        let g = e_general(&RadialProfile::bessel(c(s)), &params, &z, &tau, 0.4, 1e-12).unwrap();
        let e = es_massive(c(s), &z, &tau, 0.4, 1e-12).unwrap();
        assert!((g.value - e.value).norm() <= g.err_bound + e.err_bound + 1e-13);
    }

    #[test]
    fn index_zero_is_z_independent() {
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let params = FamilyParams::new(1.0, 0.5, 0.0, 0.0, 0).unwrap();
        let p = RadialProfile::exponential(1.0).unwrap();
        let a = e_general(&p, &params, &tp(0.1, 0.2), &tau, 0.7, 1e-12).unwrap();
        let b = e_general(&p, &params, &tp(0.6, 0.9), &tau, 0.7, 1e-12).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn profile_validation() {
        assert!(RadialProfile::custom(|x| [c((-x).exp()), c(0.0), c(0.0), c(0.0)], 3.0).is_err());
        let ok = RadialProfile::custom(
            |x| {
                let e = (-2.0 * x).exp();
                [c(e), c(-2.0 * e), c(4.0 * e), c(-8.0 * e)]
            },
            2.0,
        )
        .unwrap();
        let ode = OdeData {
            gamma: 0.0,
            kappa: 0.0,
            nu: 4.0,
            a: 0.5,
        };
        assert!(ok.clone().with_ode(ode).is_ok());
        assert!(ok.clone().with_ode(OdeData { nu: 8.0, ..ode }).is_err());
        assert!(matches!(ok.with_ode(OdeData { nu: 0.0, ..ode }), Err(Error::DegenerateOde(_))));
    }

    #[test]
    fn rejects_nonpositive_mass() {
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        assert!(e1_massive(&tp(0.1, 0.1), &tau, 0.0, 1e-8).is_err());
        assert!(e1_massive(&tp(0.1, 0.1), &tau, -1.0, 1e-8).is_err());
    }
}
