//! Generic lattice series
//!
//!   S = sum*_{(r,l)} F(X, mu) exp(2 pi i L Im(u conj(v)) / tau2),
//!   u = u0 + r tau + l,  X = |u|^2 / tau2,
//!
//! over all (r, l) with u != 0. Every series in the crate has this shape: the
//! kernel F fixes the family, u0 is a shift (w, or z for one half of the
//! continued representation) and v is the phase vector.

use crate::error::{check_tol, Error, Result};
use crate::jet::{exp, recip, Field, Jet, MU, TAU1, TAU2, Z1, Z2};
use crate::lattice::{shell_sum, tail_bound, DecayModel, LatticeGeometry, TailCertificate, MAX_RADIUS};
use crate::point::{TorusPoint, UpperHalfPoint};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// A value together with its certified truncation data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: Complex64,
    pub err_bound: f64,
    pub radius: u32,
    pub terms: u64,
}

/// Shape of the decay of |F| as a function of rho = |u|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// exp(-rate rho^power)
    Stretched { rate: f64, power: f64 },
    /// rho^-exponent
    Power { exponent: f64 },
}

pub trait Kernel: Sync {
    fn eval<T: Field>(&self, x: &T, mu: &T) -> T;
    /// An upper bound for |F(X, mu)| at real X > 0.
    fn magnitude(&self, x: f64, mu: f64) -> f64;
    fn decay(&self, tau2: f64, mu: f64) -> Decay;
}

/// The independent quantities of a term, as scalars or jets.
#[derive(Clone, Copy)]
pub struct TermVars<T> {
    pub tau1: T,
    pub tau2: T,
    pub shift: (T, T),
    pub phase: (T, T),
    pub mu: T,
}

impl TermVars<Complex64> {
    pub fn scalar(tau: &UpperHalfPoint, shift: Complex64, phase: Complex64, mu: f64) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self {
            tau1: c(tau.tau1()),
            tau2: c(tau.tau2()),
            shift: (c(shift.re), c(shift.im)),
            phase: (c(phase.re), c(phase.im)),
            mu: c(mu),
        }
    }
}

#[derive(Clone, Copy)]
pub struct LatticeSeries<'k, K: Kernel> {
    pub kernel: &'k K,
    pub tau: UpperHalfPoint,
    pub mu: f64,
    pub shift: Complex64,
    pub phase: Complex64,
    pub index: f64,
}

impl<'k, K: Kernel> LatticeSeries<'k, K> {
    pub fn new(kernel: &'k K, tau: UpperHalfPoint, mu: f64) -> Self {
        Self {
            kernel,
            tau,
            mu,
            shift: Complex64::new(0.0, 0.0),
            phase: Complex64::new(0.0, 0.0),
            index: 1.0,
        }
    }

    pub fn with_shift(mut self, shift: Complex64) -> Self {
        self.shift = shift;
        self
    }

    pub fn with_phase(mut self, phase: Complex64, index: f64) -> Self {
        self.phase = phase;
        self.index = index;
        self
    }

    /// Index (r, l) with u = 0, if any.
    pub fn excluded(&self) -> Option<(i64, i64)> {
        TorusPoint::from_z(self.shift, &self.tau)
            .lattice_index()
            .map(|(a, b)| (-a, -b))
    }

    fn geometry(&self) -> LatticeGeometry {
        LatticeGeometry::new(&self.tau, self.shift.norm())
    }

    /// Magnitude bound in rho, inflated for derivatives when `jet` is set.
    fn envelope(&self, rho: f64, jet: bool) -> f64 {
        let t2 = self.tau.tau2();
        let m = self.kernel.magnitude(rho * rho / t2, self.mu);
        if !jet {
            return m;
        }
        let c = match self.kernel.decay(t2, self.mu) {
            Decay::Stretched { rate, power } => rate * power * rho.powf(power - 1.0),
            Decay::Power { .. } => 0.0,
        };
        let freq = 2.0 * PI * self.index.abs() * (1.0 + self.phase.norm());
        let g = 1.0 + rho * (1.0 + c + freq + 1.0 / self.mu.max(1e-12).sqrt()) * (1.0 + rho) / t2.min(1.0);
        m * g * g * g
    }

    /// Tail model valid for rho >= rho0: sup of envelope / shape, sampled.
    fn model_from(&self, rho0: f64, jet: bool) -> DecayModel {
        let decay = self.kernel.decay(self.tau.tau2(), self.mu);
        let shape = |rho: f64| -> f64 {
            match decay {
                Decay::Stretched { rate, power } => (-0.9 * rate * rho.powf(power)).exp(),
                Decay::Power { exponent } => rho.powf(-exponent),
            }
        };
        let mut sup: f64 = 0.0;
        let mut rho = rho0;
        let mut falling = 0;
        for _ in 0..4000 {
            let v = self.envelope(rho, jet) / shape(rho);
            if v.is_finite() {
                if v < sup * 0.999 {
                    falling += 1;
                } else {
                    falling = 0;
                }
                sup = sup.max(v);
            }
            if falling > 60 {
                break;
            }
            rho *= 1.01;
        }
        let amplitude = 1.5 * sup;
        match decay {
            Decay::Stretched { rate, power } if (power - 1.0).abs() < 1e-15 => DecayModel::Exponential {
                amplitude,
                rate: 0.9 * rate,
            },
            Decay::Stretched { rate, power } => DecayModel::Stretched {
                amplitude,
                rate: 0.9 * rate,
                power,
            },
            Decay::Power { exponent } => DecayModel::Power { amplitude, exponent },
        }
    }

    fn bound_at(&self, radius: u32, jet: bool) -> Result<(f64, DecayModel)> {
        let geom = self.geometry();
        let rho0 = geom.shell_floor(radius as f64 + 1.0);
        if rho0 <= 0.0 {
            return Ok((f64::INFINITY, self.model_from(1.0, jet)));
        }
        let model = self.model_from(rho0, jet);
        Ok((tail_bound(&model, &geom, radius)?, model))
    }

    /// Smallest radius with certified tail at most tol.
    pub fn plan(&self, tol: f64, jet: bool) -> Result<TailCertificate> {
        check_tol(tol)?;
        let mut hi = 1u32;
        let (mut bound, mut model) = self.bound_at(hi, jet)?;
        while bound > tol {
            if hi >= MAX_RADIUS {
                return Err(Error::Accuracy {
                    target: tol,
                    achieved: bound,
                    best: Complex64::new(f64::NAN, f64::NAN),
                });
            }
            hi = (hi + hi.div_ceil(2)).min(MAX_RADIUS);
            (bound, model) = self.bound_at(hi, jet)?;
        }
        let mut lo = hi * 2 / 3;
        while hi > lo + 1 {
            let mid = (lo + hi) / 2;
            let (b, m) = self.bound_at(mid, jet)?;
            if b <= tol {
                hi = mid;
                bound = b;
                model = m;
            } else {
                lo = mid;
            }
        }
        Ok(TailCertificate {
            radius: hi,
            bound,
            model,
        })
    }

    pub fn term<T: Field>(&self, vars: &TermVars<T>, inv_tau2: &T, r: i64, l: i64) -> T {
        let (r, l) = (r as f64, l as f64);
        let ure = vars.shift.0 + vars.tau1.scale_re(r) + T::real(l);
        let uim = vars.shift.1 + vars.tau2.scale_re(r);
        let x = (ure * ure + uim * uim) * *inv_tau2;
        let f = self.kernel.eval(&x, &vars.mu);
        if self.index == 0.0 {
            return f;
        }
        let arg = (uim * vars.phase.0 - ure * vars.phase.1) * *inv_tau2;
        f * exp(&arg.scale(Complex64::new(0.0, 2.0 * PI * self.index)))
    }

    pub fn sum<T: Field>(&self, vars: &TermVars<T>, radius: u32) -> T {
        let inv = recip(&vars.tau2);
        let skip = self.excluded();
        let origin = skip != Some((0, 0));
        shell_sum(radius, origin, |r, l| {
            if skip == Some((r, l)) {
                T::zero()
            } else {
                self.term(vars, &inv, r, l)
            }
        })
    }

    pub fn term_count(&self, radius: u32) -> u64 {
        let side = 2 * radius as u64 + 1;
        match self.excluded() {
            Some((r, l)) if r.unsigned_abs().max(l.unsigned_abs()) <= radius as u64 => side * side - 1,
            _ => side * side,
        }
    }

    /// Scalar evaluation at the planned radius.
    pub fn evaluate(&self, tol: f64) -> Result<EvalResult> {
        let cert = self.plan(tol, false)?;
        let vars = TermVars::scalar(&self.tau, self.shift, self.phase, self.mu);
        let value = self.sum(&vars, cert.radius);
        Ok(EvalResult {
            value,
            err_bound: cert.bound + 8.0 * f64::EPSILON * value.norm(),
            radius: cert.radius,
            terms: self.term_count(cert.radius),
        })
    }
}

/// Evaluation point in the five real variables; scalars or jets.
#[derive(Clone, Copy)]
pub struct Point<T> {
    pub tau1: T,
    pub tau2: T,
    pub z1: T,
    pub z2: T,
    pub mu: T,
}

impl<T: Field> Point<T> {
    pub fn tau(&self) -> Result<UpperHalfPoint> {
        UpperHalfPoint::new(self.tau1.value().re, self.tau2.value().re)
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.z1.value().re, self.z2.value().re)
    }

    pub fn mu_value(&self) -> f64 {
        self.mu.value().re
    }
}

impl Point<Complex64> {
    pub fn scalar(tau: &UpperHalfPoint, z: Complex64, mu: f64) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self {
            tau1: c(tau.tau1()),
            tau2: c(tau.tau2()),
            z1: c(z.re),
            z2: c(z.im),
            mu: c(mu),
        }
    }
}

impl Point<Jet> {
    /// All five coordinates as independent variables.
    pub fn jet(tau: &UpperHalfPoint, z: Complex64, mu: f64) -> Self {
        Self {
            tau1: Jet::variable(tau.tau1(), TAU1),
            tau2: Jet::variable(tau.tau2(), TAU2),
            z1: Jet::variable(z.re, Z1),
            z2: Jet::variable(z.im, Z2),
            mu: Jet::variable(mu, MU),
        }
    }
}

/// A function of (tau, z, mu) that can be evaluated on scalars and on jets.
pub trait Evaluator: Sync {
    fn evaluate<T: Field>(&self, p: &Point<T>, tol: f64) -> Result<T>;

    fn value_at(&self, tau: &UpperHalfPoint, z: Complex64, mu: f64, tol: f64) -> Result<Complex64> {
        self.evaluate(&Point::scalar(tau, z, mu), tol)
    }
}
