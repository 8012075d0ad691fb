//! The weight-k hyperbolic Laplacian in tau, the Laplacian in z and the third-order
//! Casimir, applied either termwise through Taylor jets of a lattice sum or by
//! central finite differences of a black-box evaluator.

use crate::error::{Error, Result};
use crate::jet::{Jet, MU, NVARS, TAU1, TAU2, Z1, Z2};
use crate::lattice::CompensatedSum;
use crate::massive::CoefficientTriple;
use crate::point::{TorusPoint, UpperHalfPoint};
use crate::series::{Evaluator, Kernel, LatticeSeries, Point, TermVars};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    /// -tau2^2 (d1^2 + d2^2) + i k tau2 (d1 + i d2)
    TauLaplacian,
    /// 2 tau2 dz dzbar + 8 pi i alpha tau2 m dzbar - 2 pi i m
    ZLaplacian,
    Casimir,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub weight: f64,
    pub index: f64,
    pub alpha: f64,
}

impl OperatorSpec {
    pub fn tau_laplacian(weight: f64) -> Self {
        Self {
            kind: OperatorKind::TauLaplacian,
            weight,
            index: 0.0,
            alpha: 0.0,
        }
    }

    pub fn z_laplacian() -> Self {
        Self {
            kind: OperatorKind::ZLaplacian,
            weight: 0.0,
            index: 0.0,
            alpha: 0.0,
        }
    }

    pub fn casimir() -> Self {
        Self {
            kind: OperatorKind::Casimir,
            weight: 0.0,
            index: 0.0,
            alpha: 0.0,
        }
    }

    fn check(&self) -> Result<()> {
        if self.kind != OperatorKind::TauLaplacian && (self.weight != 0.0 || self.index != 0.0) {
            return Err(Error::Unsupported(format!(
                "{:?} is only implemented at weight 0 and index 0",
                self.kind
            )));
        }
        Ok(())
    }

    fn uses_z(&self) -> bool {
        self.kind != OperatorKind::TauLaplacian
    }
}

/// Step sizes for (tau1, tau2, z1, z2, mu).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StencilSpec {
    pub steps: [f64; NVARS],
}

impl StencilSpec {
    pub fn uniform(h: f64, mu_step: f64) -> Self {
        Self {
            steps: [h, h, h, h, mu_step],
        }
    }

    /// h = 1e-3 min(tau2, distance from z to the lattice) in tau and z, 1e-3 mu in mu.
    /// Pass `z = None` when z is not differentiated.
    pub fn default_for(tau: &UpperHalfPoint, z: Option<C64>, mu: f64) -> Self {
        let mut scale = tau.tau2();
        if let Some(z) = z {
            scale = scale.min(TorusPoint::from_z(z, tau).distance_to_lattice(tau));
        }
        Self::uniform(1e-3 * scale, 1e-3 * mu)
    }

    fn validate(&self, tau: &UpperHalfPoint, z: C64, mu: f64, uses_z: bool) -> Result<()> {
        if self.steps.iter().any(|h| !(*h > 0.0 && h.is_finite())) {
            return Err(Error::Stencil("steps must be positive".into()));
        }
        let mut scale = tau.tau2();
        if uses_z {
            scale = scale.min(TorusPoint::from_z(z, tau).distance_to_lattice(tau));
        }
        if self.steps[..4].iter().any(|&h| h >= scale / 100.0) {
            return Err(Error::Stencil(format!(
                "steps {:?} too large for min(tau2, lattice distance) = {scale:e}",
                &self.steps[..4]
            )));
        }
        if self.steps[MU] >= mu / 100.0 {
            return Err(Error::Stencil(format!("mu step {} too large at mu = {mu}", self.steps[MU])));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Method {
    Termwise,
    FiniteDifference(StencilSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OperatorResidual {
    pub residual: C64,
    pub reference: f64,
    pub method: Method,
}

impl OperatorResidual {
    /// |residual| / max(reference, 1)
    pub fn relative(&self) -> f64 {
        self.residual.norm() / self.reference.max(1.0)
    }
}

/// Partial derivatives by multi-index over (tau1, tau2, z1, z2, mu).
trait Partials {
    fn d(&self, e: [u8; NVARS]) -> Result<C64>;
}

impl Partials for Jet {
    fn d(&self, e: [u8; NVARS]) -> Result<C64> {
        Ok(self.partial(e))
    }
}

struct FdPartials<'a, E: Evaluator> {
    ev: &'a E,
    base: [f64; NVARS],
    steps: [f64; NVARS],
    tol: f64,
    cache: RefCell<HashMap<[i8; NVARS], C64>>,
}

impl<E: Evaluator> FdPartials<'_, E> {
    fn at(&self, k: [i8; NVARS]) -> Result<C64> {
        if let Some(v) = self.cache.borrow().get(&k) {
            return Ok(*v);
        }
        let x: Vec<f64> = (0..NVARS).map(|i| self.base[i] + k[i] as f64 * self.steps[i]).collect();
        let tau = UpperHalfPoint::new(x[TAU1], x[TAU2])?;
        let v = self.ev.value_at(&tau, C64::new(x[Z1], x[Z2]), x[MU], self.tol)?;
        self.cache.borrow_mut().insert(k, v);
        Ok(v)
    }
}

fn stencil_1d(order: u8) -> &'static [(i8, f64)] {
    match order {
        0 => &[(0, 1.0)],
        1 => &[(-1, -0.5), (1, 0.5)],
        2 => &[(-1, 1.0), (0, -2.0), (1, 1.0)],
        _ => &[(-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)],
    }
}

impl<E: Evaluator> Partials for FdPartials<'_, E> {
    fn d(&self, e: [u8; NVARS]) -> Result<C64> {
        let mut acc = vec![([0i8; NVARS], 1.0)];
        let mut denom = 1.0;
        for (i, &k) in e.iter().enumerate() {
            denom *= self.steps[i].powi(k as i32);
            let mut next = Vec::new();
            for (off, w) in &acc {
                for &(o, c) in stencil_1d(k) {
                    let mut off = *off;
                    off[i] = o;
                    next.push((off, w * c));
                }
            }
            acc = next;
        }
        let mut sum = CompensatedSum::default();
        for (off, w) in acc {
            sum.add(&(self.at(off)? * w));
        }
        Ok(sum.total() / denom)
    }
}

#[derive(Clone, Copy)]
enum W {
    Z,
    Zbar,
    Tau,
    TauBar,
}

/// Product of Wirtinger derivatives, d_w = (d_x + sigma i d_y) / 2.
fn wirtinger<P: Partials>(p: &P, fs: &[W]) -> Result<C64> {
    let mut total = C64::new(0.0, 0.0);
    for mask in 0..(1u32 << fs.len()) {
        let mut e = [0u8; NVARS];
        let mut c = C64::new(0.5f64.powi(fs.len() as i32), 0.0);
        for (i, f) in fs.iter().enumerate() {
            let (x, y, sigma) = match f {
                W::Z => (Z1, Z2, -1.0),
                W::Zbar => (Z1, Z2, 1.0),
                W::Tau => (TAU1, TAU2, -1.0),
                W::TauBar => (TAU1, TAU2, 1.0),
            };
            if mask >> i & 1 == 1 {
                e[y] += 1;
                c *= C64::new(0.0, sigma);
            } else {
                e[x] += 1;
            }
        }
        total += c * p.d(e)?;
    }
    Ok(total)
}

fn unit(var: usize, k: u8) -> [u8; NVARS] {
    let mut e = [0u8; NVARS];
    e[var] = k;
    e
}

fn tau_laplacian<P: Partials>(p: &P, k: f64, tau2: f64) -> Result<C64> {
    let lap = p.d(unit(TAU1, 2))? + p.d(unit(TAU2, 2))?;
    let first = p.d(unit(TAU1, 1))? + C64::i() * p.d(unit(TAU2, 1))?;
    Ok(-tau2 * tau2 * lap + C64::new(0.0, k * tau2) * first)
}

fn z_laplacian<P: Partials>(p: &P, tau2: f64) -> Result<C64> {
    Ok(0.5 * tau2 * (p.d(unit(Z1, 2))? + p.d(unit(Z2, 2))?))
}

/// The two pieces -4 tau2 z2 (dz dzbar^2 + dz^2 dzbar) and -4 tau2^2 (dtaubar dz^2 + dtau dzbar^2).
fn casimir_pieces<P: Partials>(p: &P, tau2: f64, z2: f64) -> Result<(C64, C64)> {
    let c1 = -4.0 * tau2 * z2 * (wirtinger(p, &[W::Z, W::Zbar, W::Zbar])? + wirtinger(p, &[W::Z, W::Z, W::Zbar])?);
    let c2 = -4.0 * tau2 * tau2 * (wirtinger(p, &[W::TauBar, W::Z, W::Z])? + wirtinger(p, &[W::Tau, W::Zbar, W::Zbar])?);
    Ok((c1, c2))
}

fn apply_partials<P: Partials>(p: &P, op: &OperatorSpec, tau: &UpperHalfPoint, z: C64) -> Result<C64> {
    op.check()?;
    match op.kind {
        OperatorKind::TauLaplacian => tau_laplacian(p, op.weight, tau.tau2()),
        OperatorKind::ZLaplacian => z_laplacian(p, tau.tau2()),
        OperatorKind::Casimir => {
            let (a, b) = casimir_pieces(p, tau.tau2(), z.im)?;
            Ok(a + b)
        }
    }
}

fn mu_derivs<P: Partials>(p: &P) -> Result<[C64; 3]> {
    Ok([p.d([0; NVARS])?, p.d(unit(MU, 1))?, p.d(unit(MU, 2))?])
}

fn jet_at<E: Evaluator>(ev: &E, tau: &UpperHalfPoint, z: C64, mu: f64, tol: f64) -> Result<Jet> {
    ev.evaluate(&Point::jet(tau, z, mu), tol)
}

/// Apply `op` to a lattice-sum evaluator by differentiating every term exactly.
pub fn apply_termwise<E: Evaluator>(
    ev: &E,
    op: &OperatorSpec,
    tau: &UpperHalfPoint,
    z: C64,
    mu: f64,
    tol: f64,
) -> Result<C64> {
    op.check()?;
    let j = jet_at(ev, tau, z, mu, tol)?;
    apply_partials(&j, op, tau, z)
}

/// Apply `op` by second-order central differences of scalar evaluations.
pub fn apply_fd<E: Evaluator>(
    ev: &E,
    op: &OperatorSpec,
    tau: &UpperHalfPoint,
    z: C64,
    mu: f64,
    stencil: &StencilSpec,
    tol: f64,
) -> Result<C64> {
    op.check()?;
    stencil.validate(tau, z, mu, op.uses_z())?;
    let p = fd(ev, tau, z, mu, stencil, tol);
    apply_partials(&p, op, tau, z)
}

fn fd<'a, E: Evaluator>(
    ev: &'a E,
    tau: &UpperHalfPoint,
    z: C64,
    mu: f64,
    stencil: &StencilSpec,
    tol: f64,
) -> FdPartials<'a, E> {
    FdPartials {
        ev,
        base: [tau.tau1(), tau.tau2(), z.re, z.im, mu],
        steps: stencil.steps,
        tol,
        cache: RefCell::new(HashMap::new()),
    }
}

/// Delta_{tau,k} f_mu - (g2 d_mu^2 + g1 d_mu + g0) f_mu at z = 0.
pub fn residual_maass<E: Evaluator>(
    ev: &E,
    triple: &CoefficientTriple,
    weight: f64,
    tau: &UpperHalfPoint,
    mu: f64,
    method: Method,
    tol: f64,
) -> Result<OperatorResidual> {
    let z = C64::new(0.0, 0.0);
    let (lhs, f) = match method {
        Method::Termwise => {
            let j = jet_at(ev, tau, z, mu, tol)?;
            (tau_laplacian(&j, weight, tau.tau2())?, mu_derivs(&j)?)
        }
        Method::FiniteDifference(st) => {
            st.validate(tau, z, mu, false)?;
            let p = fd(ev, tau, z, mu, &st, tol);
            (tau_laplacian(&p, weight, tau.tau2())?, mu_derivs(&p)?)
        }
    };
    Ok(balance(lhs, -1.0, triple, mu, f, method))
}

/// lhs + sign (c2 f'' + c1 f' + c0 f) with the largest contribution as reference.
fn balance(lhs: C64, sign: f64, triple: &CoefficientTriple, mu: f64, f: [C64; 3], method: Method) -> OperatorResidual {
    let c = triple.eval(mu);
    let parts = [c[0] * f[0], c[1] * f[1], c[2] * f[2]];
    let rhs: C64 = parts.iter().sum();
    let reference = parts.iter().map(|v| v.norm()).fold(lhs.norm(), f64::max);
    OperatorResidual {
        residual: lhs + sign * rhs,
        reference,
        method,
    }
}

/// Residuals of C phi - lambda phi and Delta_z phi + (G2 d_mu^2 + G1 d_mu + G0) phi.
#[allow(clippy::too_many_arguments)]
pub fn residual_jacobi<E: Evaluator>(
    ev: &E,
    triple: &CoefficientTriple,
    lambda: C64,
    z: C64,
    tau: &UpperHalfPoint,
    mu: f64,
    method: Method,
    tol: f64,
) -> Result<(OperatorResidual, OperatorResidual)> {
    fn run<P: Partials>(
        p: &P,
        triple: &CoefficientTriple,
        lambda: C64,
        z: C64,
        tau: &UpperHalfPoint,
        mu: f64,
        method: Method,
    ) -> Result<(OperatorResidual, OperatorResidual)> {
        let (c1, c2) = casimir_pieces(p, tau.tau2(), z.im)?;
        let f = mu_derivs(p)?;
        let cas = OperatorResidual {
            residual: c1 + c2 - lambda * f[0],
            reference: c1.norm().max(c2.norm()).max((lambda * f[0]).norm()),
            method,
        };
        let lap = balance(z_laplacian(p, tau.tau2())?, 1.0, triple, mu, f, method);
        Ok((cas, lap))
    }
    match method {
        Method::Termwise => run(&jet_at(ev, tau, z, mu, tol)?, triple, lambda, z, tau, mu, method),
        Method::FiniteDifference(st) => {
            st.validate(tau, z, mu, true)?;
            run(&fd(ev, tau, z, mu, &st, tol), triple, lambda, z, tau, mu, method)
        }
    }
}

/// Delta_{z,0,0} E_s(w, z) + 2 pi (s - 1) E_{s-1}(w, z), termwise.
pub fn delta_es_residual(
    s: C64,
    w: &TorusPoint,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    tol: f64,
) -> Result<OperatorResidual> {
    use crate::classical::ContinuedEisenstein;
    if z.is_lattice_point() {
        return Err(Error::Singular("z is a lattice point".into()));
    }
    let (wc, zc) = (w.z(tau), z.z(tau));
    let j = jet_at(&ContinuedEisenstein { s, w: wc }, tau, zc, 1.0, tol)?;
    let lap = z_laplacian(&j, tau.tau2())?;
    let one = C64::new(1.0, 0.0);
    let rhs = if s == one {
        C64::new(0.0, 0.0)
    } else {
        let e = ContinuedEisenstein { s: s - one, w: wc }.value_at(tau, zc, 1.0, tol)?;
        2.0 * PI * (s - one) * e
    };
    Ok(OperatorResidual {
        residual: lap + rhs,
        reference: lap.norm().max(rhs.norm()),
        method: Method::Termwise,
    })
}

/// (C1 T, C2 T) for the single term (r, l) of a lattice sum with phase index L.
#[allow(clippy::too_many_arguments)]
pub fn casimir_term_pieces<K: Kernel>(
    kernel: &K,
    index: f64,
    r: i64,
    l: i64,
    z: C64,
    tau: &UpperHalfPoint,
    mu: f64,
) -> Result<(C64, C64)> {
    let series = LatticeSeries::new(kernel, *tau, mu).with_phase(z, index);
    let p = Point::<Jet>::jet(tau, z, mu);
    let vars = TermVars {
        tau1: p.tau1,
        tau2: p.tau2,
        shift: (Jet::zero(), Jet::zero()),
        phase: (p.z1, p.z2),
        mu: p.mu,
    };
    let t = series.term(&vars, &crate::jet::recip(&p.tau2), r, l);
    casimir_pieces(&t, tau.tau2(), z.im)
}

/// Fourier coefficients c_m, m = -modes..=modes, of a 1-periodic function by the
/// trapezoid rule on `grid` points.
#[derive(Debug, Clone, Serialize)]
pub struct FourierModes {
    pub max_mode: usize,
    pub coeffs: Vec<C64>,
}

impl FourierModes {
    pub fn mode(&self, m: i64) -> C64 {
        self.coeffs[(m + self.max_mode as i64) as usize]
    }
}

pub fn fourier_modes<F>(f: F, modes: usize, grid: usize) -> Result<FourierModes>
where
    F: Fn(f64) -> Result<C64> + Sync,
{
    if grid <= 2 * modes {
        return Err(Error::Domain(format!("{grid} grid points cannot resolve {modes} modes")));
    }
    let samples = (0..grid)
        .into_par_iter()
        .map(|j| f(j as f64 / grid as f64))
        .collect::<Result<Vec<_>>>()?;
    let m = modes as i64;
    let coeffs = (-m..=m)
        .map(|k| {
            let mut acc = CompensatedSum::default();
            for (j, v) in samples.iter().enumerate() {
                let th = -2.0 * PI * ((k * j as i64).rem_euclid(grid as i64)) as f64 / grid as f64;
                acc.add(&(v * C64::from_polar(1.0, th)));
            }
            acc.total() / grid as f64
        })
        .collect();
    Ok(FourierModes {
        max_mode: modes,
        coeffs,
    })
}

#[cfg(test)]
mod tests;
