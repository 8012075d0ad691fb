//! Mellin transforms in the mass parameter, the quasiperiodic power series in mu and
//! the W-type generating sum.

use crate::classical::{eisenstein, eisenstein_continued, kronecker_limit_e1};
use crate::error::{check_tol, domain, Error, Result};
use crate::jet::{ln, recip, Field};
use crate::lattice::CompensatedSum;
use crate::massive::{e1_massive, log_partition_z};
use crate::point::{reflection_phase, TorusPoint, UpperHalfPoint};
use crate::quadrature::gauss_legendre;
use crate::series::{Decay, EvalResult, Kernel, LatticeSeries};
use crate::special_fns::{gamma, Approx};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

type C64 = Complex64;

/// Geometric mu-grid for the forward transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinGrid {
    pub mu_min: f64,
    pub mu_max: f64,
    pub points: usize,
}

impl Default for MellinGrid {
    fn default() -> Self {
        Self {
            mu_min: 1e-6,
            mu_max: 80.0,
            points: 240,
        }
    }
}

impl MellinGrid {
    pub fn new(mu_min: f64, mu_max: f64, points: usize) -> Result<Self> {
        if !(mu_min > 0.0 && mu_max > mu_min && mu_max.is_finite()) || points < 8 {
            return domain(format!("invalid Mellin grid [{mu_min}, {mu_max}] with {points} points"));
        }
        Ok(Self { mu_min, mu_max, points })
    }
}

/// Vertical segment c + it, |t| <= cutoff, split into unit panels of `nodes_per_panel`
/// Gauss-Legendre nodes so that grids for different cutoffs nest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinContour {
    pub c: f64,
    pub cutoff: f64,
    pub nodes_per_panel: usize,
}

impl MellinContour {
    pub fn new(c: f64, cutoff: f64, nodes_per_panel: usize) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return domain(format!("contour abscissa must be positive, got {c}"));
        }
        if !(cutoff > 0.0 && cutoff.is_finite()) || nodes_per_panel < 2 {
            return domain("contour needs a positive cutoff and at least two nodes per panel");
        }
        Ok(Self {
            c,
            cutoff,
            nodes_per_panel,
        })
    }
}

fn require_off_lattice(z: &TorusPoint) -> Result<()> {
    if z.is_lattice_point() {
        Err(Error::Singular("z must lie off the lattice".into()))
    } else {
        Ok(())
    }
}

/// E_{1,mu}(z) from the product formula below `SWITCH_MU`, where the Bessel sum needs
/// a radius growing like mu^-1/2, and from the Bessel sum above it.
const SWITCH_MU: f64 = 0.1;

fn e1_any(z: &TorusPoint, tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<C64> {
    if mu < SWITCH_MU {
        let m = (mu / tau.tau2()).sqrt();
        Ok(-log_partition_z(z.alpha, z.beta, m, tau, tol)?.value)
    } else {
        Ok(e1_massive(z, tau, mu, tol)?.value)
    }
}

/// int_0^inf E_{1,mu}(z) mu^(s-1) dmu.
///
/// E_1(0, z) exp(-mu) is subtracted to make the integrand O(mu log mu) at the origin and
/// added back as E_1 Gamma(s); the remainder is integrated by the trapezoid rule in log mu.
pub fn mellin_forward(z: &TorusPoint, tau: &UpperHalfPoint, s: C64, grid: &MellinGrid, tol: f64) -> Result<Approx> {
    check_tol(tol)?;
    if !(s.re > 0.0) {
        return domain(format!("forward Mellin transform needs Re s > 0, got {s}"));
    }
    require_off_lattice(z)?;
    let e1 = kronecker_limit_e1(z, tau)?;
    let (u0, u1) = (grid.mu_min.ln(), grid.mu_max.ln());
    let h = (u1 - u0) / (grid.points - 1) as f64;
    let eval_tol = tol * 1e-3;
    let g = |mu: f64| -> Result<C64> { Ok(e1_any(z, tau, mu, eval_tol)? - e1 * (-mu).exp()) };
    let values = (0..grid.points)
        .into_par_iter()
        .map(|k| {
            let u = u0 + k as f64 * h;
            let mu = u.exp();
            Ok(g(mu)? * (s * u).exp())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = CompensatedSum::default();
    for (k, v) in values.iter().enumerate() {
        let w = if k == 0 || k + 1 == values.len() { 0.5 } else { 1.0 };
        acc.add(&(v * w * h));
    }
    // below mu_min the remainder behaves like mu times a slowly varying factor
    let head = values[0] / (s + 1.0);
    let last = values[values.len() - 1].norm();
    let value = acc.total() + head + e1 * gamma(s)?;
    Ok(Approx {
        value,
        error: head.norm() + last + 1e3 * eval_tol * (u1 - u0),
    })
}

/// Gamma(s) pi^-s E_{s+1}(0, z).
pub fn mellin_rhs(z: &TorusPoint, tau: &UpperHalfPoint, s: C64, tol: f64) -> Result<C64> {
    let e = eisenstein(s + 1.0, &TorusPoint::origin(), z, tau, tol)?;
    Ok(gamma(s)? * (-s * PI.ln()).exp() * e.value)
}

/// (1 / pi) int_{t0}^{t1} Re[(pi mu)^-(c+it) Gamma(c+it) E_{1+c+it}(0, z)] dt on unit-width
/// Gauss-Legendre panels, together with the largest integrand magnitude seen.
#[allow(clippy::too_many_arguments)]
fn contour_segment(
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    c: f64,
    t0: f64,
    t1: f64,
    nodes_per_panel: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    let (x, w) = gauss_legendre(nodes_per_panel);
    let panels = (t1 - t0).ceil().max(1.0) as usize;
    let width = (t1 - t0) / panels as f64;
    let origin = TorusPoint::origin();
    let ln_pm = (PI * mu).ln();
    let integrand = |t: f64| -> Result<f64> {
        let s = C64::new(c, t);
        let e = eisenstein_continued(s + 1.0, &origin, z, tau, tol * 1e-2)?.value;
        Ok(((-s * ln_pm).exp() * gamma(s)? * e).re)
    };
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            let a = t0 + p as f64 * width;
            x.iter()
                .zip(&w)
                .map(move |(xi, wi)| (a + 0.5 * width * (xi + 1.0), 0.5 * width * wi))
        })
        .collect();
    let values = nodes
        .par_iter()
        .map(|&(t, _)| integrand(t))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = CompensatedSum::<f64>::default();
    for (v, (_, wt)) in values.iter().zip(&nodes) {
        acc.add(&(v * wt));
    }
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok((acc.total() / PI, scale))
}

fn check_inverse(z: &TorusPoint, mu: f64, tol: f64) -> Result<()> {
    check_tol(tol)?;
    if !(mu > 0.0) {
        return domain(format!("mu must be positive, got {mu}"));
    }
    require_off_lattice(z)
}

/// (1 / 2 pi i) int_{c - iT}^{c + iT} (pi mu)^-s Gamma(s) E_{s+1}(0, z) ds, using the
/// conjugate symmetry of the integrand for real characteristics.
pub fn mellin_inverse(
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    contour: &MellinContour,
    tol: f64,
) -> Result<Approx> {
    check_inverse(z, mu, tol)?;
    let c = contour.c;
    let (value, scale) = contour_segment(z, tau, mu, c, 0.0, contour.cutoff, contour.nodes_per_panel, tol)?;
    // |Gamma(c + it)| <= 1.2 sqrt(2 pi) |t|^(c - 1/2) exp(-pi |t| / 2) for |t| >= 1, and
    // |E_{1+c+it}| is bounded on the line by its value scale there
    let t = contour.cutoff.max(1.0);
    let gamma_tail = 1.2 * (2.0 * PI).sqrt() * t.powf(c - 0.5) * (-PI * t / 2.0).exp() / (PI / 2.0);
    let tail = gamma_tail * (-c * (PI * mu).ln()).exp() * scale.max(1.0) / PI;
    Ok(Approx {
        value: C64::new(value, 0.0),
        error: tail,
    })
}

/// The contribution of t in [t0, t1] to `mellin_inverse`: the change in the result when
/// the cutoff moves from t0 to t1.
#[allow(clippy::too_many_arguments)]
pub fn mellin_inverse_segment(
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    c: f64,
    t0: f64,
    t1: f64,
    nodes_per_panel: usize,
    tol: f64,
) -> Result<f64> {
    check_inverse(z, mu, tol)?;
    MellinContour::new(c, t1, nodes_per_panel)?;
    if !(t0 >= 0.0 && t1 > t0) {
        return domain(format!("need 0 <= t0 < t1, got [{t0}, {t1}]"));
    }
    Ok(contour_segment(z, tau, mu, c, t0, t1, nodes_per_panel, tol)?.0)
}

/// Partial sum of the power series in mu with the magnitude of the first omitted term.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    pub value: C64,
    pub next_term: f64,
    pub terms: Vec<C64>,
}

/// exp(2 pi i Im(w conj z) / tau2) sum_{n=0}^{N} (-pi mu)^n / n! E_n(z, w).
pub fn power_series(
    w: &TorusPoint,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    order: usize,
    tol: f64,
) -> Result<PowerSeries> {
    check_tol(tol)?;
    if w.is_lattice_point() || z.is_lattice_point() {
        return Err(Error::Singular(
            "the power series needs w and z off the lattice".into(),
        ));
    }
    if !(mu > 0.0) {
        return domain(format!("mu must be positive, got {mu}"));
    }
    if order > 16 {
        return domain(format!("power series order is capped at 16, got {order}"));
    }
    let ph = reflection_phase(w, z, tau);
    let terms = (0..=order + 1)
        .into_par_iter()
        .map(|n| {
            let mut coef = 1.0;
            for k in 1..=n {
                coef *= -PI * mu / k as f64;
            }
            let e = eisenstein_continued(C64::new(n as f64, 0.0), z, w, tau, tol)?.value;
            Ok(ph * coef * e)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = CompensatedSum::default();
    for t in &terms[..=order] {
        acc.add(t);
    }
    Ok(PowerSeries {
        value: acc.total(),
        next_term: terms[order + 1].norm(),
        terms: terms[..=order].to_vec(),
    })
}

/// (X + mu)^-2
struct WKernel;

impl Kernel for WKernel {
    fn eval<T: Field>(&self, x: &T, mu: &T) -> T {
        let r = recip(&(*x + *mu));
        r * r
    }
    fn magnitude(&self, x: f64, mu: f64) -> f64 {
        (x + mu).powi(-2)
    }
    fn decay(&self, _tau2: f64, _mu: f64) -> Decay {
        Decay::Power { exponent: 4.0 }
    }
}

/// Second central difference in mu of log(1 + mu / X) with step h.
struct LogSecondDifference {
    h: f64,
}

impl Kernel for LogSecondDifference {
    fn eval<T: Field>(&self, x: &T, mu: &T) -> T {
        let l = |m: T| ln(&(T::real(1.0) + m * recip(x)));
        let h = T::real(self.h);
        (l(*mu + h) - l(*mu).scale_re(2.0) + l(*mu - h)).scale_re(1.0 / (self.h * self.h))
    }
    fn magnitude(&self, x: f64, mu: f64) -> f64 {
        // the second difference of a concave function is bounded by its largest curvature
        (x + mu - self.h).powi(-2)
    }
    fn decay(&self, _tau2: f64, _mu: f64) -> Decay {
        Decay::Power { exponent: 4.0 }
    }
}

/// W(tau, mu) = sum* tau2^2 / (|r tau + l|^2 + mu tau2)^2.
pub fn w_generating(tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
    if !(mu > 0.0) {
        return domain(format!("mu must be positive, got {mu}"));
    }
    LatticeSeries::new(&WKernel, *tau, mu).evaluate(tol)
}

/// sum* of the second difference in mu of log(1 + mu tau2 / |r tau + l|^2); it tends to -W as h -> 0.
pub fn log_generating_second_difference(tau: &UpperHalfPoint, mu: f64, h: f64, tol: f64) -> Result<EvalResult> {
    if !(mu > 0.0 && h > 0.0 && h < mu) {
        return domain(format!("need 0 < h < mu, got h = {h}, mu = {mu}"));
    }
    LatticeSeries::new(&LogSecondDifference { h }, *tau, mu).evaluate(tol)
}

#[cfg(test)]
mod tests;
