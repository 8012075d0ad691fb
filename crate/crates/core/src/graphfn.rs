//! The two-point massive modular graph function and the Green's function of the
//! Helmholtz operator on a rectangular torus.

use crate::classical::eisenstein_continued;
use crate::diffops::{residual_maass, Method, OperatorResidual};
use crate::error::{check_tol, domain, Error, Result};
use crate::jet::{recip, sqrt, Field};
use crate::massive::{e1_massive, maass_g_coefficients};
use crate::point::{TorusPoint, UpperHalfPoint};
use crate::quadrature::{integrate_interval, QuadratureSpec};
use crate::series::{Decay, EvalResult, Evaluator, Kernel, LatticeSeries, Point, TermVars};
use crate::special_fns::{bessel_k_derivs, bessel_k_fast, gamma, upper_incomplete_gamma};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

type C64 = Complex64;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// 4 mu K_1(2 pi sqrt(mu X))^2 / X, the square of the E_{1,mu} Fourier coefficient.
#[derive(Debug, Clone, Copy, Default)]
pub struct GraphKernel;

impl Kernel for GraphKernel {
    fn eval<T: Field>(&self, x: &T, mu: &T) -> T {
        let y = sqrt(&(*mu * *x));
        let k = y.compose(|v, n| {
            let arg = 2.0 * PI * v.re;
            if n == 0 {
                let z = C64::new(0.0, 0.0);
                return [bessel_k_fast(one(), arg), z, z, z];
            }
            let d = bessel_k_derivs(one(), arg);
            let c = 2.0 * PI;
            [d[0], c * d[1], c * c * d[2], c * c * c * d[3]]
        });
        (k * k * *mu * recip(x)).scale_re(4.0)
    }
    fn magnitude(&self, x: f64, mu: f64) -> f64 {
        let k = bessel_k_fast(one(), 2.0 * PI * (mu * x).sqrt()).re;
        4.0 * mu * k * k / x
    }
    fn decay(&self, tau2: f64, mu: f64) -> Decay {
        Decay::Stretched {
            rate: 4.0 * PI * (mu / tau2).sqrt(),
            power: 1.0,
        }
    }
}

/// E_{1,1,mu}(0; tau) as a function of (tau, mu).
#[derive(Debug, Clone, Copy, Default)]
pub struct ModularGraph11;

impl Evaluator for ModularGraph11 {
    fn evaluate<T: Field>(&self, p: &Point<T>, tol: f64) -> Result<T> {
        let mu = p.mu_value();
        if !(mu > 0.0) {
            return domain(format!("mu must be positive, got {mu}"));
        }
        let series = LatticeSeries::new(&GraphKernel, p.tau()?, mu);
        let cert = series.plan(tol, T::IS_JET)?;
        let vars = TermVars {
            tau1: p.tau1,
            tau2: p.tau2,
            shift: (T::zero(), T::zero()),
            phase: (T::zero(), T::zero()),
            mu: p.mu,
        };
        Ok(series.sum(&vars, cert.radius))
    }
}

/// (1/tau2) int_P E_{1,mu}(z) E_{1,mu}(-z) d^2 z collapsed to
/// 4 mu tau2 sum* K_1(2 pi sqrt(mu/tau2) |r tau + l|)^2 / |r tau + l|^2.
pub fn modular_graph_11(tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    if !(mu > 0.0) {
        return domain(format!("mu must be positive, got {mu}"));
    }
    LatticeSeries::new(&GraphKernel, *tau, mu).evaluate(tol)
}

/// Small-mass behaviour E(mu) = limit + sum_k mu^k (c_k2 L^2 + c_k1 L + c_k0) + O(mu^3 L^2)
/// with L = ln mu; `orders[k - 1]` holds [c_k2, c_k1, c_k0].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallMassExpansion {
    pub limit: f64,
    pub orders: [[f64; 3]; 2],
}

impl SmallMassExpansion {
    /// Everything beyond the limit, through order mu^2.
    pub fn correction(&self, mu: f64) -> f64 {
        let l = mu.ln();
        let mut acc = 0.0;
        let mut m = 1.0;
        for c in &self.orders {
            m *= mu;
            acc += m * (c[0] * l * l + c[1] * l + c[2]);
        }
        acc
    }
}

/// Mellin transform in u of 4 u K_1(2 pi sqrt u)^2.
fn kernel_mellin(s: C64) -> Result<C64> {
    let g = gamma(s)? * gamma(s + 1.0)? * gamma(s + 2.0)? / gamma(s + 1.5)?;
    Ok(2.0 * PI.sqrt() * C64::new(4.0 * PI * PI, 0.0).powc(-s - 1.0) * g)
}

/// Epstein zeta sum* (tau2 / |r tau + l|^2)^w from the continued Eisenstein series.
fn epstein(w: C64, tau: &UpperHalfPoint, tol: f64) -> Result<C64> {
    let o = TorusPoint::origin();
    let e = eisenstein_continued(w, &o, &o, tau, tol)?.value;
    Ok(C64::new(PI, 0.0).powc(w) * e / gamma(w)?)
}

/// Laurent coefficients c_{-3}, c_{-2}, c_{-1} of f about `center`, by the trapezoid rule
/// on a circle of radius 0.4 (no other singularity within distance 1).
fn principal_part<F>(f: F, center: C64) -> Result<[C64; 3]>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    const NODES: usize = 64;
    let values = (0..NODES)
        .into_par_iter()
        .map(|j| {
            let e = C64::from_polar(0.4, 2.0 * PI * (j as f64 + 0.5) / NODES as f64);
            Ok((e, f(center + e)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let coeff = |k: i32| values.iter().map(|(e, v)| v * e.powi(-k)).sum::<C64>() / NODES as f64;
    Ok([coeff(-3), coeff(-2), coeff(-1)])
}

/// Expansion of E_{1,1,mu}(tau) about mu = 0 from the residues of the Mellin representation
/// E(mu) = (1 / 2 pi i) int psi(s) mu^-s Z(2 + s) ds at s = 0, -1, -2.
pub fn modular_graph_11_small_mass(tau: &UpperHalfPoint, tol: f64) -> Result<SmallMassExpansion> {
    check_tol(tol)?;
    let limit = epstein(C64::new(2.0, 0.0), tau, tol)?.re / (PI * PI);
    let mut orders = [[0.0; 3]; 2];
    for (k, out) in orders.iter_mut().enumerate() {
        let c = principal_part(|s| Ok(kernel_mellin(s)? * epstein(2.0 + s, tau, tol)?), C64::new(-(k as f64) - 1.0, 0.0))?;
        // residue of mu^k e^{-eps L} (c0 / eps^3 + c1 / eps^2 + c2 / eps)
        *out = [c[0].re / 2.0, -c[1].re, c[2].re];
    }
    Ok(SmallMassExpansion { limit, orders })
}

/// Two-point extrapolation to mu = 0 of values carrying an O(mu) error.
pub fn richardson(mu1: f64, v1: f64, mu2: f64, v2: f64) -> f64 {
    (mu1 * v2 - mu2 * v1) / (mu1 - mu2)
}

/// Estimates of lim E_{1,1,mu} from two masses: plain Richardson, which leaves the
/// mu ln^2 mu term in place, and Richardson after removing the order-mu logarithms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEstimate {
    pub plain: f64,
    pub corrected: f64,
    pub expansion: SmallMassExpansion,
}

pub fn modular_graph_11_limit(tau: &UpperHalfPoint, mu1: f64, mu2: f64, tol: f64) -> Result<LimitEstimate> {
    if !(mu1 > 0.0 && mu2 > 0.0 && mu1 != mu2) {
        return domain("need two distinct positive masses");
    }
    let v1 = modular_graph_11(tau, mu1, tol)?.value.re;
    let v2 = modular_graph_11(tau, mu2, tol)?.value.re;
    let expansion = modular_graph_11_small_mass(tau, tol)?;
    let c1 = v1 - expansion.correction(mu1);
    let c2 = v2 - expansion.correction(mu2);
    Ok(LimitEstimate {
        plain: richardson(mu1, v1, mu2, v2),
        corrected: richardson(mu1, c1, mu2, c2),
        expansion,
    })
}

/// The same quantity by the periodic trapezoid rule on an n x n grid in (alpha, beta).
pub fn modular_graph_11_quadrature(tau: &UpperHalfPoint, mu: f64, n: usize, tol: f64) -> Result<C64> {
    if n < 2 {
        return domain("need at least a 2 x 2 grid");
    }
    let h = 1.0 / n as f64;
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                let z = TorusPoint::new(i as f64 * h, j as f64 * h)?;
                let a = e1_massive(&z, tau, mu, tol)?.value;
                let b = e1_massive(&z.neg(), tau, mu, tol)?.value;
                acc += a * b;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.iter().sum::<C64>() * h * h)
}

/// (Delta_tau - 2 mu d_mu + mu^2 d_mu^2 + 2) E_{1,1,mu}, which is the residual of the
/// massive Maass equation with (g2, g1, g0) = (-mu^2, 2 mu, -2).
pub fn massive_e2_residual(tau: &UpperHalfPoint, mu: f64, method: Method, tol: f64) -> Result<OperatorResidual> {
    residual_maass(&ModularGraph11, &maass_g_coefficients(1.0, -2.0)?, 0.0, tau, mu, method, tol)
}

/// Which representation of the Helmholtz Green's function to sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelmholtzForm {
    /// sum over r, closed form in l; converges geometrically unless alpha is an integer
    Rows,
    /// sum over l, closed form in r; converges geometrically unless beta is an integer
    Columns,
    /// (1 / 2 pi tau2) sum over periodic images of K_0(sqrt(mu) rho), rho the flat distance
    /// in (alpha, beta / tau2)
    Images,
    /// heat-kernel split at t0: a Gaussian-damped mode sum plus a few images weighted by
    /// incomplete gamma functions; cheap everywhere off the lattice
    Ewald,
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// sum_l e^{-2 pi i l x} / (4 pi^2 l^2 + a^2) = cosh(a (1/2 - x)) / (2 a sinh(a / 2)), x in [0, 1)
fn closed_form(a: f64, x: f64) -> f64 {
    ((-a * x).exp() + (-a * (1.0 - x)).exp()) / (2.0 * a * (1.0 - (-a).exp()))
}

/// One-dimensional sum of the remaining index with geometric tail bound; `amp(k)` is the
/// Fourier weight, `phase` the frequency and `d` the distance of the closed-form variable
/// to the integers.
fn line_sum<F>(a_of: F, x: f64, phase: f64, rate: f64, scale: f64, tol: f64) -> Result<EvalResult>
where
    F: Fn(i64) -> f64,
{
    let d = x.min(1.0 - x);
    if d <= 0.0 {
        return Err(Error::Singular("closed-form variable is an integer; the sum does not converge geometrically".into()));
    }
    let q = (-rate * d).exp();
    let mut value = C64::new(scale * closed_form(a_of(0), x), 0.0);
    let mut k = 0i64;
    loop {
        k += 1;
        let c = scale * closed_form(a_of(k), x);
        value += 2.0 * c * (2.0 * PI * k as f64 * phase).cos();
        // both signs of k, each term below 2 scale q^k / (2 rate k (1 - e^-rate))
        let bound = 2.0 * scale * q.powi(k as i32 + 1) / (rate * (k + 1) as f64 * (1.0 - (-rate).exp()) * (1.0 - q));
        if bound < tol || k > 50_000_000 {
            if bound >= tol {
                return Err(Error::Accuracy {
                    target: tol,
                    achieved: bound,
                    best: value,
                });
            }
            return Ok(EvalResult {
                value,
                err_bound: bound,
                radius: k as u32,
                terms: 2 * k as u64 + 1,
            });
        }
    }
}

fn images(a: f64, b: f64, tau2: f64, mu: f64, tol: f64) -> Result<EvalResult> {
    let s = mu.sqrt();
    // images sit on the lattice Z x Z/tau2 with density tau2, so the tail beyond R is at
    // most int_R^inf rho K_0(s rho) d rho = R K_1(s R) / s, doubled for the boundary cells
    let mut r = 1.0;
    while 2.0 * r * bessel_k_fast(one(), s * r).re / s > tol {
        r *= 1.1;
    }
    let jmax = r.ceil() as i64 + 1;
    let kmax = (r * tau2).ceil() as i64 + 1;
    let k0 = C64::new(0.0, 0.0);
    let mut value = 0.0;
    let mut terms = 0u64;
    for j in -jmax..=jmax {
        let dx2 = (a - j as f64).powi(2);
        for k in -kmax..=kmax {
            let rho = (dx2 + ((b - k as f64) / tau2).powi(2)).sqrt();
            if rho <= r {
                value += bessel_k_fast(k0, s * rho).re;
                terms += 1;
            }
        }
    }
    Ok(EvalResult {
        value: C64::new(value / (2.0 * PI * tau2), 0.0),
        err_bound: tol,
        radius: jmax as u32,
        terms,
    })
}

/// int_a^inf e^{-u - b/u} du / u = sum_n (-b)^n / n! Gamma(-n, a), for b / a well below 1
fn leaky(a: f64, b: f64) -> Result<f64> {
    let mut sum = 0.0;
    let mut coef = 1.0;
    for n in 0..200 {
        let g = upper_incomplete_gamma(C64::new(-(n as f64), 0.0), a)?.re;
        let term = coef * g;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            return Ok(sum);
        }
        coef *= -b / (n + 1) as f64;
    }
    Err(Error::Accuracy {
        target: 1e-17,
        achieved: f64::NAN,
        best: C64::new(sum, 0.0),
    })
}

fn ewald(a: f64, b: f64, tau2: f64, mu: f64, tol: f64) -> Result<EvalResult> {
    let t0 = (1.0 / (4.0 * PI * tau2)).min(0.5 / mu);
    let depth = (1.0 / tol).ln() + 5.0;
    // modes with |k| <= k0 + one cell are all summed; the rest is below
    // (1 / 4 pi^2 tau2) int_k0^inf 2 pi k e^{-t0 k^2} / k0^2 dk
    let cell = 2.0 * PI * (1.0 + tau2 * tau2).sqrt();
    let k0 = (depth / t0).sqrt();
    let kmax = k0 + cell;
    let spec_tail = (-t0 * k0 * k0).exp() / (4.0 * PI * tau2 * t0 * k0 * k0);
    let lmax = (kmax / (2.0 * PI)).ceil() as i64;
    let rmax = (kmax / (2.0 * PI * tau2)).ceil() as i64;
    let mut spectral = 0.0;
    let mut terms = 0u64;
    for l in -lmax..=lmax {
        for r in -rmax..=rmax {
            let k2 = 4.0 * PI * PI * ((l * l) as f64 + (r * r) as f64 * tau2 * tau2);
            if k2 > kmax * kmax {
                continue;
            }
            let phase = 2.0 * PI * (r as f64 * b - l as f64 * a);
            spectral += (-t0 * (k2 + mu)).exp() / (k2 + mu) * phase.cos();
            terms += 1;
        }
    }
    // an image at distance rho contributes W <= E_1(a) <= e^{-a} / a with a = rho^2 / 4 t0;
    // beyond r0 their density tau2 integrates to 4 t0^2 e^{-r0^2 / 4 t0} / r0^2 in total
    let r0 = (4.0 * t0 * depth).sqrt();
    let rho_max = r0 + (1.0 + 1.0 / (tau2 * tau2)).sqrt();
    let real_tail = 4.0 * t0 * t0 * (-depth).exp() / (r0 * r0);
    let jmax = rho_max.ceil() as i64 + 1;
    let kmax_img = (rho_max * tau2).ceil() as i64 + 1;
    let mut real = 0.0;
    for j in -jmax..=jmax {
        let dx2 = (a - j as f64).powi(2);
        for k in -kmax_img..=kmax_img {
            let rho2 = dx2 + ((b - k as f64) / tau2).powi(2);
            if rho2 > rho_max * rho_max {
                continue;
            }
            real += leaky(rho2 / (4.0 * t0), mu * rho2 / 4.0)?;
            terms += 1;
        }
    }
    Ok(EvalResult {
        value: C64::new(spectral + real / (4.0 * PI * tau2), 0.0),
        err_bound: spec_tail + real_tail,
        radius: lmax.max(jmax) as u32,
        terms,
    })
}

fn check_rectangular(tau: &UpperHalfPoint, mu: f64) -> Result<()> {
    if tau.tau1() != 0.0 {
        return Err(Error::Unsupported(
            "the Helmholtz Green's function is only implemented for tau1 = 0".into(),
        ));
    }
    if !(mu > 0.0) {
        return domain(format!("mu must be positive, got {mu}"));
    }
    Ok(())
}

/// G(z) = sum_{(r,l)} e^{2 pi i (r beta - l alpha)} / (4 pi^2 (r^2 tau2^2 + l^2) + mu) in the
/// chosen representation.
pub fn helmholtz_green_form(
    form: HelmholtzForm,
    z: &TorusPoint,
    tau: &UpperHalfPoint,
    mu: f64,
    tol: f64,
) -> Result<EvalResult> {
    check_tol(tol)?;
    check_rectangular(tau, mu)?;
    if z.is_lattice_point() {
        return Err(Error::Singular("the Green's function is singular on the lattice".into()));
    }
    let t2 = tau.tau2();
    let (a, b) = (frac(z.alpha), frac(z.beta));
    match form {
        HelmholtzForm::Rows => line_sum(
            |r| (4.0 * PI * PI * (r * r) as f64 * t2 * t2 + mu).sqrt(),
            a,
            b,
            2.0 * PI * t2,
            1.0,
            tol,
        ),
        HelmholtzForm::Columns => line_sum(
            |l| (4.0 * PI * PI * (l * l) as f64 + mu).sqrt() / t2,
            b,
            a,
            2.0 * PI / t2,
            1.0 / (t2 * t2),
            tol,
        ),
        HelmholtzForm::Images => images(a, b, t2, mu, tol),
        HelmholtzForm::Ewald => ewald(a, b, t2, mu, tol),
    }
}

/// A single mode e^{2 pi i (r beta - l alpha)} / (4 pi^2 (r^2 tau2^2 + l^2) + mu).
pub fn helmholtz_mode(r: i64, l: i64, z: &TorusPoint, tau: &UpperHalfPoint, mu: f64) -> Result<C64> {
    check_rectangular(tau, mu)?;
    let t2 = tau.tau2();
    let den = 4.0 * PI * PI * ((r * r) as f64 * t2 * t2 + (l * l) as f64) + mu;
    Ok(C64::from_polar(1.0 / den, 2.0 * PI * (r as f64 * z.beta - l as f64 * z.alpha)))
}

/// The Helmholtz Green's function in whichever representation is cheapest at z.
pub fn helmholtz_green(z: &TorusPoint, tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
    check_rectangular(tau, mu)?;
    let t2 = tau.tau2();
    let (a, b) = (frac(z.alpha), frac(z.beta));
    let (da, db) = (a.min(1.0 - a), b.min(1.0 - b));
    let digits = (1.0 / tol).ln().max(1.0);
    let rows = digits / (2.0 * PI * t2 * da.max(1e-300));
    let cols = digits * t2 / (2.0 * PI * db.max(1e-300));
    // the Ewald split costs a few hundred terms, each line sum one term per row
    let form = if rows <= cols && rows <= 200.0 {
        HelmholtzForm::Rows
    } else if cols <= 200.0 {
        HelmholtzForm::Columns
    } else {
        HelmholtzForm::Ewald
    };
    helmholtz_green_form(form, z, tau, mu, tol)
}

/// The resummed display with the exponent exp(-2 pi tau2 A_r |l - alpha|), kept as a
/// diagnostic: it is not equal to the mode sum.
pub fn helmholtz_green_as_printed(z: &TorusPoint, tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    check_rectangular(tau, mu)?;
    let t2 = tau.tau2();
    let (a, b) = (frac(z.alpha), frac(z.beta));
    let mut value = 0.0;
    let mut r = 0i64;
    loop {
        let ar = (4.0 * PI * PI * (r * r) as f64 * t2 * t2 + mu).sqrt();
        let c = 2.0 * PI * t2 * ar;
        // sum_l e^{-c |l - a|} = (e^{-c a} + e^{-c (1 - a)}) / (1 - e^{-c})
        let s = ((-c * a).exp() + (-c * (1.0 - a)).exp()) / (1.0 - (-c).exp()) / (2.0 * ar);
        let w = if r == 0 { 1.0 } else { 2.0 * (2.0 * PI * r as f64 * b).cos() };
        value += w * s;
        if r > 0 && 2.0 * s < tol * 1e-2 {
            return Ok(EvalResult {
                value: C64::new(value, 0.0),
                err_bound: tol,
                radius: r as u32,
                terms: 2 * r as u64 + 1,
            });
        }
        r += 1;
    }
}

/// The massless limit with the (0, 0) mode removed:
/// sum* e^{2 pi i (r beta - l alpha)} / (4 pi^2 (r^2 tau2^2 + l^2)), for alpha not an integer.
pub fn helmholtz_green_massless(z: &TorusPoint, tau: &UpperHalfPoint, tol: f64) -> Result<EvalResult> {
    check_tol(tol)?;
    check_rectangular(tau, 1.0)?;
    let t2 = tau.tau2();
    let (a, b) = (frac(z.alpha), frac(z.beta));
    // r = 0: sum_{l != 0} e^{-2 pi i l a} / (4 pi^2 l^2) = B_2(a) / 2
    let zero_mode = (a * a - a + 1.0 / 6.0) / 2.0;
    let rest = line_sum(
        |r| if r == 0 { f64::INFINITY } else { 2.0 * PI * r.abs() as f64 * t2 },
        a,
        b,
        2.0 * PI * t2,
        1.0,
        tol,
    )?;
    Ok(EvalResult {
        value: rest.value + zero_mode,
        ..rest
    })
}

/// int_0^1 int_0^1 G d alpha d beta by nested double-exponential quadrature.
pub fn helmholtz_mean_value(tau: &UpperHalfPoint, mu: f64, tol: f64) -> Result<f64> {
    check_rectangular(tau, mu)?;
    let spec = QuadratureSpec::default_params().with_tol(tol)?;
    let g_tol = tol * 1e-2;
    let failure = std::sync::Mutex::new(None);
    let inner = |a: f64| -> C64 {
        let r = integrate_interval(
            |b| match TorusPoint::new(a, b).and_then(|z| {
                if z.is_lattice_point() {
                    // a node rounded onto a corner, where the weight underflows anyway
                    return Ok(C64::new(0.0, 0.0));
                }
                helmholtz_green(&z, tau, mu, g_tol).map(|v| v.value)
            }) {
                Ok(v) => v,
                Err(e) => {
                    *failure.lock().unwrap() = Some(e);
                    C64::new(f64::NAN, 0.0)
                }
            },
            0.0,
            1.0,
            &spec,
        );
        match r {
            Ok(v) => v.value,
            Err(e) => {
                *failure.lock().unwrap() = Some(e);
                C64::new(f64::NAN, 0.0)
            }
        }
    };
    let outer = integrate_interval(inner, 0.0, 1.0, &spec);
    if let Some(e) = failure.into_inner().unwrap() {
        return Err(e);
    }
    Ok(outer?.value.re)
}

/// Both sides of sum_{l>=1} 1 / (l^2 + m^2) = pi coth(pi m) / (2 m) - 1 / (2 m^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CothIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_error: f64,
}

impl CothIdentity {
    pub fn difference(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub fn coth_identity(m: f64) -> Result<CothIdentity> {
    if !(m > 0.0 && m.is_finite()) {
        return domain(format!("m must be positive, got {m}"));
    }
    // direct sum to n, then Euler-Maclaurin: int_n^inf f - f(n)/2 - f'(n)/12 + f'''(n)/720
    let n = 2000usize;
    let f = |l: f64| 1.0 / (l * l + m * m);
    let mut acc = crate::lattice::CompensatedSum::<f64>::default();
    for l in (1..n).rev() {
        acc.add(&f(l as f64));
    }
    let x = n as f64;
    let d = x * x + m * m;
    let integral = (PI / 2.0 - (x / m).atan()) / m;
    let f1 = -2.0 * x / (d * d);
    let f3 = 24.0 * x * (m * m - x * x) / (d * d * d * d);
    let tail = integral + f(x) / 2.0 - f1 / 12.0 + f3 / 720.0;
    let lhs = acc.total() + tail;
    let rhs = PI / (2.0 * m * (PI * m).tanh()) - 1.0 / (2.0 * m * m);
    Ok(CothIdentity {
        lhs,
        rhs,
        lhs_error: 1e-3 * (f3 / 720.0).abs() + 4.0 * f64::EPSILON * lhs,
    })
}
