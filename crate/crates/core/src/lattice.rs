//! Shell enumeration of Z^2, certified truncation radii and deterministic
//! compensated summation.
//!
//! Shell n is the Chebyshev sphere max(|r|, |l|) = n, listed lexicographically in
//! (r, l). Sums are formed per fixed block of shells with Neumaier summation and
//! the block totals are combined in shell order, so the result does not depend on
//! the number of worker threads.

use crate::error::{check_tol, Error, Result};
use crate::point::UpperHalfPoint;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

/// Largest truncation radius the planner will propose.
pub const MAX_RADIUS: u32 = 6000;
const SHELLS_PER_BLOCK: u32 = 8;

/// Points of shell n in canonical order.
pub fn shell(n: u32) -> impl Iterator<Item = (i64, i64)> {
    let n = n as i64;
    (-n..=n).flat_map(move |r| {
        let (step, first) = if r.abs() == n { (1, -n) } else { (2 * n, -n) };
        let count = if r.abs() == n { 2 * n + 1 } else { 2 };
        (0..count).map(move |k| (r, first + k * step))
    })
}

/// All (r, l) != (0, 0) with max(|r|, |l|) <= radius, shell by shell.
pub fn enumerate_shells(radius: u32) -> Result<Vec<(i64, i64)>> {
    if radius < 1 {
        return Err(Error::Domain("shell radius must be at least 1".into()));
    }
    Ok((1..=radius).flat_map(shell).collect())
}

/// Upper bound on a summand's magnitude as a function of rho = |u + r tau + l|.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DecayModel {
    /// amplitude * exp(-rate * rho)
    Exponential { amplitude: f64, rate: f64 },
    /// amplitude * exp(-rate * rho^power), power > 0
    Stretched {
        amplitude: f64,
        rate: f64,
        power: f64,
    },
    /// amplitude * rho^-exponent
    Power { amplitude: f64, exponent: f64 },
}

impl DecayModel {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            DecayModel::Exponential { amplitude, rate } => amplitude >= 0.0 && rate > 0.0,
            DecayModel::Stretched {
                amplitude,
                rate,
                power,
            } => amplitude >= 0.0 && rate > 0.0 && power > 0.0,
            DecayModel::Power {
                amplitude,
                exponent,
            } => {
                if exponent <= 2.0 {
                    return Err(Error::Divergence(format!(
                        "power decay rho^-{exponent} is not summable over Z^2"
                    )));
                }
                amplitude >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Domain(format!("invalid decay model {self:?}")))
        }
    }

    fn magnitude(&self, rho: f64) -> f64 {
        match *self {
            DecayModel::Exponential { amplitude, rate } => amplitude * (-rate * rho).exp(),
            DecayModel::Stretched {
                amplitude,
                rate,
                power,
            } => amplitude * (-rate * rho.powf(power)).exp(),
            DecayModel::Power {
                amplitude,
                exponent,
            } => amplitude * rho.powf(-exponent),
        }
    }
}

/// Lower bound |u + r tau + l| >= kappa * n - shift on shell n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeGeometry {
    pub kappa: f64,
    pub shift: f64,
}

impl LatticeGeometry {
    pub fn new(tau: &UpperHalfPoint, shift: f64) -> Self {
        Self {
            kappa: tau.shortest_vector_constant(),
            shift: shift.abs(),
        }
    }

    /// Smallest |u + lambda| guaranteed on shell n (may be nonpositive for small n).
    pub fn shell_floor(&self, n: f64) -> f64 {
        self.kappa * n - self.shift
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailCertificate {
    pub radius: u32,
    pub bound: f64,
    pub model: DecayModel,
}

/// Bound on the sum of |summand| over all shells n > radius.
pub fn tail_bound(model: &DecayModel, geom: &LatticeGeometry, radius: u32) -> Result<f64> {
    model.validate()?;
    let r = radius as f64;
    let k = geom.kappa;
    if geom.shell_floor(r + 1.0) <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let bound = match *model {
        DecayModel::Exponential { amplitude, rate } => {
            // 8 A e^{c s} sum_{n > R} n q^n with q = e^{-c kappa}, summed in closed form
            let q = (-rate * k).exp();
            let qr = (-(rate * k) * (r + 1.0) + rate * geom.shift).exp();
            8.0 * amplitude * qr * ((r + 1.0) - r * q) / ((1.0 - q) * (1.0 - q))
        }
        DecayModel::Stretched { .. } => {
            let mut sum = 0.0;
            let mut n = r + 1.0;
            loop {
                let t = 8.0 * n * model.magnitude(geom.shell_floor(n));
                sum += t;
                if t <= 1e-18 * sum || t == 0.0 || n > r + 1e7 {
                    break;
                }
                n += 1.0;
            }
            sum
        }
        DecayModel::Power {
            amplitude,
            exponent,
        } => {
            // sum_{n > R} 8 n (kappa n - s)^-p <= (8/kappa^2) int_{kappa R - s}^inf (y + s) y^-p dy
            let y = k * r - geom.shift;
            if y <= 0.0 {
                return Ok(f64::INFINITY);
            }
            let p = exponent;
            8.0 * amplitude / (k * k)
                * (y.powf(2.0 - p) / (p - 2.0) + geom.shift * y.powf(1.0 - p) / (p - 1.0))
        }
    };
    Ok(bound)
}

/// Smallest radius whose certified tail is at most tol.
pub fn plan_truncation(model: &DecayModel, tau: &UpperHalfPoint, shift: f64, tol: f64) -> Result<TailCertificate> {
    plan_with_geometry(model, &LatticeGeometry::new(tau, shift), tol)
}

pub fn plan_with_geometry(model: &DecayModel, geom: &LatticeGeometry, tol: f64) -> Result<TailCertificate> {
    check_tol(tol)?;
    model.validate()?;
    // bracket by doubling, then bisect on the monotone bound
    let mut hi = 1u32;
    let mut bound = tail_bound(model, geom, hi)?;
    while bound > tol {
        if hi >= MAX_RADIUS {
            return Err(Error::Accuracy {
                target: tol,
                achieved: bound,
                best: Complex64::new(f64::NAN, f64::NAN),
            });
        }
        hi = (hi * 2).min(MAX_RADIUS);
        bound = tail_bound(model, geom, hi)?;
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if tail_bound(model, geom, mid)? <= tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(TailCertificate {
        radius: hi,
        bound: tail_bound(model, geom, hi)?,
        model: *model,
    })
}

/// Values that can be accumulated with Neumaier compensation.
pub trait Summand: Copy + Send + Sync {
    fn zero() -> Self;
    /// sum += x, carrying the rounding error in comp
    fn neumaier(sum: &mut Self, comp: &mut Self, x: &Self);
    fn add(&self, other: &Self) -> Self;
}

#[inline]
fn two_sum(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    *comp += if sum.abs() >= x.abs() {
        (*sum - t) + x
    } else {
        (x - t) + *sum
    };
    *sum = t;
}

impl Summand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn neumaier(sum: &mut Self, comp: &mut Self, x: &Self) {
        two_sum(sum, comp, *x);
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
}

impl Summand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn neumaier(sum: &mut Self, comp: &mut Self, x: &Self) {
        two_sum(&mut sum.re, &mut comp.re, x.re);
        two_sum(&mut sum.im, &mut comp.im, x.im);
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
}

/// Compensated accumulator.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T: Summand> {
    sum: T,
    comp: T,
}

impl<T: Summand> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self {
            sum: T::zero(),
            comp: T::zero(),
        }
    }
}

impl<T: Summand> CompensatedSum<T> {
    pub fn add(&mut self, x: &T) {
        T::neumaier(&mut self.sum, &mut self.comp, x);
    }

    pub fn total(&self) -> T {
        self.sum.add(&self.comp)
    }
}

/// Sum of f(r, l) over shells 1..=radius (plus the origin when requested) in the
/// canonical order, reproducible bit-for-bit for any thread count.
pub fn shell_sum<T, F>(radius: u32, include_origin: bool, f: F) -> T
where
    T: Summand,
    F: Fn(i64, i64) -> T + Sync,
{
    let blocks: Vec<(u32, u32)> = (0..radius.div_ceil(SHELLS_PER_BLOCK))
        .map(|b| {
            let lo = b * SHELLS_PER_BLOCK + 1;
            (lo, (lo + SHELLS_PER_BLOCK - 1).min(radius))
        })
        .collect();
    let block_sum = |&(lo, hi): &(u32, u32)| {
        let mut acc = CompensatedSum::<T>::default();
        for n in lo..=hi {
            for (r, l) in shell(n) {
                acc.add(&f(r, l));
            }
        }
        acc.total()
    };
    let points = 4 * (radius as u64) * (radius as u64 + 1);
    let partial: Vec<T> = if points < 4096 {
        blocks.iter().map(block_sum).collect()
    } else {
        blocks.par_iter().map(block_sum).collect()
    };
    let mut acc = CompensatedSum::<T>::default();
    if include_origin {
        acc.add(&f(0, 0));
    }
    for p in &partial {
        acc.add(p);
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_counts_and_order() {
        assert_eq!(enumerate_shells(1).unwrap().len(), 8);
        assert_eq!(enumerate_shells(2).unwrap().len(), 24);
        let s3: Vec<_> = shell(3).collect();
        assert_eq!(s3[0], (-3, -3));
        assert_eq!(s3.len(), 24);
        let mut sorted = s3.clone();
        sorted.sort();
        assert_eq!(sorted, s3);
        assert!(enumerate_shells(0).is_err());
    }

    #[test]
    fn shells_cover_square() {
        let pts = enumerate_shells(5).unwrap();
        let mut set = std::collections::HashSet::new();
        for p in &pts {
            assert!(set.insert(*p));
            assert!(p.0.abs() <= 5 && p.1.abs() <= 5 && *p != (0, 0));
        }
        assert_eq!(set.len(), 120);
    }

    #[test]
    fn power_law_plan_bounds_brute_force_tail() {
        // sum' |r i + l|^-4 tail beyond R against the certificate
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let model = DecayModel::Power {
            amplitude: 1.0,
            exponent: 4.0,
        };
        let cert = plan_truncation(&model, &tau, 0.0, 1e-3).unwrap();
        let r = cert.radius;
        let term = |r: i64, l: i64| ((r * r + l * l) as f64).powi(-2);
        let big = 8 * r;
        let tail = shell_sum(big, false, term) - shell_sum(r, false, term);
        assert!(tail <= cert.bound && cert.bound <= 1e-3);
        assert!(tail_bound(&model, &LatticeGeometry::new(&tau, 0.0), r - 1).unwrap() > 1e-3);
    }

    #[test]
    fn exponential_plan_bounds_tail() {
        let tau = UpperHalfPoint::new(0.4, 0.7).unwrap();
        let model = DecayModel::Exponential {
            amplitude: 1.0,
            rate: 1.3,
        };
        let cert = plan_truncation(&model, &tau, 0.2, 1e-10).unwrap();
        let t = tau.tau();
        let term = |r: i64, l: i64| (-1.3 * (0.2 + r as f64 * t + l as f64).norm()).exp();
        let tail = shell_sum(2 * cert.radius, false, term) - shell_sum(cert.radius, false, term);
        assert!(tail <= cert.bound);
    }

    #[test]
    fn degenerate_plans_rejected() {
        let tau = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let m = DecayModel::Exponential {
            amplitude: 1.0,
            rate: 1.0,
        };
        assert!(plan_truncation(&m, &tau, 0.0, f64::INFINITY).is_err());
        assert!(plan_truncation(&m, &tau, 0.0, 0.0).is_err());
        let p = DecayModel::Power {
            amplitude: 1.0,
            exponent: 2.0,
        };
        assert!(matches!(plan_truncation(&p, &tau, 0.0, 1e-3), Err(Error::Divergence(_))));
    }

    #[test]
    fn summation_is_thread_independent() {
        let f = |r: i64, l: i64| Complex64::new(1.0 / (1.0 + (r * r + 3 * l * l) as f64), (r - l) as f64 * 1e-7);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(6).build().unwrap();
        let a = one.install(|| shell_sum(300, true, f));
        let b = many.install(|| shell_sum(300, true, f));
        assert_eq!(a.re.to_bits(), b.re.to_bits());
        assert_eq!(a.im.to_bits(), b.im.to_bits());
    }
}
