//! Points of the upper half-plane and of the torus C/(Z tau + Z).

use crate::error::{domain, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A modular parameter tau = tau1 + i tau2 with tau2 > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    tau1: f64,
    tau2: f64,
}

impl UpperHalfPoint {
    pub fn new(tau1: f64, tau2: f64) -> Result<Self> {
        if !tau1.is_finite() || !tau2.is_finite() {
            return domain("tau must be finite");
        }
        if tau2 <= 0.0 {
            return domain(format!("tau2 must be positive, got {tau2}"));
        }
        Ok(Self { tau1, tau2 })
    }

    pub fn from_complex(tau: Complex64) -> Result<Self> {
        Self::new(tau.re, tau.im)
    }

    pub fn tau1(&self) -> f64 {
        self.tau1
    }

    pub fn tau2(&self) -> f64 {
        self.tau2
    }

    pub fn tau(&self) -> Complex64 {
        Complex64::new(self.tau1, self.tau2)
    }

    /// tau + 1
    pub fn translate(&self) -> Self {
        Self {
            tau1: self.tau1 + 1.0,
            tau2: self.tau2,
        }
    }

    /// -1/tau
    pub fn invert(&self) -> Self {
        let t = -1.0 / self.tau();
        Self {
            tau1: t.re,
            tau2: t.im,
        }
    }

    /// Lower bound kappa with |r tau + l| >= kappa * max(|r|, |l|) for all integers r, l.
    pub fn shortest_vector_constant(&self) -> f64 {
        let n2 = self.tau1 * self.tau1 + self.tau2 * self.tau2;
        let disc = ((n2 - 1.0).powi(2) + 4.0 * self.tau1 * self.tau1).sqrt();
        // smallest eigenvalue of [[|tau|^2, tau1], [tau1, 1]], written to avoid cancellation
        let lam = 2.0 * self.tau2 * self.tau2 / (n2 + 1.0 + disc);
        lam.sqrt()
    }
}

/// A point z = alpha tau + beta of the torus, stored through its real characteristics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub alpha: f64,
    pub beta: f64,
}

impl TorusPoint {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return domain("characteristics must be finite");
        }
        Ok(Self { alpha, beta })
    }

    pub fn origin() -> Self {
        Self {
            alpha: 0.0,
            beta: 0.0,
        }
    }

    pub fn z(&self, tau: &UpperHalfPoint) -> Complex64 {
        Complex64::new(self.alpha * tau.tau1() + self.beta, self.alpha * tau.tau2())
    }

    pub fn from_z(z: Complex64, tau: &UpperHalfPoint) -> Self {
        let alpha = z.im / tau.tau2();
        Self {
            alpha,
            beta: z.re - alpha * tau.tau1(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            alpha: -self.alpha,
            beta: -self.beta,
        }
    }

    /// Lattice index (A, B) with z = A tau + B when z is a lattice point.
    pub fn lattice_index(&self) -> Option<(i64, i64)> {
        let a = self.alpha.round();
        let b = self.beta.round();
        let eps = 1e-13;
        if (self.alpha - a).abs() <= eps * (1.0 + a.abs())
            && (self.beta - b).abs() <= eps * (1.0 + b.abs())
        {
            Some((a as i64, b as i64))
        } else {
            None
        }
    }

    pub fn is_lattice_point(&self) -> bool {
        self.lattice_index().is_some()
    }

    /// Euclidean distance from z to the nearest lattice point r tau + l.
    pub fn distance_to_lattice(&self, tau: &UpperHalfPoint) -> f64 {
        let z = self.z(tau);
        let near = |r: f64| {
            let l = (z.re - r * tau.tau1()).round();
            (z - (r * tau.tau() + l)).norm()
        };
        let r0 = self.alpha.round();
        let mut best = near(r0);
        let span = (best / tau.tau2()).ceil() + 1.0;
        let mut r = r0 - span;
        while r <= r0 + span {
            best = best.min(near(r));
            r += 1.0;
        }
        best
    }
}

/// The bilinear phase exp(2 pi i Im(w conj(z)) / tau2) appearing in reflection identities.
pub fn reflection_phase(w: &TorusPoint, z: &TorusPoint, tau: &UpperHalfPoint) -> Complex64 {
    let wz = w.z(tau);
    let zz = z.z(tau);
    let im = wz.im * zz.re - wz.re * zz.im;
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * im / tau.tau2())
}
