//! Forward-mode Taylor arithmetic.
//!
//! Series terms are written once, generically over [`Field`], and evaluated either
//! on plain complex numbers or on [`Jet`]s: truncated Taylor polynomials of total
//! degree 3 in the five real variables (tau1, tau2, z1, z2, mu). Partial derivatives
//! of a lattice sum up to third order are then exact termwise derivatives.

use crate::lattice::Summand;
use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::LazyLock;

pub const NVARS: usize = 5;
pub const ORDER: usize = 3;
pub const NCOEF: usize = 56;

pub const TAU1: usize = 0;
pub const TAU2: usize = 1;
pub const Z1: usize = 2;
pub const Z2: usize = 3;
pub const MU: usize = 4;

type Exps = [u8; NVARS];

struct Tables {
    exps: Vec<Exps>,
    /// (i, j, k) with monomial i times monomial j = monomial k
    products: Vec<(u8, u8, u8)>,
}

static TABLES: LazyLock<Tables> = LazyLock::new(|| {
    let mut exps = Vec::with_capacity(NCOEF);
    for deg in 0..=ORDER {
        let mut e = [0u8; NVARS];
        collect(&mut exps, &mut e, 0, deg);
    }
    let mut products = Vec::new();
    for (i, a) in exps.iter().enumerate() {
        for (j, b) in exps.iter().enumerate() {
            let mut c = [0u8; NVARS];
            for v in 0..NVARS {
                c[v] = a[v] + b[v];
            }
            if let Some(k) = exps.iter().position(|e| *e == c) {
                products.push((i as u8, j as u8, k as u8));
            }
        }
    }
    Tables { exps, products }
});

fn collect(out: &mut Vec<Exps>, e: &mut Exps, var: usize, left: usize) {
    if var == NVARS - 1 {
        e[var] = left as u8;
        out.push(*e);
        return;
    }
    for k in (0..=left).rev() {
        e[var] = k as u8;
        collect(out, e, var + 1, left - k);
    }
    e[var] = 0;
}

fn index_of(e: &Exps) -> Option<usize> {
    TABLES.exps.iter().position(|x| x == e)
}

/// Scalars and jets alike.
pub trait Field:
    Copy + Send + Sync + Summand + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    const IS_JET: bool;
    fn constant(c: Complex64) -> Self;
    fn value(&self) -> Complex64;
    fn scale(&self, k: Complex64) -> Self;
    /// f(self) given a closure returning f and its first three derivatives at the
    /// base value; the second argument is how many derivatives are actually needed.
    fn compose<F: FnOnce(Complex64, usize) -> [Complex64; 4]>(&self, f: F) -> Self;

    fn real(x: f64) -> Self {
        Self::constant(Complex64::new(x, 0.0))
    }

    fn scale_re(&self, k: f64) -> Self {
        self.scale(Complex64::new(k, 0.0))
    }

    fn add_const(&self, c: Complex64) -> Self {
        *self + Self::constant(c)
    }
}

impl Field for Complex64 {
    const IS_JET: bool = false;
    fn constant(c: Complex64) -> Self {
        c
    }
    fn value(&self) -> Complex64 {
        *self
    }
    fn scale(&self, k: Complex64) -> Self {
        self * k
    }
    fn compose<F: FnOnce(Complex64, usize) -> [Complex64; 4]>(&self, f: F) -> Self {
        f(*self, 0)[0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [Complex64; NCOEF],
}

impl Jet {
    pub fn zero() -> Self {
        Self {
            c: [Complex64::new(0.0, 0.0); NCOEF],
        }
    }

    /// The independent variable `var` at the given value.
    pub fn variable(value: f64, var: usize) -> Self {
        let mut j = Self::constant(Complex64::new(value, 0.0));
        let mut e = [0u8; NVARS];
        e[var] = 1;
        j.c[index_of(&e).expect("degree-one monomial")] = Complex64::new(1.0, 0.0);
        j
    }

    /// Taylor coefficient of the monomial with the given exponents.
    pub fn coefficient(&self, e: [u8; NVARS]) -> Complex64 {
        index_of(&e).map_or(Complex64::new(0.0, 0.0), |i| self.c[i])
    }

    /// The partial derivative with the given multi-index.
    pub fn partial(&self, e: [u8; NVARS]) -> Complex64 {
        let fact: f64 = e.iter().map(|&k| (1..=k as u32).product::<u32>() as f64).product();
        self.coefficient(e) * fact
    }

    fn mul_jet(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for &(i, j, k) in &TABLES.products {
            out.c[k as usize] += self.c[i as usize] * other.c[j as usize];
        }
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, o: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, o: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(o.c.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        self.mul_jet(&o)
    }
}

impl Summand for Jet {
    fn zero() -> Self {
        Jet::zero()
    }
    fn neumaier(sum: &mut Self, comp: &mut Self, x: &Self) {
        for i in 0..NCOEF {
            Complex64::neumaier(&mut sum.c[i], &mut comp.c[i], &x.c[i]);
        }
    }
    fn add(&self, other: &Self) -> Self {
        *self + *other
    }
}

impl Field for Jet {
    const IS_JET: bool = true;
    fn constant(c: Complex64) -> Self {
        let mut j = Jet::zero();
        j.c[0] = c;
        j
    }
    fn value(&self) -> Complex64 {
        self.c[0]
    }
    fn scale(&self, k: Complex64) -> Self {
        let mut j = *self;
        for a in j.c.iter_mut() {
            *a *= k;
        }
        j
    }
    fn compose<F: FnOnce(Complex64, usize) -> [Complex64; 4]>(&self, f: F) -> Self {
        let d = f(self.c[0], ORDER);
        let mut h = *self;
        h.c[0] = Complex64::new(0.0, 0.0);
        let h2 = h * h;
        let h3 = h2 * h;
        let mut out = h.scale(d[1]) + h2.scale(d[2] * 0.5) + h3.scale(d[3] / 6.0);
        out.c[0] = d[0];
        out
    }
}

pub fn exp<T: Field>(x: &T) -> T {
    x.compose(|v, _| {
        let e = v.exp();
        [e, e, e, e]
    })
}

pub fn ln<T: Field>(x: &T) -> T {
    x.compose(|v, n| {
        if n == 0 {
            return [v.ln(), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        let r = 1.0 / v;
        [v.ln(), r, -r * r, 2.0 * r * r * r]
    })
}

pub fn recip<T: Field>(x: &T) -> T {
    x.compose(|v, _| {
        let r = 1.0 / v;
        [r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]
    })
}

pub fn powc<T: Field>(x: &T, p: Complex64) -> T {
    x.compose(|v, n| {
        let y = v.powc(p);
        if n == 0 {
            return [y, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        }
        let r = 1.0 / v;
        [y, p * y * r, p * (p - 1.0) * y * r * r, p * (p - 1.0) * (p - 2.0) * y * r * r * r]
    })
}

pub fn powf<T: Field>(x: &T, p: f64) -> T {
    powc(x, Complex64::new(p, 0.0))
}

pub fn sqrt<T: Field>(x: &T) -> T {
    powf(x, 0.5)
}

pub fn div<T: Field>(a: &T, b: &T) -> T {
    *a * recip(b)
}
