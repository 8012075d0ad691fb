//! Evaluable functions by id.

use crate::error::CliError;
use crate::params::Params;
use massive_core::classical::{eisenstein_continued, eisenstein_direct, kronecker_limit_e1, reflected};
use massive_core::graphfn::{
    coth_identity, helmholtz_green, helmholtz_green_form, helmholtz_green_massless, helmholtz_mean_value,
    modular_graph_11, modular_graph_11_quadrature, HelmholtzForm,
};
use massive_core::massive::{
    e1_massive, e1_massive_twisted, e_general, es_massive, f_open, log_partition_z, partition_z, FamilyParams,
    RadialProfile,
};
use massive_core::quadrature::QuadratureSpec;
use massive_core::series::EvalResult;
use massive_core::special_fns::{bessel_k, c_alpha_m_bessel, c_alpha_m_integral, eta, gamma, Approx};
use massive_core::transforms::{
    mellin_forward, mellin_inverse, mellin_rhs, power_series, w_generating, MellinContour, MellinGrid,
};
use massive_core::Complex64;
use serde::Serialize;

/// A computed value with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Output {
    pub value: Complex64,
    pub err_bound: f64,
    pub radius: u32,
    pub terms: u64,
}

impl Output {
    pub fn exact(value: Complex64) -> Self {
        Self {
            value,
            err_bound: 0.0,
            radius: 0,
            terms: 0,
        }
    }

    pub fn real(v: f64) -> Self {
        Self::exact(Complex64::new(v, 0.0))
    }
}

impl From<EvalResult> for Output {
    fn from(r: EvalResult) -> Self {
        Self {
            value: r.value,
            err_bound: r.err_bound,
            radius: r.radius,
            terms: r.terms,
        }
    }
}

impl From<Approx> for Output {
    fn from(a: Approx) -> Self {
        Self {
            err_bound: a.error,
            ..Self::exact(a.value)
        }
    }
}

/// The serialized form of an evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Record {
    pub value_re: f64,
    pub value_im: f64,
    pub err_bound: f64,
    pub radius: u32,
    pub terms: u64,
    pub wall_ms: f64,
}

impl Record {
    pub fn new(o: &Output, wall_ms: f64) -> Self {
        Self {
            value_re: o.value.re,
            value_im: o.value.im,
            err_bound: o.err_bound,
            radius: o.radius,
            terms: o.terms,
            wall_ms,
        }
    }
}

type Handler = fn(&mut Params, f64) -> Result<Output, CliError>;

pub struct Entry {
    pub id: &'static str,
    pub params: &'static str,
    pub summary: &'static str,
    handler: Handler,
}

const TORUS: &str = "--tau --alpha --beta";

pub static REGISTRY: &[Entry] = &[
    Entry {
        id: "e1_massive",
        params: "--tau --alpha --beta --mu",
        summary: "massive Kronecker-Eisenstein sum E_{1,mu}(z; tau)",
        handler: |p, tol| Ok(e1_massive(&p.torus("")?, &p.tau()?, p.f64("mu")?, tol)?.into()),
    },
    Entry {
        id: "es_massive",
        params: "--s --tau --alpha --beta --mu",
        summary: "Bessel-kernel sum E_{s,mu}(z; tau)",
        handler: |p, tol| Ok(es_massive(p.complex("s")?, &p.torus("")?, &p.tau()?, p.f64("mu")?, tol)?.into()),
    },
    Entry {
        id: "e1_massive_twisted",
        params: "--w-alpha --w-beta --tau --alpha --beta --mu",
        summary: "Bessel sum over the shifted lattice w + lambda",
        handler: |p, tol| {
            let w = p.torus("w_")?;
            Ok(e1_massive_twisted(&w, &p.torus("")?, &p.tau()?, p.f64("mu")?, tol)?.into())
        },
    },
    Entry {
        id: "e_general",
        params: "--profile exponential|bessel [--rate | --s] --a --b --c [--d] [--index] --tau --alpha --beta --mu",
        summary: "general radial-profile family",
        handler: |p, tol| {
            let profile = match p.take_str("profile").as_deref() {
                Some("exponential") | None => RadialProfile::exponential(p.f64_or("rate", 1.0)?)?,
                Some("bessel") => RadialProfile::bessel(p.complex("s")?),
                Some(other) => return Err(CliError::usage(format!("unknown profile {other:?}"))),
            };
            let index = i32::try_from(p.int_or("index", 0)?).map_err(CliError::usage)?;
            let params = FamilyParams::new(p.f64("a")?, p.f64("b")?, p.f64("c")?, p.f64_or("d", 0.0)?, index)?;
            Ok(e_general(&profile, &params, &p.torus("")?, &p.tau()?, p.f64("mu")?, tol)?.into())
        },
    },
    Entry {
        id: "eisenstein_direct",
        params: "--s [--w-alpha --w-beta] --tau --alpha --beta",
        summary: "Kronecker-Eisenstein series E_s(w, z) by the direct sum, Re s > 1",
        handler: |p, tol| {
            let w = p.torus_or_origin("w_")?;
            Ok(eisenstein_direct(p.complex("s")?, &w, &p.torus("")?, &p.tau()?, tol)?.into())
        },
    },
    Entry {
        id: "eisenstein_continued",
        params: "--s [--w-alpha --w-beta] --tau --alpha --beta",
        summary: "E_s(w, z) by the continued representation",
        handler: |p, tol| {
            let w = p.torus_or_origin("w_")?;
            Ok(eisenstein_continued(p.complex("s")?, &w, &p.torus("")?, &p.tau()?, tol)?.into())
        },
    },
    Entry {
        id: "eisenstein_reflected",
        params: "--s [--w-alpha --w-beta] --tau --alpha --beta",
        summary: "right-hand side of the reflection formula for E_s(w, z)",
        handler: |p, tol| {
            let w = p.torus_or_origin("w_")?;
            Ok(reflected(p.complex("s")?, &w, &p.torus("")?, &p.tau()?, tol)?.into())
        },
    },
    Entry {
        id: "kronecker_limit_e1",
        params: TORUS,
        summary: "E_1(0, z) from theta_1 and eta",
        handler: |p, _| Ok(Output::exact(kronecker_limit_e1(&p.torus("")?, &p.tau()?)?)),
    },
    Entry {
        id: "partition_z",
        params: "--tau --alpha --beta --m",
        summary: "torus amplitude Z_{alpha,beta,m}(tau)",
        handler: |p, tol| {
            let (a, b) = (p.f64("alpha")?, p.f64("beta")?);
            Ok(Output::exact(partition_z(a, b, p.f64("m")?, &p.tau()?, tol)?))
        },
    },
    Entry {
        id: "log_partition_z",
        params: "--tau --alpha --beta --m",
        summary: "log Z_{alpha,beta,m}(tau)",
        handler: |p, tol| {
            let (a, b) = (p.f64("alpha")?, p.f64("beta")?);
            Ok(log_partition_z(a, b, p.f64("m")?, &p.tau()?, tol)?.into())
        },
    },
    Entry {
        id: "f_open",
        params: "--m --t",
        summary: "open-string amplitude F_m(t)",
        handler: |p, tol| Ok(Output::real(f_open(p.f64("m")?, p.f64("t")?, tol)?)),
    },
    Entry {
        id: "c_alpha_m",
        params: "--alpha --m [--representation bessel|integral]",
        summary: "Casimir energy c_{alpha,m}",
        handler: |p, tol| {
            let (a, m) = (p.f64("alpha")?, p.f64("m")?);
            match p.take_str("representation").as_deref() {
                Some("bessel") | None => Ok(c_alpha_m_bessel(a, m, tol)?.into()),
                Some("integral") => {
                    let q = QuadratureSpec::default_params().with_tol(tol)?;
                    Ok(c_alpha_m_integral(a, m, &q)?.into())
                }
                Some(other) => Err(CliError::usage(format!("unknown representation {other:?}"))),
            }
        },
    },
    Entry {
        id: "modular_graph_11",
        params: "--tau --mu",
        summary: "massive modular graph function E_{1,1,mu}(tau)",
        handler: |p, tol| Ok(modular_graph_11(&p.tau()?, p.f64("mu")?, tol)?.into()),
    },
    Entry {
        id: "modular_graph_11_quadrature",
        params: "--tau --mu [--n]",
        summary: "E_{1,1,mu} as a torus integral on an n x n grid",
        handler: |p, tol| {
            let n = usize::try_from(p.int_or("n", 64)?).map_err(CliError::usage)?;
            Ok(Output::exact(modular_graph_11_quadrature(&p.tau()?, p.f64("mu")?, n, tol)?))
        },
    },
    Entry {
        id: "helmholtz_green",
        params: "--tau --alpha --beta --mu [--form rows|columns|images|ewald]",
        summary: "Green's function of the massive Laplacian on a rectangular torus",
        handler: |p, tol| {
            let form = match p.take_str("form").as_deref() {
                None => None,
                Some("rows") => Some(HelmholtzForm::Rows),
                Some("columns") => Some(HelmholtzForm::Columns),
                Some("images") => Some(HelmholtzForm::Images),
                Some("ewald") => Some(HelmholtzForm::Ewald),
                Some(other) => return Err(CliError::usage(format!("unknown form {other:?}"))),
            };
            let (z, tau, mu) = (p.torus("")?, p.tau()?, p.f64("mu")?);
            Ok(match form {
                None => helmholtz_green(&z, &tau, mu, tol)?,
                Some(f) => helmholtz_green_form(f, &z, &tau, mu, tol)?,
            }
            .into())
        },
    },
    Entry {
        id: "helmholtz_green_massless",
        params: TORUS,
        summary: "zero-mean Green's function of the Laplacian",
        handler: |p, tol| Ok(helmholtz_green_massless(&p.torus("")?, &p.tau()?, tol)?.into()),
    },
    Entry {
        id: "helmholtz_mean_value",
        params: "--tau --mu",
        summary: "torus average of the Helmholtz Green's function",
        handler: |p, tol| Ok(Output::real(helmholtz_mean_value(&p.tau()?, p.f64("mu")?, tol)?)),
    },
    Entry {
        id: "coth_identity",
        params: "--m",
        summary: "residual of sum_{l>=1} 1/(l^2+m^2) against its coth closed form",
        handler: |p, _| {
            let c = coth_identity(p.f64("m")?)?;
            Ok(Output {
                err_bound: c.lhs_error,
                ..Output::real(c.difference())
            })
        },
    },
    Entry {
        id: "mellin_forward",
        params: "--s --tau --alpha --beta",
        summary: "Mellin transform in mu of E_{1,mu}(z)",
        handler: |p, tol| {
            let s = p.complex("s")?;
            Ok(mellin_forward(&p.torus("")?, &p.tau()?, s, &MellinGrid::default(), tol)?.into())
        },
    },
    Entry {
        id: "mellin_rhs",
        params: "--s --tau --alpha --beta",
        summary: "closed form of the Mellin transform, pi^-s Gamma(s) E_{s+1}(0, z)",
        handler: |p, tol| {
            let s = p.complex("s")?;
            Ok(Output::exact(mellin_rhs(&p.torus("")?, &p.tau()?, s, tol)?))
        },
    },
    Entry {
        id: "mellin_inverse",
        params: "--tau --alpha --beta --mu [--c] [--cutoff] [--nodes]",
        summary: "E_{1,mu}(z) from the inverse Mellin integral",
        handler: |p, tol| {
            let contour = MellinContour::new(
                p.f64_or("c", 1.0)?,
                p.f64_or("cutoff", 40.0)?,
                usize::try_from(p.int_or("nodes", 16)?).map_err(CliError::usage)?,
            )?;
            Ok(mellin_inverse(&p.torus("")?, &p.tau()?, p.f64("mu")?, &contour, tol)?.into())
        },
    },
    Entry {
        id: "power_series",
        params: "--w-alpha --w-beta --tau --alpha --beta --mu --n",
        summary: "small-mass power series of the shifted Bessel sum; err_bound is the next term",
        handler: |p, tol| {
            let w = p.torus("w_")?;
            let n = usize::try_from(p.int("n")?).map_err(CliError::usage)?;
            let r = power_series(&w, &p.torus("")?, &p.tau()?, p.f64("mu")?, n, tol)?;
            Ok(Output {
                value: r.value,
                err_bound: r.next_term,
                radius: 0,
                terms: r.terms.len() as u64,
            })
        },
    },
    Entry {
        id: "w_generating",
        params: "--tau --mu",
        summary: "generating function W(tau, mu)",
        handler: |p, tol| Ok(w_generating(&p.tau()?, p.f64("mu")?, tol)?.into()),
    },
    Entry {
        id: "gamma",
        params: "--s",
        summary: "Gamma(s)",
        handler: |p, _| Ok(Output::exact(gamma(p.complex("s")?)?)),
    },
    Entry {
        id: "bessel_k",
        params: "--nu --x",
        summary: "modified Bessel function K_nu(x)",
        handler: |p, tol| {
            let q = QuadratureSpec::default_params().with_tol(tol)?;
            Ok(bessel_k(p.complex("nu")?, p.f64("x")?, &q)?.into())
        },
    },
    Entry {
        id: "eta",
        params: "--tau",
        summary: "Dedekind eta(tau)",
        handler: |p, _| Ok(Output::exact(eta(&p.tau()?))),
    },
];

pub fn lookup(id: &str) -> Result<&'static Entry, CliError> {
    REGISTRY
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CliError::usage(format!("unknown function id {id:?}; see `massive list`")))
}

impl Entry {
    /// Evaluate with every parameter consumed.
    pub fn call(&self, mut params: Params, tol: f64) -> Result<Output, CliError> {
        let out = (self.handler)(&mut params, tol)?;
        params.finish()?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Params {
        let v: Vec<String> = s.split_whitespace().map(String::from).collect();
        Params::parse(&v).unwrap()
    }

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = REGISTRY.iter().map(|e| e.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), REGISTRY.len());
    }

    #[test]
    fn s_one_is_e1() {
        let base = "--tau 0.2+1.1i --alpha 0.3 --beta 0.7 --mu 0.5";
        let a = lookup("e1_massive").unwrap().call(args(base), 1e-10).unwrap();
        let b = lookup("es_massive").unwrap().call(args(&format!("{base} --s 1")), 1e-10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_and_leftover_parameters() {
        assert!(matches!(lookup("nope"), Err(CliError::Usage(_))));
        let e = lookup("f_open").unwrap();
        assert!(matches!(e.call(args("--m 0.3 --t 2 --q 1"), 1e-10), Err(CliError::Usage(_))));
        assert!(matches!(e.call(args("--m 0.3"), 1e-10), Err(CliError::Usage(_))));
        assert!(matches!(e.call(args("--m -1 --t 2"), 1e-10), Err(CliError::Numeric(_))));
    }
}
