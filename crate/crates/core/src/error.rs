use num_complex::Complex64;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("divergent series: {0}")]
    Divergence(String),
    #[error("accuracy target {target:e} not reached: achieved {achieved:e} (best estimate {best})")]
    Accuracy {
        target: f64,
        achieved: f64,
        best: Complex64,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid stencil: {0}")]
    Stencil(String),
    #[error("degenerate ODE data: {0}")]
    DegenerateOde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        domain(format!("tolerance must be finite and positive, got {tol}"))
    }
}
