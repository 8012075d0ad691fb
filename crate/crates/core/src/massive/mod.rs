//! Massive deformations: the amplitudes Z and F_m, the Bessel-sum series
//! E_{s,mu}, the general radial-profile family, the coefficient triples of the
//! mixed (tau, mu) and (z, mu) equations, and the equivalence transform.

mod coefficients;
mod equivalence;
mod families;
mod partition;

pub use families::{
    e1_massive, e1_massive_twisted, e_general, es_massive, es_series, general_series, BesselKernel, FamilyParams,
    GeneralKernel, MassiveSeries, OdeData, RadialProfile,
};
pub use coefficients::{jacobi_g_coefficients, maass_g_coefficients, CoefficientTriple};
pub use equivalence::{
    equivalence_transform, es_equivalent, es_jacobi_coefficients, es_maass_coefficients, Equivalent, SmoothMap,
};

pub use partition::{
    f_open, log_f_open, log_f_open_theta_integral, log_partition_z, partition_z, theta_integral_parts,
    ThetaIntegralParts,
};
