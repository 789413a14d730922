//! Energy density of the two-dimensional Ising model on a half plane, a
//! distance `M` rows from a boundary carrying a magnetic field.
//!
//! The crate evaluates the exact momentum integral for the deviation of
//! `<σ_{M,0} σ_{M-1,0}>` from its bulk value, the bulk energy itself in two
//! independent forms, and every large-`M` closed form and scaling function
//! below, at and above the critical temperature. An exact transfer-matrix
//! oracle on finite cylinders provides an independent check.
//!
//! ```
//! use ising_edge::{CouplingParams, EnergyQuery, total_energy_density};
//!
//! let zc = std::f64::consts::SQRT_2 - 1.0;
//! let p = CouplingParams::new(zc, zc, 0.0).unwrap();
//! let r = total_energy_density(&EnergyQuery::new(p, 100)).unwrap();
//! assert!((r.bulk_form2 - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
//! assert!((100.0 * r.deviation - (-0.5 / std::f64::consts::PI)).abs() < 0.002);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod asymptotics;
pub mod error;
pub mod integrate;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod roots;
pub mod specfun;
pub mod spectral;

pub use asymptotics::{
    asym_high_t_field, asym_high_t_free, asym_low_t_field, asym_low_t_free, critical_crossover,
    critical_crossover_f, critical_crossover_f_quad, crossover_g, crossover_high_t,
    crossover_low_t, crossover_scaling, find_crossover_zero, scaling_high_t_fixed,
    scaling_high_t_free, scaling_low_t_fixed, scaling_low_t_free, sign_threshold_z_sq, zeta_c_sq,
    ScalingParams,
};
pub use error::{Error, Result};
pub use integrate::{QuadConfig, QuadOutcome};
pub use oracle::{brute_force_energy, transfer_matrix_energy, OracleConfig};
pub use params::{
    couplings_from_physical, critical_z2, derived_alphas, BoundaryField, CouplingParams,
    CriticalPoint, DerivedAlphas, Regime, REGIME_TOL,
};
pub use quadrature::{
    bulk_energy, energy_deviation, total_energy_density, BulkEnergy, Deviation, EnergyQuery,
    EnergyResult,
};
pub use specfun::{bessel_k0, bessel_k1, exp_integral_e1};
pub use spectral::{alpha_of_theta, boundary_ratio, spectral_eval, v_ratio, SpectralEval, VRatio};
