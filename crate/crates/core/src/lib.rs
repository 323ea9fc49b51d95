//! Graph-limit functionals on step graphons and the constrained
//! edge-triangle exponential random graph model.
//!
//! The crate is organized by capability:
//!
//! - [`graph`], [`graphon`], [`density`], [`cut`]: simple graphs, step
//!   graphons, homomorphism densities, the rate function `I`, cut norm and
//!   a block-permutation bound on the cut distance.
//! - [`variational`]: the constrained entropy `s(e,t)` and the attainable
//!   (edge, triangle) region.
//! - [`phase`]: the constrained free energy `ψ^{e,β₂} = sup_t (β₂ t + s(e,t))`,
//!   the support-line construction of the first-order transition, and
//!   β₂-scans.
//! - [`euler_lagrange`]: the `Δ_H` kernels, the logistic fixed-point
//!   equation and stationarity checks.
//! - [`enumeration`]: exact finite-`n` (conditional) normalization constants
//!   by summing over every labelled graph.
//! - [`sampling`]: W-random graphs and their empirical densities.
//!
//! Runnable walkthroughs live under `examples/`.

pub mod cut;
pub mod density;
pub mod enumeration;
pub mod error;
pub mod euler_lagrange;
pub mod graph;
pub mod graphon;
pub mod optim;
pub mod phase;
pub mod sampling;
pub mod variational;

pub use cut::{cut_distance_upper, cut_norm};
pub use density::{edge_density, hom_density, rate_function, rate_function_scalar, triangle_density};
pub use enumeration::{
    conditional_concentration, exact_conditional_psi, exact_psi_n, Concentration, EnumResult, EnumSpec,
};
pub use error::{Error, Result};
pub use euler_lagrange::{
    delta_h, el_fixed_point, recover_multipliers, stationarity_residual, ELConfig, ELSolution, Multipliers,
};
pub use graph::SimpleGraph;
pub use graphon::{graph_to_graphon, StepGraphon};
pub use phase::{
    critical_curve, critical_point, detect_jump, phase_scan, psi_constrained, CriticalPoint, EntropyCurve, JumpReport,
    PhaseOptions, PhasePoint,
};
pub use sampling::{empirical_densities, sample_w_random, SampleSpec};
pub use variational::{
    region_bounds, rs_lower_bound_check, s_half_closed, s_numeric, BipodalParams, EntropyPoint, RegionBounds,
    SolverOptions,
};
