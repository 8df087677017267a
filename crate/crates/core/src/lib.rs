//! Genuine multipartite quantum discord for finite-dimensional N-partite
//! density operators.
//!
//! The central quantity is the γ-discord, the smallest value over rank-1
//! projective measurements on a subset γ of the parties of
//! `S(ρ ‖ Φ^γ(ρ)) - S(ρ_γ ‖ Φ_γ(ρ_γ))`; the genuine discord is its minimum over
//! every nonempty proper subset γ. Two-party measures (mutual information,
//! one-way and symmetric discord) are provided alongside.
//!
//! ```
//! use gmqd_core::{genuine_discord, make_state, OptimizerConfig, StateFamily};
//!
//! let ghz = make_state(&StateFamily::Ghz { n: 3 }).unwrap();
//! let report = genuine_discord(&ghz, &OptimizerConfig::with_seed(1)).unwrap();
//! assert_eq!(report.per_gamma.len(), 6);
//! assert!((report.genuine_value - 1.0).abs() < 1e-3);
//! ```
//!
//! All entropies are in bits. Tensor factors are ordered with subsystem 1 as
//! the most significant index.

pub mod discord;
pub mod entropy;
pub mod error;
pub mod matrix;
pub mod measurement;
pub mod optimize;
pub mod state;
pub mod states;

pub use discord::{
    classical_correlations_oz, gamma_discord, gamma_discord_objective, genuine_discord,
    is_classical, measured_mutual_information, oz_discord, symmetric_discord, Classicality,
    DiscordReport, GammaDiscordResult, GammaObjective, Witness, DEFAULT_CLASSICAL_TOL,
};
pub use entropy::{mutual_information, relative_entropy, shannon_entropy, von_neumann_entropy};
pub use error::{Error, Result};
pub use matrix::{hermitian_eig, tensor_product, ComplexMatrix, Spectrum};
pub use measurement::{
    apply_channel_full, apply_channel_reduced, basis_from_params, measurement_statistics,
    params_from_basis, MeasurementParams, Outcome, ProjectiveMeasurement,
};
pub use optimize::{minimize_over_bases, Minimum, OptimizerConfig, RestartOutcome};
pub use state::{inverse_permutation, partial_trace, permute_systems, DensityMatrix, Partition};
pub use states::{depolarize, make_state, random_density, StateFamily};

pub use num_complex::Complex64;
