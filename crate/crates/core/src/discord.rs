//! Relative-entropy discord measures.
//!
//! For a subset γ of the parties measured with a rank-1 projective
//! measurement, the γ-discord objective is
//!
//! ```text
//! S(ρ ‖ Φ^γ(ρ)) - S(ρ_γ ‖ Φ_γ(ρ_γ))
//!     = [S(Φ^γ(ρ)) - S(ρ)] - [S(Φ_γ(ρ_γ)) - S(ρ_γ)]
//! ```
//!
//! and the γ-discord is its minimum over measurement bases. The genuine
//! multipartite discord is the minimum of the γ-discord over all nonempty
//! proper subsets γ. Both relative entropies are evaluated as entropy
//! differences, which is exact for projective dephasing and needs no support
//! bookkeeping.
//!
//! `Φ^γ(ρ)` is block diagonal in the measurement basis with blocks
//! `M_j = (<b_j| ⊗ I) ρ (|b_j> ⊗ I)`, so its spectrum is the union of the
//! block spectra, and `Φ_γ(ρ_γ)` has spectrum `p_j = Tr M_j`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::entropy::{mutual_information, spectral_entropy, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, hermitian_eigenvalues};
use crate::measurement::{
    apply_channel_full, basis_from_params, measurement_statistics, unitary_from_angles, GammaFrame,
    MeasurementParams, ProjectiveMeasurement,
};
use crate::optimize::{minimize_over_bases, OptimizerConfig};
use crate::state::{partial_trace, DensityMatrix, Partition};

/// Reported values in `[-NEGATIVE_SLACK, 0)` are clipped to zero; anything
/// lower is a numerical-integrity failure.
pub const NEGATIVE_SLACK: f64 = 1e-7;
pub const DEFAULT_CLASSICAL_TOL: f64 = 1e-5;

/// Clips certified rounding noise below zero.
pub fn certify_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_SLACK {
        Ok(0.0)
    } else {
        Err(Error::NumericalIntegrity(format!(
            "{what} evaluated to {value:e}, below -{NEGATIVE_SLACK:e}"
        )))
    }
}

/// The γ-discord objective for one state and subset, with the
/// measurement-independent entropies computed once.
#[derive(Debug, Clone)]
pub struct GammaObjective {
    gamma: Partition,
    frame: GammaFrame,
    entropy_full: f64,
    entropy_gamma: f64,
}

impl GammaObjective {
    pub fn new(rho: &DensityMatrix, gamma: &Partition) -> Result<Self> {
        let frame = GammaFrame::new(rho, gamma)?;
        let entropy_full = von_neumann_entropy(rho)?;
        let entropy_gamma = von_neumann_entropy(&partial_trace(rho, gamma)?)?;
        Ok(GammaObjective {
            gamma: gamma.clone(),
            frame,
            entropy_full,
            entropy_gamma,
        })
    }

    pub fn gamma(&self) -> &Partition {
        &self.gamma
    }

    /// Dimension of the measured factor.
    pub fn measured_dim(&self) -> usize {
        self.frame.m
    }

    pub fn evaluate(&self, meas: &ProjectiveMeasurement) -> Result<f64> {
        self.frame.check_meas(meas.dim())?;
        self.evaluate_unitary(meas.basis().as_dmatrix())
    }

    pub fn evaluate_params(&self, params: &MeasurementParams) -> Result<f64> {
        let m = self.frame.m;
        if params.angles().len() != MeasurementParams::len_for(m) {
            return Err(Error::ParameterCount {
                expected: MeasurementParams::len_for(m),
                found: params.angles().len(),
            });
        }
        self.evaluate_unitary(&unitary_from_angles(m, params.angles()))
    }

    fn evaluate_unitary(&self, basis: &DMatrix<Complex64>) -> Result<f64> {
        let blocks = self.frame.blocks(basis);
        let mut spectrum = Vec::with_capacity(self.frame.m * self.frame.rest);
        let mut probabilities = Vec::with_capacity(self.frame.m);
        for block in &blocks {
            probabilities.push(block.trace().re);
            spectrum.extend(hermitian_eigenvalues(block));
        }
        let dephased_full = spectral_entropy(&spectrum)?;
        let dephased_gamma = spectral_entropy(&probabilities)?;
        Ok((dephased_full - self.entropy_full) - (dephased_gamma - self.entropy_gamma))
    }
}

/// `S(ρ ‖ Φ^γ(ρ)) - S(ρ_γ ‖ Φ_γ(ρ_γ))` for a fixed measurement.
pub fn gamma_discord_objective(
    rho: &DensityMatrix,
    gamma: &Partition,
    meas: &ProjectiveMeasurement,
) -> Result<f64> {
    GammaObjective::new(rho, gamma)?.evaluate(meas)
}

/// Minimized γ-discord with optimizer diagnostics.
#[derive(Debug, Clone)]
pub struct GammaDiscordResult {
    pub gamma: Partition,
    /// Minimum found, clipped to zero within [`NEGATIVE_SLACK`].
    pub value: f64,
    /// The objective at `best_params` before clipping.
    pub raw_value: f64,
    pub best_params: MeasurementParams,
    pub best_basis: ProjectiveMeasurement,
    /// Final value of each restart, in restart order.
    pub restart_values: Vec<f64>,
    pub best_restart: usize,
    pub evaluations: usize,
    /// Smallest objective value seen at any evaluation of any restart.
    pub lowest_evaluation: f64,
}

impl GammaDiscordResult {
    /// `max - min` over the restart values.
    pub fn restart_spread(&self) -> f64 {
        let lo = self
            .restart_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .restart_values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    }
}

/// Minimizes the γ-discord objective over measurement bases on γ.
pub fn gamma_discord(
    rho: &DensityMatrix,
    gamma: &Partition,
    cfg: &OptimizerConfig,
) -> Result<GammaDiscordResult> {
    let objective = GammaObjective::new(rho, gamma)?;
    let m = objective.measured_dim();
    let min = minimize_over_bases(|p| objective.evaluate_params(p), m, cfg)?;
    let value = certify_nonnegative(min.value, &format!("gamma-discord for {gamma}"))?;
    Ok(GammaDiscordResult {
        gamma: gamma.clone(),
        value,
        raw_value: min.value,
        best_basis: basis_from_params(m, &min.params)?,
        best_params: min.params.clone(),
        restart_values: min.restart_values(),
        best_restart: min.best_restart,
        evaluations: min.evaluations(),
        lowest_evaluation: min.lowest_evaluation(),
    })
}

/// γ-discord for every partition and their minimum.
#[derive(Debug, Clone)]
pub struct DiscordReport {
    /// One entry per nonempty proper subset, in [`Partition::all`] order.
    pub per_gamma: Vec<GammaDiscordResult>,
    pub genuine_value: f64,
    /// Index into `per_gamma` of the first minimizing partition.
    pub argmin: usize,
}

impl DiscordReport {
    pub fn argmin_gamma(&self) -> &Partition {
        &self.per_gamma[self.argmin].gamma
    }

    pub fn get(&self, gamma: &Partition) -> Option<&GammaDiscordResult> {
        self.per_gamma.iter().find(|r| &r.gamma == gamma)
    }
}

fn report_from(per_gamma: Vec<GammaDiscordResult>) -> DiscordReport {
    let mut argmin = 0;
    for (i, r) in per_gamma.iter().enumerate() {
        if r.value < per_gamma[argmin].value {
            argmin = i;
        }
    }
    DiscordReport {
        genuine_value: per_gamma[argmin].value,
        argmin,
        per_gamma,
    }
}

/// Genuine multipartite discord: the minimum γ-discord over all `2^N - 2`
/// subsets.
pub fn genuine_discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<DiscordReport> {
    if rho.n_parties() < 2 {
        return Err(Error::PartyCount {
            expected: 2,
            found: rho.n_parties(),
        });
    }
    let per_gamma = Partition::all(rho.n_parties())?
        .par_iter()
        .map(|g| gamma_discord(rho, g, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(report_from(per_gamma))
}

fn require_two_parties(rho: &DensityMatrix) -> Result<()> {
    if rho.n_parties() != 2 {
        return Err(Error::PartyCount {
            expected: 2,
            found: rho.n_parties(),
        });
    }
    Ok(())
}

/// `min(D_A, D_B)` for a two-party state.
pub fn symmetric_discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    require_two_parties(rho)?;
    let a = gamma_discord(rho, &Partition::new(&[1], 2)?, cfg)?;
    let b = gamma_discord(rho, &Partition::new(&[2], 2)?, cfg)?;
    Ok(a.value.min(b.value))
}

/// `J = S(ρ_A) - Σ_j p_j S(ρ_{A|j})` for a measurement on the second party.
pub fn measured_mutual_information(
    rho: &DensityMatrix,
    meas: &ProjectiveMeasurement,
) -> Result<f64> {
    require_two_parties(rho)?;
    let first = partial_trace(rho, &Partition::new(&[1], 2)?)?;
    let mut conditional = 0.0;
    for outcome in measurement_statistics(rho, &Partition::new(&[2], 2)?, meas)? {
        if let Some(state) = outcome.conditional {
            conditional += outcome.probability * von_neumann_entropy(&state)?;
        }
    }
    Ok(von_neumann_entropy(&first)? - conditional)
}

/// Classical correlations: the largest `J` over measurement bases on the
/// second party.
pub fn classical_correlations_oz(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    require_two_parties(rho)?;
    let m = rho.dims()[1];
    let min = minimize_over_bases(
        |p| {
            Ok(-measured_mutual_information(
                rho,
                &basis_from_params(m, p)?,
            )?)
        },
        m,
        cfg,
    )?;
    Ok(-min.value)
}

/// Mutual information minus classical correlations, with the measurement on
/// the second party.
pub fn oz_discord(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<f64> {
    require_two_parties(rho)?;
    let total = mutual_information(rho)?;
    let classical = classical_correlations_oz(rho, cfg)?;
    certify_nonnegative(total - classical, "one-way discord")
}

/// A partition and measurement that leave the state (nearly) unchanged.
#[derive(Debug, Clone)]
pub struct Witness {
    pub gamma: Partition,
    pub measurement: ProjectiveMeasurement,
    /// `max |ρ - Φ^γ(ρ)|` entrywise.
    pub disturbance: f64,
}

#[derive(Debug, Clone)]
pub struct Classicality {
    pub classical: bool,
    pub witness: Option<Witness>,
    pub report: DiscordReport,
}

/// Decides genuine multipartite classicality: the genuine discord must be at
/// most `tol` and some low-discord partition must have a measurement that
/// disturbs ρ by at most `10 √tol` entrywise.
///
/// Candidates per partition are the optimizer's basis and then the eigenbasis
/// of `ρ_γ`; the latter covers degenerate minima (e.g. product states) where the
/// optimizer lands on a zero-discord basis that still disturbs ρ.
pub fn is_classical(rho: &DensityMatrix, cfg: &OptimizerConfig, tol: f64) -> Result<Classicality> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(
            "classicality tolerance must be positive".into(),
        ));
    }
    let report = genuine_discord(rho, cfg)?;
    let bound = 10.0 * tol.sqrt();
    let mut candidates: Vec<&GammaDiscordResult> =
        report.per_gamma.iter().filter(|r| r.value <= tol).collect();
    candidates.sort_by(|a, b| a.value.total_cmp(&b.value));

    let mut witness = None;
    'search: for cand in candidates {
        let reduced = partial_trace(rho, &cand.gamma)?;
        let eigenbasis = ProjectiveMeasurement::new(hermitian_eig(reduced.matrix())?.eigenvectors)?;
        for meas in [cand.best_basis.clone(), eigenbasis] {
            let dephased = apply_channel_full(rho, &cand.gamma, &meas)?;
            let disturbance = rho.max_abs_diff(&dephased);
            if disturbance <= bound {
                witness = Some(Witness {
                    gamma: cand.gamma.clone(),
                    measurement: meas,
                    disturbance,
                });
                break 'search;
            }
        }
    }
    Ok(Classicality {
        classical: witness.is_some(),
        witness,
        report,
    })
}
