//! Rank-1 projective measurements on a subset γ of the parties, the angle
//! chart used to search over them, and the dephasing channels they induce.
//!
//! A measurement on an `m`-dimensional factor is an orthonormal basis
//! `{|b_j>}`; its channel is `Φ(X) = Σ_j Π_j X Π_j` with `Π_j = |b_j><b_j|`.
//! On the full state the projectors act as `I_γ' ⊗ Π_j` on the γ factors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{max_abs_diff, ComplexMatrix};
use crate::state::{
    inverse_permutation, permutation_index_map, permute_raw, DensityMatrix, Partition,
};

pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Outcomes at or below this probability carry no conditional state.
pub const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

/// A complete set of rank-1 orthogonal projectors, stored as the columns of a
/// unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMeasurement {
    basis: ComplexMatrix,
}

impl ProjectiveMeasurement {
    pub fn new(basis: ComplexMatrix) -> Result<Self> {
        if !basis.is_square() {
            return Err(Error::NotSquare(basis.nrows(), basis.ncols()));
        }
        let m = basis.nrows();
        let gram = basis.adjoint() * basis.as_dmatrix();
        let residual = max_abs_diff(&gram, &DMatrix::identity(m, m));
        if residual > ORTHONORMAL_TOL {
            return Err(Error::NotOrthonormal(residual));
        }
        Ok(ProjectiveMeasurement { basis })
    }

    pub(crate) fn from_unitary_unchecked(u: DMatrix<Complex64>) -> Self {
        ProjectiveMeasurement {
            basis: ComplexMatrix::from_dmatrix_unchecked(u),
        }
    }

    /// The computational basis `{|0>, …, |m-1>}`.
    pub fn computational(m: usize) -> Self {
        ProjectiveMeasurement {
            basis: ComplexMatrix::identity(m),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Measurement vectors as columns.
    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.basis.column(j).iter().copied().collect()
    }

    pub fn projector(&self, j: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vector(j))
    }

    /// Largest entrywise deviation of `Σ_j |b_j><b_j|` from the identity.
    pub fn completeness_residual(&self) -> f64 {
        let m = self.dim();
        let sum = (0..m).fold(DMatrix::zeros(m, m), |acc, j| {
            acc + self.projector(j).into_dmatrix()
        });
        max_abs_diff(&sum, &DMatrix::identity(m, m))
    }
}

/// Angles `(θ, φ)` for each index pair `i < j` in lexicographic order;
/// `m(m-1)` reals for an `m`-dimensional factor.
///
/// Nominal ranges are `θ ∈ [0, π/2]`, `φ ∈ [0, 2π)`, but every real vector
/// maps to a valid basis, so optimizers may roam freely.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementParams {
    angles: Vec<f64>,
}

impl MeasurementParams {
    pub fn new(m: usize, angles: Vec<f64>) -> Result<Self> {
        let expected = Self::len_for(m);
        if angles.len() != expected {
            return Err(Error::ParameterCount {
                expected,
                found: angles.len(),
            });
        }
        Ok(MeasurementParams { angles })
    }

    pub fn zeros(m: usize) -> Self {
        MeasurementParams {
            angles: vec![0.0; Self::len_for(m)],
        }
    }

    pub fn len_for(m: usize) -> usize {
        m * m.saturating_sub(1)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn into_angles(self) -> Vec<f64> {
        self.angles
    }

    /// Maps θ into `[0, π/2]` and φ into `[0, 2π)` without changing the
    /// projectors.
    pub fn canonical(&self, m: usize) -> Result<Self> {
        let basis = basis_from_params(m, self)?;
        Ok(params_from_basis(&basis))
    }
}

/// `Π_{i<j} G_ij(θ, φ)` in lexicographic pair order, where `G_ij` acts on
/// `span{e_i, e_j}` as `[[cos θ, -e^{-iφ} sin θ], [e^{iφ} sin θ, cos θ]]`.
pub(crate) fn unitary_from_angles(m: usize, angles: &[f64]) -> DMatrix<Complex64> {
    debug_assert_eq!(angles.len(), MeasurementParams::len_for(m));
    let pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect();
    let mut u = DMatrix::<Complex64>::identity(m, m);
    // Left-multiply in reverse so the first pair ends up leftmost.
    for (k, &(i, j)) in pairs.iter().enumerate().rev() {
        let (s, c) = angles[2 * k].sin_cos();
        let phase = Complex64::from_polar(1.0, angles[2 * k + 1]);
        for col in 0..m {
            let ri = u[(i, col)];
            let rj = u[(j, col)];
            u[(i, col)] = ri * c - phase.conj() * s * rj;
            u[(j, col)] = phase * s * ri + rj * c;
        }
    }
    u
}

/// Measurement basis for the given angles; all-zero angles give the
/// computational basis.
pub fn basis_from_params(m: usize, params: &MeasurementParams) -> Result<ProjectiveMeasurement> {
    let expected = MeasurementParams::len_for(m);
    if params.angles.len() != expected {
        return Err(Error::ParameterCount {
            expected,
            found: params.angles.len(),
        });
    }
    Ok(ProjectiveMeasurement::from_unitary_unchecked(
        unitary_from_angles(m, &params.angles),
    ))
}

/// Inverse chart: angles whose basis has the same projectors as `meas`.
///
/// Eliminates the subdiagonal column by column with inverse rotations, which
/// leaves a diagonal phase matrix that the projectors do not see.
pub fn params_from_basis(meas: &ProjectiveMeasurement) -> MeasurementParams {
    let m = meas.dim();
    let mut u = meas.basis.as_dmatrix().clone();
    let mut angles = Vec::with_capacity(MeasurementParams::len_for(m));
    for i in 0..m {
        for j in i + 1..m {
            let a = u[(i, i)];
            let b = u[(j, i)];
            let theta = b.norm().atan2(a.norm());
            let phi = if a.norm() < 1e-300 || b.norm() < 1e-300 {
                0.0
            } else {
                (b.arg() - a.arg()).rem_euclid(std::f64::consts::TAU)
            };
            let (s, c) = theta.sin_cos();
            let phase = Complex64::from_polar(1.0, phi);
            for col in 0..m {
                let ri = u[(i, col)];
                let rj = u[(j, col)];
                u[(i, col)] = ri * c + phase.conj() * s * rj;
                u[(j, col)] = -phase * s * ri + rj * c;
            }
            angles.push(theta);
            angles.push(phi);
        }
    }
    MeasurementParams { angles }
}

/// A state reordered so the γ factors come first, ready for measurements on γ.
#[derive(Debug, Clone)]
pub(crate) struct GammaFrame {
    /// Dimension of the measured factor.
    pub m: usize,
    /// Dimension of the unmeasured factor γ'.
    pub rest: usize,
    pub rest_dims: Vec<usize>,
    /// `ρ` with factor order `(γ, γ')`.
    pub x: DMatrix<Complex64>,
    /// Composite-index map from the original order to `(γ, γ')`.
    perm: Vec<usize>,
}

impl GammaFrame {
    pub fn new(rho: &DensityMatrix, gamma: &Partition) -> Result<Self> {
        if gamma.n_parties() != rho.n_parties() {
            return Err(Error::InvalidPartition(format!(
                "partition is over {} parties, state has {}",
                gamma.n_parties(),
                rho.n_parties()
            )));
        }
        let dims = rho.dims();
        let comp = gamma.complement();
        let perm: Vec<usize> = gamma
            .members()
            .iter()
            .chain(comp.members())
            .copied()
            .collect();
        let perm0: Vec<usize> = perm.iter().map(|k| k - 1).collect();
        let map = permutation_index_map(dims, &perm0);
        let rest_dims: Vec<usize> = comp.members().iter().map(|&k| dims[k - 1]).collect();
        Ok(GammaFrame {
            m: gamma.subsystem_dim(dims),
            rest: rest_dims.iter().product(),
            rest_dims,
            x: permute_raw(rho.as_dmatrix(), &map),
            perm,
        })
    }

    pub fn check_meas(&self, meas_dim: usize) -> Result<()> {
        if meas_dim != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: meas_dim,
            });
        }
        Ok(())
    }

    /// Unnormalized conditional states `(<b_j| ⊗ I) X (|b_j> ⊗ I)` on γ'.
    pub fn blocks(&self, basis: &DMatrix<Complex64>) -> Vec<DMatrix<Complex64>> {
        let (m, r) = (self.m, self.rest);
        (0..m)
            .map(|j| {
                let mut block = DMatrix::<Complex64>::zeros(r, r);
                for a in 0..m {
                    let ca = basis[(a, j)].conj();
                    if ca == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for b in 0..m {
                        let w = ca * basis[(b, j)];
                        if w == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        for s in 0..r {
                            for t in 0..r {
                                block[(s, t)] += w * self.x[(a * r + s, b * r + t)];
                            }
                        }
                    }
                }
                block
            })
            .collect()
    }

    /// Maps an operator on `(γ, γ')` back to the original factor order.
    pub fn restore(&self, y: &DMatrix<Complex64>, dims: &[usize]) -> DMatrix<Complex64> {
        let inv = inverse_permutation(&self.perm).expect("frame permutation is valid");
        let permuted_dims: Vec<usize> = self.perm.iter().map(|&k| dims[k - 1]).collect();
        let inv0: Vec<usize> = inv.iter().map(|k| k - 1).collect();
        permute_raw(y, &permutation_index_map(&permuted_dims, &inv0))
    }
}

/// `Φ^γ(ρ) = Σ_k (I_γ' ⊗ Π_k) ρ (I_γ' ⊗ Π_k)`.
pub fn apply_channel_full(
    rho: &DensityMatrix,
    gamma: &Partition,
    meas: &ProjectiveMeasurement,
) -> Result<DensityMatrix> {
    let frame = GammaFrame::new(rho, gamma)?;
    frame.check_meas(meas.dim())?;
    let (m, r) = (frame.m, frame.rest);
    let b = meas.basis.as_dmatrix();
    let blocks = frame.blocks(b);
    // Σ_j |b_j><b_j| ⊗ M_j in the (γ, γ') order.
    let mut y = DMatrix::<Complex64>::zeros(m * r, m * r);
    for (j, block) in blocks.iter().enumerate() {
        for a in 0..m {
            for c in 0..m {
                let w = b[(a, j)] * b[(c, j)].conj();
                for s in 0..r {
                    for t in 0..r {
                        y[(a * r + s, c * r + t)] += w * block[(s, t)];
                    }
                }
            }
        }
    }
    Ok(DensityMatrix::from_trusted(
        rho.dims().to_vec(),
        frame.restore(&y, rho.dims()),
    ))
}

/// `Φ_γ(ρ_γ) = Σ_k Π_k ρ_γ Π_k`, diagonal in the measurement basis.
pub fn apply_channel_reduced(
    rho_gamma: &DensityMatrix,
    meas: &ProjectiveMeasurement,
) -> Result<DensityMatrix> {
    if rho_gamma.dim() != meas.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho_gamma.dim(),
            found: meas.dim(),
        });
    }
    let b = meas.basis.as_dmatrix();
    let rotated = b.adjoint() * rho_gamma.matrix().as_dmatrix() * b;
    let diag = DMatrix::from_diagonal(&rotated.diagonal().map(|z| Complex64::new(z.re, 0.0)));
    Ok(DensityMatrix::from_trusted(
        rho_gamma.dims().to_vec(),
        b * diag * b.adjoint(),
    ))
}

/// One outcome of a measurement on γ.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub probability: f64,
    /// Post-measurement state of γ' (ascending party order); `None` when the
    /// probability is negligible.
    pub conditional: Option<DensityMatrix>,
}

/// Outcome probabilities `p_j = Tr[(I ⊗ Π_j) ρ]` and conditional states.
pub fn measurement_statistics(
    rho: &DensityMatrix,
    gamma: &Partition,
    meas: &ProjectiveMeasurement,
) -> Result<Vec<Outcome>> {
    let frame = GammaFrame::new(rho, gamma)?;
    frame.check_meas(meas.dim())?;
    Ok(frame
        .blocks(meas.basis.as_dmatrix())
        .into_iter()
        .map(|block| {
            let p = block.trace().re;
            if p > NEGLIGIBLE_PROBABILITY {
                let cond = block * Complex64::new(1.0 / p, 0.0);
                Outcome {
                    probability: p,
                    conditional: Some(DensityMatrix::from_trusted(frame.rest_dims.clone(), cond)),
                }
            } else {
                Outcome {
                    probability: p.max(0.0),
                    conditional: None,
                }
            }
        })
        .collect())
}
