//! Entropy functionals in bits: Shannon, von Neumann, quantum relative
//! entropy and two-party mutual information.

use crate::error::{Error, Result};
use crate::matrix::hermitian_eig;
use crate::state::{partial_trace, DensityMatrix, Partition, PSD_FLOOR};

/// Eigenvalues in `[PSD_FLOOR, 0)` are treated as exact zeros.
pub const EIGENVALUE_CLIP: f64 = PSD_FLOOR;
/// σ-eigenvalues below this count as outside the support of σ.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// ρ-weight above this on σ's kernel makes `S(ρ‖σ)` infinite.
pub const SUPPORT_WEIGHT: f64 = 1e-10;

/// `-Σ λ log2 λ` over a (possibly unnormalized) spectrum.
pub(crate) fn spectral_entropy(eigenvalues: &[f64]) -> Result<f64> {
    let mut h = 0.0;
    for &lambda in eigenvalues {
        if lambda < EIGENVALUE_CLIP {
            return Err(Error::NotPsd(lambda));
        }
        if lambda > 0.0 {
            h -= lambda * lambda.log2();
        }
    }
    Ok(h)
}

/// `H(p) = -Σ p_j log2 p_j` with `0 log 0 = 0`.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(&bad) = p.iter().find(|&&x| x.is_nan() || x < -1e-12) {
        return Err(Error::InvalidProbabilities(format!(
            "entry {bad} is negative"
        )));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilities(format!(
            "entries sum to {total}"
        )));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum())
}

/// `S(ρ) = -Tr ρ log2 ρ`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(&rho.eigenvalues())
}

/// `S(ρ‖σ) = Tr ρ (log2 ρ - log2 σ)`, or `f64::INFINITY` when ρ has weight on
/// the kernel of σ.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    let neg_entropy = -von_neumann_entropy(rho)?;
    let spec = hermitian_eig(sigma.matrix())?;
    let v = &spec.eigenvectors;
    let r = rho.matrix();
    let mut cross = 0.0;
    for (j, &s) in spec.eigenvalues.iter().enumerate() {
        let col = v.column(j);
        let weight = (col.adjoint() * r.as_dmatrix() * col)[(0, 0)].re;
        if s < SUPPORT_CUTOFF {
            if weight > SUPPORT_WEIGHT {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * s.log2();
    }
    Ok(neg_entropy - cross)
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) - S(ρ_AB)` for a two-party state.
pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    if rho.n_parties() != 2 {
        return Err(Error::PartyCount {
            expected: 2,
            found: rho.n_parties(),
        });
    }
    let a = partial_trace(rho, &Partition::new(&[1], 2)?)?;
    let b = partial_trace(rho, &Partition::new(&[2], 2)?)?;
    Ok(von_neumann_entropy(&a)? + von_neumann_entropy(&b)? - von_neumann_entropy(rho)?)
}
