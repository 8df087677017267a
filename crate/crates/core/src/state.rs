//! Multipartite density operators, subsystem partitions, and the index
//! arithmetic behind partial traces and factor permutations.
//!
//! Composite indices are mixed-radix numbers with subsystem 1 most
//! significant: `i = Σ_k i_k · Π_{l>k} d_l`.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eigenvalues, hermitian_part, ComplexMatrix};

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_FLOOR: f64 = -1e-8;

/// A validated density operator on `d_1 ⊗ … ⊗ d_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates dimensions, Hermiticity, unit trace and positivity.
    ///
    /// Accepted matrices are stored symmetrized as `(M + M^dagger)/2`.
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        check_dims(&dims)?;
        if !matrix.is_square() {
            return Err(Error::NotSquare(matrix.nrows(), matrix.ncols()));
        }
        let total: usize = dims.iter().product();
        if matrix.nrows() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: matrix.nrows(),
            });
        }
        let herm = matrix.hermiticity_residual();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let trace_err = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
        if trace_err > TRACE_TOL {
            return Err(Error::InvalidTrace(trace_err));
        }
        let sym = hermitian_part(matrix.as_dmatrix());
        let min_eig = hermitian_eigenvalues(&sym)
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < PSD_FLOOR {
            return Err(Error::NotPsd(min_eig));
        }
        Ok(DensityMatrix {
            dims,
            matrix: ComplexMatrix::from_dmatrix_unchecked(sym),
        })
    }

    /// For results of trace-preserving, positivity-preserving maps applied to
    /// validated states; only symmetrizes.
    pub(crate) fn from_trusted(dims: Vec<usize>, m: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), m.nrows());
        DensityMatrix {
            dims,
            matrix: ComplexMatrix::from_dmatrix_unchecked(hermitian_part(&m)),
        }
    }

    /// `|ψ><ψ| / <ψ|ψ>` for an amplitude vector in the composite basis.
    pub fn from_pure(dims: Vec<usize>, amplitudes: &[Complex64]) -> Result<Self> {
        check_dims(&dims)?;
        let total: usize = dims.iter().product();
        if amplitudes.len() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::InvalidParameter(
                "state vector has zero or non-finite norm".into(),
            ));
        }
        let scaled: Vec<Complex64> = amplitudes.iter().map(|a| a / norm_sqr.sqrt()).collect();
        Ok(Self::from_trusted(
            dims,
            ComplexMatrix::outer(&scaled).into_dmatrix(),
        ))
    }

    /// `I / d`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        let d: usize = dims.iter().product();
        let m = DMatrix::identity(d, d) * Complex64::new(1.0 / d as f64, 0.0);
        Ok(Self::from_trusted(dims, m))
    }

    /// Diagonal state `Σ_i p_i |i><i|`; `probabilities` must be a distribution.
    pub fn diagonal(dims: Vec<usize>, probabilities: &[f64]) -> Result<Self> {
        let m = ComplexMatrix::from_real_diagonal(probabilities);
        DensityMatrix::new(dims, m)
    }

    /// `ρ_1 ⊗ ρ_2 ⊗ …`
    pub fn product(factors: &[DensityMatrix]) -> Result<Self> {
        let Some((first, rest)) = factors.split_first() else {
            return Err(Error::InvalidDims("empty product".into()));
        };
        let mut dims = first.dims.clone();
        let mut m = first.matrix.as_dmatrix().clone();
        for f in rest {
            dims.extend_from_slice(&f.dims);
            m = m.kronecker(f.matrix.as_dmatrix());
        }
        Ok(Self::from_trusted(dims, m))
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `Π d_k`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub(crate) fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        self.matrix.as_dmatrix()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Unordered eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self.matrix.as_dmatrix())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Largest entrywise modulus of the difference; infinite if dims differ.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        self.matrix.max_abs_diff(&other.matrix)
    }

    /// Reinterprets the same matrix with a different factorization.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims)?;
        let total: usize = dims.iter().product();
        if total != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: total,
            });
        }
        Ok(DensityMatrix {
            dims,
            matrix: self.matrix.clone(),
        })
    }

    /// `U ρ U^dagger` for a unitary `U` of matching size.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.nrows(),
            });
        }
        let m = u.as_dmatrix() * self.as_dmatrix() * u.as_dmatrix().adjoint();
        DensityMatrix::new(
            self.dims.clone(),
            ComplexMatrix::from_dmatrix(hermitian_part(&m))?,
        )
    }
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::InvalidDims(
            "at least one subsystem is required".into(),
        ));
    }
    if let Some(&d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDims(format!(
            "local dimension {d} is below 2"
        )));
    }
    Ok(())
}

/// A nonempty proper subset γ of the parties `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    gamma: Vec<usize>,
    n_parties: usize,
}

impl Partition {
    /// Party indices are 1-based and may come in any order; duplicates are
    /// rejected.
    pub fn new(gamma: &[usize], n_parties: usize) -> Result<Self> {
        let mut g = gamma.to_vec();
        g.sort_unstable();
        if g.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition(format!(
                "duplicate party in {gamma:?}"
            )));
        }
        if let Some(&bad) = g.iter().find(|&&k| k == 0 || k > n_parties) {
            return Err(Error::InvalidPartition(format!(
                "party {bad} outside 1..={n_parties}"
            )));
        }
        if g.is_empty() || g.len() >= n_parties {
            return Err(Error::InvalidPartition(format!(
                "subset must be nonempty and proper, got {} of {n_parties} parties",
                g.len()
            )));
        }
        Ok(Partition {
            gamma: g,
            n_parties,
        })
    }

    /// All `2^N - 2` nonempty proper subsets, by size and then lexicographically
    /// (for N = 3: 1, 2, 3, 12, 13, 23).
    pub fn all(n_parties: usize) -> Result<Vec<Partition>> {
        if n_parties < 2 {
            return Err(Error::PartyCount {
                expected: 2,
                found: n_parties,
            });
        }
        if n_parties > 20 {
            return Err(Error::InvalidPartition(format!(
                "{n_parties} parties is beyond the supported range"
            )));
        }
        let mut subsets: Vec<Vec<usize>> = (1u32..(1u32 << n_parties) - 1)
            .map(|mask| {
                (0..n_parties)
                    .filter(|&k| mask & (1 << k) != 0)
                    .map(|k| k + 1)
                    .collect()
            })
            .collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(subsets
            .into_iter()
            .map(|gamma| Partition { gamma, n_parties })
            .collect())
    }

    /// Sorted 1-based members of γ.
    pub fn members(&self) -> &[usize] {
        &self.gamma
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn complement(&self) -> Partition {
        let gamma = (1..=self.n_parties)
            .filter(|k| !self.gamma.contains(k))
            .collect();
        Partition {
            gamma,
            n_parties: self.n_parties,
        }
    }

    pub fn contains(&self, party: usize) -> bool {
        self.gamma.binary_search(&party).is_ok()
    }

    /// Concatenated digits ("12") for N ≤ 9, comma separated ("1,12") above.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.gamma.iter().map(|k| k.to_string()).collect();
        if self.n_parties <= 9 {
            parts.concat()
        } else {
            parts.join(",")
        }
    }

    pub fn parse(label: &str, n_parties: usize) -> Result<Self> {
        let label = label.trim();
        let bad = || Error::InvalidPartition(format!("cannot parse label {label:?}"));
        let members: Vec<usize> = if label.contains(',') || n_parties >= 10 {
            label
                .split(',')
                .map(|s| s.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            label
                .chars()
                .map(|ch| ch.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        Partition::new(&members, n_parties)
    }

    /// Product of the local dimensions of the members.
    pub fn subsystem_dim(&self, dims: &[usize]) -> usize {
        self.gamma.iter().map(|&k| dims[k - 1]).product()
    }

    /// The partition obtained after reordering factors with `perm`, where output
    /// factor `k` is input factor `perm[k]` (both 1-based).
    pub fn relabel(&self, perm: &[usize]) -> Result<Partition> {
        check_permutation(perm, self.n_parties)?;
        let members: Vec<usize> = perm
            .iter()
            .enumerate()
            .filter(|(_, &src)| self.contains(src))
            .map(|(k, _)| k + 1)
            .collect();
        Partition::new(&members, self.n_parties)
    }

    fn check_parties(&self, n: usize) -> Result<()> {
        if self.n_parties != n {
            return Err(Error::InvalidPartition(format!(
                "partition is over {} parties, state has {n}",
                self.n_parties
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Row-major strides for mixed-radix indices.
fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Partial trace of an arbitrary square operator, keeping the (0-based,
/// ascending) factors in `keep`.
pub(crate) fn partial_trace_raw(
    m: &DMatrix<Complex64>,
    dims: &[usize],
    keep: &[usize],
) -> DMatrix<Complex64> {
    let total: usize = dims.iter().product();
    let st = strides(dims);
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let kept_st = strides(&kept_dims);
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_st = strides(&traced_dims);
    let d_keep: usize = kept_dims.iter().product();
    let d_trace: usize = traced_dims.iter().product();

    // Bucket composite indices by their traced-part index.
    let mut buckets: Vec<Vec<(usize, usize)>> = vec![Vec::with_capacity(d_keep); d_trace];
    for i in 0..total {
        let digit = |k: usize| (i / st[k]) % dims[k];
        let ki: usize = keep.iter().zip(&kept_st).map(|(&k, &s)| digit(k) * s).sum();
        let ti: usize = traced
            .iter()
            .zip(&traced_st)
            .map(|(&k, &s)| digit(k) * s)
            .sum();
        buckets[ti].push((ki, i));
    }
    let mut out = DMatrix::zeros(d_keep, d_keep);
    for bucket in &buckets {
        for &(ka, a) in bucket {
            for &(kb, b) in bucket {
                out[(ka, kb)] += m[(a, b)];
            }
        }
    }
    out
}

/// Reduced state on the factors in `keep`, in ascending party order.
pub fn partial_trace(rho: &DensityMatrix, keep: &Partition) -> Result<DensityMatrix> {
    keep.check_parties(rho.n_parties())?;
    let keep0: Vec<usize> = keep.members().iter().map(|k| k - 1).collect();
    let kept_dims = keep0.iter().map(|&k| rho.dims[k]).collect();
    let m = partial_trace_raw(rho.as_dmatrix(), &rho.dims, &keep0);
    Ok(DensityMatrix::from_trusted(kept_dims, m))
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "expected {n} entries, found {}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::InvalidPermutation(format!(
                "{perm:?} is not a permutation of 1..={n}"
            )));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// Composite-index map for a factor reordering: `map[out] = in`, where output
/// factor `k` is input factor `perm0[k]` (0-based).
pub(crate) fn permutation_index_map(dims: &[usize], perm0: &[usize]) -> Vec<usize> {
    let in_st = strides(dims);
    let out_dims: Vec<usize> = perm0.iter().map(|&p| dims[p]).collect();
    let out_st = strides(&out_dims);
    let total: usize = dims.iter().product();
    (0..total)
        .map(|o| {
            perm0
                .iter()
                .enumerate()
                .map(|(k, &p)| ((o / out_st[k]) % out_dims[k]) * in_st[p])
                .sum()
        })
        .collect()
}

pub(crate) fn permute_raw(m: &DMatrix<Complex64>, map: &[usize]) -> DMatrix<Complex64> {
    let n = map.len();
    DMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])])
}

/// Reorders tensor factors: output factor `k` is input factor `perm[k]`
/// (1-based). `permute_systems(ρ_A ⊗ ρ_B, [2, 1]) = ρ_B ⊗ ρ_A`.
pub fn permute_systems(rho: &DensityMatrix, perm: &[usize]) -> Result<DensityMatrix> {
    check_permutation(perm, rho.n_parties())?;
    let perm0: Vec<usize> = perm.iter().map(|p| p - 1).collect();
    let map = permutation_index_map(&rho.dims, &perm0);
    let dims = perm0.iter().map(|&p| rho.dims[p]).collect();
    Ok(DensityMatrix {
        dims,
        matrix: ComplexMatrix::from_dmatrix_unchecked(permute_raw(rho.as_dmatrix(), &map)),
    })
}

/// Inverse of a 1-based permutation.
pub fn inverse_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    check_permutation(perm, perm.len())?;
    let mut inv = vec![0; perm.len()];
    for (k, &p) in perm.iter().enumerate() {
        inv[p - 1] = k + 1;
    }
    Ok(inv)
}
