//! State inputs: JSON state files and family specs.

use std::fs;
use std::path::Path;

use gmqd_core::{make_state, Complex64, ComplexMatrix, DensityMatrix, StateFamily};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// On-disk state: local dimensions plus real and imaginary parts as row-major
/// `d x d` arrays, subsystem 1 most significant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let d = rho.dim();
        StateFile {
            dims: rho.dims().to_vec(),
            re: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].re).collect())
                .collect(),
            im: (0..d)
                .map(|i| (0..d).map(|j| m[(i, j)].im).collect())
                .collect(),
        }
    }

    /// Checks the array shapes; the state itself is validated by
    /// [`DensityMatrix::new`].
    pub fn to_state(&self) -> Result<DensityMatrix, String> {
        let d: usize = self.dims.iter().product();
        if self.dims.is_empty() {
            return Err("dims is empty".into());
        }
        for (name, part) in [("re", &self.re), ("im", &self.im)] {
            if part.len() != d {
                return Err(format!(
                    "{name} has {} rows but dims {:?} give dimension {d}",
                    part.len(),
                    self.dims
                ));
            }
            if let Some((i, row)) = part.iter().enumerate().find(|(_, r)| r.len() != d) {
                return Err(format!(
                    "row {i} of {name} has {} entries, expected {d}",
                    row.len()
                ));
            }
        }
        let entries: Vec<Complex64> = self
            .re
            .iter()
            .flatten()
            .zip(self.im.iter().flatten())
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        let matrix = ComplexMatrix::from_row_major(d, d, &entries).map_err(|e| e.to_string())?;
        DensityMatrix::new(self.dims.clone(), matrix).map_err(|e| e.to_string())
    }
}

pub fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let invalid = |message: String| CliError::StateFile {
        path: path.to_path_buf(),
        message,
    };
    let file: StateFile = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
    file.to_state().map_err(invalid)
}

/// Parses a family spec; seeded families without a seed take `default_seed`.
pub fn resolve_family(spec: &str, default_seed: u64) -> CliResult<StateFamily> {
    let family: StateFamily = spec.parse()?;
    Ok(family.with_default_seed(default_seed))
}

pub fn family_state(family: &StateFamily) -> CliResult<DensityMatrix> {
    Ok(make_state(family)?)
}
