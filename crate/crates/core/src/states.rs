//! Benchmark states and seeded random ensembles.
//!
//! Randomness contract: every seeded construction draws from
//! `rand_chacha::ChaCha8Rng::seed_from_u64(seed)`; Gaussian variates come from
//! `rand_distr::StandardNormal` and uniforms from `Rng::random::<f64>()`.
//! A complex Gaussian is drawn as real part then imaginary part, and matrices
//! are filled in row-major order, so the same seed yields the same state on
//! every platform.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::state::DensityMatrix;

/// Named state families with their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// `|Φ+> = (|00> + |11>)/√2`.
    Bell,
    /// `(|0…0> + |1…1>)/√2` on `n` qubits.
    Ghz { n: usize },
    /// Equal superposition of single excitations on `n` qubits.
    W { n: usize },
    /// `z |Ψ-><Ψ-| + (1 - z) I/4`.
    Werner { z: f64 },
    /// Product of full-rank random local states.
    Product { dims: Vec<usize>, seed: Option<u64> },
    /// `Σ_i p_i |i><i|` with random `p`.
    ClassicalDiagonal { dims: Vec<usize>, seed: Option<u64> },
    /// Ginibre-induced random state of the given rank (full rank if `None`).
    Random {
        dims: Vec<usize>,
        rank: Option<usize>,
        seed: Option<u64>,
    },
    /// `(1 - p) GHZ_n + p I/2^n`.
    DepolarizedGhz { n: usize, p: f64 },
}

impl StateFamily {
    pub fn name(&self) -> &'static str {
        match self {
            StateFamily::Bell => "bell",
            StateFamily::Ghz { .. } => "ghz",
            StateFamily::W { .. } => "w",
            StateFamily::Werner { .. } => "werner",
            StateFamily::Product { .. } => "product",
            StateFamily::ClassicalDiagonal { .. } => "classical-diagonal",
            StateFamily::Random { .. } => "random",
            StateFamily::DepolarizedGhz { .. } => "depolarized-ghz",
        }
    }

    /// Fills in the seed of a seeded family when none was given.
    pub fn with_default_seed(mut self, default: u64) -> Self {
        match &mut self {
            StateFamily::Product { seed, .. }
            | StateFamily::ClassicalDiagonal { seed, .. }
            | StateFamily::Random { seed, .. } => {
                seed.get_or_insert(default);
            }
            _ => {}
        }
        self
    }

    /// Name of the single continuous parameter, for families that have one.
    pub fn sweep_parameter(&self) -> Option<&'static str> {
        match self {
            StateFamily::Werner { .. } => Some("z"),
            StateFamily::DepolarizedGhz { .. } => Some("p"),
            _ => None,
        }
    }

    /// Copy of this family with its sweep parameter set to `value`.
    pub fn with_sweep_value(&self, value: f64) -> Result<Self> {
        let out = match self {
            StateFamily::Werner { .. } => StateFamily::Werner { z: value },
            StateFamily::DepolarizedGhz { n, .. } => {
                StateFamily::DepolarizedGhz { n: *n, p: value }
            }
            other => {
                return Err(Error::InvalidParameter(format!(
                    "family {} has no sweepable parameter",
                    other.name()
                )))
            }
        };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} = {v} is outside [0, 1]"
                )))
            }
        };
        let parties = |n: usize| {
            if (2..=6).contains(&n) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("n = {n} is outside 2..=6")))
            }
        };
        let dims_ok = |dims: &[usize]| {
            let total: usize = dims.iter().product();
            if dims.is_empty() || dims.iter().any(|&d| d < 2) || total > 64 {
                Err(Error::InvalidParameter(format!(
                    "dims {dims:?} must be at least 2 each with total dimension at most 64"
                )))
            } else {
                Ok(())
            }
        };
        match self {
            StateFamily::Bell => Ok(()),
            StateFamily::Ghz { n } | StateFamily::W { n } => parties(*n),
            StateFamily::Werner { z } => unit("z", *z),
            StateFamily::DepolarizedGhz { n, p } => parties(*n).and(unit("p", *p)),
            StateFamily::Product { dims, .. } | StateFamily::ClassicalDiagonal { dims, .. } => {
                dims_ok(dims)
            }
            StateFamily::Random { dims, rank, .. } => {
                dims_ok(dims)?;
                let d: usize = dims.iter().product();
                match rank {
                    Some(r) if *r == 0 || *r > d => Err(Error::InvalidParameter(format!(
                        "rank {r} is outside 1..={d}"
                    ))),
                    _ => Ok(()),
                }
            }
        }
    }
}

fn format_dims(dims: &[usize]) -> String {
    dims.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("x")
}

impl fmt::Display for StateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let seed = |s: &Option<u64>| s.map(|s| format!(",seed={s}")).unwrap_or_default();
        match self {
            StateFamily::Bell => write!(f, "bell"),
            StateFamily::Ghz { n } => write!(f, "ghz:n={n}"),
            StateFamily::W { n } => write!(f, "w:n={n}"),
            StateFamily::Werner { z } => write!(f, "werner:z={z}"),
            StateFamily::DepolarizedGhz { n, p } => write!(f, "depolarized-ghz:n={n},p={p}"),
            StateFamily::Product { dims, seed: s } => {
                write!(f, "product:dims={}{}", format_dims(dims), seed(s))
            }
            StateFamily::ClassicalDiagonal { dims, seed: s } => {
                write!(
                    f,
                    "classical-diagonal:dims={}{}",
                    format_dims(dims),
                    seed(s)
                )
            }
            StateFamily::Random {
                dims,
                rank,
                seed: s,
            } => {
                write!(f, "random:dims={}", format_dims(dims))?;
                if let Some(r) = rank {
                    write!(f, ",rank={r}")?;
                }
                write!(f, "{}", seed(s))
            }
        }
    }
}

fn parse_dims(s: &str) -> Result<Vec<usize>> {
    s.split('x')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse dims {s:?}")))
        })
        .collect()
}

impl FromStr for StateFamily {
    type Err = Error;

    /// `name` or `name:key=value,...`; a bare `AxB` token sets `dims`.
    fn from_str(spec: &str) -> Result<Self> {
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n.trim(), r),
            None => (spec.trim(), ""),
        };
        let mut n = None;
        let mut z = None;
        let mut p = None;
        let mut dims = None;
        let mut rank = None;
        let mut seed = None;
        let bad = |what: &str| Error::InvalidParameter(format!("bad value in family spec: {what}"));
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let Some((key, value)) = item.split_once('=') else {
                dims = Some(parse_dims(item)?);
                continue;
            };
            let value = value.trim();
            match key.trim() {
                "n" => n = Some(value.parse::<usize>().map_err(|_| bad(item))?),
                "z" => z = Some(value.parse::<f64>().map_err(|_| bad(item))?),
                "p" => p = Some(value.parse::<f64>().map_err(|_| bad(item))?),
                "rank" => rank = Some(value.parse::<usize>().map_err(|_| bad(item))?),
                "seed" => seed = Some(value.parse::<u64>().map_err(|_| bad(item))?),
                "dims" => dims = Some(parse_dims(value)?),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "unknown family key {other:?}"
                    )))
                }
            }
        }
        let default_dims = || dims.clone().unwrap_or_else(|| vec![2, 2]);
        let family = match name {
            "bell" => StateFamily::Bell,
            "ghz" => StateFamily::Ghz { n: n.unwrap_or(3) },
            "w" => StateFamily::W { n: n.unwrap_or(3) },
            "werner" => StateFamily::Werner {
                z: z.unwrap_or(1.0),
            },
            "depolarized-ghz" => StateFamily::DepolarizedGhz {
                n: n.unwrap_or(3),
                p: p.unwrap_or(0.0),
            },
            "product" => StateFamily::Product {
                dims: default_dims(),
                seed,
            },
            "classical-diagonal" => StateFamily::ClassicalDiagonal {
                dims: default_dims(),
                seed,
            },
            "random" => StateFamily::Random {
                dims: default_dims(),
                rank,
                seed,
            },
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown state family {other:?}"
                )))
            }
        };
        family.validate()?;
        Ok(family)
    }
}

/// Builds the state described by `family`; seeded families without a seed
/// use seed 0.
pub fn make_state(family: &StateFamily) -> Result<DensityMatrix> {
    family.validate()?;
    match family {
        StateFamily::Bell => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let z = Complex64::new(0.0, 0.0);
            DensityMatrix::from_pure(vec![2, 2], &[h, z, z, h])
        }
        StateFamily::Ghz { n } => ghz(*n),
        StateFamily::W { n } => {
            let d = 1usize << n;
            let mut amp = vec![Complex64::new(0.0, 0.0); d];
            for k in 0..*n {
                amp[1 << k] = Complex64::new(1.0, 0.0);
            }
            DensityMatrix::from_pure(vec![2; *n], &amp)
        }
        StateFamily::Werner { z } => werner(*z),
        StateFamily::DepolarizedGhz { n, p } => depolarize(&ghz(*n)?, *p),
        StateFamily::Product { dims, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let factors = dims
                .iter()
                .map(|&d| ginibre_state(vec![d], d, &mut rng))
                .collect::<Result<Vec<_>>>()?;
            DensityMatrix::product(&factors)
        }
        StateFamily::ClassicalDiagonal { dims, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            classical_diagonal(dims, &mut rng)
        }
        StateFamily::Random { dims, rank, seed } => {
            let d = dims.iter().product();
            random_density(dims, rank.unwrap_or(d), seed.unwrap_or(0))
        }
    }
}

fn ghz(n: usize) -> Result<DensityMatrix> {
    let d = 1usize << n;
    let mut amp = vec![Complex64::new(0.0, 0.0); d];
    amp[0] = Complex64::new(1.0, 0.0);
    amp[d - 1] = Complex64::new(1.0, 0.0);
    DensityMatrix::from_pure(vec![2; n], &amp)
}

fn werner(z: f64) -> Result<DensityMatrix> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = ComplexMatrix::outer(&[
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
        Complex64::new(-h, 0.0),
        Complex64::new(0.0, 0.0),
    ]);
    let m = singlet.as_dmatrix() * Complex64::new(z, 0.0)
        + DMatrix::identity(4, 4) * Complex64::new((1.0 - z) / 4.0, 0.0);
    DensityMatrix::new(vec![2, 2], ComplexMatrix::from_dmatrix(m)?)
}

/// `Σ_i p_i |i><i|` with `p_i ∝ u_i`, `u_i` uniform in `(0, 1]`.
pub fn classical_diagonal<R: Rng>(dims: &[usize], rng: &mut R) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    let u: Vec<f64> = (0..d).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = u.iter().sum();
    let p: Vec<f64> = u.iter().map(|x| x / total).collect();
    DensityMatrix::diagonal(dims.to_vec(), &p)
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// `G G^dagger / Tr(G G^dagger)` for a `d x rank` complex Gaussian `G`.
pub fn ginibre_state<R: Rng>(dims: Vec<usize>, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter(format!(
            "rank {rank} is outside 1..={d}"
        )));
    }
    let entries: Vec<Complex64> = (0..d * rank).map(|_| complex_gaussian(rng)).collect();
    let g = DMatrix::from_row_slice(d, rank, &entries);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(
        dims,
        ComplexMatrix::from_dmatrix(gg / Complex64::new(tr, 0.0))?,
    )
}

/// Seeded Ginibre random state on `dims` with the given rank.
pub fn random_density(dims: &[usize], rank: usize, seed: u64) -> Result<DensityMatrix> {
    ginibre_state(dims.to_vec(), rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `(1 - p) ρ + p I/d`.
pub fn depolarize(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "p = {p} is outside [0, 1]"
        )));
    }
    let d = rho.dim();
    let m = rho.matrix().as_dmatrix() * Complex64::new(1.0 - p, 0.0)
        + DMatrix::identity(d, d) * Complex64::new(p / d as f64, 0.0);
    DensityMatrix::new(rho.dims().to_vec(), ComplexMatrix::from_dmatrix(m)?)
}

/// Haar-random `m x m` unitary: QR of a complex Gaussian matrix with the
/// phases of `diag(R)` moved into `Q`.
pub fn haar_unitary<R: Rng>(m: usize, rng: &mut R) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..m * m).map(|_| complex_gaussian(rng)).collect();
    let qr = DMatrix::from_row_slice(m, m, &entries).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..m {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_dmatrix_unchecked(q)
}

/// `U_1 ⊗ … ⊗ U_N` with independent Haar-random factors.
pub fn random_local_unitary<R: Rng>(dims: &[usize], rng: &mut R) -> ComplexMatrix {
    let mut u = DMatrix::<Complex64>::identity(1, 1);
    for &d in dims {
        u = u.kronecker(haar_unitary(d, rng).as_dmatrix());
    }
    ComplexMatrix::from_dmatrix_unchecked(u)
}
