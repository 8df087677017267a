//! Multistart Nelder–Mead search over measurement-basis angles.
//!
//! Restart `i` draws its starting point from a ChaCha8 stream keyed by
//! `(master_seed, i)`, so results do not depend on how restarts are scheduled
//! across threads. The reduction keeps the smallest value and breaks exact ties
//! by the lowest restart index.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measurement::MeasurementParams;

/// Settings for [`minimize_over_bases`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Restarts for measured factors of dimension below 4.
    pub restarts: usize,
    /// Restarts for measured factors of dimension 4 and above.
    pub restarts_large: usize,
    /// Nelder–Mead iterations per restart.
    pub max_iterations: usize,
    /// A restart stops once the simplex values span less than this.
    pub objective_tolerance: f64,
    /// Edge length of the initial simplex, in radians.
    pub initial_step: f64,
    pub master_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 16,
            restarts_large: 48,
            max_iterations: 2000,
            objective_tolerance: 1e-9,
            initial_step: 0.3,
            master_seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(master_seed: u64) -> Self {
        OptimizerConfig {
            master_seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.restarts_large == 0 {
            return Err(Error::InvalidParameter(
                "restarts must be at least 1".into(),
            ));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.objective_tolerance.is_nan() || self.objective_tolerance <= 0.0 {
            return Err(Error::InvalidParameter(
                "objective_tolerance must be positive".into(),
            ));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidParameter(
                "initial_step must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Number of restarts used for an `m`-dimensional measured factor.
    pub fn restarts_for(&self, m: usize) -> usize {
        if m >= 4 {
            self.restarts_large
        } else {
            self.restarts
        }
    }
}

/// Result of one simplex descent.
#[derive(Debug, Clone, PartialEq)]
pub struct RestartOutcome {
    pub value: f64,
    pub angles: Vec<f64>,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Smallest objective value seen at any evaluation.
    pub lowest_evaluation: f64,
}

/// Best point over all restarts.
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub params: MeasurementParams,
    /// Index of the restart that produced `value`.
    pub best_restart: usize,
    pub restarts: Vec<RestartOutcome>,
}

impl Minimum {
    pub fn evaluations(&self) -> usize {
        self.restarts.iter().map(|r| r.evaluations).sum()
    }

    pub fn lowest_evaluation(&self) -> f64 {
        self.restarts
            .iter()
            .map(|r| r.lowest_evaluation)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn restart_values(&self) -> Vec<f64> {
        self.restarts.iter().map(|r| r.value).collect()
    }
}

/// Random generator for restart `index` under `master_seed`.
pub fn restart_rng(master_seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index as u64);
    rng
}

/// Starting angles: `θ = arcsin √u`, `φ = 2π u'` per rotation.
pub fn initial_angles<R: Rng>(m: usize, rng: &mut R) -> Vec<f64> {
    let pairs = m * m.saturating_sub(1) / 2;
    let mut angles = Vec::with_capacity(2 * pairs);
    for _ in 0..pairs {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        angles.push(u.sqrt().asin());
        angles.push(std::f64::consts::TAU * v);
    }
    angles
}

/// Minimizes `objective` over the angle chart of an `m`-dimensional factor.
pub fn minimize_over_bases<F>(objective: F, m: usize, cfg: &OptimizerConfig) -> Result<Minimum>
where
    F: Fn(&MeasurementParams) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let n_restarts = cfg.restarts_for(m);
    let eval = |x: &[f64]| -> Result<f64> {
        let params = MeasurementParams::new(m, x.to_vec())?;
        let v = objective(&params)?;
        if v.is_nan() {
            return Err(Error::NumericalIntegrity("objective returned NaN".into()));
        }
        Ok(v)
    };
    let restarts: Vec<RestartOutcome> = (0..n_restarts)
        .into_par_iter()
        .map(|i| {
            let x0 = initial_angles(m, &mut restart_rng(cfg.master_seed, i));
            nelder_mead(&eval, x0, cfg)
        })
        .collect::<Result<_>>()?;

    let mut best = 0;
    for (i, r) in restarts.iter().enumerate() {
        if r.value < restarts[best].value {
            best = i;
        }
    }
    Ok(Minimum {
        value: restarts[best].value,
        params: MeasurementParams::new(m, restarts[best].angles.clone())?,
        best_restart: best,
        restarts,
    })
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn nelder_mead<F>(f: &F, x0: Vec<f64>, cfg: &OptimizerConfig) -> Result<RestartOutcome>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let n = x0.len();
    let mut evaluations = 0usize;
    let mut lowest = f64::INFINITY;
    let mut eval = |x: &[f64]| -> Result<f64> {
        evaluations += 1;
        let v = f(x)?;
        lowest = lowest.min(v);
        Ok(v)
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.clone());
    for i in 0..n {
        let mut x = x0.clone();
        x[i] += cfg.initial_step;
        simplex.push(x);
    }
    let mut values: Vec<f64> = simplex.iter().map(|x| eval(x)).collect::<Result<_>>()?;

    let affine = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };

    let mut iterations = 0;
    let mut converged = false;
    sort_simplex(&mut simplex, &mut values);
    while iterations < cfg.max_iterations {
        let worst = n;
        let mut centroid = vec![0.0; n];
        for x in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }

        // affine(c, w, -α) = c + α(c - w)
        let xr = affine(&centroid, &simplex[worst], -REFLECT);
        let fr = eval(&xr)?;
        if fr < values[0] {
            let xe = affine(&centroid, &xr, EXPAND);
            let fe = eval(&xe)?;
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            let (xc, fc, accept) = if fr < values[worst] {
                let xc = affine(&centroid, &xr, CONTRACT);
                let fc = eval(&xc)?;
                let ok = fc <= fr;
                (xc, fc, ok)
            } else {
                let xc = affine(&centroid, &simplex[worst], CONTRACT);
                let fc = eval(&xc)?;
                let ok = fc < values[worst];
                (xc, fc, ok)
            };
            if accept {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=n {
                    simplex[i] = affine(&best, &simplex[i], SHRINK);
                    values[i] = eval(&simplex[i])?;
                }
            }
        }
        iterations += 1;
        sort_simplex(&mut simplex, &mut values);
        if values[n] - values[0] < cfg.objective_tolerance {
            converged = true;
            break;
        }
    }

    Ok(RestartOutcome {
        value: values[0],
        angles: simplex.swap_remove(0),
        iterations,
        evaluations,
        converged,
        lowest_evaluation: lowest,
    })
}

/// Stable sort by value so equal values keep their vertex order.
fn sort_simplex(simplex: &mut Vec<Vec<f64>>, values: &mut Vec<f64>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    *simplex = order
        .iter()
        .map(|&i| std::mem::take(&mut simplex[i]))
        .collect();
    *values = order.iter().map(|&i| values[i]).collect();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_objective_stops_after_one_iteration() {
        let cfg = OptimizerConfig::with_seed(3);
        let min = minimize_over_bases(|_| Ok(0.25), 2, &cfg).unwrap();
        assert_eq!(min.value, 0.25);
        assert_eq!(min.restarts.len(), 16);
        assert!(min
            .restarts
            .iter()
            .all(|r| r.iterations == 1 && r.converged));
    }

    #[test]
    fn smooth_bowl_is_found() {
        // minimum 0 at θ = 0.4, φ = 1.0 in the first pair
        let f = |p: &MeasurementParams| {
            let a = p.angles();
            Ok((a[0] - 0.4).powi(2) + (a[1] - 1.0).powi(2))
        };
        let min = minimize_over_bases(f, 2, &OptimizerConfig::default()).unwrap();
        assert!(min.value < 1e-8, "{}", min.value);
        assert!((min.params.angles()[0] - 0.4).abs() < 1e-3);
        assert_eq!(min.value, min.lowest_evaluation());
    }

    #[test]
    fn large_factor_uses_more_restarts() {
        let cfg = OptimizerConfig::default();
        assert_eq!(cfg.restarts_for(2), 16);
        assert_eq!(cfg.restarts_for(3), 16);
        assert_eq!(cfg.restarts_for(4), 48);
    }

    #[test]
    fn seeds_are_reproducible_and_distinct() {
        let a = initial_angles(3, &mut restart_rng(11, 2));
        let b = initial_angles(3, &mut restart_rng(11, 2));
        let c = initial_angles(3, &mut restart_rng(11, 3));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.len(), 6);
        for pair in a.chunks(2) {
            assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&pair[0]));
            assert!((0.0..std::f64::consts::TAU).contains(&pair[1]));
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let cfg = OptimizerConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(minimize_over_bases(|_| Ok(0.0), 2, &cfg).is_err());
        let cfg = OptimizerConfig {
            objective_tolerance: 0.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn objective_errors_propagate() {
        let r = minimize_over_bases(
            |_| Err(Error::NumericalIntegrity("boom".into())),
            2,
            &OptimizerConfig::default(),
        );
        assert!(r.is_err());
    }
}
