//! Reference computations that share nothing with the library beyond the
//! input state and the dense eigenvalue routine.
//!
//! Channels are built as explicit projector sums with operators embedded by
//! direct index arithmetic, so neither factor permutation nor the block
//! formula of the library is involved.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, TAU};

use gmqd_core::{Complex64, DensityMatrix, Partition};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMat = DMatrix<Complex64>;

pub fn entropy_bits(m: &CMat) -> f64 {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Digits of a composite index, subsystem 1 first.
fn digits(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = i % dims[k];
        i /= dims[k];
    }
    out
}

/// Splits a composite index into (γ index, γ' index), each mixed-radix over
/// the members in ascending order.
fn split(i: usize, dims: &[usize], gamma: &[usize]) -> (usize, usize) {
    let d = digits(i, dims);
    let (mut g, mut r) = (0, 0);
    for k in 0..dims.len() {
        if gamma.contains(&(k + 1)) {
            g = g * dims[k] + d[k];
        } else {
            r = r * dims[k] + d[k];
        }
    }
    (g, r)
}

/// `A ⊗ B` with `A` on the γ factors and `B` on the rest, in native factor
/// order.
pub fn assemble(a: &CMat, b: &CMat, dims: &[usize], gamma: &[usize]) -> CMat {
    let total: usize = dims.iter().product();
    let parts: Vec<(usize, usize)> = (0..total).map(|i| split(i, dims, gamma)).collect();
    CMat::from_fn(total, total, |i, j| {
        a[(parts[i].0, parts[j].0)] * b[(parts[i].1, parts[j].1)]
    })
}

/// `P ⊗ I` with `P` acting on the γ factors, wherever they sit.
pub fn embed(p: &CMat, dims: &[usize], gamma: &[usize]) -> CMat {
    let rest: usize = dims.iter().product::<usize>() / p.nrows();
    assemble(p, &CMat::identity(rest, rest), dims, gamma)
}

pub fn reduce(rho: &CMat, dims: &[usize], gamma: &[usize]) -> CMat {
    let m: usize = gamma.iter().map(|&k| dims[k - 1]).product();
    let total: usize = dims.iter().product();
    let mut out = CMat::zeros(m, m);
    for i in 0..total {
        let (gi, ri) = split(i, dims, gamma);
        for j in 0..total {
            let (gj, rj) = split(j, dims, gamma);
            if ri == rj {
                out[(gi, gj)] += rho[(i, j)];
            }
        }
    }
    out
}

pub fn projectors(basis: &CMat) -> Vec<CMat> {
    (0..basis.ncols())
        .map(|j| {
            let v = basis.column(j);
            v * v.adjoint()
        })
        .collect()
}

pub fn dephase_full(rho: &CMat, dims: &[usize], gamma: &[usize], basis: &CMat) -> CMat {
    projectors(basis)
        .iter()
        .fold(CMat::zeros(rho.nrows(), rho.ncols()), |acc, p| {
            let e = embed(p, dims, gamma);
            acc + &e * rho * &e
        })
}

pub fn dephase(rho: &CMat, basis: &CMat) -> CMat {
    projectors(basis)
        .iter()
        .fold(CMat::zeros(rho.nrows(), rho.ncols()), |acc, p| {
            acc + p * rho * p
        })
}

/// Reference γ-discord objective for a state, subset and basis.
pub fn objective(rho: &DensityMatrix, gamma: &Partition, basis: &CMat) -> f64 {
    let m = rho.matrix().as_dmatrix();
    let dims = rho.dims();
    let g = gamma.members();
    let full = entropy_bits(&dephase_full(m, dims, g, basis)) - entropy_bits(m);
    let r = reduce(m, dims, g);
    let local = entropy_bits(&dephase(&r, basis)) - entropy_bits(&r);
    full - local
}

/// Qubit basis with first vector `(cos θ, e^{iφ} sin θ)`.
pub fn qubit_basis(theta: f64, phi: f64) -> CMat {
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    CMat::from_row_slice(
        2,
        2,
        &[
            Complex64::new(c, 0.0),
            -e.conj() * s,
            e * s,
            Complex64::new(c, 0.0),
        ],
    )
}

/// Minimum over a 181 x 361 grid of `(θ, φ) ∈ [0, π/2] x [0, 2π]`, then a
/// compass search around the best grid point.
pub fn qubit_grid_minimum<F: Fn(&CMat) -> f64>(f: F) -> (f64, f64, f64) {
    let eval = |t: f64, p: f64| f(&qubit_basis(t, p));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..181 {
        let t = FRAC_PI_2 * i as f64 / 180.0;
        for j in 0..361 {
            let p = TAU * j as f64 / 360.0;
            let v = eval(t, p);
            if v < best.0 {
                best = (v, t, p);
            }
        }
    }
    let mut step = FRAC_PI_2 / 180.0;
    while step > 1e-9 {
        let mut moved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let v = eval(best.1 + dt, best.2 + dp);
            if v < best.0 {
                best = (v, best.1 + dt, best.2 + dp);
                moved = true;
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    best
}

/// Haar-random unitary from the QR decomposition of a complex Gaussian matrix.
pub fn haar<R: Rng>(m: usize, rng: &mut R) -> CMat {
    let g = CMat::from_fn(m, m, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let (mut q, r) = g.qr().unpack();
    for j in 0..m {
        let d = r[(j, j)];
        let phase = d / d.norm();
        for i in 0..m {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Best objective over `samples` Haar-random bases.
pub fn random_search<R: Rng>(
    rho: &DensityMatrix,
    gamma: &Partition,
    samples: usize,
    rng: &mut R,
) -> f64 {
    let m = gamma.subsystem_dim(rho.dims());
    (0..samples)
        .map(|_| objective(rho, gamma, &haar(m, rng)))
        .fold(f64::INFINITY, f64::min)
}
