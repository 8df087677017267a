mod common;

use common::oracle;
use gmqd_core::states::haar_unitary;
use gmqd_core::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_basis(m: usize, seed: u64) -> ProjectiveMeasurement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ProjectiveMeasurement::new(haar_unitary(m, &mut rng)).unwrap()
}

fn max_abs(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn subset(mask: usize, n: usize) -> Partition {
    let members: Vec<usize> = (1..=n).filter(|k| mask & (1 << (k - 1)) != 0).collect();
    Partition::new(&members, n).unwrap()
}

/// Nonempty proper subset mask for `n` parties.
fn proper_mask(n: usize) -> impl Strategy<Value = usize> {
    1usize..(1 << n) - 1
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn partial_trace_of_product_returns_factor(sa in any::<u64>(), sb in any::<u64>()) {
        let a = random_density(&[2], 2, sa).unwrap();
        let b = random_density(&[3], 3, sb).unwrap();
        let ab = DensityMatrix::product(&[a.clone(), b.clone()]).unwrap();
        let ra = partial_trace(&ab, &Partition::new(&[1], 2).unwrap()).unwrap();
        let rb = partial_trace(&ab, &Partition::new(&[2], 2).unwrap()).unwrap();
        prop_assert!(ra.max_abs_diff(&a) <= 1e-12);
        prop_assert!(rb.max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn partial_trace_matches_direct_contraction(seed in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 3, 2], 12, seed).unwrap();
        let keep = subset(mask, 3);
        let reduced = partial_trace(&rho, &keep).unwrap();
        let direct = oracle::reduce(rho.matrix().as_dmatrix(), rho.dims(), keep.members());
        prop_assert!(max_abs(reduced.matrix().as_dmatrix(), &direct) <= 1e-12);
        prop_assert!((reduced.trace() - 1.0).abs() <= 1e-12);
        prop_assert!(reduced.matrix().hermiticity_residual() <= 1e-12);
        prop_assert!(reduced.min_eigenvalue() >= -1e-12);
    }

    #[test]
    fn permutation_round_trip(seed in any::<u64>(), perm in Just(vec![1usize, 2, 3]).prop_shuffle()) {
        let rho = random_density(&[2, 3, 2], 5, seed).unwrap();
        let moved = permute_systems(&rho, &perm).unwrap();
        let expected_dims: Vec<usize> = perm.iter().map(|&k| rho.dims()[k - 1]).collect();
        prop_assert_eq!(moved.dims(), &expected_dims[..]);
        let back = permute_systems(&moved, &inverse_permutation(&perm).unwrap()).unwrap();
        prop_assert_eq!(back.dims(), rho.dims());
        prop_assert!(back.max_abs_diff(&rho) <= 1e-14);
    }

    #[test]
    fn permutation_reorders_product_factors(
        seeds in proptest::array::uniform3(any::<u64>()),
        perm in Just(vec![1usize, 2, 3]).prop_shuffle(),
    ) {
        let dims = [2usize, 3, 2];
        let factors: Vec<DensityMatrix> = (0..3)
            .map(|k| random_density(&[dims[k]], dims[k], seeds[k]).unwrap())
            .collect();
        let rho = DensityMatrix::product(&factors).unwrap();
        let reordered: Vec<DensityMatrix> = perm.iter().map(|&k| factors[k - 1].clone()).collect();
        let expected = DensityMatrix::product(&reordered).unwrap();
        prop_assert!(permute_systems(&rho, &perm).unwrap().max_abs_diff(&expected) <= 1e-14);
    }

    #[test]
    fn hermitian_eig_reconstructs(entries in proptest::collection::vec(-1.0f64..1.0, 128)) {
        let m = DMatrix::from_fn(8, 8, |i, j| Complex64::new(entries[8 * i + j], entries[64 + 8 * i + j]));
        let h = ComplexMatrix::from_dmatrix((&m + m.adjoint()) * Complex64::new(0.5, 0.0)).unwrap();
        let spec = hermitian_eig(&h).unwrap();
        prop_assert!(spec.reconstruct().max_abs_diff(&h) <= 1e-9);
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        let v = spec.eigenvectors.as_dmatrix();
        let gram = v.adjoint() * v;
        prop_assert!(max_abs(&gram, &DMatrix::identity(8, 8)) <= 1e-10);
    }

    #[test]
    fn density_spectrum_sums_to_one(seed in any::<u64>(), rank in 1usize..=8) {
        let rho = random_density(&[2, 2, 2], rank, seed).unwrap();
        let total: f64 = rho.eigenvalues().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        let s = von_neumann_entropy(&rho).unwrap();
        prop_assert!(s >= -1e-12 && s <= (rank as f64).log2() + 1e-9);
    }

    #[test]
    fn mutual_information_is_relative_entropy_to_marginals(seed in any::<u64>()) {
        let rho = random_density(&[2, 2], 4, seed).unwrap();
        let a = partial_trace(&rho, &Partition::new(&[1], 2).unwrap()).unwrap();
        let b = partial_trace(&rho, &Partition::new(&[2], 2).unwrap()).unwrap();
        let prod = DensityMatrix::product(&[a, b]).unwrap();
        let i = mutual_information(&rho).unwrap();
        prop_assert!((i - relative_entropy(&rho, &prod).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn klein_inequality(s1 in any::<u64>(), s2 in any::<u64>(), rank in 1usize..=4) {
        let rho = random_density(&[2, 2], rank, s1).unwrap();
        let sigma = random_density(&[2, 2], 4, s2).unwrap();
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-9);
        prop_assert!(relative_entropy(&rho, &rho).unwrap().abs() <= 1e-9);
    }

    #[test]
    fn relative_entropy_monotone_under_partial_trace(s1 in any::<u64>(), s2 in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 2, 2], 8, s1).unwrap();
        let sigma = random_density(&[2, 2, 2], 8, s2).unwrap();
        let keep = subset(mask, 3);
        let full = relative_entropy(&rho, &sigma).unwrap();
        let reduced = relative_entropy(
            &partial_trace(&rho, &keep).unwrap(),
            &partial_trace(&sigma, &keep).unwrap(),
        ).unwrap();
        prop_assert!(reduced <= full + 1e-9, "{reduced} > {full}");
    }

    #[test]
    fn dephasing_identity(seed in any::<u64>(), bseed in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 2, 2], 8, seed).unwrap();
        let gamma = subset(mask, 3);
        let meas = random_basis(gamma.subsystem_dim(rho.dims()), bseed);
        let phi = apply_channel_full(&rho, &gamma, &meas).unwrap();
        let lhs = relative_entropy(&rho, &phi).unwrap();
        let rhs = von_neumann_entropy(&phi).unwrap() - von_neumann_entropy(&rho).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8);
    }

    #[test]
    fn channel_matches_explicit_projector_sum(seed in any::<u64>(), bseed in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 3, 2], 6, seed).unwrap();
        let gamma = subset(mask, 3);
        let meas = random_basis(gamma.subsystem_dim(rho.dims()), bseed);
        let phi = apply_channel_full(&rho, &gamma, &meas).unwrap();
        let direct = oracle::dephase_full(
            rho.matrix().as_dmatrix(), rho.dims(), gamma.members(), meas.basis().as_dmatrix());
        prop_assert!(max_abs(phi.matrix().as_dmatrix(), &direct) <= 1e-12);
    }

    #[test]
    fn channel_commutes_with_partial_trace_and_is_idempotent(seed in any::<u64>(), bseed in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 2, 2], 3, seed).unwrap();
        let gamma = subset(mask, 3);
        let meas = random_basis(gamma.subsystem_dim(rho.dims()), bseed);
        let phi = apply_channel_full(&rho, &gamma, &meas).unwrap();
        let traced = partial_trace(&phi, &gamma).unwrap();
        let reduced = apply_channel_reduced(&partial_trace(&rho, &gamma).unwrap(), &meas).unwrap();
        prop_assert!(traced.max_abs_diff(&reduced) <= 1e-12);
        let twice = apply_channel_full(&phi, &gamma, &meas).unwrap();
        prop_assert!(twice.max_abs_diff(&phi) <= 1e-12);
        prop_assert!(apply_channel_reduced(&reduced, &meas).unwrap().max_abs_diff(&reduced) <= 1e-12);
    }

    #[test]
    fn statistics_reassemble_the_dephased_state(seed in any::<u64>(), bseed in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 3, 2], 12, seed).unwrap();
        let gamma = subset(mask, 3);
        let meas = random_basis(gamma.subsystem_dim(rho.dims()), bseed);
        let outcomes = measurement_statistics(&rho, &gamma, &meas).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        let mut sum = DMatrix::zeros(rho.dim(), rho.dim());
        for (j, o) in outcomes.iter().enumerate() {
            let cond = o.conditional.as_ref().unwrap();
            prop_assert!((cond.trace() - 1.0).abs() <= 1e-12);
            let weighted = cond.matrix().as_dmatrix() * Complex64::new(o.probability, 0.0);
            sum += oracle::assemble(meas.projector(j).as_dmatrix(), &weighted, rho.dims(), gamma.members());
        }
        let phi = apply_channel_full(&rho, &gamma, &meas).unwrap();
        prop_assert!(max_abs(phi.matrix().as_dmatrix(), &sum) <= 1e-12);
    }

    #[test]
    fn chart_bases_are_orthonormal(angles in proptest::collection::vec(-10.0f64..10.0, 12)) {
        let params = MeasurementParams::new(4, angles).unwrap();
        let meas = basis_from_params(4, &params).unwrap();
        prop_assert!(meas.completeness_residual() <= 1e-10);
    }

    #[test]
    fn chart_inverse_recovers_projectors(seed in any::<u64>(), m in 2usize..=4) {
        let meas = random_basis(m, seed);
        let params = params_from_basis(&meas);
        prop_assert_eq!(params.angles().len(), m * (m - 1));
        let back = basis_from_params(m, &params).unwrap();
        for j in 0..m {
            prop_assert!(back.projector(j).max_abs_diff(&meas.projector(j)) <= 1e-10);
        }
    }

    #[test]
    fn measured_mutual_information_relative_entropy_form(seed in any::<u64>(), bseed in any::<u64>()) {
        let rho = random_density(&[2, 2], 4, seed).unwrap();
        let meas = random_basis(2, bseed);
        let second = Partition::new(&[2], 2).unwrap();
        let j = measured_mutual_information(&rho, &meas).unwrap();
        let phi = apply_channel_full(&rho, &second, &meas).unwrap();
        let a = partial_trace(&rho, &Partition::new(&[1], 2).unwrap()).unwrap();
        let b = apply_channel_reduced(&partial_trace(&rho, &second).unwrap(), &meas).unwrap();
        let form = relative_entropy(&phi, &DensityMatrix::product(&[a, b]).unwrap()).unwrap();
        prop_assert!((j - form).abs() <= 1e-8, "{j} vs {form}");
        prop_assert!(j <= mutual_information(&rho).unwrap() + 1e-9);
    }

    #[test]
    fn objective_agrees_with_reference_route(seed in any::<u64>(), bseed in any::<u64>(), rank in 1usize..=8, mask in proper_mask(3)) {
        let rho = random_density(&[2, 2, 2], rank, seed).unwrap();
        let gamma = subset(mask, 3);
        let meas = random_basis(gamma.subsystem_dim(rho.dims()), bseed);
        let fast = gamma_discord_objective(&rho, &gamma, &meas).unwrap();
        let reference = oracle::objective(&rho, &gamma, meas.basis().as_dmatrix());
        prop_assert!((fast - reference).abs() <= 1e-9, "{fast} vs {reference}");
        prop_assert!(fast >= -1e-9);
        let via_params = GammaObjective::new(&rho, &gamma).unwrap()
            .evaluate_params(&params_from_basis(&meas)).unwrap();
        prop_assert!((via_params - fast).abs() <= 1e-10);
    }

    #[test]
    fn relative_entropy_form_of_objective_on_full_rank(seed in any::<u64>(), bseed in any::<u64>(), mask in proper_mask(3)) {
        let rho = random_density(&[2, 2, 2], 8, seed).unwrap();
        let gamma = subset(mask, 3);
        let meas = random_basis(gamma.subsystem_dim(rho.dims()), bseed);
        let reduced = partial_trace(&rho, &gamma).unwrap();
        let direct = relative_entropy(&rho, &apply_channel_full(&rho, &gamma, &meas).unwrap()).unwrap()
            - relative_entropy(&reduced, &apply_channel_reduced(&reduced, &meas).unwrap()).unwrap();
        let fast = gamma_discord_objective(&rho, &gamma, &meas).unwrap();
        prop_assert!((direct - fast).abs() <= 1e-8);
    }
}
