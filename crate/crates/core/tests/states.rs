mod common;

use gaussmp::ppt::{simon_check, Verdict};
use gaussmp::states::{
    random_mixed, random_pure, separable_product, squeezed_pairs, thermal, two_mode_squeezed, vacuum,
    validate, GaussianState,
};
use gaussmp::symplectic::PartitionSpec;

fn assert_physical(s: &GaussianState, what: &str) {
    let report = validate(s);
    assert!(report.passes, "{what}: {}", report.min_eigenvalue);
    let oracle = common::uncertainty_min_eigenvalue(s.cov().matrix());
    assert!(oracle >= -report.tol, "{what}: oracle {oracle}");
}

#[test]
fn constructors_are_physical_over_200_seeds() {
    for seed in 0..200u64 {
        let n = 1 + (seed % 3) as usize;
        assert_physical(&random_pure(n, seed).unwrap(), "random_pure");
        assert_physical(&random_mixed(n, seed, 0.1).unwrap(), "random_mixed 0.1");
        assert_physical(&random_mixed(n, seed, 1.0).unwrap(), "random_mixed 1");
        assert_physical(&separable_product(n, seed).unwrap(), "separable_product");
        let r = seed as f64 / 100.0;
        assert_physical(&two_mode_squeezed(r).unwrap(), "tmsv");
        assert_physical(&squeezed_pairs(&[r, 0.5 * r]).unwrap(), "squeezed_pairs");
        assert_physical(&thermal(&vec![r; n]).unwrap(), "thermal");
    }
    assert_physical(&vacuum(5).unwrap(), "vacuum");
}

#[test]
fn pure_states_have_unit_determinant() {
    for seed in 0..50 {
        let s = random_pure(2, seed).unwrap();
        let det = (s.cov().matrix() * 2.0).determinant();
        assert!((det - 1.0).abs() < 1e-6, "seed {seed}: {det}");
    }
    for r in [0.0, 0.3, 1.0, 2.5] {
        let det = two_mode_squeezed(r).unwrap().cov().matrix().determinant();
        assert!((det - 1.0 / 16.0).abs() < 1e-9 * (1.0f64).max((4.0 * r).exp()), "r {r}");
    }
}

#[test]
fn separable_product_has_zero_cross_blocks() {
    let s = separable_product(2, 3).unwrap();
    let m = s.cov().matrix();
    assert_eq!(m.nrows(), 8);
    for i in 0..4 {
        for j in 4..8 {
            assert_eq!(m[(i, j)], 0.0);
            assert_eq!(m[(j, i)], 0.0);
        }
    }
}

#[test]
fn heavy_noise_on_a_product_is_ppt() {
    for seed in 0..20 {
        let s = separable_product(1, seed).unwrap();
        let noisy = random_mixed(2, seed, 10.0).unwrap();
        let split = PartitionSpec::new([1]);
        assert_eq!(simon_check(&s, &split, None).unwrap().verdict, Verdict::Separable);
        assert_eq!(simon_check(&noisy, &split, None).unwrap().verdict, Verdict::Separable);
    }
}

#[test]
fn random_mixed_at_zero_noise_is_random_pure() {
    assert_eq!(random_mixed(3, 9, 0.0).unwrap().cov(), random_pure(3, 9).unwrap().cov());
}

#[test]
fn negative_parameters_are_rejected() {
    assert!(two_mode_squeezed(-0.1).is_err());
    assert!(thermal(&[0.5, -1.0]).is_err());
    assert!(random_mixed(1, 0, -0.5).is_err());
    assert!(vacuum(0).is_err());
}
