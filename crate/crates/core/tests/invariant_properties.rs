mod common;

use common::{elementary_symmetric, leibniz_det, single_entry, trace_chain};
use lu_invar_core::invariants::{
    cayley_det_222, cayley_det_222_compact, f_invariants, gram_matrix, hypermatrix, invariant_m,
    invariant_n, lambda_poly, quartic_entries, transform_slot_222, LambdaInvariant,
};
use lu_invar_core::linalg::{
    char_poly, complex_gaussian, determinant, haar_unitary_from, seeded_rng, ComplexMatrix,
    Polynomial,
};
use lu_invar_core::states::{
    apply_local_unitary, eigen_decomposition, mix_decomposition, pad_with_zeros, random_density,
    validate_density, PureStateDecomposition, RankTol,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn rank2_qubits(seed: u64) -> PureStateDecomposition {
    let rho = random_density(&[2, 2], 2, &mut seeded_rng(seed)).unwrap();
    eigen_decomposition(&rho, RankTol::default()).unwrap()
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn f_independent_of_decomposition(n in 2usize..=3, m in 2usize..=3, rank in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(&[n, m], rank, &mut rng).unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let f0 = f_invariants(&gram_matrix(&d));
        for _ in 0..100 {
            let b = mix_decomposition(&d, &haar_unitary_from(rank, &mut rng)).unwrap();
            let f = f_invariants(&gram_matrix(&b));
            prop_assert!(max_diff(f.values(), f0.values()) < 1e-9);
        }
    }

    #[test]
    fn gram_and_hypermatrix_entrywise_lu_invariant(n in 2usize..=3, m in 2usize..=3, rank in 1usize..=3, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(&[n, m], rank, &mut rng).unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let moved = apply_local_unitary(&d, &haar_unitary_from(n, &mut rng), &haar_unitary_from(m, &mut rng)).unwrap();
        prop_assert!(gram_matrix(&moved).matrix().max_abs_diff(gram_matrix(&d).matrix()) < 1e-10);
        for s in 2..=3 {
            let h0 = hypermatrix(&d, s).unwrap();
            let h1 = hypermatrix(&moved, s).unwrap();
            prop_assert!(max_diff(h0.entries(), h1.entries()) < 1e-10);
        }
        let f0 = f_invariants(&gram_matrix(&d));
        let f1 = f_invariants(&gram_matrix(&moved));
        prop_assert!(max_diff(f0.values(), f1.values()) < 1e-9);
    }

    #[test]
    fn f_equals_symmetric_functions_of_spectrum(n in 2usize..=3, m in 2usize..=3, rank in 1usize..=4, seed in any::<u64>()) {
        let rho = random_density(&[n, m], rank, &mut seeded_rng(seed)).unwrap();
        let spectrum = rho.eigen().unwrap().values;
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let f = f_invariants(&gram_matrix(&d));
        prop_assert_eq!(f.values()[0], Complex64::new(1.0, 0.0));
        prop_assert!((f.get(1).re - 1.0).abs() < 1e-10);
        for i in 0..=rank {
            let e = elementary_symmetric(&spectrum, i);
            prop_assert!((f.get(i) - Complex64::new(e, 0.0)).norm() < 1e-9);
            prop_assert!(f.get(i).im.abs() < 1e-10);
        }
    }

    #[test]
    fn gram_is_hermitian_psd_unit_trace(n in 2usize..=3, m in 2usize..=3, rank in 1usize..=4, seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let rho = random_density(&[n, m], rank, &mut rng).unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let b = mix_decomposition(&d, &haar_unitary_from(rank, &mut rng)).unwrap();
        let g = gram_matrix(&b);
        prop_assert!(g.matrix().hermitian_residual() < 1e-10);
        prop_assert!((g.matrix().trace() - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        let eig = lu_invar_core::linalg::hermitian_eig(g.matrix(), 1e-10).unwrap();
        prop_assert!(*eig.values.last().unwrap() > -1e-10);
    }

    #[test]
    fn quartic_invariants_match_brute_force(seed in any::<u64>()) {
        let d = rank2_qubits(seed);
        let h = hypermatrix(&d, 2).unwrap();
        let a = quartic_entries(&h).unwrap();
        for (r, &ar) in a.iter().enumerate() {
            let (i, j, k, l) = (r >> 3 & 1, r >> 2 & 1, r >> 1 & 1, r & 1);
            prop_assert!((ar - trace_chain(d.mats(), &[i, k], &[j, l])).norm() < 1e-14);
        }
        let n_oracle = layout_det(&a, [[0, 1, 8, 9], [2, 3, 10, 11], [4, 5, 12, 13], [6, 7, 14, 15]]);
        let m_oracle = layout_det(&a, [[0, 8, 2, 10], [1, 9, 3, 11], [4, 12, 6, 14], [5, 13, 7, 15]]);
        prop_assert!((invariant_n(&h).unwrap() - n_oracle).norm() < 1e-14);
        prop_assert!((invariant_m(&h).unwrap() - m_oracle).norm() < 1e-14);
    }

    #[test]
    fn quartic_invariants_and_lambda_polys_decomposition_independent(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed ^ 0x5eed);
        let d = rank2_qubits(seed);
        let h = hypermatrix(&d, 2).unwrap();
        let n0 = invariant_n(&h).unwrap();
        let m0 = invariant_m(&h).unwrap();
        let polys: Vec<_> = [LambdaInvariant::Det, LambdaInvariant::N, LambdaInvariant::M]
            .iter()
            .map(|&inv| lambda_poly(&d, if inv == LambdaInvariant::Det { 1 } else { 2 }, inv).unwrap())
            .collect();
        for _ in 0..50 {
            let b = mix_decomposition(&d, &haar_unitary_from(2, &mut rng)).unwrap();
            let hb = hypermatrix(&b, 2).unwrap();
            prop_assert!((invariant_n(&hb).unwrap() - n0).norm() < 1e-8);
            prop_assert!((invariant_m(&hb).unwrap() - m0).norm() < 1e-8);
            for p in &polys {
                let q = lambda_poly(&b, p.order, p.invariant).unwrap();
                prop_assert!(max_diff(&q.coeffs, &p.coeffs) < 1e-8);
            }
        }
    }

    #[test]
    fn padding_law(n in 2usize..=3, m in 2usize..=3, rank in 1usize..=4, extra in 1usize..=2, seed in any::<u64>()) {
        let rho = random_density(&[n, m], rank, &mut seeded_rng(seed)).unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let base = lambda_poly(&d, 1, LambdaInvariant::Det).unwrap().polynomial();
        let padded = lambda_poly(&pad_with_zeros(&d, rank + extra).unwrap(), 1, LambdaInvariant::Det).unwrap();
        prop_assert!(padded.polynomial().max_coeff_diff(&base.shift_up(extra)) < 1e-9);
    }

    #[test]
    fn lambda_det_agrees_with_faddeev_leverrier(n in 2usize..=3, m in 2usize..=3, rank in 1usize..=9, seed in any::<u64>()) {
        let rank = rank.min(n * m);
        let rho = random_density(&[n, m], rank, &mut seeded_rng(seed)).unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let lp = lambda_poly(&d, 1, LambdaInvariant::Det).unwrap();
        let recursion = char_poly(gram_matrix(&d).matrix()).unwrap();
        for (j, (c, bound)) in lp.coeffs.iter().zip(&lp.error_bound).enumerate() {
            let err = (c - recursion.coeff(j)).norm();
            prop_assert!(err <= *bound, "rank {} coeff {} err {:e} bound {:e}", rank, j, err, bound);
        }
        // Within the ranks of the screening ensembles the interpolation is
        // accurate well below the default tolerance.
        if rank <= 6 {
            prop_assert!(lp.polynomial().max_coeff_diff(&recursion) < 1e-9);
            prop_assert!(lp.error_bound.iter().all(|&b| b < 1e-8));
        }
    }

    #[test]
    fn cayley_sl_covariance(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let a: Vec<Complex64> = (0..8).map(|_| complex_gaussian(&mut rng)).collect();
        let det_a = cayley_det_222(&a).unwrap();
        let compact = cayley_det_222_compact(&a).unwrap();
        prop_assert!((det_a - compact).norm() <= 1e-12 * det_a.norm());
        for slot in 0..3 {
            let b = ComplexMatrix::from_fn(2, 2, |_, _| complex_gaussian(&mut rng));
            let det_b = determinant(&b).unwrap();
            let transformed = cayley_det_222(&transform_slot_222(&a, slot, &b).unwrap()).unwrap();
            let expected = det_a * det_b * det_b;
            prop_assert!((transformed - expected).norm() <= 1e-8 * expected.norm());
            // Normalized to det 1 the value is unchanged.
            let sl = b.scale(det_b.sqrt().inv());
            let invariant = cayley_det_222(&transform_slot_222(&a, slot, &sl).unwrap()).unwrap();
            prop_assert!((invariant - det_a).norm() <= 1e-8 * det_a.norm());
        }
    }

    #[test]
    fn cayley_vanishes_on_product_tensors(seed in any::<u64>()) {
        let mut rng = seeded_rng(seed);
        let u: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng)).collect();
        let v: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng)).collect();
        let w: Vec<Complex64> = (0..2).map(|_| complex_gaussian(&mut rng)).collect();
        let a: Vec<Complex64> = (0..8).map(|f| u[f >> 2] * v[f >> 1 & 1] * w[f & 1]).collect();
        prop_assert!(cayley_det_222(&a).unwrap().norm() < 1e-12);
        prop_assert!(cayley_det_222_compact(&a).unwrap().norm() < 1e-12);
    }
}

fn layout_det(a: &[Complex64], layout: [[usize; 4]; 4]) -> Complex64 {
    leibniz_det(&ComplexMatrix::from_fn(4, 4, |r, c| a[layout[r][c]]))
}

#[test]
fn degenerate_eigenbasis_choice_does_not_matter() {
    let rho1 = validate_density(
        ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0, 0.0]),
        &[2, 2],
        1e-10,
    )
    .unwrap();
    let d = eigen_decomposition(&rho1, RankTol::default()).unwrap();
    let mut rng = seeded_rng(2024);
    // Rotating the eigenvectors inside the degenerate eigenspace by W gives
    // A'_i = Σ_j W_ji A_j.
    for _ in 0..10 {
        let w = haar_unitary_from(2, &mut rng);
        let rotated: Vec<Vec<Complex64>> = (0..2)
            .map(|i| {
                let mut v = vec![Complex64::new(0.0, 0.0); 4];
                for j in 0..2 {
                    for (k, x) in d.mats()[j].as_slice().iter().enumerate() {
                        v[k] += w[(j, i)] * x * 2.0f64.sqrt();
                    }
                }
                v
            })
            .collect();
        let alt = PureStateDecomposition::from_ensemble(2, 2, &[0.5, 0.5], &rotated).unwrap();
        assert!(alt.reconstruct().max_abs_diff(rho1.matrix()) < 1e-14);
        let f0 = f_invariants(&gram_matrix(&d));
        let f1 = f_invariants(&gram_matrix(&alt));
        assert!(max_diff(f0.values(), f1.values()) < 1e-9);
        let n0 = invariant_n(&hypermatrix(&d, 2).unwrap()).unwrap();
        let n1 = invariant_n(&hypermatrix(&alt, 2).unwrap()).unwrap();
        assert!((n0 - n1).norm() < 1e-9);
    }
}

#[test]
fn printed_ensembles_related_by_mixing_share_n() {
    // rho1's printed ensemble and its Hadamard mixture.
    let h = 0.5f64.sqrt();
    let a = PureStateDecomposition::new(
        2,
        2,
        vec![single_entry(2, 2, 0, 0, h), single_entry(2, 2, 0, 1, h)],
    )
    .unwrap();
    let had = ComplexMatrix::from_real_rows(&[[h, h], [h, -h]]);
    let b = mix_decomposition(&a, &had).unwrap();
    let na = invariant_n(&hypermatrix(&a, 2).unwrap()).unwrap();
    let nb = invariant_n(&hypermatrix(&b, 2).unwrap()).unwrap();
    assert!((na - Complex64::new(1.0 / 256.0, 0.0)).norm() < 1e-15);
    assert!((na - nb).norm() < 1e-15);
}

#[test]
fn lambda_poly_of_rho1_det_route() {
    let h = 0.5f64.sqrt();
    let a = PureStateDecomposition::new(
        2,
        2,
        vec![single_entry(2, 2, 0, 0, h), single_entry(2, 2, 0, 1, h)],
    )
    .unwrap();
    let p = lambda_poly(&a, 1, LambdaInvariant::Det).unwrap();
    assert!(
        p.polynomial()
            .max_coeff_diff(&Polynomial::from_real(&[0.25, -1.0, 1.0]))
            < 1e-14
    );
    let padded = lambda_poly(&pad_with_zeros(&a, 4).unwrap(), 1, LambdaInvariant::Det).unwrap();
    assert!(
        padded
            .polynomial()
            .max_coeff_diff(&Polynomial::from_real(&[0.0, 0.0, 0.25, -1.0, 1.0]))
            < 1e-13
    );
}
