//! Density matrices and pure-state decompositions.
//!
//! Basis kets are enumerated big-endian over the subsystem dimensions, so the
//! amplitude of `|k l⟩` in a bipartite vector sits at flat index `k·m + l` and
//! becomes entry `(k, l)` of the coefficient matrix.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{ginibre, hermitian_eig, ComplexMatrix, HermitianEigen, STRUCTURE_TOL};

/// A validated density matrix together with its subsystem dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: ComplexMatrix,
    tol: f64,
}

impl DensityMatrix {
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    /// Tolerance the state was validated with.
    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Total Hilbert space dimension.
    pub fn size(&self) -> usize {
        self.mat.rows()
    }

    pub fn eigen(&self) -> Result<HermitianEigen> {
        hermitian_eig(&self.mat, self.tol)
    }

    /// Row and column dimensions `(N₁, N₂)` of the bipartition that puts the
    /// first `cut` subsystems on the left.
    pub fn bipartition(&self, cut: usize) -> Result<(usize, usize)> {
        bipartition(&self.dims, cut)
    }
}

fn bipartition(dims: &[usize], cut: usize) -> Result<(usize, usize)> {
    if cut == 0 || cut >= dims.len() {
        return Err(Error::BadCut {
            cut,
            parties: dims.len(),
        });
    }
    Ok((dims[..cut].iter().product(), dims[cut..].iter().product()))
}

/// Checks Hermiticity, unit trace and positive semidefiniteness.
pub fn validate_density(mat: ComplexMatrix, dims: &[usize], tol: f64) -> Result<DensityMatrix> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions must be positive, got {dims:?}"
        )));
    }
    let n: usize = dims.iter().product();
    if mat.shape() != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} need a {n}x{n} matrix, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    if !mat.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = mat.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    let residual = (mat.trace() - Complex64::new(1.0, 0.0)).norm();
    if residual > tol {
        return Err(Error::NotUnitTrace { residual, tol });
    }
    let eig = hermitian_eig(&mat, tol)?;
    let min_eigenvalue = *eig.values.last().expect("n >= 1");
    if min_eigenvalue < -tol {
        return Err(Error::NotPSD {
            min_eigenvalue,
            tol,
        });
    }
    Ok(DensityMatrix {
        dims: dims.to_vec(),
        mat,
        tol,
    })
}

/// Random state of the given rank: `G G† / tr(G G†)` for an `N × rank`
/// Ginibre matrix `G` (induced measure).
pub fn random_density<R: Rng + ?Sized>(
    dims: &[usize],
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let n: usize = dims.iter().product();
    if rank == 0 || rank > n {
        return Err(Error::BadLength {
            expected: n,
            got: rank,
        });
    }
    let g = ginibre(n, rank, rng);
    let gg = g.matmul(&g.adjoint());
    let mut mat = gg.scale_real(1.0 / gg.trace().re);
    // Exact Hermiticity; the product is Hermitian only up to rounding.
    mat = ComplexMatrix::from_fn(n, n, |r, c| (mat[(r, c)] + mat[(c, r)].conj()) * 0.5);
    validate_density(mat, dims, STRUCTURE_TOL)
}

/// Threshold below which an eigenvalue of `ρ` counts as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RankTol {
    Absolute(f64),
    /// Fraction of the largest eigenvalue.
    Relative(f64),
}

impl Default for RankTol {
    fn default() -> Self {
        RankTol::Relative(1e-10)
    }
}

impl RankTol {
    pub fn threshold(self, largest_eigenvalue: f64) -> f64 {
        match self {
            RankTol::Absolute(t) => t,
            RankTol::Relative(r) => r * largest_eigenvalue.max(0.0),
        }
    }
}

/// An ensemble `{A_i}` of weighted coefficient matrices, `A_i = √p_i · reshape(v_i)`.
///
/// All matrices share the shape `rows × cols`. The weights are folded into the
/// matrices and never stored separately.
#[derive(Debug, Clone, PartialEq)]
pub struct PureStateDecomposition {
    rows: usize,
    cols: usize,
    mats: Vec<ComplexMatrix>,
}

impl PureStateDecomposition {
    pub fn new(rows: usize, cols: usize, mats: Vec<ComplexMatrix>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(
                "coefficient matrices must be non-empty".into(),
            ));
        }
        if let Some((i, m)) = mats
            .iter()
            .enumerate()
            .find(|(_, m)| m.shape() != (rows, cols))
        {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix {i} is {}x{}, expected {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { rows, cols, mats })
    }

    /// Builds `A_i = √p_i · reshape(v_i, rows × cols)` from probabilities and
    /// state vectors (normalization of `v_i` is the caller's business).
    pub fn from_ensemble(
        rows: usize,
        cols: usize,
        probs: &[f64],
        vectors: &[Vec<Complex64>],
    ) -> Result<Self> {
        if probs.len() != vectors.len() {
            return Err(Error::BadLength {
                expected: probs.len(),
                got: vectors.len(),
            });
        }
        let mats = probs
            .iter()
            .zip(vectors)
            .map(|(&p, v)| {
                if p < 0.0 {
                    return Err(Error::DimensionMismatch(format!("negative weight {p}")));
                }
                Ok(ComplexMatrix::from_vec(rows, cols, v.clone())?.scale_real(p.sqrt()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, cols, mats)
    }

    /// Number of ensemble members `I`.
    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mats(&self) -> &[ComplexMatrix] {
        &self.mats
    }

    /// `ρ = Σ_i vec(A_i) vec(A_i)†` with row-major `vec`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.rows * self.cols;
        let mut rho = ComplexMatrix::zeros(n, n);
        for a in &self.mats {
            let v = a.as_slice();
            for r in 0..n {
                if v[r] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..n {
                    rho[(r, c)] += v[r] * v[c].conj();
                }
            }
        }
        rho
    }

    /// `Σ_i tr(A_i A_i†)`, the total probability.
    pub fn total_weight(&self) -> f64 {
        self.mats.iter().map(|a| a.frobenius_norm().powi(2)).sum()
    }
}

/// Eigenvector decomposition of `ρ` across the first/second subsystem split.
pub fn eigen_decomposition(
    rho: &DensityMatrix,
    rank_tol: RankTol,
) -> Result<PureStateDecomposition> {
    eigen_decomposition_with_cut(rho, 1, rank_tol)
}

/// Eigenvector decomposition with the first `cut` subsystems as the row space.
///
/// Keeps the eigenvalues strictly above the rank threshold, in descending
/// order, and sets `A_i = √λ_i · reshape(v_i)`.
pub fn eigen_decomposition_with_cut(
    rho: &DensityMatrix,
    cut: usize,
    rank_tol: RankTol,
) -> Result<PureStateDecomposition> {
    let (rows, cols) = rho.bipartition(cut)?;
    let eig = rho.eigen()?;
    let threshold = rank_tol.threshold(eig.values[0]);
    let mats = eig
        .values
        .iter()
        .enumerate()
        .take_while(|(_, &l)| l > threshold)
        .map(|(k, &l)| {
            ComplexMatrix::from_vec(rows, cols, eig.vectors.column(k))
                .map(|m| m.scale_real(l.sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    PureStateDecomposition::new(rows, cols, mats)
}

/// `B_i = Σ_j U_ij A_j` for a unitary `U` of size `I`.
pub fn mix_decomposition(
    d: &PureStateDecomposition,
    u: &ComplexMatrix,
) -> Result<PureStateDecomposition> {
    if u.shape() != (d.len(), d.len()) {
        return Err(Error::DimensionMismatch(format!(
            "mixing unitary is {}x{}, decomposition has {} members",
            u.rows(),
            u.cols(),
            d.len()
        )));
    }
    u.ensure_unitary(STRUCTURE_TOL)?;
    let mats = (0..d.len())
        .map(|i| {
            let mut b = ComplexMatrix::zeros(d.rows, d.cols);
            for (j, a) in d.mats.iter().enumerate() {
                b = &b + &a.scale(u[(i, j)]);
            }
            b
        })
        .collect();
    PureStateDecomposition::new(d.rows, d.cols, mats)
}

/// Appends zero matrices until the ensemble has `j` members.
pub fn pad_with_zeros(d: &PureStateDecomposition, j: usize) -> Result<PureStateDecomposition> {
    if j < d.len() {
        return Err(Error::BadLength {
            expected: d.len(),
            got: j,
        });
    }
    let mut mats = d.mats.clone();
    mats.resize(j, ComplexMatrix::zeros(d.rows, d.cols));
    PureStateDecomposition::new(d.rows, d.cols, mats)
}

/// `A_i' = P · A_i · Qᵀ` (plain transpose of `Q`), which represents the state
/// `(P ⊗ Q) ρ (P ⊗ Q)†`.
pub fn apply_local_unitary(
    d: &PureStateDecomposition,
    p: &ComplexMatrix,
    q: &ComplexMatrix,
) -> Result<PureStateDecomposition> {
    if p.shape() != (d.rows, d.rows) || q.shape() != (d.cols, d.cols) {
        return Err(Error::DimensionMismatch(format!(
            "local unitaries {}x{} and {}x{} do not fit {}x{} coefficient matrices",
            p.rows(),
            p.cols(),
            q.rows(),
            q.cols(),
            d.rows,
            d.cols
        )));
    }
    p.ensure_unitary(STRUCTURE_TOL)?;
    q.ensure_unitary(STRUCTURE_TOL)?;
    let qt = q.transpose();
    let mats = d.mats.iter().map(|a| p.matmul(a).matmul(&qt)).collect();
    PureStateDecomposition::new(d.rows, d.cols, mats)
}

fn conjugate_state(rho: &DensityMatrix, u: &ComplexMatrix) -> DensityMatrix {
    let mat = u.matmul(&rho.mat).matmul(&u.adjoint());
    DensityMatrix {
        dims: rho.dims.clone(),
        mat,
        tol: rho.tol,
    }
}

/// `(u₁ ⊗ … ⊗ u_m) ρ (u₁ ⊗ … ⊗ u_m)†`, one unitary per subsystem in `dims` order.
pub fn apply_local_unitary_density(
    rho: &DensityMatrix,
    locals: &[ComplexMatrix],
) -> Result<DensityMatrix> {
    if locals.len() != rho.dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} local unitaries for {} subsystems",
            locals.len(),
            rho.dims.len()
        )));
    }
    for (k, (u, &n)) in locals.iter().zip(&rho.dims).enumerate() {
        if u.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "local unitary {k} is {}x{}, subsystem has dimension {n}",
                u.rows(),
                u.cols()
            )));
        }
        u.ensure_unitary(STRUCTURE_TOL)?;
    }
    let full = locals[1..]
        .iter()
        .fold(locals[0].clone(), |acc, u| acc.kron(u));
    Ok(conjugate_state(rho, &full))
}

/// `(u ⊗ w) ρ (u ⊗ w)†` where `u` acts on the first `cut` subsystems jointly
/// and `w` on the rest.
pub fn apply_bipartite_unitary_density(
    rho: &DensityMatrix,
    cut: usize,
    u: &ComplexMatrix,
    w: &ComplexMatrix,
) -> Result<DensityMatrix> {
    let (n1, n2) = rho.bipartition(cut)?;
    if u.shape() != (n1, n1) || w.shape() != (n2, n2) {
        return Err(Error::DimensionMismatch(format!(
            "block unitaries {}x{} and {}x{} do not fit the {n1}|{n2} cut",
            u.rows(),
            u.cols(),
            w.rows(),
            w.cols()
        )));
    }
    u.ensure_unitary(STRUCTURE_TOL)?;
    w.ensure_unitary(STRUCTURE_TOL)?;
    Ok(conjugate_state(rho, &u.kron(w)))
}

/// Reshapes multipartite amplitudes into the `N₁ × N₂` matrix for the cut after
/// subsystem `cut`. Row and column indices are the big-endian mixed-radix
/// numbers of `(k₁…k_l)` and `(k_{l+1}…k_m)`.
pub fn flatten_multipartite(
    coeffs: &[Complex64],
    dims: &[usize],
    cut: usize,
) -> Result<ComplexMatrix> {
    let (n1, n2) = bipartition(dims, cut)?;
    if coeffs.len() != n1 * n2 {
        return Err(Error::BadLength {
            expected: n1 * n2,
            got: coeffs.len(),
        });
    }
    // Big-endian enumeration makes the split a plain row-major reshape.
    ComplexMatrix::from_vec(n1, n2, coeffs.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{haar_unitary, singular_values};

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn rho1() -> DensityMatrix {
        validate_density(
            ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0, 0.0]),
            &[2, 2],
            1e-10,
        )
        .unwrap()
    }

    fn single_entry(rows: usize, cols: usize, r: usize, c: usize, v: f64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(rows, cols);
        m[(r, c)] = re(v);
        m
    }

    #[test]
    fn validate_accepts_example_state() {
        let rho = rho1();
        assert_eq!(rho.dims(), &[2, 2]);
        assert_eq!(rho.tol(), 1e-10);
    }

    #[test]
    fn validate_rejects_trace_two() {
        let err = validate_density(ComplexMatrix::identity(2), &[2], 1e-10).unwrap_err();
        assert!(
            matches!(err, Error::NotUnitTrace { residual, .. } if (residual - 1.0).abs() < 1e-15)
        );
    }

    #[test]
    fn validate_rejects_negative_eigenvalue() {
        // eigenvalues 1.1 and -0.1
        let m = ComplexMatrix::from_real_rows(&[[0.5, 0.6], [0.6, 0.5]]);
        let err = validate_density(m, &[2], 1e-10).unwrap_err();
        assert!(
            matches!(err, Error::NotPSD { min_eigenvalue, .. } if (min_eigenvalue + 0.1).abs() < 1e-12)
        );
    }

    #[test]
    fn validate_rejects_non_hermitian_and_bad_size() {
        let m = ComplexMatrix::from_real_rows(&[[0.5, 0.1], [0.0, 0.5]]);
        assert!(matches!(
            validate_density(m, &[2], 1e-10),
            Err(Error::NotHermitian { .. })
        ));
        let m = ComplexMatrix::from_real_diag(&[0.5, 0.5]);
        assert!(matches!(
            validate_density(m, &[2, 2], 1e-10),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn eigen_decomposition_of_rho1_matches_printed_matrices() {
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        assert_eq!(d.len(), 2);
        // The degenerate eigenspace is spanned by |00>, |01>; Jacobi leaves the diagonal basis alone.
        assert!(d.mats()[0].max_abs_diff(&single_entry(2, 2, 0, 0, H)) < 1e-15);
        assert!(d.mats()[1].max_abs_diff(&single_entry(2, 2, 0, 1, H)) < 1e-15);
    }

    #[test]
    fn eigen_decomposition_of_sigma2() {
        let sigma2 = validate_density(
            ComplexMatrix::from_real_diag(&[2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0]),
            &[2, 2],
            1e-10,
        )
        .unwrap();
        let d = eigen_decomposition(&sigma2, RankTol::default()).unwrap();
        assert_eq!(d.len(), 2);
        assert!(d.mats()[0].max_abs_diff(&single_entry(2, 2, 0, 0, (2.0f64 / 3.0).sqrt())) < 1e-15);
        assert!(d.mats()[1].max_abs_diff(&single_entry(2, 2, 1, 1, (1.0f64 / 3.0).sqrt())) < 1e-15);
    }

    #[test]
    fn eigen_decomposition_of_pure_product_state() {
        let rho = validate_density(
            ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0, 0.0]),
            &[2, 2],
            1e-10,
        )
        .unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.mats()[0].max_abs_diff(&single_entry(2, 2, 0, 0, 1.0)) < 1e-15);
    }

    #[test]
    fn mix_with_identity_is_exact() {
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        assert_eq!(
            mix_decomposition(&d, &ComplexMatrix::identity(2)).unwrap(),
            d
        );
    }

    #[test]
    fn hadamard_mixing_of_rho1() {
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        let had = ComplexMatrix::from_real_rows(&[[H, H], [H, -H]]);
        let b = mix_decomposition(&d, &had).unwrap();
        for m in b.mats() {
            assert!((m[(0, 0)].norm() - 0.5).abs() < 1e-15);
            assert!((m[(0, 1)].norm() - 0.5).abs() < 1e-15);
            assert_eq!(m[(1, 0)], re(0.0));
            assert_eq!(m[(1, 1)], re(0.0));
        }
        assert!(b.reconstruct().max_abs_diff(rho1().matrix()) < 1e-15);
    }

    #[test]
    fn mixing_rejects_bad_unitaries() {
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        assert!(matches!(
            mix_decomposition(&d, &ComplexMatrix::identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            mix_decomposition(&d, &ComplexMatrix::from_real_diag(&[1.0, 2.0])),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn padding() {
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        assert_eq!(pad_with_zeros(&d, 2).unwrap(), d);
        let p = pad_with_zeros(&d, 4).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.reconstruct().max_abs_diff(rho1().matrix()) < 1e-15);
        assert!(matches!(
            pad_with_zeros(&d, 1),
            Err(Error::BadLength { .. })
        ));
    }

    #[test]
    fn swap_on_first_qubit() {
        let x = ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let e = ComplexMatrix::identity(2);
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        let moved = apply_local_unitary(&d, &x, &e).unwrap();
        assert!(moved.mats()[0].max_abs_diff(&single_entry(2, 2, 1, 0, H)) < 1e-15);
        assert!(moved.mats()[1].max_abs_diff(&single_entry(2, 2, 1, 1, H)) < 1e-15);

        let rho = apply_local_unitary_density(&rho1(), &[x, e]).unwrap();
        assert!(
            rho.matrix()
                .max_abs_diff(&ComplexMatrix::from_real_diag(&[0.0, 0.0, 0.5, 0.5]))
                < 1e-15
        );
    }

    #[test]
    fn local_unitary_with_complex_q_commutes_with_reconstruction() {
        let sigma = ComplexMatrix::from_real_rows(&[
            [1.0 / 3.0, 0.0, 0.0, 0.0],
            [0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0],
            [0.0, 1.0 / 3.0, 1.0 / 3.0, 0.0],
            [0.0, 0.0, 0.0, 0.0],
        ]);
        let rho = validate_density(sigma, &[2, 2], 1e-10).unwrap();
        let d = eigen_decomposition(&rho, RankTol::default()).unwrap();
        let p = haar_unitary(2, 3);
        let q = haar_unitary(2, 4);
        let lhs = apply_local_unitary(&d, &p, &q).unwrap().reconstruct();
        let rhs = apply_local_unitary_density(&rho, &[p, q]).unwrap();
        assert!(lhs.max_abs_diff(rhs.matrix()) < 1e-14);
    }

    #[test]
    fn flatten_ghz() {
        let mut ghz = vec![re(0.0); 8];
        ghz[0] = re(H);
        ghz[7] = re(H);
        let m = flatten_multipartite(&ghz, &[2, 2, 2], 1).unwrap();
        assert_eq!(m.shape(), (2, 4));
        assert_eq!(m[(0, 0)], re(H));
        assert_eq!(m[(1, 3)], re(H));
        assert_eq!(m.as_slice().iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn flatten_product_state_is_rank_one() {
        let u = [re(0.6), re(0.8)];
        let v = [Complex64::new(0.0, 1.0), re(0.0), re(0.0)];
        let w = [re(H), Complex64::new(0.5, 0.5)];
        let mut coeffs = Vec::new();
        for a in u {
            for b in v {
                for c in w {
                    coeffs.push(a * b * c);
                }
            }
        }
        for cut in 1..3 {
            let sv =
                singular_values(&flatten_multipartite(&coeffs, &[2, 3, 2], cut).unwrap()).unwrap();
            assert!((sv[0] - 1.0).abs() < 1e-14);
            assert!(sv[1..].iter().all(|&s| s < 1e-14));
        }
    }

    #[test]
    fn flatten_errors() {
        assert!(matches!(
            flatten_multipartite(&[re(1.0); 4], &[2, 2], 2),
            Err(Error::BadCut { cut: 2, parties: 2 })
        ));
        assert!(matches!(
            flatten_multipartite(&[re(1.0); 3], &[2, 2], 1),
            Err(Error::BadLength {
                expected: 4,
                got: 3
            })
        ));
    }

    #[test]
    fn bipartite_flatten_matches_eigen_reshape() {
        let d = eigen_decomposition(&rho1(), RankTol::default()).unwrap();
        let eig = rho1().eigen().unwrap();
        let v: Vec<Complex64> = eig
            .vectors
            .column(1)
            .iter()
            .map(|z| z * 0.5f64.sqrt())
            .collect();
        let flat = flatten_multipartite(&v, &[2, 2], 1).unwrap();
        assert!(flat.max_abs_diff(&d.mats()[1]) < 1e-15);
    }
}
