use num_complex::Complex64;

use super::{ComplexMatrix, Polynomial};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (descending) and orthonormal eigenvectors (as columns) of a
/// Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

/// Complex Jacobi rotation that annihilates the `(p, q)` entry of a Hermitian
/// 2×2 block `[[app, apq], [conj(apq), aqq]]` under `J† · A · J`.
///
/// Returned as `(c, s, e)` with `J = [[c, s], [-s·e, c·e]]` on the `(p, q)`
/// plane, where `e = exp(-i·arg apq)`.
fn jacobi_rotation(app: f64, aqq: f64, apq: Complex64) -> (f64, f64, Complex64) {
    let b = apq.norm();
    let e = (apq / b).conj();
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, e)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Fails with `NotHermitian` when `max |H - H†| > tol`; the Hermitian part of
/// `H` is what gets diagonalized.
pub fn hermitian_eig(h: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "hermitian_eig needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.is_finite() {
        return Err(Error::NonFinite);
    }
    let residual = h.hermitian_residual();
    if residual > tol {
        return Err(Error::NotHermitian { residual, tol });
    }
    let n = h.rows();
    let mut a = ComplexMatrix::from_fn(n, n, |r, c| (h[(r, c)] + h[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "hermitian_eig",
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE {
                    continue;
                }
                let (c, s, e) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, apq);
                // A <- A J, V <- V J
                for m in [&mut a, &mut v] {
                    for k in 0..n {
                        let xp = m[(k, p)];
                        let xq = m[(k, q)];
                        m[(k, p)] = xp * c - xq * (e * s);
                        m[(k, q)] = xp * s + xq * (e * c);
                    }
                }
                // A <- J† A
                let ec = e.conj();
                for k in 0..n {
                    let xp = a[(p, k)];
                    let xq = a[(q, k)];
                    a[(p, k)] = xp * c - xq * (ec * s);
                    a[(q, k)] = xp * s + xq * (ec * c);
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        converged = off <= 1e-15 * scale;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Singular values in descending order, `min(rows, cols)` of them.
///
/// One-sided (Hestenes) Jacobi: columns are rotated until mutually orthogonal,
/// and the singular values are their norms. This keeps small singular values
/// accurate, unlike square roots of `M†M` eigenvalues.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let w = if m.rows() >= m.cols() {
        m.clone()
    } else {
        m.adjoint()
    };
    let (rows, cols) = w.shape();
    let mut columns: Vec<Vec<Complex64>> = (0..cols).map(|c| w.column(c)).collect();

    let mut sweeps = 0;
    loop {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "singular_values",
                sweeps,
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&columns[p], &columns[q]);
                    let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                    let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                    let gamma: Complex64 = cp.iter().zip(cq).map(|(a, b)| a.conj() * b).sum();
                    (alpha, beta, gamma)
                };
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt()
                    || gamma.norm() <= f64::MIN_POSITIVE
                {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                let (left, right) = columns.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for k in 0..rows {
                    let xp = cp[k];
                    let xq = cq[k];
                    cp[k] = xp * c - xq * (e * s);
                    cq[k] = xp * s + xq * (e * c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<f64> = columns
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Determinant by LU factorization with partial pivoting. Singular input
/// yields zero rather than an error.
pub fn determinant(m: &ComplexMatrix) -> Result<Complex64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    match n {
        0 => return Ok(Complex64::new(1.0, 0.0)),
        1 => return Ok(m[(0, 0)]),
        _ => {}
    }
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| a[(i, k)].norm().total_cmp(&a[(j, k)].norm()))
            .unwrap();
        if a[(pivot, k)].norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if pivot != k {
            for c in 0..n {
                let tmp = a[(k, c)];
                a[(k, c)] = a[(pivot, c)];
                a[(pivot, c)] = tmp;
            }
            det = -det;
        }
        let d = a[(k, k)];
        det *= d;
        for r in k + 1..n {
            let factor = a[(r, k)] / d;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for c in k + 1..n {
                let sub = factor * a[(k, c)];
                a[(r, c)] -= sub;
            }
        }
    }
    Ok(det)
}

/// Characteristic polynomial `det(λE - M)` via the Faddeev–LeVerrier trace
/// recursion. Monic of degree `n`.
pub fn char_poly(m: &ComplexMatrix) -> Result<Polynomial> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "char_poly needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    coeffs[n] = Complex64::new(1.0, 0.0);
    let mut aux = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        // aux_k = M · aux_{k-1} + c_{n-k+1} E
        aux = m.matmul(&aux);
        for i in 0..n {
            aux[(i, i)] += coeffs[n - k + 1];
        }
        coeffs[n - k] = -m.trace_of_product(&aux) / k as f64;
    }
    Ok(Polynomial::new(coeffs))
}

/// Householder QR of a square matrix: `M = Q·R` with `Q` unitary and `R`
/// upper triangular (diagonal not normalized).
pub fn qr(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "qr needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut r = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(1) {
        let norm: f64 = (k..n).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm;
        let mut v: Vec<Complex64> = (k..n).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // R <- (E - 2 v v†) R on rows k..n
        for c in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * r[(k + i, c)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                r[(k + i, c)] -= *vi * dot * 2.0;
            }
        }
        // Q <- Q (E - 2 v v†) on columns k..n
        for row in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| q[(row, k + i)] * vi)
                .sum();
            for (i, vi) in v.iter().enumerate() {
                q[(row, k + i)] -= dot * vi.conj() * 2.0;
            }
        }
        for i in k + 1..n {
            r[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok((q, r))
}
