//! Brute-force reference computations, independent of the library's
//! factorization and recursion code paths.
#![allow(dead_code)]

use lu_invar_core::linalg::{complex_gaussian, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;

/// Leibniz expansion over all permutations.
pub fn leibniz_det(m: &ComplexMatrix) -> Complex64 {
    let n = m.rows();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    permute(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        let prod: Complex64 = (0..n).map(|i| m[(i, p[i])]).product();
        total += prod * sign;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

/// `e_k` by summing products over every k-subset.
pub fn elementary_symmetric(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| {
            (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| values[i])
                .product::<f64>()
        })
        .sum()
}

/// `tr(A_{i₁}A_{j₁}† ⋯ A_{i_s}A_{j_s}†)` by explicit chained products.
pub fn trace_chain(mats: &[ComplexMatrix], is: &[usize], js: &[usize]) -> Complex64 {
    let n = mats[0].rows();
    let mut acc = ComplexMatrix::identity(n);
    for (&i, &j) in is.iter().zip(js) {
        acc = acc.matmul(&mats[i]).matmul(&mats[j].adjoint());
    }
    acc.trace()
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng));
    ComplexMatrix::from_fn(n, n, |r, c| (g[(r, c)] + g[(c, r)].conj()) * 0.5)
}

pub fn random_complex_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn single_entry(rows: usize, cols: usize, r: usize, c: usize, v: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    m[(r, c)] = Complex64::new(v, 0.0);
    m
}
