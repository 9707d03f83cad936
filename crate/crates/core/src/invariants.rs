//! Invariants built from a pure-state decomposition `{A_i}`.
//!
//! Everything here is a function of the Gram matrix `Ω_ij = tr(A_i A_j†)` or of
//! the trace hypermatrix `Ω_s`, both of which are unchanged by local unitaries
//! and transform by unitary conjugation when the decomposition is re-mixed.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{char_poly, determinant, singular_values, ComplexMatrix, Polynomial};
use crate::states::{DensityMatrix, PureStateDecomposition};

/// Largest hypermatrix that [`hypermatrix`] will fill.
pub const HYPERMATRIX_LIMIT: u128 = 1 << 20;

/// Coefficients below this modulus are flagged as negligible in λ-polynomials.
pub const NEGLIGIBLE_COEFF: f64 = 1e-9;

/// `Ω_ij = tr(A_i A_j†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix(ComplexMatrix);

impl GramMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }
}

pub fn gram_matrix(d: &PureStateDecomposition) -> GramMatrix {
    let n = d.len();
    let mats = d.mats();
    let mut omega = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            // tr(A B†) = Σ a_kl conj(b_kl)
            let v: Complex64 = mats[i]
                .as_slice()
                .iter()
                .zip(mats[j].as_slice())
                .map(|(a, b)| a * b.conj())
                .sum();
            omega[(i, j)] = v;
            omega[(j, i)] = v.conj();
        }
    }
    GramMatrix(omega)
}

/// `F₀ … F_I` with `F₀ = 1`; `F_i` is the i-th elementary symmetric function
/// of the spectrum of `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantVector(Vec<Complex64>);

impl InvariantVector {
    pub fn values(&self) -> &[Complex64] {
        &self.0
    }

    /// `F_i`, or zero past the end (the value a zero-padded spectrum gives).
    pub fn get(&self, i: usize) -> Complex64 {
        self.0.get(i).copied().unwrap_or_default()
    }

    /// Number of ensemble members the vector was computed for.
    pub fn order(&self) -> usize {
        self.0.len() - 1
    }
}

/// `F_i = (-1)^i · [λ^{I-i}] det(λE - Ω)`.
pub fn f_invariants(omega: &GramMatrix) -> InvariantVector {
    let p = char_poly(omega.matrix()).expect("Gram matrices are square");
    let n = omega.size();
    let mut f: Vec<Complex64> = (0..=n)
        .map(|i| {
            let c = p.coeff(n - i);
            if i % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    f[0] = Complex64::new(1.0, 0.0);
    InvariantVector(f)
}

/// Order-`2s` array `(Ω_s)_{i₁…i_s j₁…j_s} = tr(A_{i₁}A_{j₁}† ⋯ A_{i_s}A_{j_s}†)`.
///
/// Stored densely, row-major over the multi-index `(i₁, …, i_s, j₁, …, j_s)`
/// read as a big-endian base-`I` number.
#[derive(Debug, Clone, PartialEq)]
pub struct Hypermatrix {
    order: usize,
    side: usize,
    entries: Vec<Complex64>,
}

impl Hypermatrix {
    pub fn new(order: usize, side: usize, entries: Vec<Complex64>) -> Result<Self> {
        let expected = checked_len(order, side)?;
        if entries.len() != expected {
            return Err(Error::BadLength {
                expected,
                got: entries.len(),
            });
        }
        Ok(Self {
            order,
            side,
            entries,
        })
    }

    /// `E = δ_{i₁j₁} ⋯ δ_{i_s j_s}`.
    pub fn identity(order: usize, side: usize) -> Result<Self> {
        let len = checked_len(order, side)?;
        let mut h = Self {
            order,
            side,
            entries: vec![Complex64::new(0.0, 0.0); len],
        };
        let mut idx = vec![0usize; order];
        loop {
            let at = h.flat_index(&idx, &idx);
            h.entries[at] = Complex64::new(1.0, 0.0);
            if !advance(&mut idx, side) {
                break;
            }
        }
        Ok(h)
    }

    /// The parameter `s`; the array has `2s` indices.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The ensemble size `I`, i.e. the range of each index.
    pub fn side(&self) -> usize {
        self.side
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn flat_index(&self, is: &[usize], js: &[usize]) -> usize {
        assert_eq!(is.len(), self.order);
        assert_eq!(js.len(), self.order);
        is.iter().chain(js).fold(0, |acc, &k| {
            debug_assert!(k < self.side);
            acc * self.side + k
        })
    }

    pub fn entry(&self, is: &[usize], js: &[usize]) -> Complex64 {
        self.entries[self.flat_index(is, js)]
    }

    /// `Ω_s − λE`.
    pub fn sub_scaled_identity(&self, lambda: Complex64) -> Self {
        let mut out = self.clone();
        let mut idx = vec![0usize; self.order];
        loop {
            let at = self.flat_index(&idx, &idx);
            out.entries[at] -= lambda;
            if !advance(&mut idx, self.side) {
                break;
            }
        }
        out
    }

    /// For `s = 1` the hypermatrix is an ordinary `I × I` matrix.
    pub fn as_matrix(&self) -> Option<ComplexMatrix> {
        (self.order == 1).then(|| {
            ComplexMatrix::from_vec(self.side, self.side, self.entries.clone())
                .expect("I^2 entries")
        })
    }

    /// Largest violation of
    /// `conj Ω(i₁…i_s; j₁…j_s) = Ω(j_s…j₁; i_s…i₁)`.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        self.max_over_indices(|is, js| {
            let ri: Vec<usize> = js.iter().rev().copied().collect();
            let rj: Vec<usize> = is.iter().rev().copied().collect();
            (self.entry(is, js).conj() - self.entry(&ri, &rj)).norm()
        })
    }

    /// Largest change under a simultaneous cyclic shift of the `(i_k, j_k)` pairs.
    pub fn cyclic_symmetry_residual(&self) -> f64 {
        self.max_over_indices(|is, js| {
            let mut si = is.to_vec();
            let mut sj = js.to_vec();
            si.rotate_left(1);
            sj.rotate_left(1);
            (self.entry(is, js) - self.entry(&si, &sj)).norm()
        })
    }

    fn max_over_indices(&self, mut f: impl FnMut(&[usize], &[usize]) -> f64) -> f64 {
        let mut idx = vec![0usize; 2 * self.order];
        let mut worst = 0.0f64;
        loop {
            let (is, js) = idx.split_at(self.order);
            worst = worst.max(f(is, js));
            if !advance(&mut idx, self.side) {
                break;
            }
        }
        worst
    }
}

fn checked_len(order: usize, side: usize) -> Result<usize> {
    if order == 0 || side == 0 {
        return Err(Error::BadShape(format!(
            "hypermatrix needs s >= 1 and I >= 1, got s={order}, I={side}"
        )));
    }
    let entries = (side as u128)
        .checked_pow(2 * order as u32)
        .unwrap_or(u128::MAX);
    if entries > HYPERMATRIX_LIMIT {
        return Err(Error::TooLarge {
            entries,
            limit: HYPERMATRIX_LIMIT,
        });
    }
    Ok(entries as usize)
}

/// Odometer increment of a big-endian multi-index; false after wrapping.
fn advance(idx: &mut [usize], base: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < base {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// Fills `Ω_s` for the decomposition.
pub fn hypermatrix(d: &PureStateDecomposition, s: usize) -> Result<Hypermatrix> {
    let side = d.len();
    let len = checked_len(s, side)?;
    let mats = d.mats();
    // X_ij = A_i A_j†
    let products: Vec<ComplexMatrix> = (0..side * side)
        .map(|ij| mats[ij / side].matmul(&mats[ij % side].adjoint()))
        .collect();
    let mut h = Hypermatrix {
        order: s,
        side,
        entries: vec![Complex64::new(0.0, 0.0); len],
    };

    // Depth-first over the pairs (i_t, j_t), sharing prefix products.
    let mut is = vec![0usize; s];
    let mut js = vec![0usize; s];
    fill(&products, side, 0, None, &mut is, &mut js, &mut h);
    Ok(h)
}

fn fill(
    products: &[ComplexMatrix],
    side: usize,
    depth: usize,
    prefix: Option<&ComplexMatrix>,
    is: &mut Vec<usize>,
    js: &mut Vec<usize>,
    h: &mut Hypermatrix,
) {
    let last = depth + 1 == is.len();
    for i in 0..side {
        for j in 0..side {
            is[depth] = i;
            js[depth] = j;
            let x = &products[i * side + j];
            if last {
                let v = match prefix {
                    Some(p) => p.trace_of_product(x),
                    None => x.trace(),
                };
                let at = h.flat_index(is, js);
                h.entries[at] = v;
            } else {
                let next = match prefix {
                    Some(p) => p.matmul(x),
                    None => x.clone(),
                };
                fill(products, side, depth + 1, Some(&next), is, js, h);
            }
        }
    }
}

/// Cayley's hyperdeterminant of a 2×2×2 array `a_{ijk}` stored at `4i + 2j + k`,
/// evaluated from its explicit twelve-term expansion.
pub fn cayley_det_222(a: &[Complex64]) -> Result<Complex64> {
    check_222(a)?;
    let t = |i: usize, j: usize, k: usize| a[4 * i + 2 * j + k];
    let (a000, a001, a010, a011) = (t(0, 0, 0), t(0, 0, 1), t(0, 1, 0), t(0, 1, 1));
    let (a100, a101, a110, a111) = (t(1, 0, 0), t(1, 0, 1), t(1, 1, 0), t(1, 1, 1));
    let sq = |x: Complex64| x * x;
    Ok(
        sq(a000) * sq(a111) + sq(a001) * sq(a110) + sq(a010) * sq(a101) + sq(a100) * sq(a011)
            - 2.0 * a000 * a001 * a110 * a111
            - 2.0 * a000 * a010 * a101 * a111
            - 2.0 * a000 * a011 * a100 * a111
            - 2.0 * a001 * a010 * a101 * a110
            - 2.0 * a001 * a011 * a110 * a100
            - 2.0 * a010 * a011 * a101 * a100
            + 4.0 * a000 * a011 * a101 * a110
            + 4.0 * a001 * a010 * a100 * a111,
    )
}

fn check_222(a: &[Complex64]) -> Result<()> {
    if a.len() != 8 {
        return Err(Error::BadShape(format!(
            "a 2x2x2 array has 8 entries, got {}",
            a.len()
        )));
    }
    Ok(())
}

const LEVI_CIVITA: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

/// `b_kn = ½ ε^{il} ε^{jm} a_{ijk} a_{lmn}`.
// The index loops spell out the contraction term by term.
#[allow(clippy::needless_range_loop)]
pub fn cayley_b_matrix(a: &[Complex64]) -> Result<[[Complex64; 2]; 2]> {
    check_222(a)?;
    let t = |i: usize, j: usize, k: usize| a[4 * i + 2 * j + k];
    let mut b = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (k, row) in b.iter_mut().enumerate() {
        for (n, entry) in row.iter_mut().enumerate() {
            for i in 0..2 {
                for l in 0..2 {
                    for j in 0..2 {
                        for m in 0..2 {
                            let e = LEVI_CIVITA[i][l] * LEVI_CIVITA[j][m];
                            if e != 0.0 {
                                *entry += 0.5 * e * t(i, j, k) * t(l, m, n);
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(b)
}

/// Cayley's hyperdeterminant through the Levi-Civita contraction of
/// [`cayley_b_matrix`].
///
/// `ε^{il} ε^{jm} b_ij b_lm = 2 det b` and `det b = -¼ Det`, so the contraction
/// carries a prefactor of `-2` to agree with [`cayley_det_222`].
pub fn cayley_det_222_compact(a: &[Complex64]) -> Result<Complex64> {
    let b = cayley_b_matrix(a)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..2 {
        for l in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    let e = LEVI_CIVITA[i][l] * LEVI_CIVITA[j][m];
                    if e != 0.0 {
                        acc += e * b[i][j] * b[l][m];
                    }
                }
            }
        }
    }
    Ok(-2.0 * acc)
}

/// Contracts a 2×2 matrix into one slot: `a'_{…p…} = Σ_q B_pq a_{…q…}`.
pub fn transform_slot_222(
    a: &[Complex64],
    slot: usize,
    b: &ComplexMatrix,
) -> Result<Vec<Complex64>> {
    check_222(a)?;
    if slot > 2 || b.shape() != (2, 2) {
        return Err(Error::BadShape(format!(
            "slot {slot} with a {}x{} matrix",
            b.rows(),
            b.cols()
        )));
    }
    let stride = 4 >> slot;
    Ok((0..8)
        .map(|flat| {
            let p = (flat / stride) % 2;
            let base = flat - p * stride;
            b[(p, 0)] * a[base] + b[(p, 1)] * a[base + stride]
        })
        .collect())
}

/// The sixteen numbers `a_r = tr(A_i A_j† A_k A_l†)`, `r = 8i + 4j + 2k + l`,
/// read off an `s = 2`, `I = 2` hypermatrix.
pub fn quartic_entries(h: &Hypermatrix) -> Result<[Complex64; 16]> {
    if h.order() != 2 || h.side() != 2 {
        return Err(Error::UnsupportedFormat(format!(
            "N and M are defined for s = 2, I = 2; got s = {}, I = {}",
            h.order(),
            h.side()
        )));
    }
    let mut a = [Complex64::new(0.0, 0.0); 16];
    for (r, slot) in a.iter_mut().enumerate() {
        let (i, j, k, l) = (r >> 3 & 1, r >> 2 & 1, r >> 1 & 1, r & 1);
        *slot = h.entry(&[i, k], &[j, l]);
    }
    Ok(a)
}

const N_LAYOUT: [[usize; 4]; 4] = [[0, 1, 8, 9], [2, 3, 10, 11], [4, 5, 12, 13], [6, 7, 14, 15]];
const M_LAYOUT: [[usize; 4]; 4] = [[0, 8, 2, 10], [1, 9, 3, 11], [4, 12, 6, 14], [5, 13, 7, 15]];

fn layout_det(a: &[Complex64; 16], layout: &[[usize; 4]; 4]) -> Complex64 {
    let m = ComplexMatrix::from_fn(4, 4, |r, c| a[layout[r][c]]);
    determinant(&m).expect("4x4")
}

/// Degree-4 invariant `N`: determinant of
/// `[a0 a1 a8 a9; a2 a3 a10 a11; a4 a5 a12 a13; a6 a7 a14 a15]`.
pub fn invariant_n(h: &Hypermatrix) -> Result<Complex64> {
    Ok(layout_det(&quartic_entries(h)?, &N_LAYOUT))
}

/// Degree-4 invariant `M`: determinant of
/// `[a0 a8 a2 a10; a1 a9 a3 a11; a4 a12 a6 a14; a5 a13 a7 a15]`.
pub fn invariant_m(h: &Hypermatrix) -> Result<Complex64> {
    Ok(layout_det(&quartic_entries(h)?, &M_LAYOUT))
}

/// Which polynomial invariant to track as a function of λ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LambdaInvariant {
    /// Ordinary determinant, `s = 1`.
    Det,
    N,
    M,
}

impl LambdaInvariant {
    pub fn name(self) -> &'static str {
        match self {
            LambdaInvariant::Det => "det",
            LambdaInvariant::N => "invariant_N",
            LambdaInvariant::M => "invariant_M",
        }
    }
}

/// Coefficients (ascending in λ) of an invariant evaluated on `λE − Ω_s`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaPoly {
    pub invariant: LambdaInvariant,
    pub order: usize,
    /// Raw interpolated coefficients, `degree + 1` of them.
    pub coeffs: Vec<Complex64>,
    /// Per-coefficient bound on the floating-point error of the
    /// interpolation. The Vandermonde system on integer nodes is badly
    /// conditioned for large `d`, so this grows quickly with the rank.
    pub error_bound: Vec<f64>,
}

impl LambdaPoly {
    /// Which coefficients fall below [`NEGLIGIBLE_COEFF`].
    pub fn negligible(&self) -> Vec<bool> {
        self.coeffs
            .iter()
            .map(|c| c.norm() < NEGLIGIBLE_COEFF)
            .collect()
    }

    /// Coefficients with negligible ones set to zero.
    pub fn cleaned(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .map(|&c| {
                    if c.norm() < NEGLIGIBLE_COEFF {
                        Complex64::new(0.0, 0.0)
                    } else {
                        c
                    }
                })
                .collect(),
        )
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.clone())
    }
}

/// λ-polynomial of an invariant, recovered by evaluating `inv(Ω_s − λE)` at
/// the integer nodes `0, 1, …, d` and interpolating.
///
/// The result is multiplied by `(−1)^d`, i.e. it is `inv(λE − Ω_s)`. For the
/// ordinary determinant this is the monic characteristic polynomial; for the
/// quartic forms `N` and `M` the factor is `+1`.
pub fn lambda_poly(
    d: &PureStateDecomposition,
    s: usize,
    inv: LambdaInvariant,
) -> Result<LambdaPoly> {
    let h = match inv {
        LambdaInvariant::Det if s == 1 => hypermatrix(d, 1)?,
        LambdaInvariant::N | LambdaInvariant::M if s == 2 && d.len() == 2 => hypermatrix(d, 2)?,
        _ => {
            return Err(Error::UnsupportedFormat(format!(
                "{} is not implemented for s = {s}, I = {}",
                inv.name(),
                d.len()
            )))
        }
    };
    let degree = match inv {
        LambdaInvariant::Det => d.len(),
        _ => 4,
    };
    let evaluate = |hl: &Hypermatrix| -> Result<Complex64> {
        match inv {
            LambdaInvariant::Det => determinant(&hl.as_matrix().expect("s = 1")),
            LambdaInvariant::N => invariant_n(hl),
            LambdaInvariant::M => invariant_m(hl),
        }
    };
    let nodes: Vec<Complex64> = (0..=degree)
        .map(|k| Complex64::new(k as f64, 0.0))
        .collect();
    let values = nodes
        .iter()
        .map(|&x| evaluate(&h.sub_scaled_identity(x)))
        .collect::<Result<Vec<_>>>()?;
    let p = Polynomial::interpolate(&nodes, &values)?;
    let sign = if degree % 2 == 0 { 1.0 } else { -1.0 };
    let coeffs = (0..=degree).map(|k| p.coeff(k) * sign).collect();
    let error_bound = interpolation_error_bound(&nodes, &values)?;
    Ok(LambdaPoly {
        invariant: inv,
        order: s,
        coeffs,
        error_bound,
    })
}

/// Propagates a relative evaluation error of a few ulps per node through the
/// Lagrange basis: `bound_j = c·ε·Σ_k |v_k|·|L_k[j]|`.
fn interpolation_error_bound(nodes: &[Complex64], values: &[Complex64]) -> Result<Vec<f64>> {
    let n = nodes.len();
    let safety = 16.0 * n as f64 * f64::EPSILON;
    let mut bound = vec![0.0; n];
    for (k, v) in values.iter().enumerate() {
        let mut unit = vec![Complex64::new(0.0, 0.0); n];
        unit[k] = Complex64::new(1.0, 0.0);
        let basis = Polynomial::interpolate(nodes, &unit)?;
        for (j, b) in bound.iter_mut().enumerate() {
            *b += safety * v.norm().max(1.0) * basis.coeff(j).norm();
        }
    }
    Ok(bound)
}

/// Realigned matrix `R_{(i,j),(k,l)} = ρ_{(i,k),(j,l)}` for the bipartition
/// after subsystem `cut`; shape `N₁² × N₂²`.
pub fn realignment(rho: &DensityMatrix, cut: usize) -> Result<ComplexMatrix> {
    let (n, m) = rho.bipartition(cut)?;
    let r = rho.matrix();
    Ok(ComplexMatrix::from_fn(n * n, m * m, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / m, col % m);
        r[(i * m + k, j * m + l)]
    }))
}

/// Sum of all singular values of the realigned matrix of a bipartite state.
pub fn realignment_kyfan(rho: &DensityMatrix) -> Result<f64> {
    if rho.dims().len() != 2 {
        return Err(Error::NotBipartite {
            parties: rho.dims().len(),
        });
    }
    realignment_kyfan_with_cut(rho, 1)
}

/// Ky Fan (trace) norm of the realignment across an arbitrary cut.
pub fn realignment_kyfan_with_cut(rho: &DensityMatrix, cut: usize) -> Result<f64> {
    Ok(singular_values(&realignment(rho, cut)?)?.iter().sum())
}
