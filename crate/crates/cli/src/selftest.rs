//! The embedded property suites behind `lu-invar selftest`.
//!
//! Known-answer checks on the reference states run first, then randomized
//! invariance properties with a fixed number of trials each.

use std::fmt;

use lu_invar_core::equivalence::{
    compare_fingerprints, fingerprint_from_decomposition, screen, ScreenConfig, Verdict,
};
use lu_invar_core::invariants::{
    cayley_det_222, cayley_det_222_compact, f_invariants, gram_matrix, hypermatrix, invariant_m,
    invariant_n, lambda_poly, realignment_kyfan, transform_slot_222, LambdaInvariant,
};
use lu_invar_core::linalg::{
    complex_gaussian, determinant, haar_unitary_from, seeded_rng, SeededRng,
};
use lu_invar_core::reference_states::{rho1, rho2, sigma1, sigma2};
use lu_invar_core::states::{
    apply_local_unitary, eigen_decomposition, mix_decomposition, pad_with_zeros, random_density,
    DensityMatrix, PureStateDecomposition, RankTol,
};
use lu_invar_core::{ComplexMatrix, Result};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Quick,
    Full,
}

impl Mode {
    pub fn trials(self) -> usize {
        match self {
            Mode::Quick => 10,
            Mode::Full => 100,
        }
    }
}

/// Expected values of the known-answer checks. Kept as data so the suite can
/// be exercised against deliberately wrong constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpectedConstants {
    pub n_rho1: f64,
    pub n_rho2: f64,
    pub kyfan_rho: f64,
    pub n_sigma1: f64,
    pub m_sigma1: f64,
    pub n_sigma2: f64,
    pub m_sigma2: f64,
}

impl Default for ExpectedConstants {
    fn default() -> Self {
        Self {
            n_rho1: 1.0 / 256.0,
            n_rho2: 0.0,
            kyfan_rho: std::f64::consts::FRAC_1_SQRT_2,
            n_sigma1: 1.0 / 6561.0,
            m_sigma1: 0.0,
            n_sigma2: 0.0,
            m_sigma2: 0.0,
        }
    }
}

/// Absolute tolerance of the known-answer checks.
const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for PropertyResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{} {status}", self.name)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub results: Vec<PropertyResult>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.pass)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            writeln!(f, "{r}")?;
        }
        let passed = self.results.iter().filter(|r| r.pass).count();
        write!(
            f,
            "selftest: {passed}/{} properties passed",
            self.results.len()
        )
    }
}

fn close(got: Complex64, want: f64) -> bool {
    (got - Complex64::new(want, 0.0)).norm() <= EXACT_TOL
}

fn value_result(name: &str, got: Complex64, want: f64) -> PropertyResult {
    PropertyResult {
        name: name.to_string(),
        pass: close(got, want),
        detail: format!("got {:e}, expected {want:e}", got.re),
    }
}

/// Runs `trial` `n` times; the first failing trial's message becomes the
/// detail. Library errors count as failures.
fn randomized(
    name: &str,
    n: usize,
    mut trial: impl FnMut(usize) -> Result<Option<String>>,
) -> PropertyResult {
    for k in 0..n {
        match trial(k) {
            Ok(None) => {}
            Ok(Some(msg)) => {
                return PropertyResult {
                    name: name.to_string(),
                    pass: false,
                    detail: format!("trial {k}: {msg}"),
                }
            }
            Err(e) => {
                return PropertyResult {
                    name: name.to_string(),
                    pass: false,
                    detail: format!("trial {k}: {e}"),
                }
            }
        }
    }
    PropertyResult {
        name: name.to_string(),
        pass: true,
        detail: format!("{n} trials"),
    }
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let len = a.len().max(b.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..len)
        .map(|i| (a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).norm())
        .fold(0.0, f64::max)
}

fn exceeds(what: &str, deviation: f64, tol: f64) -> Option<String> {
    (deviation >= tol).then(|| format!("{what} deviates by {deviation:e} (tolerance {tol:e})"))
}

const SHAPES: [[usize; 2]; 2] = [[2, 2], [2, 3]];

fn random_state(rng: &mut SeededRng, k: usize) -> Result<DensityMatrix> {
    random_density(&SHAPES[k % 2], 1 + k % 4, rng)
}

fn local_unitaries(rng: &mut SeededRng, rho: &DensityMatrix) -> (ComplexMatrix, ComplexMatrix) {
    (
        haar_unitary_from(rho.dims()[0], rng),
        haar_unitary_from(rho.dims()[1], rng),
    )
}

fn quartic_values(d: &PureStateDecomposition) -> Result<Vec<Complex64>> {
    let h = hypermatrix(d, 2)?;
    let mut v = vec![invariant_n(&h)?, invariant_m(&h)?];
    v.extend(lambda_poly(d, 1, LambdaInvariant::Det)?.coeffs);
    v.extend(lambda_poly(d, 2, LambdaInvariant::N)?.coeffs);
    v.extend(lambda_poly(d, 2, LambdaInvariant::M)?.coeffs);
    Ok(v)
}

fn known_answers(expected: &ExpectedConstants) -> Result<Vec<PropertyResult>> {
    let cfg = ScreenConfig::default();
    let quartic = |rho: &DensityMatrix| -> Result<(Complex64, Complex64)> {
        let h = hypermatrix(&eigen_decomposition(rho, RankTol::default())?, 2)?;
        Ok((invariant_n(&h)?, invariant_m(&h)?))
    };
    let (n_r1, _) = quartic(&rho1())?;
    let (n_r2, _) = quartic(&rho2())?;
    let (n_s1, m_s1) = quartic(&sigma1())?;
    let (n_s2, m_s2) = quartic(&sigma2())?;
    let k1 = realignment_kyfan(&rho1())?;
    let k2 = realignment_kyfan(&rho2())?;

    let rho_report = screen(&rho1(), &rho2(), &cfg)?;
    let rho_witness = rho_report.witness.as_ref().map(|w| w.name.as_str());
    let sigma_report = screen(&sigma1(), &sigma2(), &cfg)?;

    Ok(vec![
        value_result("Example1: N(ρ₁)=1/256", n_r1, expected.n_rho1),
        value_result("Example1: N(ρ₂)=0", n_r2, expected.n_rho2),
        PropertyResult {
            name: "Example1: Ky Fan(ρ₁)=Ky Fan(ρ₂)=1/√2".into(),
            pass: (k1 - expected.kyfan_rho).abs() < 1e-10
                && (k2 - expected.kyfan_rho).abs() < 1e-10,
            detail: format!("got {k1:e} and {k2:e}"),
        },
        PropertyResult {
            name: "Example1: ρ₁, ρ₂ separated by invariant_N".into(),
            pass: rho_report.verdict == Verdict::NotEquivalent
                && rho_witness == Some("invariant_N"),
            detail: format!(
                "verdict {}, witness {}",
                rho_report.verdict,
                rho_witness.unwrap_or("none")
            ),
        },
        value_result("Example2: N(σ₁)=1/6561", n_s1, expected.n_sigma1),
        value_result("Example2: M(σ₁)=0", m_s1, expected.m_sigma1),
        value_result("Example2: N(σ₂)=0", n_s2, expected.n_sigma2),
        value_result("Example2: M(σ₂)=0", m_s2, expected.m_sigma2),
        PropertyResult {
            name: "Example2: σ₁, σ₂ separated".into(),
            pass: sigma_report.verdict == Verdict::NotEquivalent,
            detail: format!(
                "verdict {}, witness {}",
                sigma_report.verdict,
                sigma_report
                    .witness
                    .as_ref()
                    .map_or("none", |w| w.name.as_str())
            ),
        },
    ])
}

fn decomposition_independence(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    randomized("Invariance: F_i decomposition independent", n, |k| {
        let rho = random_state(&mut rng, k)?;
        let d = eigen_decomposition(&rho, RankTol::default())?;
        let f0 = f_invariants(&gram_matrix(&d));
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let b = mix_decomposition(&d, &haar_unitary_from(d.len(), &mut rng))?;
            worst = worst.max(max_diff(
                f_invariants(&gram_matrix(&b)).values(),
                f0.values(),
            ));
        }
        Ok(exceeds("F_i", worst, 1e-9))
    })
}

fn lu_invariance(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    randomized("Invariance: Ω and F_i under local unitaries", n, |k| {
        let rho = random_state(&mut rng, k)?;
        let d = eigen_decomposition(&rho, RankTol::default())?;
        let (p, q) = local_unitaries(&mut rng, &rho);
        let moved = apply_local_unitary(&d, &p, &q)?;
        let (g0, g1) = (gram_matrix(&d), gram_matrix(&moved));
        if let Some(msg) = exceeds("Ω", g0.matrix().max_abs_diff(g1.matrix()), 1e-10) {
            return Ok(Some(msg));
        }
        let f = max_diff(f_invariants(&g0).values(), f_invariants(&g1).values());
        Ok(exceeds("F_i", f, 1e-9))
    })
}

fn quartic_independence(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    randomized("Invariance: N, M, λ-coefficients", n, |_| {
        let rho = random_density(&[2, 2], 2, &mut rng)?;
        let d = eigen_decomposition(&rho, RankTol::default())?;
        let base = quartic_values(&d)?;
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let mixed = mix_decomposition(&d, &haar_unitary_from(2, &mut rng))?;
            worst = worst.max(max_diff(&quartic_values(&mixed)?, &base));
            let (p, q) = local_unitaries(&mut rng, &rho);
            let moved = apply_local_unitary(&d, &p, &q)?;
            worst = worst.max(max_diff(&quartic_values(&moved)?, &base));
        }
        Ok(exceeds("quartic invariants", worst, 1e-8))
    })
}

fn degeneracy(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    let cfg = ScreenConfig {
        atol: 1e-9,
        rtol: 0.0,
        ..ScreenConfig::default()
    };
    randomized("Degeneracy: ρ₁ eigenbasis choice", n, |_| {
        let rho = rho1();
        let (a, b) = (
            degenerate_basis(&rho, &mut rng)?,
            degenerate_basis(&rho, &mut rng)?,
        );
        let fa = fingerprint_from_decomposition(&rho, &a, &cfg)?;
        let fb = fingerprint_from_decomposition(&rho, &b, &cfg)?;
        let report = compare_fingerprints(&fa, &fb, &cfg);
        Ok(report
            .witness
            .map(|w| format!("{} differs by {:e}", w.name, w.delta)))
    })
}

/// A decomposition of `rho` (whose nonzero eigenvalues are all equal) built
/// from a random orthonormal basis of its support.
pub fn degenerate_basis(
    rho: &DensityMatrix,
    rng: &mut SeededRng,
) -> Result<PureStateDecomposition> {
    let eig = rho.eigen()?;
    let rank = eig.values.iter().filter(|&&v| v > 1e-12).count();
    let w = haar_unitary_from(rank, rng);
    let size = rho.size();
    let vectors: Vec<Vec<Complex64>> = (0..rank)
        .map(|i| {
            (0..size)
                .map(|r| (0..rank).map(|j| w[(j, i)] * eig.vectors[(r, j)]).sum())
                .collect()
        })
        .collect();
    let probs = vec![1.0 / rank as f64; rank];
    let (rows, cols) = rho.bipartition(1)?;
    PureStateDecomposition::from_ensemble(rows, cols, &probs, &vectors)
}

fn soundness(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    let cfg = ScreenConfig::default();
    randomized("Soundness: LU pairs never separated", n, |k| {
        let rho = random_state(&mut rng, k)?;
        let (p, q) = local_unitaries(&mut rng, &rho);
        let moved = lu_invar_core::states::apply_local_unitary_density(&rho, &[p, q])?;
        let report = screen(&rho, &moved, &cfg)?;
        Ok(report
            .witness
            .map(|w| format!("separated by {} (delta {:e})", w.name, w.delta)))
    })
}

fn padding_law(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    randomized("Padding law: λ^(J−r) factor", n, |k| {
        let rho = random_state(&mut rng, k)?;
        let d = eigen_decomposition(&rho, RankTol::default())?;
        let base = lambda_poly(&d, 1, LambdaInvariant::Det)?.polynomial();
        for extra in 1..=2 {
            let padded = lambda_poly(
                &pad_with_zeros(&d, d.len() + extra)?,
                1,
                LambdaInvariant::Det,
            )?;
            let dev = padded.polynomial().max_coeff_diff(&base.shift_up(extra));
            if let Some(msg) = exceeds(&format!("J = r+{extra}"), dev, 1e-9) {
                return Ok(Some(msg));
            }
        }
        Ok(None)
    })
}

fn sl_covariance(n: usize, seed: u64) -> PropertyResult {
    let mut rng = seeded_rng(seed);
    randomized("Cayley: SL covariance and compact form", n, |_| {
        let a: Vec<Complex64> = (0..8).map(|_| complex_gaussian(&mut rng)).collect();
        let det_a = cayley_det_222(&a)?;
        let compact = cayley_det_222_compact(&a)?;
        if let Some(msg) = exceeds(
            "compact form",
            (det_a - compact).norm() / det_a.norm(),
            1e-12,
        ) {
            return Ok(Some(msg));
        }
        for slot in 0..3 {
            let b = ComplexMatrix::from_fn(2, 2, |_, _| complex_gaussian(&mut rng));
            let scale = determinant(&b)?.powu(2);
            let got = cayley_det_222(&transform_slot_222(&a, slot, &b)?)?;
            let want = det_a * scale;
            if let Some(msg) = exceeds(
                &format!("slot {slot}"),
                (got - want).norm() / want.norm(),
                1e-8,
            ) {
                return Ok(Some(msg));
            }
        }
        Ok(None)
    })
}

/// Runs every suite for `mode`. Randomized suites derive their streams from
/// `seed`, so a run is reproducible.
pub fn run(mode: Mode, seed: u64, expected: &ExpectedConstants) -> Summary {
    let n = mode.trials();
    let mut results = known_answers(expected).unwrap_or_else(|e| {
        vec![PropertyResult {
            name: "Examples".into(),
            pass: false,
            detail: e.to_string(),
        }]
    });
    let stream = |k: u64| seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k);
    results.push(decomposition_independence(n, stream(1)));
    results.push(lu_invariance(n, stream(2)));
    results.push(quartic_independence(n, stream(3)));
    results.push(degeneracy(n, stream(4)));
    results.push(soundness(n, stream(5)));
    if mode == Mode::Full {
        results.push(padding_law(n, stream(6)));
        results.push(sl_covariance(n, stream(7)));
    }
    Summary { results }
}
