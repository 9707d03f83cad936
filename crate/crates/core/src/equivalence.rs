//! One-sided screening for local unitary non-equivalence.
//!
//! Every invariant is a necessary condition only, so the engine can prove that
//! two states are *not* LU equivalent but never that they are.

use std::fmt;

use num_complex::Complex64;

use crate::error::Result;
use crate::invariants::{
    f_invariants, gram_matrix, hypermatrix, invariant_m, invariant_n, lambda_poly,
    realignment_kyfan_with_cut, InvariantVector, LambdaInvariant, LambdaPoly,
};
use crate::states::{eigen_decomposition_with_cut, DensityMatrix, PureStateDecomposition, RankTol};

/// Tolerances and options shared by fingerprinting and screening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScreenConfig {
    pub rank_tol: RankTol,
    pub atol: f64,
    pub rtol: f64,
    /// Number of leading subsystems on the row side of the bipartition.
    pub cut: usize,
    /// Recorded for reproducibility; fingerprints themselves are deterministic.
    pub seed: u64,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        Self {
            rank_tol: RankTol::default(),
            atol: 1e-8,
            rtol: 1e-8,
            cut: 1,
            seed: 0,
        }
    }
}

impl ScreenConfig {
    /// Failure threshold `atol + rtol · max(|a|, |b|)`.
    pub fn threshold(&self, a: f64, b: f64) -> f64 {
        self.atol + self.rtol * a.max(b)
    }
}

/// All invariants of one state, computed from its eigenvector decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Fingerprint {
    pub dims: Vec<usize>,
    pub cut: usize,
    pub rank: usize,
    pub f: InvariantVector,
    /// Present when the rank is 2, i.e. `Ω₂` has format 2×2×2×2.
    pub n_value: Option<Complex64>,
    pub m_value: Option<Complex64>,
    pub kyfan: f64,
    pub lambda: Vec<LambdaPoly>,
}

/// Fingerprint of `rho` computed from its eigenvector decomposition.
pub fn fingerprint(rho: &DensityMatrix, cfg: &ScreenConfig) -> Result<Fingerprint> {
    let d = eigen_decomposition_with_cut(rho, cfg.cut, cfg.rank_tol)?;
    fingerprint_from_decomposition(rho, &d, cfg)
}

/// Fingerprint of `rho` computed from a caller-chosen decomposition `d` of it.
/// Every entry is decomposition independent, so any `d` gives the same result
/// up to rounding; the rank is the length of `d`.
pub fn fingerprint_from_decomposition(
    rho: &DensityMatrix,
    d: &PureStateDecomposition,
    cfg: &ScreenConfig,
) -> Result<Fingerprint> {
    let f = f_invariants(&gram_matrix(d));
    let mut lambda = vec![lambda_poly(d, 1, LambdaInvariant::Det)?];
    let (n_value, m_value) = if d.len() == 2 {
        let h = hypermatrix(d, 2)?;
        lambda.push(lambda_poly(d, 2, LambdaInvariant::N)?);
        lambda.push(lambda_poly(d, 2, LambdaInvariant::M)?);
        (Some(invariant_n(&h)?), Some(invariant_m(&h)?))
    } else {
        (None, None)
    };
    Ok(Fingerprint {
        dims: rho.dims().to_vec(),
        cut: cfg.cut,
        rank: d.len(),
        f,
        n_value,
        m_value,
        kyfan: realignment_kyfan_with_cut(rho, cfg.cut)?,
        lambda,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckValue {
    Number(Complex64),
    Dims(Vec<usize>),
}

impl fmt::Display for CheckValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckValue::Number(z) if z.im == 0.0 => write!(f, "{:e}", z.re),
            CheckValue::Number(z) => write!(f, "{:e}{:+e}i", z.re, z.im),
            CheckValue::Dims(d) => write!(f, "{d:?}"),
        }
    }
}

/// One invariant compared across the two states.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub a: CheckValue,
    pub b: CheckValue,
    /// `|a − b|`; 1 for mismatched dimension signatures.
    pub delta: f64,
    pub pass: bool,
    /// Within a factor of ten of the failure threshold on either side.
    pub marginal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotEquivalent,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NotEquivalent => "NotEquivalent",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub verdict: Verdict,
    /// First failing check in the fixed check order.
    pub witness: Option<Check>,
    pub checks: Vec<Check>,
}

impl EquivalenceReport {
    fn from_checks(checks: Vec<Check>) -> Self {
        let witness = checks.iter().find(|c| !c.pass).cloned();
        let verdict = if witness.is_some() {
            Verdict::NotEquivalent
        } else {
            Verdict::Inconclusive
        };
        Self {
            verdict,
            witness,
            checks,
        }
    }

    pub fn failing(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn numeric_check(cfg: &ScreenConfig, name: String, a: Complex64, b: Complex64) -> Check {
    numeric_check_with_noise(cfg, name, a, b, 0.0)
}

/// Like [`numeric_check`], with `noise` added to the threshold so that known
/// rounding error cannot produce a spurious separation.
fn numeric_check_with_noise(
    cfg: &ScreenConfig,
    name: String,
    a: Complex64,
    b: Complex64,
    noise: f64,
) -> Check {
    let delta = (a - b).norm();
    let threshold = cfg.threshold(a.norm(), b.norm()) + noise;
    let pass = delta <= threshold;
    let marginal = if pass {
        delta > 0.1 * threshold
    } else {
        delta <= 10.0 * threshold
    };
    Check {
        name,
        a: CheckValue::Number(a),
        b: CheckValue::Number(b),
        delta,
        pass,
        marginal,
    }
}

/// Compares two fingerprints in the fixed order rank, F_i, N, M, Ky Fan,
/// λ-coefficients.
pub fn compare_fingerprints(
    fa: &Fingerprint,
    fb: &Fingerprint,
    cfg: &ScreenConfig,
) -> EquivalenceReport {
    if fa.dims != fb.dims {
        return dims_mismatch(&fa.dims, &fb.dims);
    }
    let real = |x: f64| Complex64::new(x, 0.0);
    let mut checks = Vec::new();
    let rank_delta = fa.rank.abs_diff(fb.rank);
    checks.push(Check {
        name: "rank".into(),
        a: CheckValue::Number(real(fa.rank as f64)),
        b: CheckValue::Number(real(fb.rank as f64)),
        delta: rank_delta as f64,
        pass: rank_delta == 0,
        marginal: false,
    });
    // A lower-rank spectrum is the higher-rank one padded with zeros, whose
    // trailing elementary symmetric functions vanish.
    for i in 1..=fa.rank.max(fb.rank) {
        checks.push(numeric_check(
            cfg,
            format!("F_{i}"),
            fa.f.get(i),
            fb.f.get(i),
        ));
    }
    if let (Some(a), Some(b)) = (fa.n_value, fb.n_value) {
        checks.push(numeric_check(cfg, "invariant_N".into(), a, b));
    }
    if let (Some(a), Some(b)) = (fa.m_value, fb.m_value) {
        checks.push(numeric_check(cfg, "invariant_M".into(), a, b));
    }
    checks.push(numeric_check(
        cfg,
        "kyfan".into(),
        real(fa.kyfan),
        real(fb.kyfan),
    ));
    for pa in &fa.lambda {
        let Some(pb) = fb
            .lambda
            .iter()
            .find(|p| p.invariant == pa.invariant && p.order == pa.order)
        else {
            continue;
        };
        let len = pa.coeffs.len().max(pb.coeffs.len());
        for k in 0..len {
            let ca = pa.coeffs.get(k).copied().unwrap_or_default();
            let cb = pb.coeffs.get(k).copied().unwrap_or_default();
            let noise = pa.error_bound.get(k).copied().unwrap_or(0.0)
                + pb.error_bound.get(k).copied().unwrap_or(0.0);
            checks.push(numeric_check_with_noise(
                cfg,
                format!("lambda_{}[{k}]", pa.invariant.name()),
                ca,
                cb,
                noise,
            ));
        }
    }
    EquivalenceReport::from_checks(checks)
}

/// Screens two states. Fingerprints are computed on two threads.
pub fn screen(
    a: &DensityMatrix,
    b: &DensityMatrix,
    cfg: &ScreenConfig,
) -> Result<EquivalenceReport> {
    if a.dims() != b.dims() {
        return Ok(dims_mismatch(a.dims(), b.dims()));
    }
    let (fa, fb) = std::thread::scope(|scope| {
        let ha = scope.spawn(|| fingerprint(a, cfg));
        let fb = fingerprint(b, cfg);
        (ha.join().expect("fingerprint thread panicked"), fb)
    });
    Ok(compare_fingerprints(&fa?, &fb?, cfg))
}

fn dims_mismatch(a: &[usize], b: &[usize]) -> EquivalenceReport {
    EquivalenceReport::from_checks(vec![Check {
        name: "dimension signature".into(),
        a: CheckValue::Dims(a.to_vec()),
        b: CheckValue::Dims(b.to_vec()),
        delta: 1.0,
        pass: false,
        marginal: false,
    }])
}

/// An invariant ranked by how strongly it separates the two states.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessHint {
    pub name: String,
    pub delta: f64,
    /// `|a − b| / (|a| + |b|)`, in `[0, 1]`.
    pub score: f64,
}

/// Orders the checks of a report by normalized difference, largest first;
/// ties keep the check order.
pub fn witness_hints(report: &EquivalenceReport) -> Vec<WitnessHint> {
    let mut hints: Vec<WitnessHint> = report
        .checks
        .iter()
        .map(|c| {
            let score = match (&c.a, &c.b) {
                (CheckValue::Number(a), CheckValue::Number(b)) => {
                    let scale = a.norm() + b.norm();
                    if scale == 0.0 {
                        0.0
                    } else {
                        c.delta / scale
                    }
                }
                _ => c.delta,
            };
            WitnessHint {
                name: c.name.clone(),
                delta: c.delta,
                score,
            }
        })
        .collect();
    hints.sort_by(|x, y| y.score.total_cmp(&x.score));
    hints
}

pub fn witness_search_hint(
    a: &DensityMatrix,
    b: &DensityMatrix,
    cfg: &ScreenConfig,
) -> Result<Vec<WitnessHint>> {
    Ok(witness_hints(&screen(a, b, cfg)?))
}
