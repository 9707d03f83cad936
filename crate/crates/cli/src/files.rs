//! JSON interchange: state files in, fingerprints and reports out.
//!
//! Complex numbers are `[re, im]` pairs. Output goes through
//! [`serde_json::Value`], whose maps are ordered by key, and a formatter that
//! writes every float with 17 significant digits, so documents are stable and
//! round-trip byte for byte.

use std::io;
use std::path::Path;

use lu_invar_core::equivalence::{
    Check, CheckValue, EquivalenceReport, Fingerprint, ScreenConfig, Verdict,
};
use lu_invar_core::invariants::LambdaPoly;
use lu_invar_core::states::{validate_density, DensityMatrix, RankTol};
use lu_invar_core::ComplexMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::CliError;

pub type ComplexPair = [f64; 2];

fn pair(z: Complex64) -> ComplexPair {
    [z.re, z.im]
}

/// `{ "dims": [n₁, …], "matrix": [[[re, im], …], …] }`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<ComplexPair>>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        Self {
            dims: rho.dims().to_vec(),
            matrix: (0..m.rows())
                .map(|r| m.row(r).iter().copied().map(pair).collect())
                .collect(),
        }
    }

    /// Checks the shape, then validates the matrix as a density matrix.
    pub fn to_density(&self, tol: f64) -> Result<DensityMatrix, CliError> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(CliError::Format(format!(
                "dims must be non-empty and positive, got {:?}",
                self.dims
            )));
        }
        let n: usize = self.dims.iter().product();
        if self.matrix.len() != n || self.matrix.iter().any(|row| row.len() != n) {
            return Err(CliError::Format(format!(
                "matrix must be {n}x{n} for dims {:?}",
                self.dims
            )));
        }
        let mat = ComplexMatrix::from_fn(n, n, |r, c| {
            let [re, im] = self.matrix[r][c];
            Complex64::new(re, im)
        });
        Ok(validate_density(mat, &self.dims, tol)?)
    }
}

pub fn read_state(path: &Path, tol: f64) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Format(format!("{}: {e}", path.display())))?;
    file.to_density(tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaDoc {
    pub invariant: String,
    pub order: usize,
    pub coeffs: Vec<ComplexPair>,
    pub error_bound: Vec<f64>,
    pub negligible: Vec<bool>,
}

impl From<&LambdaPoly> for LambdaDoc {
    fn from(p: &LambdaPoly) -> Self {
        Self {
            invariant: p.invariant.name().to_string(),
            order: p.order,
            coeffs: p.coeffs.iter().copied().map(pair).collect(),
            error_bound: p.error_bound.clone(),
            negligible: p.negligible(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FingerprintDoc {
    pub dims: Vec<usize>,
    pub cut: usize,
    pub rank: usize,
    #[serde(rename = "F")]
    pub f: Vec<ComplexPair>,
    pub invariant_n: Option<ComplexPair>,
    pub invariant_m: Option<ComplexPair>,
    pub kyfan: f64,
    pub lambda: Vec<LambdaDoc>,
}

impl From<&Fingerprint> for FingerprintDoc {
    fn from(fp: &Fingerprint) -> Self {
        Self {
            dims: fp.dims.clone(),
            cut: fp.cut,
            rank: fp.rank,
            f: fp.f.values().iter().copied().map(pair).collect(),
            invariant_n: fp.n_value.map(pair),
            invariant_m: fp.m_value.map(pair),
            kyfan: fp.kyfan,
            lambda: fp.lambda.iter().map(LambdaDoc::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckValueDoc {
    Number(ComplexPair),
    Dims(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDoc {
    pub name: String,
    pub a: CheckValueDoc,
    pub b: CheckValueDoc,
    pub delta: f64,
    pub pass: bool,
    pub marginal: bool,
}

impl From<&Check> for CheckDoc {
    fn from(c: &Check) -> Self {
        let value = |v: &CheckValue| match v {
            CheckValue::Number(z) => CheckValueDoc::Number(pair(*z)),
            CheckValue::Dims(d) => CheckValueDoc::Dims(d.clone()),
        };
        Self {
            name: c.name.clone(),
            a: value(&c.a),
            b: value(&c.b),
            delta: c.delta,
            pass: c.pass,
            marginal: c.marginal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RankTolDoc {
    Absolute(f64),
    Relative(f64),
}

impl From<RankTol> for RankTolDoc {
    fn from(t: RankTol) -> Self {
        match t {
            RankTol::Absolute(x) => RankTolDoc::Absolute(x),
            RankTol::Relative(x) => RankTolDoc::Relative(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesDoc {
    pub atol: f64,
    pub rtol: f64,
    pub rank_tol: RankTolDoc,
    /// Tolerance used to validate the input files.
    pub validation: f64,
}

/// Everything `compare` knows: the verdict, every check, both fingerprints
/// and the settings that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub version: String,
    pub seed: u64,
    pub cut: usize,
    pub tolerances: TolerancesDoc,
    pub verdict: String,
    pub witness: Option<CheckDoc>,
    pub checks: Vec<CheckDoc>,
    pub fingerprint_a: Option<FingerprintDoc>,
    pub fingerprint_b: Option<FingerprintDoc>,
}

impl ReportFile {
    pub fn new(
        report: &EquivalenceReport,
        fingerprints: Option<(&Fingerprint, &Fingerprint)>,
        cfg: &ScreenConfig,
        validation_tol: f64,
    ) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: cfg.seed,
            cut: cfg.cut,
            tolerances: TolerancesDoc {
                atol: cfg.atol,
                rtol: cfg.rtol,
                rank_tol: cfg.rank_tol.into(),
                validation: validation_tol,
            },
            verdict: match report.verdict {
                Verdict::NotEquivalent => "NotEquivalent",
                Verdict::Inconclusive => "Inconclusive",
            }
            .to_string(),
            witness: report.witness.as_ref().map(CheckDoc::from),
            checks: report.checks.iter().map(CheckDoc::from).collect(),
            fingerprint_a: fingerprints.map(|(a, _)| FingerprintDoc::from(a)),
            fingerprint_b: fingerprints.map(|(_, b)| FingerprintDoc::from(b)),
        }
    }
}

/// Writes floats as `d.dddddddddddddddde±x` (17 significant digits), which
/// parses back to the identical `f64`.
struct Precise<F>(F);

impl<F: Formatter> Formatter for Precise<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn end_object_key<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_key(writer)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

fn write_with<F: Formatter, T: Serialize>(value: &T, formatter: F) -> String {
    // Going through Value sorts object keys alphabetically.
    let tree = serde_json::to_value(value).expect("documents contain only serializable data");
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Precise(formatter));
    tree.serialize(&mut ser)
        .expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

/// Pretty-printed, key-sorted, 17-digit JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = write_with(value, PrettyFormatter::new());
    s.push('\n');
    s
}

/// Single-line variant of [`to_json`], without the newline.
pub fn to_json_compact<T: Serialize>(value: &T) -> String {
    write_with(value, CompactFormatter)
}
