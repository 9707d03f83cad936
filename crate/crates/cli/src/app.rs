//! Argument parsing and the five subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lu_invar_core::equivalence::{
    fingerprint, screen, witness_hints, Fingerprint, ScreenConfig, Verdict,
};
use lu_invar_core::invariants::{f_invariants, gram_matrix, hypermatrix, invariant_m, invariant_n};
use lu_invar_core::linalg::{haar_unitary_from, seeded_rng, STRUCTURE_TOL};
use lu_invar_core::states::{
    apply_bipartite_unitary_density, eigen_decomposition_with_cut, mix_decomposition,
    DensityMatrix, PureStateDecomposition, RankTol,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::files::{read_state, to_json, FingerprintDoc, ReportFile, StateFile};
use crate::selftest::{self, ExpectedConstants, Mode};
use crate::{exit, render, CliError};

#[derive(Debug, Parser)]
#[command(
    name = "lu-invar",
    version,
    about = "Screen mixed quantum states for local unitary non-equivalence"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the invariant fingerprint of a state.
    Compute {
        state: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two states; exits 1 if they are provably not LU equivalent.
    Compare {
        state_a: PathBuf,
        state_b: PathBuf,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tolerances: Tolerances,
    },
    /// Evaluate the invariants on random unitary mixings of the eigenvector
    /// decomposition; exits 1 if any column disagrees.
    Mix {
        state: PathBuf,
        /// Number of random mixings.
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        tolerances: Tolerances,
    },
    /// Apply a random local unitary u ⊗ w across the cut and write the result.
    RandomLu {
        state: PathBuf,
        /// Output state file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run the embedded property suites.
    Selftest {
        /// 10 random trials per property (default).
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        /// 100 random trials per property, plus the padding-law and
        /// SL-covariance suites.
        #[arg(long)]
        full: bool,
        /// Seed for the randomized suites.
        #[arg(long, env = "LU_INVAR_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random choice.
    #[arg(long, env = "LU_INVAR_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative rank tolerance: eigenvalues below tol·λ_max are dropped.
    #[arg(long, conflicts_with = "abs_rank_tol")]
    pub rank_tol: Option<f64>,
    /// Absolute rank tolerance.
    #[arg(long)]
    pub abs_rank_tol: Option<f64>,
    /// Tolerance for validating input states.
    #[arg(long, default_value_t = STRUCTURE_TOL)]
    pub validation_tol: f64,
    /// Number of leading subsystems on the row side of the bipartition
    /// (default 1).
    #[arg(long)]
    pub cut: Option<usize>,
    /// Machine-readable JSON output.
    #[arg(long, conflicts_with = "text")]
    pub json: bool,
    /// Human-readable output (default).
    #[arg(long)]
    pub text: bool,
}

impl Common {
    fn rank_tol(&self) -> RankTol {
        match (self.abs_rank_tol, self.rank_tol) {
            (Some(a), _) => RankTol::Absolute(a),
            (None, Some(r)) => RankTol::Relative(r),
            (None, None) => RankTol::default(),
        }
    }

    fn config(&self, tolerances: Option<&Tolerances>) -> ScreenConfig {
        let defaults = ScreenConfig::default();
        ScreenConfig {
            rank_tol: self.rank_tol(),
            atol: tolerances.map_or(defaults.atol, |t| t.atol),
            rtol: tolerances.map_or(defaults.rtol, |t| t.rtol),
            cut: self.cut.unwrap_or(1),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Tolerances {
    /// Absolute tolerance of each check.
    #[arg(long, default_value_t = 1e-8)]
    pub atol: f64,
    /// Relative tolerance of each check.
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
}

/// Runs a parsed command, writing results to `out`; returns the exit code.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Compute { state, common } => compute(&state, &common, out),
        Command::Compare {
            state_a,
            state_b,
            common,
            tolerances,
        } => compare(&state_a, &state_b, &common, &tolerances, out),
        Command::Mix {
            state,
            count,
            common,
            tolerances,
        } => mix(&state, count, &common, &tolerances, out),
        Command::RandomLu {
            state,
            out: path,
            common,
        } => random_lu(&state, path.as_deref(), &common, out),
        Command::Selftest { full, seed, .. } => {
            let mode = if full { Mode::Full } else { Mode::Quick };
            let summary = selftest::run(mode, seed, &ExpectedConstants::default());
            emit(out, &format!("{summary}\n"))?;
            Ok(if summary.passed() {
                exit::OK
            } else {
                exit::FAILED
            })
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))
}

fn compute(path: &Path, common: &Common, out: &mut dyn Write) -> Result<i32, CliError> {
    let rho = read_state(path, common.validation_tol)?;
    let fp = fingerprint(&rho, &common.config(None))?;
    if common.json {
        emit(out, &to_json(&FingerprintDoc::from(&fp)))?;
    } else {
        emit(out, &render::fingerprint(&fp))?;
    }
    Ok(exit::OK)
}

fn compare(
    a: &Path,
    b: &Path,
    common: &Common,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let rho_a = read_state(a, common.validation_tol)?;
    let rho_b = read_state(b, common.validation_tol)?;
    let cfg = common.config(Some(tol));
    let report = screen(&rho_a, &rho_b, &cfg)?;
    if common.json {
        let fingerprints = fingerprints_if_comparable(&rho_a, &rho_b, &cfg)?;
        let doc = ReportFile::new(
            &report,
            fingerprints.as_ref().map(|(x, y)| (x, y)),
            &cfg,
            common.validation_tol,
        );
        emit(out, &to_json(&doc))?;
    } else {
        emit(out, &render::report(&report, &witness_hints(&report)))?;
    }
    Ok(match report.verdict {
        Verdict::NotEquivalent => exit::FAILED,
        Verdict::Inconclusive => exit::OK,
    })
}

fn fingerprints_if_comparable(
    a: &DensityMatrix,
    b: &DensityMatrix,
    cfg: &ScreenConfig,
) -> Result<Option<(Fingerprint, Fingerprint)>, CliError> {
    if a.dims() != b.dims() {
        return Ok(None);
    }
    Ok(Some((fingerprint(a, cfg)?, fingerprint(b, cfg)?)))
}

/// Invariant values of one decomposition, as table rows.
fn mix_rows(d: &PureStateDecomposition) -> Result<Vec<(String, Complex64)>, CliError> {
    let f = f_invariants(&gram_matrix(d));
    let mut rows: Vec<(String, Complex64)> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, &v)| (format!("F_{i}"), v))
        .collect();
    if d.len() == 2 {
        let h = hypermatrix(d, 2)?;
        rows.push(("N".into(), invariant_n(&h)?));
        rows.push(("M".into(), invariant_m(&h)?));
    }
    Ok(rows)
}

#[derive(Serialize)]
struct MixDoc {
    seed: u64,
    count: usize,
    invariants: Vec<String>,
    reference: Vec<[f64; 2]>,
    columns: Vec<Vec<[f64; 2]>>,
    consistent: bool,
}

fn mix(
    path: &Path,
    count: usize,
    common: &Common,
    tol: &Tolerances,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let rho = read_state(path, common.validation_tol)?;
    let cfg = common.config(Some(tol));
    let d = eigen_decomposition_with_cut(&rho, cfg.cut, cfg.rank_tol)?;
    let reference = mix_rows(&d)?;
    let mut rng = seeded_rng(common.seed);
    let mut columns = Vec::with_capacity(count);
    for _ in 0..count {
        let mixed = mix_decomposition(&d, &haar_unitary_from(d.len(), &mut rng))?;
        columns.push(
            mix_rows(&mixed)?
                .into_iter()
                .map(|(_, v)| v)
                .collect::<Vec<_>>(),
        );
    }
    let consistent = columns.iter().all(|col| {
        col.iter()
            .zip(&reference)
            .all(|(v, (_, r))| (v - r).norm() <= cfg.threshold(v.norm(), r.norm()))
    });
    if common.json {
        let pair = |z: &Complex64| [z.re, z.im];
        let doc = MixDoc {
            seed: common.seed,
            count,
            invariants: reference.iter().map(|(name, _)| name.clone()).collect(),
            reference: reference.iter().map(|(_, v)| pair(v)).collect(),
            columns: columns
                .iter()
                .map(|c| c.iter().map(pair).collect())
                .collect(),
            consistent,
        };
        emit(out, &to_json(&doc))?;
    } else {
        emit(out, &mix_table(&reference, &columns, consistent))?;
    }
    Ok(if consistent { exit::OK } else { exit::FAILED })
}

fn mix_table(
    reference: &[(String, Complex64)],
    columns: &[Vec<Complex64>],
    consistent: bool,
) -> String {
    let mut grid: Vec<Vec<String>> = vec![std::iter::once("invariant".to_string())
        .chain((1..=columns.len()).map(|k| format!("mix_{k}")))
        .collect()];
    if !columns.is_empty() {
        for (i, (name, _)) in reference.iter().enumerate() {
            grid.push(
                std::iter::once(name.clone())
                    .chain(columns.iter().map(|c| render::complex(c[i])))
                    .collect(),
            );
        }
    }
    let widths: Vec<usize> = (0..grid[0].len())
        .map(|c| {
            grid.iter()
                .map(|row| row[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut text = String::new();
    for row in &grid {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:<w$}"))
            .collect();
        text.push_str(cells.join("  ").trim_end());
        text.push('\n');
    }
    text.push_str(if consistent {
        "consistent: all columns agree\n"
    } else {
        "consistent: NO, columns disagree\n"
    });
    text
}

fn random_lu(
    path: &Path,
    out_path: Option<&Path>,
    common: &Common,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let rho = read_state(path, common.validation_tol)?;
    let parties = rho.dims().len();
    let cut = match (parties, common.cut) {
        (0 | 1, _) => {
            return Err(CliError::Usage(format!(
                "random-lu needs at least two subsystems, got dims {:?}",
                rho.dims()
            )))
        }
        (2, cut) => cut.unwrap_or(1),
        (_, Some(cut)) => cut,
        (_, None) => {
            return Err(CliError::Usage(format!(
                "state has {parties} subsystems; pass --cut <l> to choose the bipartition"
            )))
        }
    };
    let (n1, n2) = rho
        .bipartition(cut)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let mut rng = seeded_rng(common.seed);
    let u = haar_unitary_from(n1, &mut rng);
    let w = haar_unitary_from(n2, &mut rng);
    let moved = apply_bipartite_unitary_density(&rho, cut, &u, &w)?;
    let text = to_json(&StateFile::from_density(&moved));
    match out_path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        None => emit(out, &text)?,
    }
    Ok(exit::OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn mix_table_with_no_columns_is_header_only() {
        let table = mix_table(&[("F_0".into(), Complex64::new(1.0, 0.0))], &[], true);
        assert_eq!(table, "invariant\nconsistent: all columns agree\n");
    }
}
