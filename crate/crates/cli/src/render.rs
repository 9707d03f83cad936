//! Human-readable rendering. Values that match one of the reference constants
//! to within 1e-12 are annotated with the exact form, e.g.
//! `3.90625e-3 (1/256)`.

use std::fmt::Write;

use lu_invar_core::equivalence::{CheckValue, EquivalenceReport, Fingerprint, WitnessHint};
use lu_invar_core::invariants::LambdaPoly;
use lu_invar_core::reference_states::KNOWN_CONSTANTS;
use num_complex::Complex64;

/// Tolerance for recognising a reference constant.
const MATCH_TOL: f64 = 1e-12;
/// Imaginary parts below this are not shown.
const IMAG_DISPLAY_TOL: f64 = 1e-14;

/// Significant digits shown in text output; JSON output keeps all 17.
const TEXT_DIGITS: usize = 12;

/// Scientific notation with at most [`TEXT_DIGITS`] significant digits and
/// no trailing zeros, e.g. `3.90625e-3`.
fn short(x: f64) -> String {
    let full = format!("{x:.prec$e}", prec = TEXT_DIGITS - 1);
    let (mantissa, exponent) = full
        .split_once('e')
        .expect("scientific format has an exponent");
    let mantissa = if mantissa.contains('.') {
        mantissa.trim_end_matches('0').trim_end_matches('.')
    } else {
        mantissa
    };
    // Rounding can turn -1e-300 into "-0".
    let mantissa = if mantissa == "-0" { "0" } else { mantissa };
    format!("{mantissa}e{exponent}")
}

pub fn real(x: f64) -> String {
    let mut s = short(x);
    if x != 0.0 {
        if let Some((_, name)) = KNOWN_CONSTANTS
            .iter()
            .find(|(c, _)| (x.abs() - c).abs() <= MATCH_TOL)
        {
            let sign = if x < 0.0 { "-" } else { "" };
            let _ = write!(s, " ({sign}{name})");
        }
    }
    s
}

pub fn complex(z: Complex64) -> String {
    if z.im.abs() < IMAG_DISPLAY_TOL {
        real(z.re)
    } else {
        let im = short(z.im);
        let sign = if im.starts_with('-') { "" } else { "+" };
        format!("{}{sign}{im}i", short(z.re))
    }
}

fn check_value(v: &CheckValue) -> String {
    match v {
        CheckValue::Number(z) => complex(*z),
        CheckValue::Dims(d) => format!("{d:?}"),
    }
}

fn lambda_line(p: &LambdaPoly) -> String {
    let coeffs: Vec<String> = p.coeffs.iter().map(|&c| complex(c)).collect();
    format!(
        "lambda_{}(s={}) = [{}]",
        p.invariant.name(),
        p.order,
        coeffs.join(", ")
    )
}

pub fn fingerprint(fp: &Fingerprint) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dims = {:?} (cut {})", fp.dims, fp.cut);
    let _ = writeln!(out, "rank = {}", fp.rank);
    for (i, &f) in fp.f.values().iter().enumerate() {
        let _ = writeln!(out, "F_{i} = {}", complex(f));
    }
    if let Some(n) = fp.n_value {
        let _ = writeln!(out, "N = {}", complex(n));
    }
    if let Some(m) = fp.m_value {
        let _ = writeln!(out, "M = {}", complex(m));
    }
    let _ = writeln!(out, "kyfan = {}", real(fp.kyfan));
    for p in &fp.lambda {
        let _ = writeln!(out, "{}", lambda_line(p));
    }
    out
}

pub fn report(r: &EquivalenceReport, hints: &[WitnessHint]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", r.verdict);
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "witness: {} ({} vs {}, delta {})",
            w.name,
            check_value(&w.a),
            check_value(&w.b),
            real(w.delta)
        );
    }
    let _ = writeln!(out, "checks:");
    for c in &r.checks {
        let status = if c.pass { "pass" } else { "FAIL" };
        let marginal = if c.marginal { " (marginal)" } else { "" };
        let _ = writeln!(
            out,
            "  {status} {}: {} vs {} (delta {}){marginal}",
            c.name,
            check_value(&c.a),
            check_value(&c.b),
            real(c.delta)
        );
    }
    if r.witness.is_some() {
        let _ = writeln!(out, "separation ranking:");
        for h in hints.iter().filter(|h| h.delta > 0.0).take(5) {
            let _ = writeln!(
                out,
                "  {} delta {} score {:.3e}",
                h.name,
                real(h.delta),
                h.score
            );
        }
    }
    out
}
