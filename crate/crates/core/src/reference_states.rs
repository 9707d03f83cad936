//! The two-qubit states used throughout as known-answer cases.
//!
//! `rho1`/`rho2` share their spectrum and realignment norm but differ in `N`;
//! `sigma1`/`sigma2` share their spectrum but differ in the quartic invariants.

use crate::linalg::ComplexMatrix;
use crate::states::{validate_density, DensityMatrix};

const DIMS: [usize; 2] = [2, 2];

fn state(mat: ComplexMatrix) -> DensityMatrix {
    validate_density(mat, &DIMS, 1e-12).expect("reference state is a valid density matrix")
}

/// `½(|00⟩⟨00| + |01⟩⟨01|)`.
pub fn rho1() -> DensityMatrix {
    state(ComplexMatrix::from_real_diag(&[0.5, 0.5, 0.0, 0.0]))
}

/// `½(|00⟩⟨00| + |10⟩⟨10|)`.
pub fn rho2() -> DensityMatrix {
    state(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.5, 0.0]))
}

/// `⅓(|00⟩⟨00| + |01⟩⟨01| + |01⟩⟨10| + |10⟩⟨01| + |10⟩⟨10|)`.
pub fn sigma1() -> DensityMatrix {
    let t = 1.0 / 3.0;
    state(ComplexMatrix::from_real_rows(&[
        [t, 0.0, 0.0, 0.0],
        [0.0, t, t, 0.0],
        [0.0, t, t, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ]))
}

/// `⅔|00⟩⟨00| + ⅓|11⟩⟨11|`.
pub fn sigma2() -> DensityMatrix {
    state(ComplexMatrix::from_real_diag(&[
        2.0 / 3.0,
        0.0,
        0.0,
        1.0 / 3.0,
    ]))
}

/// Known exact values, named for display.
pub const KNOWN_CONSTANTS: [(f64, &str); 4] = [
    (1.0 / 256.0, "1/256"),
    (1.0 / 6561.0, "1/6561"),
    (std::f64::consts::FRAC_1_SQRT_2, "1/√2"),
    (0.25, "1/4"),
];
