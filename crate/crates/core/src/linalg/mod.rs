//! Dense complex linear algebra with no quantum semantics attached.

mod decomp;
mod haar;
mod matrix;
mod poly;

pub use decomp::{char_poly, determinant, hermitian_eig, qr, singular_values, HermitianEigen};
pub use haar::{complex_gaussian, ginibre, haar_unitary, haar_unitary_from, seeded_rng, SeededRng};
pub use matrix::ComplexMatrix;
pub use poly::Polynomial;

/// Scalar field of every matrix in the crate.
pub type ComplexScalar = num_complex::Complex64;

/// Default absolute tolerance for structural checks (Hermiticity, unitarity).
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Default relative tolerance for algebraic identities.
pub const IDENTITY_RTOL: f64 = 1e-9;
