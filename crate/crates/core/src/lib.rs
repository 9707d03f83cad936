//! Local unitary invariants of mixed quantum states that do not depend on the
//! chosen pure-state decomposition.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`]: dense complex matrices, Jacobi eigen/singular solvers,
//!   determinants, characteristic polynomials and Haar sampling.
//! * [`states`]: validated density matrices and pure-state decompositions
//!   `A_i = √p_i · reshape(v_i)`, with unitary mixing, zero padding and local
//!   unitary action.
//! * [`invariants`]: the Gram matrix `Ω_ij = tr(A_i A_j†)`, its characteristic
//!   polynomial coefficients, the trace hypermatrix `Ω_s`, Cayley's 2×2×2
//!   hyperdeterminant, the degree-4 invariants `N` and `M`, λ-polynomials and
//!   the realignment Ky Fan norm.
//! * [`equivalence`]: fingerprints and a one-sided screening test for local
//!   unitary non-equivalence.
//! * [`reference_states`]: the known-answer two-qubit states.

pub mod equivalence;
pub mod error;
pub mod invariants;
pub mod linalg;
pub mod reference_states;
pub mod states;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexScalar, Polynomial};
