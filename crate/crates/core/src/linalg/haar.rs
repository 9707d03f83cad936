use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{qr, ComplexMatrix};

/// Deterministic generator used for every seeded draw in the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `rows × cols` matrix of independent standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary drawn from an existing stream.
///
/// QR of a Ginibre matrix, with each column of `Q` multiplied by the phase of
/// the matching diagonal entry of `R` so that the triangular factor has a
/// real positive diagonal.
pub fn haar_unitary_from<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "haar_unitary needs dim >= 1");
    let z = ginibre(dim, dim, rng);
    let (q, r) = qr(&z).expect("square by construction");
    let phases: Vec<Complex64> = (0..dim)
        .map(|k| {
            let d = r[(k, k)];
            if d.norm() == 0.0 {
                Complex64::new(1.0, 0.0)
            } else {
                d / d.norm()
            }
        })
        .collect();
    ComplexMatrix::from_fn(dim, dim, |row, col| q[(row, col)] * phases[col])
}

/// Haar-distributed `dim × dim` unitary, deterministic in `seed`.
pub fn haar_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    haar_unitary_from(dim, &mut seeded_rng(seed))
}
