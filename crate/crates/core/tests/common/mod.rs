#![allow(dead_code)]

use num_complex::Complex64;
use qho_dual::{BasisTag, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut impl Rng, basis: BasisTag, dim: usize) -> StateVector {
    let amps = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    StateVector::new(basis, amps).unwrap().normalized()
}

/// `U[s][n] = e^{2πi n s / N}/√N` built without the library.
pub fn reference_dft(dim: usize) -> Vec<Complex64> {
    let mut u = Vec::with_capacity(dim * dim);
    for s in 0..dim {
        for n in 0..dim {
            let angle = 2.0 * std::f64::consts::PI * (n as f64) * (s as f64) / dim as f64;
            u.push(Complex64::from_polar(1.0 / (dim as f64).sqrt(), angle));
        }
    }
    u
}
