//! Seeded random inputs for unit tests.

use crate::linalg::{Ket, Operator};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random normalized ket over `factors` qutrits.
pub fn random_ket(r: &mut ChaCha8Rng, factors: usize) -> Ket {
    let dim = 3usize.pow(factors as u32);
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5))
        .collect();
    Ket::new(vec![3; factors], amps)
        .unwrap()
        .normalized()
        .unwrap()
}

/// Random Hermitian operator with entries of order one.
pub fn random_hermitian(r: &mut ChaCha8Rng, dim: usize) -> Operator {
    let mut o = Operator::zeros(dim).unwrap();
    for i in 0..dim {
        o.set(i, i, Complex64::new(2.0 * r.random::<f64>() - 1.0, 0.0));
        for j in (i + 1)..dim {
            let z = Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5);
            o.set(i, j, z);
            o.set(j, i, z.conj());
        }
    }
    o
}
