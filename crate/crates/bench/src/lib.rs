//! Shared fixtures for the benchmarks.

use std::sync::Arc;

use mor::protocol::keygen;
use mor::{Automorphism, Field, FieldSpec, Matrix, MorParams, MorPrivateKey, MorPublicKey};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn field(p: u64, gamma: usize) -> Arc<Field> {
    Field::new(FieldSpec::new(BigUint::from(p), gamma).expect("valid field"))
}

/// Two conjugation automorphisms over GF(p^gamma) in degree d.
pub fn automorphism_pair(p: u64, gamma: usize, d: usize, seed: u64) -> (Automorphism, Automorphism) {
    let f = field(p, gamma);
    let mut rng = rng(seed);
    let mut draw = || Automorphism::from_conjugator(&Matrix::random_gl(&f, d, &mut rng)).expect("invertible");
    (draw(), draw())
}

pub fn key_pair(params: &MorParams, seed: u64) -> (MorPublicKey, MorPrivateKey) {
    keygen(params, &mut rng(seed)).expect("keygen")
}
