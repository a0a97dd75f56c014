pub mod automorphism;
pub mod error;
pub mod field;
pub mod lab;
pub mod linalg;
pub mod matrix;
pub mod protocol;
pub mod words;

pub use automorphism::{Automorphism, BAutomorphism};
pub use error::{Error, Result};
pub use field::{cost_counter, cost_reset, Field, FieldElement, FieldSpec, Poly};
pub use matrix::{generator_pairs, Matrix, MatrixJson, Permutation};
pub use protocol::{KeyCheck, MorCiphertext, MorParams, MorPrivateKey, MorPublicKey, Preset};
pub use words::{CDWord, Generator, Letter, TransvectionWord};
