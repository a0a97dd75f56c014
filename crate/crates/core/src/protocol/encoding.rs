//! Plaintexts as elementary transvections 1 + lambda e_{1,2}.
//!
//! Bytes b are read as the big-endian integer of 0x01 || b, written in base p as the
//! coefficient vector of lambda. The leading 0x01 keeps lambda nonzero and preserves
//! leading zero bytes.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Matrix;

const POSITION: (usize, usize) = (1, 2);

/// Largest byte length that fits: 0x01 || b must stay below q, so 8 len + 1 < bitlen(q).
pub fn message_capacity(field: &Field) -> usize {
    let bits = field.order().bits() as usize;
    bits.saturating_sub(2) / 8
}

pub fn encode_message(bytes: &[u8], field: &std::sync::Arc<Field>, d: usize) -> Result<Matrix> {
    let capacity = message_capacity(field);
    if bytes.len() > capacity {
        return Err(Error::Capacity {
            len: bytes.len(),
            capacity,
        });
    }
    let mut padded = Vec::with_capacity(bytes.len() + 1);
    padded.push(1u8);
    padded.extend_from_slice(bytes);
    let lambda = field.from_integer(&BigUint::from_bytes_be(&padded))?;
    Matrix::transvection(field, d, POSITION.0, POSITION.1, &lambda)
}

pub fn decode_message(m: &Matrix) -> Result<Vec<u8>> {
    let (i, j, lambda) = m
        .as_transvection()
        .ok_or_else(|| Error::Format("plaintext matrix is not an elementary transvection".into()))?;
    if (i, j) != POSITION {
        return Err(Error::Format(format!(
            "plaintext transvection at ({i}, {j}), expected {POSITION:?}"
        )));
    }
    let bytes = m.field().to_integer(&lambda).to_bytes_be();
    match bytes.split_first() {
        Some((1, rest)) => Ok(rest.to_vec()),
        _ => Err(Error::Format("missing padding byte".into())),
    }
}
