//! The one-dimensional analogue: the cyclic group Z/p with automorphisms x -> k x.
//!
//! The generator 1 maps to k, so publishing phi and phi^m means publishing k and k^m,
//! and the ciphertext (phi^r(1), phi^{mr}(a)) is (k^r, k^{mr} a): ElGamal in GF(p)^*.

use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// The automorphism x -> k x of Z/p, k != 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarAutomorphism(FieldElement);

impl ScalarAutomorphism {
    pub fn new(k: FieldElement) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::Domain("multiplier must be nonzero".into()));
        }
        Ok(ScalarAutomorphism(k))
    }

    /// Image of the generator 1.
    pub fn image(&self) -> &FieldElement {
        &self.0
    }

    pub fn apply(&self, field: &Field, x: &FieldElement) -> FieldElement {
        field.mul(&self.0, x)
    }

    pub fn power(&self, field: &Field, n: &BigUint) -> Self {
        ScalarAutomorphism(field.pow(&self.0, n))
    }

    pub fn invert(&self, field: &Field) -> Self {
        ScalarAutomorphism(field.inv(&self.0).expect("nonzero"))
    }
}

#[derive(Clone, Debug)]
pub struct CyclicPublicKey {
    pub field: Arc<Field>,
    pub phi: ScalarAutomorphism,
    pub phi_m: ScalarAutomorphism,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCiphertext {
    pub phi_r: ScalarAutomorphism,
    pub payload: FieldElement,
}

fn exponent<R: Rng + ?Sized>(field: &Field, rng: &mut R) -> BigUint {
    rng.gen_biguint_range(&BigUint::from(2u32), &(field.order() - 1u32))
}

pub fn keygen<R: Rng + ?Sized>(field: &Arc<Field>, k: FieldElement, rng: &mut R) -> Result<(CyclicPublicKey, BigUint)> {
    if field.degree() != 1 {
        return Err(Error::Unsupported("cyclic fixture is defined over prime fields".into()));
    }
    let phi = ScalarAutomorphism::new(k)?;
    let m = exponent(field, rng);
    let phi_m = phi.power(field, &m);
    Ok((
        CyclicPublicKey {
            field: field.clone(),
            phi,
            phi_m,
        },
        m,
    ))
}

pub fn encrypt_with_exponent(pk: &CyclicPublicKey, a: &FieldElement, r: &BigUint) -> CyclicCiphertext {
    let f = &*pk.field;
    CyclicCiphertext {
        phi_r: pk.phi.power(f, r),
        payload: pk.phi_m.power(f, r).apply(f, a),
    }
}

pub fn encrypt<R: Rng + ?Sized>(pk: &CyclicPublicKey, a: &FieldElement, rng: &mut R) -> CyclicCiphertext {
    let r = exponent(&pk.field, rng);
    encrypt_with_exponent(pk, a, &r)
}

pub fn decrypt(field: &Field, m: &BigUint, ct: &CyclicCiphertext) -> FieldElement {
    ct.phi_r.power(field, m).invert(field).apply(field, &ct.payload)
}
