//! The MOR public-key cryptosystem over SL(d, q).
//!
//! Alice publishes the generator images of a conjugation automorphism phi and of
//! phi^m. Bob picks r, sends the images of phi^r and phi^{mr}(a). Alice raises phi^r
//! to the m-th power and undoes it on the payload.
//!
//! Exponentiation of a conjugation automorphism goes through its conjugator: the
//! conjugator of phi^r is B^r where B is recovered from the public images. The
//! results are image-for-image identical to [`Automorphism::power`], which is also
//! exposed through [`encrypt_reference`] and [`decrypt_via_power`].

pub mod cyclic;
mod encoding;

use std::sync::{Arc, OnceLock};

use num_bigint::{BigUint, RandBigInt};
use rand::{CryptoRng, Rng};
use serde::{Deserialize, Serialize};

use crate::automorphism::{Automorphism, AutomorphismJson};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::lab::{char_poly, lift_operator};
use crate::matrix::{Matrix, MatrixJson};

pub use encoding::{decode_message, encode_message, message_capacity};

pub const FORMAT_VERSION: u32 = 1;

/// Conjugator draws before keygen gives up.
pub const KEYGEN_MAX_DRAWS: usize = 256;

/// Which characteristic polynomial must be irreducible for a conjugator to be accepted.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyCheck {
    None,
    /// chi_A, degree d.
    #[default]
    IrreducibleConjugator,
    /// chi of the lifted operator, degree d^2. The lift fixes the identity matrix, so
    /// (x - 1) always divides this polynomial and no conjugator passes.
    IrreducibleLift,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorParams {
    field: Arc<Field>,
    d: usize,
    key_check: KeyCheck,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorParamsJson {
    pub spec: FieldSpec,
    pub d: usize,
    #[serde(default)]
    pub key_check: KeyCheck,
}

impl MorParams {
    pub fn new(field: Arc<Field>, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Unsupported(format!("degree {d} < 2")));
        }
        Ok(MorParams {
            field,
            d,
            key_check: KeyCheck::default(),
        })
    }

    pub fn with_key_check(mut self, key_check: KeyCheck) -> Self {
        self.key_check = key_check;
        self
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn key_check(&self) -> KeyCheck {
        self.key_check
    }

    /// Exponents are drawn from [2, q^{d^2} - 2].
    pub fn exponent_bound(&self) -> BigUint {
        num_traits::pow(self.field.order().clone(), self.d * self.d) - 1u32
    }

    pub fn accepts(&self, a: &Matrix) -> Result<bool> {
        Ok(match self.key_check {
            KeyCheck::None => true,
            KeyCheck::IrreducibleConjugator => char_poly(a).is_irreducible(&self.field),
            KeyCheck::IrreducibleLift => char_poly(lift_operator(a)?.matrix()).is_irreducible(&self.field),
        })
    }

    pub fn to_json(&self) -> MorParamsJson {
        MorParamsJson {
            spec: self.field.spec().clone(),
            d: self.d,
            key_check: self.key_check,
        }
    }

    pub fn from_json(json: &MorParamsJson) -> Result<Self> {
        Ok(MorParams::new(Field::new(json.spec.clone()), json.d)?.with_key_check(json.key_check))
    }

    fn random_exponent<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        rng.gen_biguint_range(&BigUint::from(2u32), &self.exponent_bound())
    }
}

/// Named parameter sets: `toy` (d = 3, GF(7)), `small` (d = 5, GF(2^16)), `paper` (d = 7, GF(2^160)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Toy,
    Small,
    Paper,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Toy, Preset::Small, Preset::Paper];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Toy => "toy",
            Preset::Small => "small",
            Preset::Paper => "paper",
        }
    }

    /// (d, p, gamma).
    pub fn shape(self) -> (usize, u64, usize) {
        match self {
            Preset::Toy => (3, 7, 1),
            Preset::Small => (5, 2, 16),
            Preset::Paper => (7, 2, 160),
        }
    }

    pub fn params(self) -> Result<MorParams> {
        let (d, p, gamma) = self.shape();
        MorParams::new(Field::new(FieldSpec::new(BigUint::from(p), gamma)?), d)
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Format(format!("unknown preset {s:?}")))
    }
}

#[derive(Clone, Debug)]
pub struct MorPublicKey {
    params: MorParams,
    phi: Automorphism,
    phi_m: Automorphism,
    conjugators: OnceLock<(Matrix, Matrix)>,
}

impl PartialEq for MorPublicKey {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.phi == other.phi && self.phi_m == other.phi_m
    }
}

impl Eq for MorPublicKey {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorPrivateKey {
    params: MorParams,
    m: BigUint,
    conjugator: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorCiphertext {
    phi_r: Automorphism,
    payload: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicKeyJson {
    pub format_version: u32,
    pub params: MorParamsJson,
    pub phi: AutomorphismJson,
    pub phi_m: AutomorphismJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrivateKeyJson {
    pub format_version: u32,
    pub params: MorParamsJson,
    pub m: String,
    pub conjugator: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiphertextJson {
    pub format_version: u32,
    pub phi_r: AutomorphismJson,
    pub payload: MatrixJson,
}

fn check_version(v: u32) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(Error::Format(format!("unsupported format_version {v}")));
    }
    Ok(())
}

impl MorPublicKey {
    pub fn new(params: MorParams, phi: Automorphism, phi_m: Automorphism) -> Result<Self> {
        for a in [&phi, &phi_m] {
            if a.field() != params.field() {
                return Err(Error::SpecMismatch);
            }
            if a.degree() != params.degree() {
                return Err(Error::Dimension {
                    expected: params.degree(),
                    got: a.degree(),
                });
            }
        }
        Ok(MorPublicKey {
            params,
            phi,
            phi_m,
            conjugators: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &MorParams {
        &self.params
    }

    pub fn phi(&self) -> &Automorphism {
        &self.phi
    }

    pub fn phi_m(&self) -> &Automorphism {
        &self.phi_m
    }

    /// Conjugators behind phi and phi^m, recovered from the images once.
    fn conjugators(&self) -> Result<&(Matrix, Matrix)> {
        if let Some(c) = self.conjugators.get() {
            return Ok(c);
        }
        let b = self.phi.recover_conjugator()?;
        let bm = self.phi_m.recover_conjugator()?;
        Ok(self.conjugators.get_or_init(|| (b, bm)))
    }

    pub fn to_json(&self) -> PublicKeyJson {
        PublicKeyJson {
            format_version: FORMAT_VERSION,
            params: self.params.to_json(),
            phi: self.phi.to_json(),
            phi_m: self.phi_m.to_json(),
        }
    }

    pub fn from_json(json: &PublicKeyJson) -> Result<Self> {
        check_version(json.format_version)?;
        let params = MorParams::from_json(&json.params)?;
        let phi = Automorphism::from_json(params.field(), &json.phi)?;
        let phi_m = Automorphism::from_json(params.field(), &json.phi_m)?;
        MorPublicKey::new(params, phi, phi_m)
    }
}

impl MorPrivateKey {
    pub fn params(&self) -> &MorParams {
        &self.params
    }

    pub fn m(&self) -> &BigUint {
        &self.m
    }

    pub fn conjugator(&self) -> &Matrix {
        &self.conjugator
    }

    pub fn to_json(&self) -> PrivateKeyJson {
        PrivateKeyJson {
            format_version: FORMAT_VERSION,
            params: self.params.to_json(),
            m: self.m.to_str_radix(10),
            conjugator: self.conjugator.to_json(),
        }
    }

    pub fn from_json(json: &PrivateKeyJson) -> Result<Self> {
        check_version(json.format_version)?;
        let params = MorParams::from_json(&json.params)?;
        let m = BigUint::parse_bytes(json.m.as_bytes(), 10)
            .ok_or_else(|| Error::Format(format!("m is not a decimal integer: {:?}", json.m)))?;
        let conjugator = Matrix::from_json(params.field(), &json.conjugator)?;
        if conjugator.dim() != params.degree() {
            return Err(Error::Dimension {
                expected: params.degree(),
                got: conjugator.dim(),
            });
        }
        if !conjugator.is_gl() {
            return Err(Error::Singular);
        }
        Ok(MorPrivateKey { params, m, conjugator })
    }
}

impl MorCiphertext {
    pub fn new(phi_r: Automorphism, payload: Matrix) -> Result<Self> {
        if payload.field() != phi_r.field() {
            return Err(Error::SpecMismatch);
        }
        if payload.dim() != phi_r.degree() {
            return Err(Error::Dimension {
                expected: phi_r.degree(),
                got: payload.dim(),
            });
        }
        Ok(MorCiphertext { phi_r, payload })
    }

    pub fn phi_r(&self) -> &Automorphism {
        &self.phi_r
    }

    pub fn payload(&self) -> &Matrix {
        &self.payload
    }

    pub fn to_json(&self) -> CiphertextJson {
        CiphertextJson {
            format_version: FORMAT_VERSION,
            phi_r: self.phi_r.to_json(),
            payload: self.payload.to_json(),
        }
    }

    /// Parses a ciphertext, building its field from the embedded spec.
    pub fn from_json(json: &CiphertextJson) -> Result<Self> {
        check_version(json.format_version)?;
        let field = Field::new(json.phi_r.spec.clone());
        Self::from_json_with_field(&field, json)
    }

    pub fn from_json_with_field(field: &Arc<Field>, json: &CiphertextJson) -> Result<Self> {
        check_version(json.format_version)?;
        let phi_r = Automorphism::from_json(field, &json.phi_r)?;
        let payload = Matrix::from_json(field, &json.payload)?;
        MorCiphertext::new(phi_r, payload)
    }
}

/// Draws a conjugator A accepted by the key check, m in [2, q^{d^2} - 2], and publishes
/// phi = conjugation by A and phi^m = conjugation by A^m.
pub fn keygen<R: Rng + CryptoRng + ?Sized>(params: &MorParams, rng: &mut R) -> Result<(MorPublicKey, MorPrivateKey)> {
    let field = params.field();
    let d = params.degree();
    let mut conjugator = None;
    for _ in 0..KEYGEN_MAX_DRAWS {
        let a = Matrix::random_gl(field, d, rng);
        if params.accepts(&a)? {
            conjugator = Some(a);
            break;
        }
    }
    let a = conjugator.ok_or(Error::KeygenFailure {
        attempts: KEYGEN_MAX_DRAWS,
    })?;
    let m = params.random_exponent(rng);
    let phi = Automorphism::from_conjugator(&a)?;
    let am = a.pow(&m);
    let phi_m = Automorphism::from_conjugator(&am)?;
    let pk = MorPublicKey {
        params: params.clone(),
        phi,
        phi_m,
        conjugators: OnceLock::from((a.clone(), am)),
    };
    let sk = MorPrivateKey {
        params: params.clone(),
        m,
        conjugator: a,
    };
    Ok((pk, sk))
}

fn check_plaintext(pk: &MorPublicKey, a: &Matrix) -> Result<()> {
    if a.field() != pk.params.field() {
        return Err(Error::SpecMismatch);
    }
    if a.dim() != pk.params.degree() {
        return Err(Error::Dimension {
            expected: pk.params.degree(),
            got: a.dim(),
        });
    }
    if !a.is_sl() {
        return Err(Error::NotInSl);
    }
    Ok(())
}

/// Encrypts a in SL(d, q) under a fresh r drawn from `rng`.
pub fn encrypt<R: Rng + CryptoRng + ?Sized>(pk: &MorPublicKey, a: &Matrix, rng: &mut R) -> Result<MorCiphertext> {
    check_plaintext(pk, a)?;
    let r = pk.params.random_exponent(rng);
    encrypt_with_exponent(pk, a, &r)
}

pub(crate) fn encrypt_with_exponent(pk: &MorPublicKey, a: &Matrix, r: &BigUint) -> Result<MorCiphertext> {
    let (b, bm) = pk.conjugators()?;
    let phi_r = Automorphism::from_conjugator(&b.pow(r))?;
    let phi_mr = Automorphism::from_conjugator(&bm.pow(r))?;
    MorCiphertext::new(phi_r, phi_mr.apply(a)?)
}

/// Encryption through square-and-multiply over automorphisms. Same output as [`encrypt`]
/// for the same rng stream; far slower at realistic sizes.
pub fn encrypt_reference<R: Rng + CryptoRng + ?Sized>(
    pk: &MorPublicKey,
    a: &Matrix,
    rng: &mut R,
) -> Result<MorCiphertext> {
    check_plaintext(pk, a)?;
    let r = pk.params.random_exponent(rng);
    let phi_r = pk.phi.power(&r)?;
    let phi_mr = pk.phi_m.power(&r)?;
    MorCiphertext::new(phi_r, phi_mr.apply(a)?)
}

fn check_ciphertext(sk: &MorPrivateKey, ct: &MorCiphertext) -> Result<()> {
    if ct.phi_r.field() != sk.params.field() {
        return Err(Error::SpecMismatch);
    }
    if ct.phi_r.degree() != sk.params.degree() {
        return Err(Error::Dimension {
            expected: sk.params.degree(),
            got: ct.phi_r.degree(),
        });
    }
    if !ct.payload.is_sl() {
        return Err(Error::InvalidCiphertext("payload is not in SL(d, q)".into()));
    }
    Ok(())
}

fn invalid(e: Error) -> Error {
    match e {
        Error::InvalidAutomorphism(msg) => Error::InvalidCiphertext(msg),
        Error::Singular => Error::InvalidCiphertext("conjugator is singular".into()),
        other => other,
    }
}

/// Recovers B_r from the images of phi^r; phi^{mr} is conjugation by B_r^m, undone by B (.) B^-1.
pub fn decrypt(sk: &MorPrivateKey, ct: &MorCiphertext) -> Result<Matrix> {
    check_ciphertext(sk, ct)?;
    let br = ct.phi_r.recover_conjugator().map_err(invalid)?;
    let b = br.pow(&sk.m);
    let binv = b.inv().map_err(invalid)?;
    Ok(&(&b * &ct.payload) * &binv)
}

/// psi = (phi^r)^m by square-and-multiply, then psi^-1 applied to the payload.
pub fn decrypt_via_power(sk: &MorPrivateKey, ct: &MorCiphertext) -> Result<Matrix> {
    check_ciphertext(sk, ct)?;
    let psi = ct.phi_r.power(&sk.m).map_err(invalid)?;
    psi.invert().map_err(invalid)?.apply(&ct.payload).map_err(invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn params(p: u64, g: usize, d: usize) -> MorParams {
        let spec = FieldSpec::new(BigUint::from(p), g).unwrap();
        MorParams::new(Field::new(spec), d).unwrap()
    }

    #[test]
    fn keygen_is_consistent_with_power() {
        let prm = params(5, 1, 2);
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let (pk, sk) = keygen(&prm, &mut rng).unwrap();
        assert_eq!(pk.phi().power(sk.m()).unwrap(), *pk.phi_m());
        assert!(*sk.m() >= BigUint::from(2u32));
        assert!(char_poly(sk.conjugator()).is_irreducible(prm.field()));
    }

    #[test]
    fn round_trip_and_reference_paths_agree() {
        let prm = params(7, 1, 3);
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let (pk, sk) = keygen(&prm, &mut rng).unwrap();
        let a = Matrix::random_sl(prm.field(), 3, &mut rng);
        let fast = encrypt(&pk, &a, &mut ChaCha20Rng::seed_from_u64(7)).unwrap();
        let slow = encrypt_reference(&pk, &a, &mut ChaCha20Rng::seed_from_u64(7)).unwrap();
        assert_eq!(fast, slow);
        assert_eq!(decrypt(&sk, &fast).unwrap(), a);
        assert_eq!(decrypt_via_power(&sk, &fast).unwrap(), a);
    }

    #[test]
    fn identity_payload_decrypts_to_identity() {
        let prm = params(5, 1, 3);
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let (pk, sk) = keygen(&prm, &mut rng).unwrap();
        let id = Matrix::identity(prm.field(), 3);
        let ct = encrypt(&pk, &id, &mut rng).unwrap();
        assert!(ct.payload().is_identity());
        assert!(decrypt(&sk, &ct).unwrap().is_identity());
    }

    #[test]
    fn tampered_payload_is_rejected() {
        let prm = params(5, 1, 2);
        let mut rng = ChaCha20Rng::seed_from_u64(44);
        let (pk, sk) = keygen(&prm, &mut rng).unwrap();
        let ct = encrypt(&pk, &Matrix::identity(prm.field(), 2), &mut rng).unwrap();
        let bad = MorCiphertext::new(
            ct.phi_r().clone(),
            Matrix::scalar(prm.field(), 2, &prm.field().from_u64(2)),
        )
        .unwrap();
        assert!(matches!(decrypt(&sk, &bad), Err(Error::InvalidCiphertext(_))));
    }

    #[test]
    fn non_sl_plaintext_is_rejected() {
        let prm = params(7, 1, 2);
        let mut rng = ChaCha20Rng::seed_from_u64(45);
        let (pk, _) = keygen(&prm, &mut rng).unwrap();
        let x = Matrix::scalar(prm.field(), 2, &prm.field().from_u64(3));
        assert_eq!(encrypt(&pk, &x, &mut rng).unwrap_err(), Error::NotInSl);
    }

    #[test]
    fn lift_check_exhausts_draws() {
        let prm = params(5, 1, 2).with_key_check(KeyCheck::IrreducibleLift);
        let mut rng = ChaCha20Rng::seed_from_u64(46);
        assert_eq!(
            keygen(&prm, &mut rng).unwrap_err(),
            Error::KeygenFailure {
                attempts: KEYGEN_MAX_DRAWS
            }
        );
    }

    #[test]
    fn json_round_trips() {
        let prm = params(3, 2, 2);
        let mut rng = ChaCha20Rng::seed_from_u64(47);
        let (pk, sk) = keygen(&prm, &mut rng).unwrap();
        let ct = encrypt(&pk, &Matrix::random_sl(prm.field(), 2, &mut rng), &mut rng).unwrap();
        let pk2 =
            MorPublicKey::from_json(&serde_json::from_str(&serde_json::to_string(&pk.to_json()).unwrap()).unwrap())
                .unwrap();
        assert_eq!(pk2, pk);
        let sk2 =
            MorPrivateKey::from_json(&serde_json::from_str(&serde_json::to_string(&sk.to_json()).unwrap()).unwrap())
                .unwrap();
        assert_eq!(sk2.m(), sk.m());
        assert_eq!(sk2.conjugator().entries(), sk.conjugator().entries());
        let ct2 =
            MorCiphertext::from_json(&serde_json::from_str(&serde_json::to_string(&ct.to_json()).unwrap()).unwrap())
                .unwrap();
        assert_eq!(decrypt(&sk2, &ct2).unwrap(), decrypt(&sk, &ct).unwrap());
        let value = serde_json::to_value(pk.to_json()).unwrap();
        assert_eq!(value["format_version"], 1);
    }
}
