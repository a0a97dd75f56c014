//! Exact arithmetic in GF(p^gamma) over a polynomial basis.
//!
//! A [`FieldSpec`] names the field: the characteristic `p` (arbitrary precision),
//! the extension degree `gamma` and a monic irreducible modulus. [`Field`] is the
//! arithmetic context built from a spec; [`FieldElement`]s are plain values that
//! carry no reference to their field, so every operation goes through a `Field`.
//! Containers that hold elements (matrices, automorphisms, keys) carry the field
//! and reject mixing.
//!
//! Three internal representations are used, chosen from `p`:
//! bit-packed words for `p = 2`, one machine word per coefficient for `p < 2^32`,
//! and big integers otherwise.

mod cost;
mod gf2x;
pub mod poly;
pub(crate) mod prime;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

pub use cost::{cost_counter, cost_reset};
pub use poly::Poly;

/// Description of GF(p^gamma): characteristic, extension degree and modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecJson", into = "FieldSpecJson")]
pub struct FieldSpec {
    p: BigUint,
    gamma: usize,
    /// Monic modulus, constant term first, length `gamma + 1`.
    modulus: Vec<BigUint>,
}

#[derive(Serialize, Deserialize)]
struct FieldSpecJson {
    p: String,
    gamma: usize,
    modulus: Vec<String>,
}

impl From<FieldSpec> for FieldSpecJson {
    fn from(spec: FieldSpec) -> Self {
        FieldSpecJson {
            p: spec.p.to_str_radix(10),
            gamma: spec.gamma,
            modulus: spec.modulus.iter().map(|c| c.to_str_radix(10)).collect(),
        }
    }
}

impl TryFrom<FieldSpecJson> for FieldSpec {
    type Error = Error;

    fn try_from(raw: FieldSpecJson) -> Result<Self> {
        let parse = |s: &str| {
            BigUint::parse_bytes(s.as_bytes(), 10)
                .ok_or_else(|| Error::InvalidSpec(format!("not a decimal integer: {s:?}")))
        };
        let p = parse(&raw.p)?;
        let modulus = raw.modulus.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
        FieldSpec::with_modulus(p, raw.gamma, modulus)
    }
}

impl FieldSpec {
    /// GF(p^gamma) with the default modulus: the first monic irreducible of degree
    /// `gamma` when candidates are enumerated with the constant term moving fastest.
    pub fn new(p: BigUint, gamma: usize) -> Result<Self> {
        Self::check_base(&p, gamma)?;
        let modulus = default_modulus(&p, gamma);
        Ok(FieldSpec { p, gamma, modulus })
    }

    pub fn prime(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p), 1)
    }

    pub fn with_modulus(p: BigUint, gamma: usize, modulus: Vec<BigUint>) -> Result<Self> {
        Self::check_base(&p, gamma)?;
        if modulus.len() != gamma + 1 {
            return Err(Error::InvalidSpec(format!(
                "modulus must have {} coefficients, got {}",
                gamma + 1,
                modulus.len()
            )));
        }
        if !modulus[gamma].is_one() {
            return Err(Error::InvalidSpec("modulus is not monic".into()));
        }
        if modulus.iter().any(|c| c >= &p) {
            return Err(Error::InvalidSpec("modulus coefficient out of range".into()));
        }
        if !modulus_is_irreducible(&p, &modulus) {
            return Err(Error::InvalidSpec("modulus is not irreducible".into()));
        }
        Ok(FieldSpec { p, gamma, modulus })
    }

    fn check_base(p: &BigUint, gamma: usize) -> Result<()> {
        if gamma == 0 {
            return Err(Error::InvalidSpec("extension degree must be positive".into()));
        }
        if !prime::is_probable_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        Ok(())
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn modulus(&self) -> &[BigUint] {
        &self.modulus
    }

    /// q = p^gamma.
    pub fn order(&self) -> BigUint {
        num_traits::pow(self.p.clone(), self.gamma)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gamma == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.gamma)
        }
    }
}

fn default_modulus(p: &BigUint, gamma: usize) -> Vec<BigUint> {
    if gamma == 1 {
        return vec![BigUint::zero(), BigUint::one()];
    }
    if *p == BigUint::from(2u32) {
        return gf2x::smallest_irreducible(gamma)
            .into_iter()
            .map(|b| BigUint::from(b as u8))
            .collect();
    }
    let base = Field::new(FieldSpec {
        p: p.clone(),
        gamma: 1,
        modulus: vec![BigUint::zero(), BigUint::one()],
    });
    // Odometer over c_0..c_{gamma-1} with c_0 fastest; c_0 = 0 is divisible by x.
    let mut digits = vec![BigUint::zero(); gamma];
    digits[0] = BigUint::one();
    loop {
        let mut coeffs: Vec<FieldElement> = digits
            .iter()
            .map(|c| base.from_coeffs(std::slice::from_ref(c)).expect("digit < p"))
            .collect();
        coeffs.push(base.one());
        if Poly::new(coeffs).is_irreducible(&base) {
            let mut out = digits.clone();
            out.push(BigUint::one());
            return out;
        }
        let mut k = 0;
        loop {
            assert!(k < gamma, "exhausted degree-{gamma} candidates");
            digits[k] += 1u32;
            if &digits[k] == p {
                digits[k] = BigUint::zero();
                k += 1;
            } else {
                break;
            }
        }
        if digits[0].is_zero() {
            digits[0] = BigUint::one();
        }
    }
}

fn modulus_is_irreducible(p: &BigUint, modulus: &[BigUint]) -> bool {
    if modulus.len() == 2 {
        return true;
    }
    if *p == BigUint::from(2u32) {
        let bits: Vec<bool> = modulus.iter().map(|c| c.is_one()).collect();
        return gf2x::Gf2Poly::from_bits(&bits).is_irreducible();
    }
    let base = Field::new(FieldSpec {
        p: p.clone(),
        gamma: 1,
        modulus: vec![BigUint::zero(), BigUint::one()],
    });
    let coeffs = modulus
        .iter()
        .map(|c| base.from_coeffs(std::slice::from_ref(c)).expect("coefficient < p"))
        .collect();
    Poly::new(coeffs).is_irreducible(&base)
}

/// An element of GF(p^gamma) in the polynomial basis. Equality is equality of
/// coefficient vectors, which is field equality under a common spec.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Bit-packed coefficients (p = 2) or one coefficient per word (p < 2^32).
    Words(SmallVec<[u64; 4]>),
    Big(Vec<BigUint>),
}

impl FieldElement {
    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Words(w) => w.iter().all(|&x| x == 0),
            Repr::Big(c) => c.iter().all(Zero::is_zero),
        }
    }

    fn words(&self) -> &[u64] {
        match &self.0 {
            Repr::Words(w) => w,
            Repr::Big(_) => panic!("element does not belong to this field"),
        }
    }

    fn bigs(&self) -> &[BigUint] {
        match &self.0 {
            Repr::Big(c) => c,
            Repr::Words(_) => panic!("element does not belong to this field"),
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Words(w) => write!(f, "FieldElement({w:x?})"),
            Repr::Big(c) => write!(f, "FieldElement({c:?})"),
        }
    }
}

enum Arith {
    Binary {
        gamma: usize,
        words: usize,
        /// Bits of the modulus including x^gamma.
        modulus: Vec<u64>,
    },
    Small {
        p: u64,
        gamma: usize,
        /// c_0..c_{gamma-1}; the modulus is monic.
        modulus: Vec<u64>,
    },
    Large {
        p: BigUint,
        gamma: usize,
        modulus: Vec<BigUint>,
    },
}

/// Arithmetic context for one finite field.
pub struct Field {
    spec: FieldSpec,
    order: BigUint,
    arith: Arith,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({})", self.spec)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

impl Eq for Field {}

const SMALL_P_LIMIT: u64 = 1 << 32;

impl Field {
    pub fn new(spec: FieldSpec) -> Arc<Field> {
        let gamma = spec.gamma;
        let arith = if spec.p == BigUint::from(2u32) {
            let words = gamma.div_ceil(64);
            let mut modulus = vec![0u64; (gamma + 1).div_ceil(64)];
            for (i, c) in spec.modulus.iter().enumerate() {
                if c.is_one() {
                    modulus[i / 64] |= 1 << (i % 64);
                }
            }
            Arith::Binary { gamma, words, modulus }
        } else if spec.p < BigUint::from(SMALL_P_LIMIT) {
            Arith::Small {
                p: spec.p.to_u64().unwrap(),
                gamma,
                modulus: spec.modulus[..gamma].iter().map(|c| c.to_u64().unwrap()).collect(),
            }
        } else {
            Arith::Large {
                p: spec.p.clone(),
                gamma,
                modulus: spec.modulus[..gamma].to_vec(),
            }
        };
        let order = spec.order();
        Arc::new(Field { spec, order, arith })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// q = p^gamma.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn characteristic(&self) -> &BigUint {
        &self.spec.p
    }

    pub fn degree(&self) -> usize {
        self.spec.gamma
    }

    pub fn zero(&self) -> FieldElement {
        match &self.arith {
            Arith::Binary { words, .. } => FieldElement(Repr::Words(smallvec![0; *words])),
            Arith::Small { gamma, .. } => FieldElement(Repr::Words(smallvec![0; *gamma])),
            Arith::Large { gamma, .. } => FieldElement(Repr::Big(vec![BigUint::zero(); *gamma])),
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn is_one(&self, a: &FieldElement) -> bool {
        *a == self.one()
    }

    /// Image of the integer `n` under Z -> GF(p) -> GF(q).
    pub fn from_u64(&self, n: u64) -> FieldElement {
        let mut e = self.zero();
        match (&self.arith, &mut e.0) {
            (Arith::Binary { .. }, Repr::Words(w)) => w[0] = n & 1,
            (Arith::Small { p, .. }, Repr::Words(w)) => w[0] = n % p,
            (Arith::Large { p, .. }, Repr::Big(c)) => c[0] = BigUint::from(n) % p,
            _ => unreachable!(),
        }
        e
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        let a = self.from_u64(n.unsigned_abs());
        if n < 0 {
            self.neg(&a)
        } else {
            a
        }
    }

    /// Element with the given coefficients (constant term first, at most `gamma`).
    pub fn from_coeffs(&self, coeffs: &[BigUint]) -> Result<FieldElement> {
        let gamma = self.degree();
        if coeffs.len() > gamma {
            return Err(Error::Domain(format!(
                "{} coefficients for a degree-{gamma} extension",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| c >= &self.spec.p) {
            return Err(Error::Domain("coefficient not reduced modulo p".into()));
        }
        let mut e = self.zero();
        match (&self.arith, &mut e.0) {
            (Arith::Binary { .. }, Repr::Words(w)) => {
                for (i, c) in coeffs.iter().enumerate() {
                    if c.is_one() {
                        w[i / 64] |= 1 << (i % 64);
                    }
                }
            }
            (Arith::Small { .. }, Repr::Words(w)) => {
                for (i, c) in coeffs.iter().enumerate() {
                    w[i] = c.to_u64().unwrap();
                }
            }
            (Arith::Large { .. }, Repr::Big(v)) => {
                v[..coeffs.len()].clone_from_slice(coeffs);
            }
            _ => unreachable!(),
        }
        Ok(e)
    }

    /// Coefficient vector of length `gamma`, constant term first.
    pub fn coeffs(&self, a: &FieldElement) -> Vec<BigUint> {
        match &self.arith {
            Arith::Binary { gamma, .. } => {
                let w = a.words();
                (0..*gamma)
                    .map(|i| BigUint::from((w[i / 64] >> (i % 64)) & 1))
                    .collect()
            }
            Arith::Small { .. } => a.words().iter().map(|&c| BigUint::from(c)).collect(),
            Arith::Large { .. } => a.bigs().to_vec(),
        }
    }

    /// x^s as a field element (the s-th polynomial basis vector), times the ground scalar `c`.
    pub fn basis_multiple(&self, c: &BigUint, s: usize) -> Result<FieldElement> {
        let mut coeffs = vec![BigUint::zero(); s + 1];
        coeffs[s] = c.clone();
        self.from_coeffs(&coeffs)
    }

    /// Value of the coefficient vector read as base-p digits, in [0, q).
    pub fn to_integer(&self, a: &FieldElement) -> BigUint {
        self.coeffs(a)
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| acc * &self.spec.p + c)
    }

    pub fn from_integer(&self, n: &BigUint) -> Result<FieldElement> {
        if n >= &self.order {
            return Err(Error::Domain("integer exceeds field order".into()));
        }
        let mut digits = Vec::with_capacity(self.degree());
        let mut rest = n.clone();
        while !rest.is_zero() {
            let (q, r) = rest.div_rem(&self.spec.p);
            digits.push(r);
            rest = q;
        }
        self.from_coeffs(&digits)
    }

    /// Checks that `a` has the shape of an element of this field.
    pub fn check(&self, a: &FieldElement) -> Result<()> {
        let ok = match (&self.arith, &a.0) {
            (Arith::Binary { gamma, words, .. }, Repr::Words(w)) => {
                w.len() == *words && (gamma % 64 == 0 || w[words - 1] >> (gamma % 64) == 0)
            }
            (Arith::Small { p, gamma, .. }, Repr::Words(w)) => w.len() == *gamma && w.iter().all(|c| c < p),
            (Arith::Large { p, gamma, .. }, Repr::Big(c)) => c.len() == *gamma && c.iter().all(|x| x < p),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&self.arith, &a.0, &b.0) {
            (Arith::Binary { .. }, Repr::Words(x), Repr::Words(y)) => {
                FieldElement(Repr::Words(x.iter().zip(y).map(|(u, v)| u ^ v).collect()))
            }
            (Arith::Small { p, .. }, Repr::Words(x), Repr::Words(y)) => FieldElement(Repr::Words(
                x.iter()
                    .zip(y)
                    .map(|(&u, &v)| {
                        let s = u + v;
                        if s >= *p {
                            s - p
                        } else {
                            s
                        }
                    })
                    .collect(),
            )),
            (Arith::Large { p, .. }, Repr::Big(x), Repr::Big(y)) => {
                FieldElement(Repr::Big(x.iter().zip(y).map(|(u, v)| (u + v) % p).collect()))
            }
            _ => panic!("element does not belong to {}", self.spec),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (&self.arith, &a.0) {
            (Arith::Binary { .. }, _) => a.clone(),
            (Arith::Small { p, .. }, Repr::Words(x)) => {
                FieldElement(Repr::Words(x.iter().map(|&u| if u == 0 { 0 } else { p - u }).collect()))
            }
            (Arith::Large { p, .. }, Repr::Big(x)) => FieldElement(Repr::Big(
                x.iter().map(|u| if u.is_zero() { u.clone() } else { p - u }).collect(),
            )),
            _ => panic!("element does not belong to {}", self.spec),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    /// Counted multiplication.
    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        cost::tick();
        self.mul_raw(a, b)
    }

    pub(crate) fn mul_raw(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (&self.arith, &a.0, &b.0) {
            (Arith::Binary { gamma, words, modulus }, Repr::Words(x), Repr::Words(y)) => {
                FieldElement(Repr::Words(binary_mul(x, y, *gamma, *words, modulus)))
            }
            (Arith::Small { p, gamma: 1, .. }, Repr::Words(x), Repr::Words(y)) => {
                FieldElement(Repr::Words(smallvec![x[0] * y[0] % p]))
            }
            (Arith::Small { p, gamma, modulus }, Repr::Words(x), Repr::Words(y)) => {
                FieldElement(Repr::Words(small_mul(x, y, *p, *gamma, modulus)))
            }
            (Arith::Large { p, gamma, modulus }, Repr::Big(x), Repr::Big(y)) => {
                FieldElement(Repr::Big(large_mul(x, y, p, *gamma, modulus)))
            }
            _ => panic!("element does not belong to {}", self.spec),
        }
    }

    /// a^n by left-to-right square-and-multiply; a^0 = 1.
    pub fn pow(&self, a: &FieldElement, n: &BigUint) -> FieldElement {
        self.pow_with(a, n, |x, y| self.mul(x, y))
    }

    pub fn pow_u64(&self, a: &FieldElement, n: u64) -> FieldElement {
        self.pow(a, &BigUint::from(n))
    }

    fn pow_with(
        &self,
        a: &FieldElement,
        n: &BigUint,
        mul: impl Fn(&FieldElement, &FieldElement) -> FieldElement,
    ) -> FieldElement {
        if n.is_zero() {
            return self.one();
        }
        let mut acc = a.clone();
        for bit in (0..n.bits() - 1).rev() {
            acc = mul(&acc, &acc);
            if n.bit(bit) {
                acc = mul(&acc, a);
            }
        }
        acc
    }

    /// Multiplicative inverse via a^(q-2); these multiplications are not counted.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        if let (Arith::Large { p, gamma: 1, .. }, Repr::Big(x)) = (&self.arith, &a.0) {
            return Ok(FieldElement(Repr::Big(vec![x[0].modpow(&(p - 2u32), p)])));
        }
        if let (Arith::Small { p, gamma: 1, .. }, Repr::Words(x)) = (&self.arith, &a.0) {
            return Ok(FieldElement(Repr::Words(smallvec![inv_mod_u64(x[0], *p)])));
        }
        let e = &self.order - 2u32;
        Ok(self.pow_with(a, &e, |x, y| self.mul_raw(x, y)))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// a^(p^i) for 0 <= i < gamma.
    pub fn frobenius(&self, a: &FieldElement, i: usize) -> Result<FieldElement> {
        if i >= self.degree() {
            return Err(Error::Domain(format!(
                "Frobenius power {i} outside [0, {})",
                self.degree()
            )));
        }
        let e = num_traits::pow(self.spec.p.clone(), i);
        Ok(self.pow(a, &e))
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        match &self.arith {
            Arith::Binary { gamma, words, .. } => {
                let mut w: SmallVec<[u64; 4]> = (0..*words).map(|_| rng.gen::<u64>()).collect();
                if gamma % 64 != 0 {
                    w[words - 1] &= (1u64 << (gamma % 64)) - 1;
                }
                FieldElement(Repr::Words(w))
            }
            Arith::Small { p, gamma, .. } => {
                FieldElement(Repr::Words((0..*gamma).map(|_| rng.gen_range(0..*p)).collect()))
            }
            Arith::Large { p, gamma, .. } => {
                FieldElement(Repr::Big((0..*gamma).map(|_| rng.gen_biguint_below(p)).collect()))
            }
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Every element of the field, for exhaustive tests on small fields.
    pub fn elements(&self) -> Result<Vec<FieldElement>> {
        let q = self
            .order
            .to_u64()
            .filter(|&q| q <= 1 << 20)
            .ok_or_else(|| Error::Unsupported("field too large to enumerate".into()))?;
        (0..q).map(|n| self.from_integer(&BigUint::from(n))).collect()
    }

    /// Hex serialization: coefficients constant-term-first, each big-endian hex, joined by ':'.
    pub fn to_hex(&self, a: &FieldElement) -> String {
        self.coeffs(a)
            .iter()
            .map(|c| c.to_str_radix(16))
            .collect::<Vec<_>>()
            .join(":")
    }

    pub fn from_hex(&self, s: &str) -> Result<FieldElement> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != self.degree() {
            return Err(Error::Format(format!(
                "expected {} coefficients in {s:?}",
                self.degree()
            )));
        }
        let coeffs = parts
            .iter()
            .map(|h| {
                BigUint::parse_bytes(h.as_bytes(), 16)
                    .ok_or_else(|| Error::Format(format!("bad hex coefficient {h:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.from_coeffs(&coeffs).map_err(|e| Error::Format(e.to_string()))
    }
}

fn inv_mod_u64(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

fn binary_mul(x: &[u64], y: &[u64], gamma: usize, words: usize, modulus: &[u64]) -> SmallVec<[u64; 4]> {
    let mut r: SmallVec<[u64; 8]> = smallvec![0; 2 * words + 1];
    for i in 0..gamma {
        if (x[i / 64] >> (i % 64)) & 1 == 1 {
            let (wo, bo) = (i / 64, i % 64);
            for (t, &w) in y.iter().enumerate() {
                r[t + wo] ^= w << bo;
                if bo > 0 {
                    r[t + wo + 1] ^= w >> (64 - bo);
                }
            }
        }
    }
    if gamma > 1 {
        for k in (gamma..2 * gamma - 1).rev() {
            if (r[k / 64] >> (k % 64)) & 1 == 1 {
                let shift = k - gamma;
                let (wo, bo) = (shift / 64, shift % 64);
                for (t, &w) in modulus.iter().enumerate() {
                    if t + wo < r.len() {
                        r[t + wo] ^= w << bo;
                    }
                    if bo > 0 && t + wo + 1 < r.len() {
                        r[t + wo + 1] ^= w >> (64 - bo);
                    }
                }
            }
        }
    }
    let mut out: SmallVec<[u64; 4]> = r[..words].iter().copied().collect();
    if !gamma.is_multiple_of(64) {
        out[words - 1] &= (1u64 << (gamma % 64)) - 1;
    }
    out
}

fn small_mul(x: &[u64], y: &[u64], p: u64, gamma: usize, modulus: &[u64]) -> SmallVec<[u64; 4]> {
    let mut acc: SmallVec<[u128; 8]> = smallvec![0; 2 * gamma - 1];
    for (i, &a) in x.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate() {
            acc[i + j] += (a as u128) * (b as u128);
        }
    }
    let mut r: SmallVec<[u64; 8]> = acc.iter().map(|&c| (c % p as u128) as u64).collect();
    for k in (gamma..2 * gamma - 1).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        r[k] = 0;
        let neg = p - c;
        for (t, &m) in modulus.iter().enumerate() {
            if m != 0 {
                let idx = k - gamma + t;
                r[idx] = ((r[idx] as u128 + neg as u128 * m as u128) % p as u128) as u64;
            }
        }
    }
    r[..gamma].iter().copied().collect()
}

fn large_mul(x: &[BigUint], y: &[BigUint], p: &BigUint, gamma: usize, modulus: &[BigUint]) -> Vec<BigUint> {
    let mut r = vec![BigUint::zero(); 2 * gamma - 1];
    for (i, a) in x.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.iter().enumerate() {
            r[i + j] += a * b;
        }
    }
    for c in r.iter_mut() {
        *c %= p;
    }
    for k in (gamma..2 * gamma - 1).rev() {
        let c = std::mem::take(&mut r[k]);
        if c.is_zero() {
            continue;
        }
        let neg = p - &c;
        for (t, m) in modulus.iter().enumerate() {
            if !m.is_zero() {
                let idx = k - gamma + t;
                r[idx] = (&r[idx] + &neg * m) % p;
            }
        }
    }
    r.truncate(gamma);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64, gamma: usize) -> Arc<Field> {
        Field::new(FieldSpec::new(BigUint::from(p), gamma).unwrap())
    }

    fn el(f: &Field, coeffs: &[u64]) -> FieldElement {
        f.from_coeffs(&coeffs.iter().map(|&c| BigUint::from(c)).collect::<Vec<_>>())
            .unwrap()
    }

    /// Schoolbook product reduced by long division, independent of the backends.
    fn oracle_mul(p: u64, modulus: &[u64], a: &[u64], b: &[u64]) -> Vec<u64> {
        let gamma = modulus.len() - 1;
        let mut prod = vec![0u64; 2 * gamma];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (gamma..prod.len()).rev() {
            let c = prod[k];
            for t in 0..=gamma {
                prod[k - gamma + t] = (prod[k - gamma + t] + (p - c) * modulus[t]) % p;
            }
        }
        prod.truncate(gamma);
        prod
    }

    #[test]
    fn prime_field_product() {
        let f = gf(7, 1);
        assert_eq!(f.mul(&f.from_u64(3), &f.from_u64(5)), f.from_u64(15 % 7));
    }

    #[test]
    fn gf8_product_matches_long_division() {
        let f = gf(2, 3);
        assert_eq!(f.spec().modulus(), &[1u32, 1, 0, 1].map(BigUint::from));
        let x = el(&f, &[0, 1, 0]);
        let x2 = el(&f, &[0, 0, 1]);
        let expected = oracle_mul(2, &[1, 1, 0, 1], &[0, 1, 0], &[0, 0, 1]);
        assert_eq!(expected, vec![1, 1, 0]);
        assert_eq!(f.mul(&x, &x2), el(&f, &[1, 1, 0]));
    }

    #[test]
    fn backends_agree_with_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (p, gamma) in [(2u64, 5usize), (2, 70), (3, 4), (7, 3), (13, 2)] {
            let f = gf(p, gamma);
            let modulus: Vec<u64> = f.spec().modulus().iter().map(|c| c.to_u64().unwrap()).collect();
            for _ in 0..50 {
                let a = f.random(&mut rng);
                let b = f.random(&mut rng);
                let ca: Vec<u64> = f.coeffs(&a).iter().map(|c| c.to_u64().unwrap()).collect();
                let cb: Vec<u64> = f.coeffs(&b).iter().map(|c| c.to_u64().unwrap()).collect();
                let expected = oracle_mul(p, &modulus, &ca, &cb);
                assert_eq!(f.mul(&a, &b), el(&f, &expected), "GF({p}^{gamma})");
            }
        }
    }

    #[test]
    fn large_backend_matches_small_backend_shape() {
        // A 64-bit prime exercises the big-integer path.
        let p = BigUint::from(18_446_744_073_709_551_557u64);
        let f = Field::new(FieldSpec::new(p.clone(), 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let a = f.random_nonzero(&mut rng);
            let b = f.random(&mut rng);
            let ab = f.mul(&a, &b);
            assert_eq!(f.mul(&ab, &f.inv(&a).unwrap()), b);
            assert_eq!(f.pow(&a, &(f.order() - 1u32)), f.one());
        }
    }

    #[test]
    fn pow_and_fermat() {
        let f = gf(7, 1);
        assert_eq!(f.pow_u64(&f.from_u64(3), 6), f.one());
        let g = gf(2, 3);
        for a in g.elements().unwrap().iter().filter(|a| !a.is_zero()) {
            assert_eq!(g.pow_u64(a, 7), g.one());
            assert_eq!(g.pow_u64(a, 1), *a);
            assert_eq!(g.pow_u64(a, 0), g.one());
        }
    }

    #[test]
    fn frobenius_cases() {
        let f = gf(2, 3);
        let x = el(&f, &[0, 1, 0]);
        assert_eq!(f.frobenius(&x, 0).unwrap(), x);
        assert_eq!(f.frobenius(&x, 1).unwrap(), f.pow_u64(&x, 2));
        assert!(matches!(f.frobenius(&x, 3), Err(Error::Domain(_))));
        let mut y = x.clone();
        for _ in 0..3 {
            y = f.frobenius(&y, 1).unwrap();
        }
        assert_eq!(y, x);
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        let f = gf(5, 2);
        assert!(matches!(f.inv(&f.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn exhaustive_fermat_small_fields() {
        for (p, gamma) in [(2u64, 1usize), (2, 6), (3, 3), (5, 2), (7, 2), (61, 1)] {
            let f = gf(p, gamma);
            let q1 = f.order() - 1u32;
            for a in f.elements().unwrap() {
                if !a.is_zero() {
                    assert_eq!(f.pow(&a, &q1), f.one());
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
                }
            }
        }
    }

    #[test]
    fn hex_round_trip_and_mismatch() {
        let f = gf(7, 3);
        let a = el(&f, &[3, 0, 6]);
        assert_eq!(f.to_hex(&a), "3:0:6");
        assert_eq!(f.from_hex("3:0:6").unwrap(), a);
        assert!(f.from_hex("3:0").is_err());
        assert!(f.from_hex("3:0:7").is_err());
        let g = gf(7, 1);
        assert_eq!(g.check(&a), Err(Error::SpecMismatch));
    }

    #[test]
    fn modulus_validation() {
        let two = BigUint::from(2u32);
        let reducible = vec![1u32, 0, 0, 1].into_iter().map(BigUint::from).collect();
        assert!(FieldSpec::with_modulus(two.clone(), 3, reducible).is_err());
        let ok = vec![1u32, 0, 1, 1].into_iter().map(BigUint::from).collect();
        assert!(FieldSpec::with_modulus(two, 3, ok).is_ok());
        assert!(FieldSpec::new(BigUint::from(9u32), 1).is_err());
        assert!(FieldSpec::new(BigUint::from(7u32), 0).is_err());
    }

    #[test]
    fn default_moduli() {
        let m = |p: u64, g: usize| {
            FieldSpec::new(BigUint::from(p), g)
                .unwrap()
                .modulus()
                .iter()
                .map(|c| c.to_u64().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(m(7, 1), vec![0, 1]);
        assert_eq!(m(2, 3), vec![1, 1, 0, 1]);
        // x^2 + 1 is irreducible over GF(3); it is the first odometer candidate.
        assert_eq!(m(3, 2), vec![1, 0, 1]);
        // Over GF(7): x^2 + 1 is irreducible as well (7 = 3 mod 4).
        assert_eq!(m(7, 2), vec![1, 0, 1]);
        // Over GF(5): -1 is a square, so x^2 + 1 splits; x^2 + 2 does not.
        assert_eq!(m(5, 2), vec![2, 0, 1]);
        let big = FieldSpec::new(BigUint::from(2u32), 160).unwrap();
        assert_eq!(big.modulus().len(), 161);
    }

    #[test]
    fn spec_json_shape() {
        let spec = FieldSpec::new(BigUint::from(2u32), 3).unwrap();
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"p": "2", "gamma": 3, "modulus": ["1", "1", "0", "1"]})
        );
        let back: FieldSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);
        let bad = serde_json::json!({"p": "2", "gamma": 3, "modulus": ["1", "0", "0", "1"]});
        assert!(serde_json::from_value::<FieldSpec>(bad).is_err());
    }

    #[test]
    fn integer_digits_round_trip() {
        let f = gf(3, 4);
        for n in 0u32..81 {
            let a = f.from_integer(&BigUint::from(n)).unwrap();
            assert_eq!(f.to_integer(&a), BigUint::from(n));
        }
        assert!(f.from_integer(&BigUint::from(81u32)).is_err());
    }
}
