//! Generic attacks on a public key presented by conjugation images.
//!
//! The conjugators B, B' recovered from phi and phi^m are only defined up to scalars,
//! so the exponent is sought with B^n in F_q^* B'.

use num_traits::ToPrimitive;

use super::bsgs::{bsgs_dlog, ProjectiveGroup};
use super::charpoly::char_poly;
use super::menezes_wu::{extension_dlog, polynomial_in};
use crate::error::{Error, Result};
use crate::field::Poly;
use crate::protocol::MorPublicKey;

fn conjugators(pk: &MorPublicKey) -> Result<(crate::Matrix, crate::Matrix)> {
    let wrong = |e: Error| match e {
        Error::InvalidAutomorphism(msg) => Error::WrongAttackModel(msg),
        other => other,
    };
    Ok((
        pk.phi().recover_conjugator().map_err(wrong)?,
        pk.phi_m().recover_conjugator().map_err(wrong)?,
    ))
}

/// Least n >= 1 with phi^n = phi^m, by baby-step giant-step in PGL(d, q) with bound q^d - 1.
pub fn bsgs_attack(pk: &MorPublicKey, budget: Option<u64>) -> Result<u64> {
    let (b, bm) = conjugators(pk)?;
    let f = pk.params().field();
    let d = pk.params().degree();
    let bound = (num_traits::pow(f.order().clone(), d) - 1u32)
        .to_u64()
        .ok_or_else(|| Error::Unsupported("group too large for a desk-scale attack".into()))?;
    let group = ProjectiveGroup { field: f.clone(), d };
    bsgs_dlog(&group, &b, &bm, bound, budget)
}

/// Least n >= 1 with phi^n = phi^m via the extension-field reduction, scanning the
/// scalar that relates B^n to the recovered B'.
pub fn mw_attack(pk: &MorPublicKey, budget: Option<u64>) -> Result<u64> {
    let (b, bm) = conjugators(pk)?;
    let f = b.field().clone();
    let chi = char_poly(&b);
    if !chi.is_irreducible(&f) {
        return Err(Error::WrongAttackModel(
            "conjugator has reducible characteristic polynomial".into(),
        ));
    }
    let target = polynomial_in(&b, &bm)?.ok_or(Error::NotFound)?;
    let mut best: Option<u64> = None;
    for z in f.elements()?.into_iter().filter(|z| !z.is_zero()) {
        let t: Poly = target.scale(&z, &f);
        match extension_dlog(&b, &chi, &t, budget) {
            Ok(n) => best = Some(best.map_or(n, |x| x.min(n))),
            Err(Error::NotFound) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldSpec};
    use crate::protocol::{keygen, MorParams};
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn both_attacks_find_an_equivalent_exponent() {
        for (p, d, seed) in [(5u64, 2usize, 1u64), (7, 2, 2), (5, 3, 3), (3, 3, 4)] {
            let f = Field::new(FieldSpec::prime(p).unwrap());
            let params = MorParams::new(f, d).unwrap();
            let (pk, sk) = keygen(&params, &mut ChaCha20Rng::seed_from_u64(seed)).unwrap();
            let n1 = bsgs_attack(&pk, None).unwrap();
            let n2 = mw_attack(&pk, None).unwrap();
            assert_eq!(n1, n2);
            // Oracle: phi^n reproduces the published phi^m.
            assert_eq!(pk.phi().power(&BigUint::from(n1)).unwrap(), *pk.phi_m());
            let _ = sk;
        }
    }
}
