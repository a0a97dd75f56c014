//! Cycle attack on conjugation by monomial matrices.
//!
//! Such an automorphism sends 1 + e_{i,j} to 1 + lambda_{i,j} e_{beta(i,j)} for a
//! permutation beta of the ordered pairs. Along a beta-orbit of length L the
//! coefficients multiply to a cycle product Lambda with phi^L(1 + e_{i,j}) =
//! 1 + Lambda e_{i,j}. Position displacement gives m mod L; the coefficient of
//! phi^m(1 + e_{i,j}) is Lambda^s times a known partial product, where m = r + sL,
//! so s is a discrete logarithm in F_q^*.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bsgs::{bsgs_dlog, FieldGroup};
use crate::automorphism::Automorphism;
use crate::error::{Error, Result};
use crate::field::prime::factor_small;
use crate::field::{Field, FieldElement};
use crate::matrix::{generator_pairs, Matrix, Permutation};
use crate::protocol::MorPublicKey;

type Pair = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub pairs: Vec<Pair>,
    pub length: u64,
    /// m mod length.
    pub displacement: u64,
    /// Base and target of the F_q^* instance Lambda^s = target, as field hex strings.
    pub dlp_base: String,
    pub dlp_target: String,
    pub base_order: u64,
    pub dlp_solution: u64,
    pub residue: u64,
    pub modulus: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialReport {
    /// beta as (pair, image pair) in generator order.
    pub beta: Vec<(Pair, Pair)>,
    pub orbits: Vec<OrbitReport>,
    /// Order of beta.
    pub nu: u64,
    pub m_mod_nu: u64,
    /// Combined congruence m = residue (mod modulus).
    pub residue: u64,
    pub modulus: u64,
    /// All residues of m modulo nu (q - 1) consistent with the data.
    pub full_modulus: u64,
    pub recovered_residues: Vec<u64>,
}

impl MonomialReport {
    pub fn contains(&self, m: &num_bigint::BigUint) -> bool {
        (m % self.modulus).to_u64() == Some(self.residue)
    }
}

/// diag(w) P_alpha.
pub fn monomial_matrix(field: &std::sync::Arc<Field>, w: &[FieldElement], alpha: &Permutation) -> Result<Matrix> {
    Matrix::diagonal(field, w)?.mul(&Matrix::permutation(field, alpha))
}

fn read_action(phi: &Automorphism) -> Result<HashMap<Pair, (Pair, FieldElement)>> {
    let mut out = HashMap::new();
    for ((i, j), img) in phi.images() {
        let (a, b, l) = img
            .as_transvection()
            .ok_or_else(|| Error::WrongAttackModel(format!("image of 1 + e_({i},{j}) is not a single transvection")))?;
        out.insert((i, j), ((a, b), l));
    }
    Ok(out)
}

/// Multiplicative order of a nonzero element of a field with q - 1 < 2^64.
pub fn multiplicative_order(field: &Field, x: &FieldElement) -> Result<u64> {
    let n = (field.order() - 1u32)
        .to_u64()
        .ok_or_else(|| Error::Unsupported("field too large".into()))?;
    let mut ord = n;
    for (p, _) in factor_small(n) {
        while ord % p == 0 && field.is_one(&field.pow_u64(x, ord / p)) {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Merges m = a1 (mod n1) with m = a2 (mod n2); None if inconsistent.
pub fn crt_merge(a1: u64, n1: u64, a2: u64, n2: u64) -> Option<(u64, u64)> {
    let (a1, n1, a2, n2) = (a1 as i128, n1 as i128, a2 as i128, n2 as i128);
    let eg = n1.extended_gcd(&n2);
    let g = eg.gcd;
    if (a2 - a1) % g != 0 {
        return None;
    }
    let l = n1 / g * n2;
    let t = ((a2 - a1) / g * eg.x).rem_euclid(n2 / g);
    let r = (a1 + n1 * t).rem_euclid(l);
    Some((r as u64, l as u64))
}

pub fn monomial_cycle_attack(pk: &MorPublicKey, budget: Option<u64>) -> Result<MonomialReport> {
    let field = pk.params().field().clone();
    let q1 = (field.order() - 1u32)
        .to_u64()
        .ok_or_else(|| Error::Unsupported("field too large for the cycle attack".into()))?;
    let d = pk.params().degree();
    let phi = read_action(pk.phi())?;
    let phi_m = read_action(pk.phi_m())?;
    let pairs = generator_pairs(d);
    let beta: Vec<(Pair, Pair)> = pairs.iter().map(|p| (*p, phi[p].0)).collect();

    let mut seen = HashMap::new();
    let mut orbits = Vec::new();
    let (mut residue, mut modulus) = (0u64, 1u64);
    let mut nu = 1u64;
    for &start in &pairs {
        if seen.contains_key(&start) {
            continue;
        }
        let mut orbit = vec![start];
        let mut p = phi[&start].0;
        while p != start {
            orbit.push(p);
            p = phi[&p].0;
        }
        for &x in &orbit {
            seen.insert(x, ());
        }
        let len = orbit.len();
        let target_pos = phi_m[&start].0;
        let r = orbit.iter().position(|&x| x == target_pos).ok_or(Error::NotFound)?;
        // The same displacement must hold along the whole orbit.
        for (k, x) in orbit.iter().enumerate() {
            if phi_m[x].0 != orbit[(k + r) % len] {
                return Err(Error::NotFound);
            }
        }
        let cycle = orbit.iter().fold(field.one(), |acc, x| field.mul(&acc, &phi[x].1));
        let partial = orbit[..r].iter().fold(field.one(), |acc, x| field.mul(&acc, &phi[x].1));
        let target = field.div(&phi_m[&start].1, &partial)?;
        let ord = multiplicative_order(&field, &cycle)?;
        let s = if field.is_one(&cycle) {
            if !field.is_one(&target) {
                return Err(Error::NotFound);
            }
            0
        } else {
            bsgs_dlog(&FieldGroup(field.clone()), &cycle, &target, ord, budget)? % ord
        };
        let l = len as u64;
        let o_mod = l * ord;
        let o_res = (r as u64 + l * s) % o_mod;
        let (nr, nm) = crt_merge(residue, modulus, o_res, o_mod).ok_or(Error::NotFound)?;
        residue = nr;
        modulus = nm;
        nu = nu.lcm(&l);
        orbits.push(OrbitReport {
            pairs: orbit,
            length: l,
            displacement: r as u64,
            dlp_base: field.to_hex(&cycle),
            dlp_target: field.to_hex(&target),
            base_order: ord,
            dlp_solution: s,
            residue: o_res,
            modulus: o_mod,
        });
    }
    let full_modulus = nu * q1;
    let recovered_residues = (0..full_modulus / modulus).map(|k| residue + k * modulus).collect();
    Ok(MonomialReport {
        beta,
        orbits,
        nu,
        m_mod_nu: residue % nu,
        residue,
        modulus,
        full_modulus,
        recovered_residues,
    })
}

/// Orbit lengths of beta on ordered pairs for random point permutations, as length -> count.
pub fn orbit_length_distribution<R: Rng + ?Sized>(d: usize, samples: usize, rng: &mut R) -> BTreeMap<usize, u64> {
    let mut hist = BTreeMap::new();
    let pairs = generator_pairs(d);
    for _ in 0..samples {
        let alpha = Permutation::random(d, rng);
        let mut seen = vec![false; pairs.len()];
        for (k, &start) in pairs.iter().enumerate() {
            if seen[k] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            loop {
                seen[pairs.iter().position(|&x| x == p).unwrap()] = true;
                len += 1;
                p = (alpha.apply(p.0), alpha.apply(p.1));
                if p == start {
                    break;
                }
            }
            *hist.entry(len).or_insert(0) += 1;
        }
    }
    hist
}
