//! Words in elementary transvections.
//!
//! A [`TransvectionWord`] is an ordered product of letters 1 + lambda e_{i,j}.
//! [`decompose`](TransvectionWord::decompose) writes any matrix of determinant one
//! as such a product using row additions only, with at most d^2 letters.

mod cd;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{check_pair, Matrix};

pub use cd::{
    albert_thompson_generators, c1_closed_form, c_k_closed_form, c_k_inverse_closed_form, d_inverse_closed_form,
    d_inverse_power_closed_form, d_power_closed_form, rewrite_transvection_in_cd, CDWord, CDWordJson, Generator,
};

/// The letter 1 + lambda e_{i,j}, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub i: usize,
    pub j: usize,
    pub lambda: FieldElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransvectionWord {
    field: Arc<Field>,
    d: usize,
    letters: Vec<Letter>,
}

/// Wire form: a list of `[i, j, hex-lambda]` triples.
pub type TransvectionWordJson = Vec<(usize, usize, String)>;

impl TransvectionWord {
    pub fn new(field: &Arc<Field>, d: usize, letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            check_pair(d, l.i, l.j)?;
            field.check(&l.lambda)?;
            if l.lambda.is_zero() {
                return Err(Error::Domain(format!("letter ({}, {}) has zero coefficient", l.i, l.j)));
            }
        }
        Ok(TransvectionWord {
            field: field.clone(),
            d,
            letters,
        })
    }

    pub fn empty(field: &Arc<Field>, d: usize) -> Self {
        TransvectionWord {
            field: field.clone(),
            d,
            letters: Vec::new(),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Left-to-right product. Each letter is a column update costing d multiplications.
    pub fn evaluate(&self) -> Matrix {
        let f = &*self.field;
        let d = self.d;
        let mut m = Matrix::identity(&self.field, d);
        for l in &self.letters {
            let (ci, cj) = (l.i - 1, l.j - 1);
            for r in 0..d {
                let v = f.mul(m.at(r, ci), &l.lambda);
                let e = m.at_mut(r, cj);
                *e = f.add(e, &v);
            }
        }
        m
    }

    /// Row reduction of `m` to the identity by operations R_a += t R_b.
    pub fn decompose(m: &Matrix) -> Result<Self> {
        let f = &**m.field();
        let n = m.dim();
        if !m.is_sl() {
            return Err(Error::NotInSl);
        }
        let mut a = m.rows();
        let mut letters = Vec::new();
        let mut op = |a: &mut Vec<Vec<FieldElement>>, dst: usize, src: usize, t: FieldElement| {
            for k in 0..n {
                if !a[src][k].is_zero() {
                    let v = f.mul(&t, &a[src][k]);
                    a[dst][k] = f.add(&a[dst][k], &v);
                }
            }
            letters.push(Letter {
                i: dst + 1,
                j: src + 1,
                lambda: f.neg(&t),
            });
        };
        for c in 0..n {
            if !f.is_one(&a[c][c]) && c + 1 < n {
                let below = (c + 1..n).find(|&r| !a[r][c].is_zero());
                let r = match below {
                    Some(r) => r,
                    None => {
                        op(&mut a, c + 1, c, f.one());
                        c + 1
                    }
                };
                let t = f.div(&f.sub(&f.one(), &a[c][c]), &a[r][c])?;
                op(&mut a, c, r, t);
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let t = f.neg(&a[r][c]);
                    op(&mut a, r, c, t);
                }
            }
        }
        debug_assert!(a
            .iter()
            .enumerate()
            .all(|(r, row)| row.iter().enumerate().all(|(c, e)| {
                if r == c {
                    f.is_one(e)
                } else {
                    e.is_zero()
                }
            })));
        Ok(TransvectionWord {
            field: m.field().clone(),
            d: n,
            letters,
        })
    }

    /// Merges adjacent letters on the same position and drops identities, to a fixed point.
    pub fn simplify(&self) -> Self {
        let f = &*self.field;
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            match out.last_mut() {
                Some(top) if top.i == l.i && top.j == l.j => {
                    top.lambda = f.add(&top.lambda, &l.lambda);
                    if top.lambda.is_zero() {
                        out.pop();
                    }
                }
                _ if l.lambda.is_zero() => {}
                _ => out.push(l.clone()),
            }
        }
        TransvectionWord {
            field: self.field.clone(),
            d: self.d,
            letters: out,
        }
    }

    /// Splits each coefficient over the polynomial basis into ground-field multiples of x^s.
    pub fn split_ground(&self) -> Self {
        let f = &*self.field;
        let mut out = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            for (s, c) in f.coeffs(&l.lambda).iter().enumerate() {
                if !num_traits::Zero::is_zero(c) {
                    out.push(Letter {
                        i: l.i,
                        j: l.j,
                        lambda: f.basis_multiple(c, s).expect("coefficient < p"),
                    });
                }
            }
        }
        TransvectionWord {
            field: self.field.clone(),
            d: self.d,
            letters: out,
        }
    }

    pub fn inverse(&self) -> Self {
        let f = &*self.field;
        TransvectionWord {
            field: self.field.clone(),
            d: self.d,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    i: l.i,
                    j: l.j,
                    lambda: f.neg(&l.lambda),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> TransvectionWordJson {
        self.letters
            .iter()
            .map(|l| (l.i, l.j, self.field.to_hex(&l.lambda)))
            .collect()
    }

    pub fn from_json(field: &Arc<Field>, d: usize, json: &TransvectionWordJson) -> Result<Self> {
        let letters = json
            .iter()
            .map(|(i, j, h)| {
                Ok(Letter {
                    i: *i,
                    j: *j,
                    lambda: field.from_hex(h)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TransvectionWord::new(field, d, letters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64, g: usize) -> Arc<Field> {
        Field::new(FieldSpec::new(BigUint::from(p), g).unwrap())
    }

    fn letter(i: usize, j: usize, lambda: FieldElement) -> Letter {
        Letter { i, j, lambda }
    }

    #[test]
    fn evaluate_small_words() {
        let f = gf(7, 1);
        let (l, m) = (f.from_u64(3), f.from_u64(5));
        assert!(TransvectionWord::empty(&f, 3).evaluate().is_identity());
        let w = TransvectionWord::new(&f, 3, vec![letter(1, 2, l.clone()), letter(1, 2, f.neg(&l))]).unwrap();
        assert!(w.evaluate().is_identity());
        let w = TransvectionWord::new(
            &f,
            3,
            vec![
                letter(1, 2, l.clone()),
                letter(2, 3, m.clone()),
                letter(1, 2, f.neg(&l)),
                letter(2, 3, f.neg(&m)),
            ],
        )
        .unwrap();
        assert_eq!(w.evaluate(), Matrix::transvection(&f, 3, 1, 3, &f.mul(&l, &m)).unwrap());
    }

    #[test]
    fn decompose_round_trip_and_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, g) in [(2u64, 1usize), (3, 1), (5, 1), (2, 3), (3, 2), (7, 2)] {
            let f = gf(p, g);
            for d in 2..=6 {
                for _ in 0..20 {
                    let m = Matrix::random_sl(&f, d, &mut rng);
                    let w = TransvectionWord::decompose(&m).unwrap();
                    assert!(w.len() <= d * d);
                    assert_eq!(w.evaluate(), m);
                }
            }
        }
    }

    #[test]
    fn decompose_worst_case_diagonal() {
        // diag(t, 1, ..., 1, t^-1) needs the two-row trick in the first column.
        let f = gf(7, 1);
        for d in 2..=5 {
            let mut w = vec![f.one(); d];
            w[0] = f.from_u64(3);
            w[d - 1] = f.inv(&f.from_u64(3)).unwrap();
            let m = Matrix::diagonal(&f, &w).unwrap();
            let word = TransvectionWord::decompose(&m).unwrap();
            assert!(word.len() <= d * d);
            assert_eq!(word.evaluate(), m);
        }
    }

    #[test]
    fn decompose_special_inputs() {
        let f = gf(5, 1);
        assert!(TransvectionWord::decompose(&Matrix::identity(&f, 4))
            .unwrap()
            .is_empty());
        let l = f.from_u64(3);
        for (i, j) in crate::matrix::generator_pairs(4) {
            let t = Matrix::transvection(&f, 4, i, j, &l).unwrap();
            let w = TransvectionWord::decompose(&t).unwrap();
            assert_eq!(w.letters(), &[letter(i, j, l.clone())]);
        }
        let bad = Matrix::scalar(&f, 2, &f.from_u64(2));
        assert_eq!(TransvectionWord::decompose(&bad), Err(Error::NotInSl));
    }

    #[test]
    fn simplify_cases() {
        let f = gf(7, 1);
        let (l, m) = (f.from_u64(2), f.from_u64(4));
        let w = TransvectionWord::new(&f, 3, vec![letter(1, 2, l.clone()), letter(1, 2, m.clone())]).unwrap();
        assert_eq!(w.simplify().letters(), &[letter(1, 2, f.add(&l, &m))]);
        let w = TransvectionWord::new(&f, 3, vec![letter(1, 2, l.clone()), letter(1, 2, f.neg(&l))]).unwrap();
        assert!(w.simplify().is_empty());
        let w = TransvectionWord::new(&f, 3, vec![letter(1, 2, l.clone()), letter(2, 1, l.clone())]).unwrap();
        assert_eq!(w.simplify(), w);
        // Cancellation exposes a new mergeable pair.
        let w = TransvectionWord::new(
            &f,
            3,
            vec![
                letter(1, 3, l.clone()),
                letter(2, 3, m.clone()),
                letter(2, 3, f.neg(&m)),
                letter(1, 3, l.clone()),
            ],
        )
        .unwrap();
        assert_eq!(w.simplify().letters(), &[letter(1, 3, f.add(&l, &l))]);
    }

    #[test]
    fn split_ground_gf8() {
        let f = gf(2, 3);
        let one = BigUint::from(1u32);
        let zero = BigUint::from(0u32);
        let x2_plus_1 = f.from_coeffs(&[one.clone(), zero.clone(), one.clone()]).unwrap();
        let w = TransvectionWord::new(&f, 3, vec![letter(1, 2, x2_plus_1)]).unwrap();
        let s = w.split_ground();
        let x2 = f.from_coeffs(&[zero.clone(), zero, one]).unwrap();
        assert_eq!(s.letters(), &[letter(1, 2, f.one()), letter(1, 2, x2)]);
        assert_eq!(s.simplify(), w);
        assert_eq!(s.evaluate(), w.evaluate());
    }

    #[test]
    fn split_ground_prime_field_is_identity() {
        let f = gf(7, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w = TransvectionWord::decompose(&Matrix::random_sl(&f, 4, &mut rng)).unwrap();
        assert_eq!(w.split_ground(), w);
    }

    #[test]
    fn json_round_trip() {
        let f = gf(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let w = TransvectionWord::decompose(&Matrix::random_sl(&f, 3, &mut rng)).unwrap();
        let text = serde_json::to_string(&w.to_json()).unwrap();
        let back: TransvectionWordJson = serde_json::from_str(&text).unwrap();
        assert_eq!(TransvectionWord::from_json(&f, 3, &back).unwrap(), w);
    }
}
