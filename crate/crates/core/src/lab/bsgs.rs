//! Baby-step giant-step over any group given by its operations.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, Poly};
use crate::matrix::Matrix;

pub trait DlogGroup {
    type Elem: Clone;
    /// Canonical form used as the hash-table key; equal keys mean equal elements.
    type Key: Hash + Eq;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn key(&self, a: &Self::Elem) -> Self::Key;
}

/// Least n in [1, order_bound] with base^n = target.
///
/// `budget` caps the number of group operations; running out yields
/// [`Error::BudgetExhausted`], a miss yields [`Error::NotFound`].
pub fn bsgs_dlog<G: DlogGroup>(
    group: &G,
    base: &G::Elem,
    target: &G::Elem,
    order_bound: u64,
    budget: Option<u64>,
) -> Result<u64> {
    if order_bound == 0 {
        return Err(Error::NotFound);
    }
    let budget = budget.unwrap_or(u64::MAX);
    let mut ops = 0u64;
    let mut spend = |n: u64| -> Result<()> {
        ops += n;
        if ops > budget {
            Err(Error::BudgetExhausted(budget))
        } else {
            Ok(())
        }
    };

    let m = (order_bound as f64).sqrt().ceil() as u64;
    let m = m.max(1);
    // Baby steps: base^j for j = 1..=m, keeping the smallest j per element.
    let mut table = HashMap::with_capacity(m as usize);
    let mut x = group.identity();
    for j in 1..=m {
        spend(1)?;
        x = group.mul(&x, base);
        table.entry(group.key(&x)).or_insert(j);
    }
    // x = base^m; giant step multiplies by base^-m.
    spend(1)?;
    let giant = group.inv(&x);
    let mut y = target.clone();
    let mut i = 0u64;
    while i * m < order_bound {
        if let Some(&j) = table.get(&group.key(&y)) {
            let n = i * m + j;
            return if n <= order_bound { Ok(n) } else { Err(Error::NotFound) };
        }
        spend(1)?;
        y = group.mul(&y, &giant);
        i += 1;
    }
    Err(Error::NotFound)
}

/// The multiplicative group of a finite field.
pub struct FieldGroup(pub Arc<Field>);

impl DlogGroup for FieldGroup {
    type Elem = FieldElement;
    type Key = FieldElement;

    fn identity(&self) -> FieldElement {
        self.0.one()
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.0.mul(a, b)
    }

    fn inv(&self, a: &FieldElement) -> FieldElement {
        self.0.inv(a).expect("nonzero group element")
    }

    fn key(&self, a: &FieldElement) -> FieldElement {
        a.clone()
    }
}

/// GL(d, q) under matrix multiplication.
pub struct MatrixGroup {
    pub field: Arc<Field>,
    pub d: usize,
}

impl DlogGroup for MatrixGroup {
    type Elem = Matrix;
    type Key = Vec<FieldElement>;

    fn identity(&self) -> Matrix {
        Matrix::identity(&self.field, self.d)
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a * b
    }

    fn inv(&self, a: &Matrix) -> Matrix {
        a.inv().expect("invertible group element")
    }

    fn key(&self, a: &Matrix) -> Vec<FieldElement> {
        a.entries().to_vec()
    }
}

/// PGL(d, q): matrices up to a scalar, keyed by scaling the first nonzero entry to 1.
pub struct ProjectiveGroup {
    pub field: Arc<Field>,
    pub d: usize,
}

impl DlogGroup for ProjectiveGroup {
    type Elem = Matrix;
    type Key = Vec<FieldElement>;

    fn identity(&self) -> Matrix {
        Matrix::identity(&self.field, self.d)
    }

    fn mul(&self, a: &Matrix, b: &Matrix) -> Matrix {
        a * b
    }

    fn inv(&self, a: &Matrix) -> Matrix {
        a.inv().expect("invertible group element")
    }

    fn key(&self, a: &Matrix) -> Vec<FieldElement> {
        let f = &self.field;
        let lead = a.entries().iter().find(|e| !e.is_zero()).expect("nonzero matrix");
        let s = f.inv(lead).expect("nonzero");
        a.entries().iter().map(|e| f.mul_raw(e, &s)).collect()
    }
}

/// The unit group of F_q[x] / (modulus), elements as reduced polynomials.
pub struct QuotientRingGroup {
    pub field: Arc<Field>,
    pub modulus: Poly,
}

impl DlogGroup for QuotientRingGroup {
    type Elem = Poly;
    type Key = Poly;

    fn identity(&self) -> Poly {
        Poly::constant(self.field.one())
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul(b, &self.field).rem(&self.modulus, &self.field)
    }

    /// a^-1 = a^(q^n - 2), valid when the modulus is irreducible of degree n.
    fn inv(&self, a: &Poly) -> Poly {
        let n = self.modulus.degree().unwrap_or(0);
        let e = num_traits::pow(self.field.order().clone(), n) - 2u32;
        a.pow_mod(&e, &self.modulus, &self.field)
    }

    fn key(&self, a: &Poly) -> Poly {
        a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Arc<Field> {
        Field::new(FieldSpec::prime(p).unwrap())
    }

    #[test]
    fn base_equals_target() {
        let g = FieldGroup(gf(101));
        let b = g.0.from_u64(2);
        assert_eq!(bsgs_dlog(&g, &b, &b, 100, None), Ok(1));
    }

    #[test]
    fn f101_exponent_45() {
        let g = FieldGroup(gf(101));
        let b = g.0.from_u64(2);
        // Oracle: 45 repeated multiplications.
        let mut t = g.0.one();
        for _ in 0..45 {
            t = g.0.mul(&t, &b);
        }
        assert_eq!(bsgs_dlog(&g, &b, &t, 100, None), Ok(45));
    }

    #[test]
    fn matrix_group_exponent_12() {
        let f = gf(5);
        let g = MatrixGroup { field: f.clone(), d: 2 };
        // [[0, 1], [3, 1]] has characteristic polynomial x^2 - x - 3, irreducible over GF(5); its order is 24.
        let a = Matrix::from_u64_rows(&f, &[&[0, 1], &[3, 1]]).unwrap();
        let mut t = Matrix::identity(&f, 2);
        let mut order = 0;
        for k in 1..=24 {
            t = &t * &a;
            if t.is_identity() {
                order = k;
                break;
            }
        }
        assert!(order > 12);
        let mut t = Matrix::identity(&f, 2);
        for _ in 0..12 {
            t = &t * &a;
        }
        assert_eq!(bsgs_dlog(&g, &a, &t, 24, None), Ok(12));
    }

    #[test]
    fn agrees_with_linear_scan() {
        let f = gf(65521);
        let g = FieldGroup(f.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let b = f.random_nonzero(&mut rng);
            let t = if rng.gen_bool(0.8) {
                f.pow_u64(&b, rng.gen_range(1..65520))
            } else {
                f.random_nonzero(&mut rng)
            };
            let bound = rng.gen_range(1..=65535u64);
            let mut x = f.one();
            let mut scan = Err(Error::NotFound);
            for n in 1..=bound {
                x = f.mul(&x, &b);
                if x == t {
                    scan = Ok(n);
                    break;
                }
            }
            assert_eq!(bsgs_dlog(&g, &b, &t, bound, None), scan);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = gf(65521);
        let g = FieldGroup(f.clone());
        let b = f.from_u64(17);
        let t = f.pow_u64(&b, 60000);
        assert_eq!(bsgs_dlog(&g, &b, &t, 65520, Some(10)), Err(Error::BudgetExhausted(10)));
    }

    #[test]
    fn projective_group_ignores_scalars() {
        let f = gf(7);
        let g = ProjectiveGroup { field: f.clone(), d: 2 };
        let a = Matrix::from_u64_rows(&f, &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(g.key(&a), g.key(&a.scale(&f.from_u64(5))));
    }
}
