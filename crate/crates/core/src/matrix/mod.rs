//! Dense square matrices over GF(q) and the distinguished families of SL(d, q):
//! elementary transvections, permutation, diagonal and monomial matrices.
//!
//! Public indices are 1-based, matching the matrix-unit notation e_{i,j}.

mod perm;

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

pub use perm::Permutation;

/// A d x d matrix with entries in a shared field, stored row-major.
#[derive(Clone)]
pub struct Matrix {
    field: Arc<Field>,
    n: usize,
    data: Vec<FieldElement>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.field == other.field && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over {} [", self.field.spec())?;
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.field.to_hex(self.at(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Wire form: `{"d": n, "rows": [[hex, ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub d: usize,
    pub rows: Vec<Vec<String>>,
}

impl Matrix {
    pub fn from_fn(field: &Arc<Field>, n: usize, mut entry: impl FnMut(usize, usize) -> FieldElement) -> Matrix {
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(entry(r, c));
            }
        }
        Matrix {
            field: field.clone(),
            n,
            data,
        }
    }

    /// Builds a matrix from rows, validating shape and entries.
    pub fn from_rows(field: &Arc<Field>, rows: Vec<Vec<FieldElement>>) -> Result<Matrix> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    got: row.len(),
                });
            }
            for e in row {
                field.check(&e)?;
                data.push(e);
            }
        }
        Ok(Matrix {
            field: field.clone(),
            n,
            data,
        })
    }

    pub(crate) fn from_data(field: &Arc<Field>, n: usize, data: Vec<FieldElement>) -> Matrix {
        debug_assert_eq!(data.len(), n * n);
        Matrix {
            field: field.clone(),
            n,
            data,
        }
    }

    pub fn from_u64_rows(field: &Arc<Field>, rows: &[&[u64]]) -> Result<Matrix> {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_u64(v)).collect())
                .collect(),
        )
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Matrix {
        Matrix::scalar(field, n, &field.one())
    }

    pub fn zero(field: &Arc<Field>, n: usize) -> Matrix {
        Matrix::from_fn(field, n, |_, _| field.zero())
    }

    pub fn scalar(field: &Arc<Field>, n: usize, z: &FieldElement) -> Matrix {
        Matrix::from_fn(field, n, |r, c| if r == c { z.clone() } else { field.zero() })
    }

    /// The elementary transvection 1 + lambda e_{i,j}. A zero lambda gives the identity.
    pub fn transvection(field: &Arc<Field>, d: usize, i: usize, j: usize, lambda: &FieldElement) -> Result<Matrix> {
        check_pair(d, i, j)?;
        if lambda.is_zero() {
            log::warn!("transvection ({i}, {j}) with zero coefficient is the identity");
        }
        let mut m = Matrix::identity(field, d);
        m.data[(i - 1) * d + (j - 1)] = lambda.clone();
        Ok(m)
    }

    /// The matrix with P e_c = e_{alpha(c)}, so that P^-1 (1 + l e_{i,j}) P = 1 + l e_{alpha^-1(i), alpha^-1(j)}.
    pub fn permutation(field: &Arc<Field>, alpha: &Permutation) -> Matrix {
        let n = alpha.degree();
        Matrix::from_fn(field, n, |r, c| {
            if alpha.apply(c + 1) == r + 1 {
                field.one()
            } else {
                field.zero()
            }
        })
    }

    pub fn diagonal(field: &Arc<Field>, w: &[FieldElement]) -> Result<Matrix> {
        if w.iter().any(FieldElement::is_zero) {
            return Err(Error::Domain("zero diagonal entry".into()));
        }
        for e in w {
            field.check(e)?;
        }
        Ok(Matrix::from_fn(field, w.len(), |r, c| {
            if r == c {
                w[r].clone()
            } else {
                field.zero()
            }
        }))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Entry (i, j), 1-based.
    pub fn entry(&self, i: usize, j: usize) -> &FieldElement {
        assert!((1..=self.n).contains(&i) && (1..=self.n).contains(&j));
        self.at(i - 1, j - 1)
    }

    pub(crate) fn at(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.n + c]
    }

    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElement {
        &mut self.data[r * self.n + c]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.data.chunks(self.n).map(<[_]>::to_vec).collect()
    }

    pub fn check_compatible(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        if self.n != other.n {
            return Err(Error::Dimension {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(())
    }

    /// Schoolbook product: exactly n^3 counted field multiplications.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let (f, n) = (&*self.field, self.n);
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = f.zero();
                for k in 0..n {
                    acc = f.add(&acc, &f.mul(self.at(r, k), other.at(k, c)));
                }
                data.push(acc);
            }
        }
        Matrix::from_data(&self.field, n, data)
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        let f = &*self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect();
        Ok(Matrix::from_data(&self.field, self.n, data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        let f = &*self.field;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect();
        Ok(Matrix::from_data(&self.field, self.n, data))
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        let f = &*self.field;
        Matrix::from_data(&self.field, self.n, self.data.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.n, |r, c| self.at(c, r).clone())
    }

    pub fn trace(&self) -> FieldElement {
        let f = &*self.field;
        (0..self.n).fold(f.zero(), |acc, k| f.add(&acc, self.at(k, k)))
    }

    /// Determinant by Gaussian elimination, pivoting on the first nonzero entry.
    pub fn det(&self) -> FieldElement {
        let f = &*self.field;
        let n = self.n;
        let mut a = self.rows();
        let mut det = f.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return f.zero();
            };
            if p != c {
                a.swap(p, c);
                det = f.neg(&det);
            }
            det = f.mul(&det, &a[c][c]);
            let inv = f.inv(&a[c][c]).expect("nonzero pivot");
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let t = f.mul(&a[r][c], &inv);
                for k in c..n {
                    let v = f.mul(&t, &a[c][k]);
                    a[r][k] = f.sub(&a[r][k], &v);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination on [M | 1].
    pub fn inv(&self) -> Result<Matrix> {
        let f = &*self.field;
        let n = self.n;
        let mut a = self.rows();
        let mut b = Matrix::identity(&self.field, n).rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, c);
            b.swap(p, c);
            let inv = f.inv(&a[c][c])?;
            for k in 0..n {
                a[c][k] = f.mul(&a[c][k], &inv);
                b[c][k] = f.mul(&b[c][k], &inv);
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let t = a[r][c].clone();
                for k in 0..n {
                    let va = f.mul(&t, &a[c][k]);
                    a[r][k] = f.sub(&a[r][k], &va);
                    let vb = f.mul(&t, &b[c][k]);
                    b[r][k] = f.sub(&b[r][k], &vb);
                }
            }
        }
        Ok(Matrix::from_data(&self.field, n, b.into_iter().flatten().collect()))
    }

    /// M^e by square-and-multiply; M^0 = 1.
    pub fn pow(&self, e: &BigUint) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.n);
        for bit in (0..e.bits()).rev() {
            acc = acc.mul_unchecked(&acc);
            if e.bit(bit) {
                acc = acc.mul_unchecked(self);
            }
        }
        acc
    }

    pub fn pow_u64(&self, e: u64) -> Matrix {
        self.pow(&BigUint::from(e))
    }

    /// Signed power; negative exponents invert first.
    pub fn pow_i64(&self, e: i64) -> Result<Matrix> {
        if e < 0 {
            Ok(self.inv()?.pow_u64(e.unsigned_abs()))
        } else {
            Ok(self.pow_u64(e as u64))
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.field, self.n)
    }

    /// The scalar z if this matrix equals z * 1.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        let z = self.at(0, 0).clone();
        (*self == Matrix::scalar(&self.field, self.n, &z)).then_some(z)
    }

    /// (i, j, lambda) if this matrix is the elementary transvection 1 + lambda e_{i,j}, lambda != 0.
    pub fn as_transvection(&self) -> Option<(usize, usize, FieldElement)> {
        let f = &*self.field;
        let mut found = None;
        for r in 0..self.n {
            for c in 0..self.n {
                let e = self.at(r, c);
                if r == c {
                    if !f.is_one(e) {
                        return None;
                    }
                } else if !e.is_zero() {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((r + 1, c + 1, e.clone()));
                }
            }
        }
        found
    }

    pub fn is_sl(&self) -> bool {
        self.field.is_one(&self.det())
    }

    pub fn is_gl(&self) -> bool {
        !self.det().is_zero()
    }

    /// A^-1 X A.
    pub fn conjugate(&self, a: &Matrix) -> Result<Matrix> {
        self.check_compatible(a)?;
        let ai = a.inv()?;
        Ok(ai.mul_unchecked(self).mul_unchecked(a))
    }

    /// [a, b] = a b a^-1 b^-1.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self
            .mul_unchecked(other)
            .mul_unchecked(&self.inv()?)
            .mul_unchecked(&other.inv()?))
    }

    /// Entrywise map, e.g. a Frobenius power.
    pub fn map(&self, mut g: impl FnMut(&FieldElement) -> FieldElement) -> Matrix {
        Matrix::from_data(&self.field, self.n, self.data.iter().map(&mut g).collect())
    }

    /// Uniform element of GL(n, q) by rejection sampling.
    pub fn random_gl<R: Rng + ?Sized>(field: &Arc<Field>, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::from_fn(field, n, |_, _| field.random(rng));
            if m.is_gl() {
                return m;
            }
        }
    }

    /// Uniform element of SL(n, q): a random invertible matrix with its first row divided by det.
    pub fn random_sl<R: Rng + ?Sized>(field: &Arc<Field>, n: usize, rng: &mut R) -> Matrix {
        let mut m = Matrix::random_gl(field, n, rng);
        let dinv = field.inv(&m.det()).expect("invertible");
        for c in 0..n {
            let v = field.mul(m.at(0, c), &dinv);
            *m.at_mut(0, c) = v;
        }
        m
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            d: self.n,
            rows: (0..self.n)
                .map(|r| (0..self.n).map(|c| self.field.to_hex(self.at(r, c))).collect())
                .collect(),
        }
    }

    pub fn from_json(field: &Arc<Field>, json: &MatrixJson) -> Result<Matrix> {
        if json.rows.len() != json.d {
            return Err(Error::Format(format!(
                "matrix declares d = {} but has {} rows",
                json.d,
                json.rows.len()
            )));
        }
        let rows = json
            .rows
            .iter()
            .map(|r| r.iter().map(|h| field.from_hex(h)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(field, rows).map_err(|e| Error::Format(e.to_string()))
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    /// Panics on mismatched fields or dimensions; use [`Matrix::mul`] to get an error instead.
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix::mul(self, rhs).expect("compatible matrices")
    }
}

pub(crate) fn check_pair(d: usize, i: usize, j: usize) -> Result<()> {
    if i == j {
        return Err(Error::Index(format!("transvection needs i != j, got ({i}, {j})")));
    }
    if !(1..=d).contains(&i) || !(1..=d).contains(&j) {
        return Err(Error::Index(format!("({i}, {j}) outside 1..={d}")));
    }
    Ok(())
}

/// All ordered pairs (i, j), i != j, in lexicographic order.
pub fn generator_pairs(d: usize) -> Vec<(usize, usize)> {
    (1..=d)
        .flat_map(|i| (1..=d).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}
