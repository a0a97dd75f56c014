use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// The d^2 x d^2 matrix of X -> A^-1 X A on the matrix algebra, in the basis of
/// matrix units e_{i,j} ordered row-major. Conjugation by A then B lifts to
/// `lift(B) * lift(A)`, so `lift(A * B) = lift(B) * lift(A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedOperator {
    d: usize,
    matrix: Matrix,
}

pub fn lift_operator(a: &Matrix) -> Result<LiftedOperator> {
    let f = a.field();
    let d = a.dim();
    let ai = a.inv()?;
    let n = d * d;
    // Column (i, j) is vec(A^-1 e_{i,j} A): entry (k, l) equals (A^-1)_{k,i} A_{j,l}.
    let m = Matrix::from_fn(f, n, |row, col| {
        let (k, l) = (row / d, row % d);
        let (i, j) = (col / d, col % d);
        f.mul(ai.at(k, i), a.at(j, l))
    });
    Ok(LiftedOperator { d, matrix: m })
}

impl LiftedOperator {
    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.d * self.d
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The operator applied to vec(X), reshaped back to d x d.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.dim() != self.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: x.dim(),
            });
        }
        if x.field() != self.matrix.field() {
            return Err(Error::SpecMismatch);
        }
        let f = x.field();
        let n = self.dim();
        let v = x.entries();
        let out: Vec<_> = (0..n)
            .map(|r| {
                (0..n).fold(f.zero(), |acc, c| {
                    let m = self.matrix.at(r, c);
                    if m.is_zero() || v[c].is_zero() {
                        acc
                    } else {
                        f.add(&acc, &f.mul(m, &v[c]))
                    }
                })
            })
            .collect();
        Ok(Matrix::from_data(f, self.d, out))
    }
}
