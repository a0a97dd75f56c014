//! Row echelon forms, nullspaces and linear solves over a finite field.

use crate::field::{Field, FieldElement};

/// A reduced row echelon basis that accepts rows one at a time.
pub struct Echelon<'a> {
    field: &'a Field,
    ncols: usize,
    /// Rows in RREF, sorted by pivot column.
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl<'a> Echelon<'a> {
    pub fn new(field: &'a Field, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    fn reduce(&self, v: &mut [FieldElement]) {
        let f = self.field;
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let c = v[*pivot].clone();
            for (k, r) in row.iter().enumerate().skip(*pivot) {
                if !r.is_zero() {
                    v[k] = f.sub(&v[k], &f.mul(&c, r));
                }
            }
        }
    }

    /// Adds a row to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<FieldElement>) -> bool {
        assert_eq!(v.len(), self.ncols);
        let f = self.field;
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(&v[pivot]).expect("nonzero pivot");
        for x in v.iter_mut().skip(pivot) {
            if !x.is_zero() {
                *x = f.mul(x, &inv);
            }
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let c = row[pivot].clone();
            for k in pivot..self.ncols {
                if !v[k].is_zero() {
                    row[k] = f.sub(&row[k], &f.mul(&c, &v[k]));
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, v));
        true
    }

    /// Basis of {x : row . x = 0 for every inserted row}, one vector per free column,
    /// ordered by free column.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let f = self.field;
        let mut is_pivot = vec![false; self.ncols];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.ncols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = vec![f.zero(); self.ncols];
                x[free] = f.one();
                for (p, row) in &self.rows {
                    x[*p] = f.neg(&row[free]);
                }
                x
            })
            .collect()
    }
}

pub fn nullspace(field: &Field, rows: &[Vec<FieldElement>], ncols: usize) -> Vec<Vec<FieldElement>> {
    let mut e = Echelon::new(field, ncols);
    for r in rows {
        e.insert(r.clone());
    }
    e.nullspace()
}

/// One solution of `a x = b`, if any (free variables set to zero).
pub fn solve(field: &Field, a: &[Vec<FieldElement>], b: &[FieldElement]) -> Option<Vec<FieldElement>> {
    let n = a.first().map_or(0, Vec::len);
    let mut e = Echelon::new(field, n + 1);
    for (row, rhs) in a.iter().zip(b) {
        let mut v = row.clone();
        v.push(rhs.clone());
        e.insert(v);
    }
    if e.rows.iter().any(|(p, _)| *p == n) {
        return None;
    }
    let mut x = vec![field.zero(); n];
    for (p, row) in &e.rows {
        x[*p] = row[n].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    #[test]
    fn nullspace_of_rank_one_system() {
        let f = Field::new(FieldSpec::prime(5).unwrap());
        let row = vec![f.from_u64(1), f.from_u64(2), f.from_u64(3)];
        let ns = nullspace(&f, std::slice::from_ref(&row), 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = row
                .iter()
                .zip(&v)
                .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Field::new(FieldSpec::prime(7).unwrap());
        let e = |v: u64| f.from_u64(v);
        let a = vec![vec![e(1), e(1)], vec![e(1), e(6)]];
        let x = solve(&f, &a, &[e(3), e(1)]).unwrap();
        assert_eq!(f.add(&x[0], &x[1]), e(3));
        assert_eq!(f.sub(&x[0], &x[1]), e(1));
        let singular = vec![vec![e(1), e(1)], vec![e(2), e(2)]];
        assert!(solve(&f, &singular, &[e(1), e(3)]).is_none());
    }
}
