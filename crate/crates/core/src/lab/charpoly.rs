use crate::field::Poly;
use crate::matrix::Matrix;

/// Monic characteristic polynomial det(x 1 - M), by reduction to upper Hessenberg form
/// followed by the standard determinant recurrence. No division by anything but pivots.
pub fn char_poly(m: &Matrix) -> Poly {
    let f = &**m.field();
    let n = m.dim();
    let mut h = m.rows();

    for c in 0..n.saturating_sub(2) {
        let Some(p) = (c + 1..n).find(|&r| !h[r][c].is_zero()) else {
            continue;
        };
        if p != c + 1 {
            h.swap(p, c + 1);
            for row in h.iter_mut() {
                row.swap(p, c + 1);
            }
        }
        let pinv = f.inv(&h[c + 1][c]).expect("nonzero pivot");
        for r in c + 2..n {
            if h[r][c].is_zero() {
                continue;
            }
            let u = f.mul(&h[r][c], &pinv);
            for k in 0..n {
                let v = f.mul(&u, &h[c + 1][k]);
                h[r][k] = f.sub(&h[r][k], &v);
            }
            for row in h.iter_mut() {
                let v = f.mul(&u, &row[r]);
                row[c + 1] = f.add(&row[c + 1], &v);
            }
        }
    }

    let x = Poly::x(f);
    let mut p: Vec<Poly> = vec![Poly::constant(f.one())];
    for k in 1..=n {
        let lin = x.sub(&Poly::constant(h[k - 1][k - 1].clone()), f);
        let mut pk = lin.mul(&p[k - 1], f);
        let mut t = f.one();
        for i in 1..k {
            t = f.mul(&t, &h[k - i][k - i - 1]);
            if t.is_zero() {
                break;
            }
            let coeff = f.mul(&t, &h[k - i - 1][k - 1]);
            pk = pk.sub(&p[k - i - 1].scale(&coeff, f), f);
        }
        p.push(pk);
    }
    p.pop().unwrap()
}

pub fn is_irreducible(poly: &Poly, field: &crate::field::Field) -> bool {
    poly.is_irreducible(field)
}

/// Companion matrix of a monic polynomial of degree n >= 1.
pub fn companion_matrix(field: &std::sync::Arc<crate::field::Field>, poly: &Poly) -> Matrix {
    let n = poly.degree().expect("nonzero polynomial");
    Matrix::from_fn(field, n, |r, c| {
        if c == n - 1 {
            field.neg(&poly.coeff(r, field))
        } else if r == c + 1 {
            field.one()
        } else {
            field.zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldSpec};
    use num_bigint::BigUint;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Oracle: det(t 1 - M) computed by elimination at every t in the field.
    fn agrees_pointwise(m: &Matrix, p: &Poly) -> bool {
        let f = m.field();
        f.elements().unwrap().iter().all(|t| {
            let shifted = Matrix::scalar(f, m.dim(), t).sub(m).unwrap();
            shifted.det() == p.eval(t, f)
        })
    }

    #[test]
    fn identity_gives_power_of_x_minus_one() {
        let f = Field::new(FieldSpec::prime(7).unwrap());
        let p = char_poly(&Matrix::identity(&f, 4));
        let xm1 = Poly::new(vec![f.from_i64(-1), f.one()]);
        let mut e = Poly::constant(f.one());
        for _ in 0..4 {
            e = e.mul(&xm1, &f);
        }
        assert_eq!(p, e);
    }

    #[test]
    fn random_matrices_match_determinant_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for (p, g) in [(7u64, 1usize), (11, 1), (2, 3), (3, 2)] {
            let f = Field::new(FieldSpec::new(BigUint::from(p), g).unwrap());
            for n in 1..=6 {
                let m = Matrix::from_fn(&f, n, |_, _| f.random(&mut rng));
                let cp = char_poly(&m);
                assert_eq!(cp.degree(), Some(n));
                assert!(f.is_one(cp.leading().unwrap()));
                if f.order() > &BigUint::from(n as u64) {
                    assert!(agrees_pointwise(&m, &cp), "GF({p}^{g}) n = {n}");
                }
            }
        }
    }

    #[test]
    fn companion_round_trip() {
        let f = Field::new(FieldSpec::prime(5).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for n in 1..=6 {
            let mut c: Vec<_> = (0..n).map(|_| f.random(&mut rng)).collect();
            c.push(f.one());
            let poly = Poly::new(c);
            assert_eq!(char_poly(&companion_matrix(&f, &poly)), poly);
        }
    }

    #[test]
    fn sparse_matrix_needing_pivot_swap() {
        let f = Field::new(FieldSpec::prime(7).unwrap());
        let m = Matrix::from_u64_rows(&f, &[&[1, 0, 0, 2], &[0, 3, 0, 0], &[0, 0, 0, 1], &[5, 0, 1, 0]]).unwrap();
        assert!(agrees_pointwise(&m, &char_poly(&m)));
    }
}
