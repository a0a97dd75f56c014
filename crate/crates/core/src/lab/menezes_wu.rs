//! Matrix discrete logarithms with irreducible characteristic polynomial, moved into
//! the extension field F_q[x] / chi_A where x plays the role of an eigenvalue of A.

use num_traits::ToPrimitive;

use super::bsgs::{bsgs_dlog, QuotientRingGroup};
use super::charpoly::char_poly;
use crate::error::{Error, Result};
use crate::field::Poly;
use crate::linalg::solve;
use crate::matrix::Matrix;

/// Coefficients c with A' = sum_k c_k A^k, k < n, if A' lies in F_q[A].
pub fn polynomial_in(a: &Matrix, a_prime: &Matrix) -> Result<Option<Poly>> {
    a.check_compatible(a_prime)?;
    let f = a.field();
    let n = a.dim();
    let mut powers = vec![Matrix::identity(f, n)];
    for k in 1..n {
        powers.push(&powers[k - 1] * a);
    }
    let rows: Vec<_> = (0..n * n)
        .map(|e| powers.iter().map(|p| p.entries()[e].clone()).collect())
        .collect();
    Ok(solve(f, &rows, a_prime.entries()).map(Poly::new))
}

/// Least m >= 1 with A^m = A'.
///
/// Needs chi_A irreducible of degree n; the DLP is then solved in F_{q^n}^* by
/// baby-step giant-step with bound q^n - 1.
pub fn mw_reduce(a: &Matrix, a_prime: &Matrix, budget: Option<u64>) -> Result<u64> {
    let f = a.field();
    let chi = char_poly(a);
    if !chi.is_irreducible(f) {
        return Err(Error::Unsupported("characteristic polynomial is reducible".into()));
    }
    let target = polynomial_in(a, a_prime)?.ok_or(Error::NotFound)?;
    extension_dlog(a, &chi, &target, budget)
}

pub(crate) fn extension_dlog(a: &Matrix, chi: &Poly, target: &Poly, budget: Option<u64>) -> Result<u64> {
    let f = a.field();
    if target.is_zero() {
        return Err(Error::NotFound);
    }
    let bound = (num_traits::pow(f.order().clone(), a.dim()) - 1u32)
        .to_u64()
        .ok_or_else(|| Error::Unsupported("extension field too large for a desk-scale DLP".into()))?;
    let group = QuotientRingGroup {
        field: f.clone(),
        modulus: chi.clone(),
    };
    bsgs_dlog(&group, &Poly::x(f).rem(chi, f), target, bound, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Field, FieldSpec};
    use crate::lab::companion_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn order_by_scan(a: &Matrix, cap: u64) -> u64 {
        let mut x = a.clone();
        for k in 1..=cap {
            if x.is_identity() {
                return k;
            }
            x = &x * a;
        }
        panic!("order above {cap}");
    }

    #[test]
    fn exponent_one() {
        let f = Field::new(FieldSpec::prime(7).unwrap());
        let a = Matrix::from_u64_rows(&f, &[&[0, 4], &[1, 1]]).unwrap();
        assert!(char_poly(&a).is_irreducible(&f));
        assert_eq!(mw_reduce(&a, &a, None), Ok(1));
    }

    #[test]
    fn companion_quadratic_exponent_23() {
        let f = Field::new(FieldSpec::prime(7).unwrap());
        // Pick x^2 + b x + c with no root mod 7 whose companion matrix has order 48.
        let mut found = None;
        'search: for b in 0..7u64 {
            for c in 1..7u64 {
                if (0..7u64).any(|r| (r * r + b * r + c) % 7 == 0) {
                    continue;
                }
                let poly = Poly::new(vec![f.from_u64(c), f.from_u64(b), f.one()]);
                let a = companion_matrix(&f, &poly);
                if order_by_scan(&a, 48) == 48 {
                    found = Some(a);
                    break 'search;
                }
            }
        }
        let a = found.expect("primitive quadratic exists");
        let mut a23 = Matrix::identity(&f, 2);
        for _ in 0..23 {
            a23 = &a23 * &a;
        }
        assert_eq!(mw_reduce(&a, &a23, None), Ok(23));
    }

    #[test]
    fn random_cubics_match_repeated_multiplication() {
        let f = Field::new(FieldSpec::prime(5).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut tried = 0;
        while tried < 10 {
            let a = Matrix::random_gl(&f, 3, &mut rng);
            if !char_poly(&a).is_irreducible(&f) {
                continue;
            }
            tried += 1;
            let ord = order_by_scan(&a, 124);
            let m = rng.gen_range(1..500u64);
            let mut am = Matrix::identity(&f, 3);
            for _ in 0..m {
                am = &am * &a;
            }
            let got = mw_reduce(&a, &am, None).unwrap();
            assert_eq!(got, (m - 1) % ord + 1);
        }
    }

    #[test]
    fn reducible_and_foreign_targets() {
        let f = Field::new(FieldSpec::prime(5).unwrap());
        let id = Matrix::identity(&f, 2);
        assert!(matches!(mw_reduce(&id, &id, None), Err(Error::Unsupported(_))));
        let a = Matrix::from_u64_rows(&f, &[&[0, 3], &[1, 0]]).unwrap();
        assert!(char_poly(&a).is_irreducible(&f));
        let other = Matrix::from_u64_rows(&f, &[&[1, 1], &[0, 1]]).unwrap();
        assert_eq!(mw_reduce(&a, &other, None), Err(Error::NotFound));
    }
}
