//! Univariate polynomials with coefficients in a [`Field`].

use num_bigint::BigUint;
use num_traits::Zero;

use super::{Field, FieldElement};

/// Coefficients constant-term first, with no trailing zeros. The zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly(Vec<FieldElement>);

impl Poly {
    pub fn new(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial x.
    pub fn x(f: &Field) -> Self {
        Poly(vec![f.zero(), f.one()])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.0.last()
    }

    pub fn coeff(&self, i: usize, f: &Field) -> FieldElement {
        self.0.get(i).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| f.add(&self.coeff(i, f), &other.coeff(i, f))).collect())
    }

    pub fn sub(&self, other: &Poly, f: &Field) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| f.sub(&self.coeff(i, f), &other.coeff(i, f))).collect())
    }

    pub fn scale(&self, c: &FieldElement, f: &Field) -> Poly {
        Poly::new(self.0.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Poly, f: &Field) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![f.zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn divrem(&self, divisor: &Poly, f: &Field) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(divisor.leading().unwrap()).expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = f.mul(&rem[k], &lead_inv);
            for (t, b) in divisor.0.iter().enumerate() {
                let idx = k - dd + t;
                rem[idx] = f.sub(&rem[idx], &f.mul(&c, b));
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly, f: &Field) -> Poly {
        self.divrem(divisor, f).1
    }

    pub fn monic(&self, f: &Field) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&f.inv(l).expect("nonzero"), f),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly, f: &Field) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// self^n mod m.
    pub fn pow_mod(&self, n: &BigUint, m: &Poly, f: &Field) -> Poly {
        let mut acc = Poly::constant(f.one()).rem(m, f);
        if n.is_zero() {
            return acc;
        }
        let base = self.rem(m, f);
        for bit in (0..n.bits()).rev() {
            acc = acc.mul(&acc, f).rem(m, f);
            if n.bit(bit) {
                acc = acc.mul(&base, f).rem(m, f);
            }
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &FieldElement, f: &Field) -> FieldElement {
        self.0.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// Ben-Or test: f of degree n is irreducible iff gcd(f, x^(q^i) - x) = 1 for 1 <= i <= n/2.
    pub fn is_irreducible(&self, f: &Field) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let m = self.monic(f);
        let x = Poly::x(f);
        let q = f.order().clone();
        let mut h = x.rem(&m, f);
        for _ in 1..=n / 2 {
            h = h.pow_mod(&q, &m, f);
            let g = m.gcd(&h.sub(&x, f), f);
            if g.degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use std::sync::Arc;

    fn gf(p: u64) -> Arc<Field> {
        Field::new(FieldSpec::prime(p).unwrap())
    }

    fn poly(f: &Field, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&v| f.from_i64(v)).collect())
    }

    /// Brute-force oracle: a polynomial of degree <= 3 is irreducible iff it has no root.
    fn has_root(p: &Poly, f: &Field) -> bool {
        f.elements().unwrap().iter().any(|a| p.eval(a, f).is_zero())
    }

    #[test]
    fn divrem_reconstructs() {
        let f = gf(7);
        let a = poly(&f, &[3, 0, 5, 1, 6]);
        let b = poly(&f, &[2, 1, 1]);
        let (q, r) = a.divrem(&b, &f);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(q.mul(&b, &f).add(&r, &f), a);
    }

    #[test]
    fn irreducibility_matches_root_test_for_cubics() {
        let f = gf(5);
        for c0 in 0..5 {
            for c1 in 0..5 {
                for c2 in 0..5 {
                    let p = poly(&f, &[c0, c1, c2, 1]);
                    assert_eq!(p.is_irreducible(&f), !has_root(&p, &f), "{c0} {c1} {c2}");
                }
            }
        }
    }

    #[test]
    fn quartic_product_of_quadratics_is_reducible() {
        let f = gf(3);
        // (x^2 + 1)(x^2 + x + 2) has no root in GF(3) but is reducible.
        let a = poly(&f, &[1, 0, 1]);
        let b = poly(&f, &[2, 1, 1]);
        assert!(a.is_irreducible(&f) && b.is_irreducible(&f));
        let ab = a.mul(&b, &f);
        assert!(!has_root(&ab, &f));
        assert!(!ab.is_irreducible(&f));
    }

    #[test]
    fn gcd_is_monic() {
        let f = gf(7);
        let a = poly(&f, &[-1, 0, 1]);
        let b = poly(&f, &[-2, 2]);
        assert_eq!(a.gcd(&b, &f), poly(&f, &[-1, 1]));
    }
}
