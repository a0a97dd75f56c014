//! Bit-packed polynomials over GF(2), used to find and validate binary moduli.

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Gf2Poly(Vec<u64>);

impl Gf2Poly {
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut words = vec![0u64; bits.len().div_ceil(64).max(1)];
        for (i, &b) in bits.iter().enumerate() {
            if b {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        Self(words).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.len() > 1 && *self.0.last().unwrap() == 0 {
            self.0.pop();
        }
        self
    }

    fn degree(&self) -> Option<usize> {
        for (w, &word) in self.0.iter().enumerate().rev() {
            if word != 0 {
                return Some(w * 64 + 63 - word.leading_zeros() as usize);
            }
        }
        None
    }

    fn bit(&self, i: usize) -> bool {
        self.0.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    fn xor_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        let (wo, bo) = (shift / 64, shift % 64);
        let need = other.0.len() + wo + 1;
        if self.0.len() < need {
            self.0.resize(need, 0);
        }
        for (t, &w) in other.0.iter().enumerate() {
            self.0[t + wo] ^= w << bo;
            if bo > 0 {
                self.0[t + wo + 1] ^= w >> (64 - bo);
            }
        }
    }

    fn rem(mut self, m: &Gf2Poly) -> Gf2Poly {
        let dm = m.degree().expect("nonzero modulus");
        while let Some(d) = self.degree() {
            if d < dm {
                break;
            }
            self.xor_shifted(m, d - dm);
        }
        self.trimmed()
    }

    fn square_mod(&self, m: &Gf2Poly) -> Gf2Poly {
        let mut out = Gf2Poly(vec![0; self.0.len() * 2 + 1]);
        if let Some(d) = self.degree() {
            for i in 0..=d {
                if self.bit(i) {
                    out.0[(2 * i) / 64] |= 1 << ((2 * i) % 64);
                }
            }
        }
        out.rem(m)
    }

    fn gcd(a: Gf2Poly, b: Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (a.trimmed(), b.trimmed());
        while b.degree().is_some() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            Some(n) if n >= 1 => n,
            _ => return false,
        };
        let x = Gf2Poly(vec![2]);
        let mut h = x.clone().rem(self);
        for _ in 1..=n / 2 {
            h = h.square_mod(self);
            let mut diff = h.clone();
            diff.xor_shifted(&x, 0);
            if Gf2Poly::gcd(self.clone(), diff.trimmed()).degree() != Some(0) {
                return false;
            }
        }
        true
    }
}

/// Smallest monic irreducible of degree `gamma` over GF(2) when candidates are
/// enumerated with the constant term as the fastest-moving digit (integer order of
/// the coefficient vector). Returns coefficient bits c_0..c_gamma.
pub(crate) fn smallest_irreducible(gamma: usize) -> Vec<bool> {
    assert!(gamma >= 2);
    // c_0 = 0 means x divides the candidate, so only odd constant terms are visited;
    // c_1..c_{gamma-1} then count upward with c_1 moving fastest.
    let mut counter = vec![false; gamma - 1];
    loop {
        let mut bits = vec![false; gamma + 1];
        bits[0] = true;
        bits[gamma] = true;
        bits[1..gamma].copy_from_slice(&counter);
        let terms = bits.iter().filter(|&&b| b).count();
        if terms % 2 == 1 && Gf2Poly::from_bits(&bits).is_irreducible() {
            return bits;
        }
        let mut k = 0;
        loop {
            assert!(k < counter.len(), "exhausted degree-{gamma} candidates");
            if counter[k] {
                counter[k] = false;
                k += 1;
            } else {
                counter[k] = true;
                break;
            }
        }
    }
}
