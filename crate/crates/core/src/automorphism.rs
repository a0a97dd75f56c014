//! Automorphisms of SL(d, q) presented by generator images.
//!
//! An [`Automorphism`] stores, for every ordered pair (i, j) with i != j, the image of
//! 1 + e_{i,j}. For conjugations the image of 1 + lambda e_{i,j} is 1 + lambda (N - 1)
//! where N is the stored image, so d^2 - d matrices determine the whole map.
//!
//! Composition is read left to right: `compose(phi, psi)` maps X to psi(phi(X)).
//! For conjugations this means `compose(from_conjugator(A), from_conjugator(B))`
//! equals `from_conjugator(A * B)`.
//!
//! Conjugator recovery solves the linear system (1 + e_{i,j}) B = B N_{i,j} for B.
//! It works directly on the generator images, so no basis of the matrix algebra
//! inside SL(d, q) is needed.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, FieldSpec};
use crate::linalg::Echelon;
use crate::matrix::{check_pair, generator_pairs, Matrix, MatrixJson};
use crate::words::TransvectionWord;

pub const COMPOSITION_CONVENTION: &str = "(phi o psi)(X) = psi(phi(X))";

type RankOne = Option<(Vec<FieldElement>, Vec<FieldElement>)>;

#[derive(Clone)]
pub struct Automorphism {
    field: Arc<Field>,
    d: usize,
    /// Images in `generator_pairs(d)` order.
    images: Vec<Matrix>,
    /// Lazily computed factorizations N - 1 = u v^T.
    factors: Vec<OnceLock<RankOne>>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.field == other.field && self.images == other.images
    }
}

impl Eq for Automorphism {}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Automorphism")
            .field("field", self.field.spec())
            .field("d", &self.d)
            .field("images", &self.images)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageJson {
    pub i: usize,
    pub j: usize,
    pub matrix: MatrixJson,
}

/// Wire form, images sorted by (i, j).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismJson {
    pub d: usize,
    pub spec: FieldSpec,
    pub convention: String,
    pub images: Vec<ImageJson>,
}

fn pair_index(d: usize, i: usize, j: usize) -> usize {
    (i - 1) * (d - 1) + if j < i { j - 1 } else { j - 2 }
}

impl Automorphism {
    fn from_images_unchecked(field: &Arc<Field>, d: usize, images: Vec<Matrix>) -> Self {
        let factors = (0..images.len()).map(|_| OnceLock::new()).collect();
        Automorphism {
            field: field.clone(),
            d,
            images,
            factors,
        }
    }

    fn with_factors(field: &Arc<Field>, d: usize, images: Vec<Matrix>, factors: Vec<RankOne>) -> Self {
        let factors = factors.into_iter().map(OnceLock::from).collect();
        Automorphism {
            field: field.clone(),
            d,
            images,
            factors,
        }
    }

    pub fn identity(field: &Arc<Field>, d: usize) -> Self {
        let images = generator_pairs(d)
            .into_iter()
            .map(|(i, j)| Matrix::transvection(field, d, i, j, &field.one()).expect("valid pair"))
            .collect();
        Automorphism::from_images_unchecked(field, d, images)
    }

    /// Builds a presentation from explicit images; every pair must appear once and every image must lie in SL.
    pub fn from_images(
        field: &Arc<Field>,
        d: usize,
        images: impl IntoIterator<Item = ((usize, usize), Matrix)>,
    ) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidAutomorphism(format!("degree {d} < 2")));
        }
        let mut slots: Vec<Option<Matrix>> = vec![None; d * (d - 1)];
        for ((i, j), m) in images {
            check_pair(d, i, j)?;
            if m.field() != field {
                return Err(Error::SpecMismatch);
            }
            if m.dim() != d {
                return Err(Error::Dimension {
                    expected: d,
                    got: m.dim(),
                });
            }
            if !m.is_sl() {
                return Err(Error::InvalidAutomorphism(format!("image of ({i}, {j}) is not in SL")));
            }
            let k = pair_index(d, i, j);
            if slots[k].replace(m).is_some() {
                return Err(Error::InvalidAutomorphism(format!("duplicate image for ({i}, {j})")));
            }
        }
        let images = slots
            .into_iter()
            .zip(generator_pairs(d))
            .map(|(m, (i, j))| m.ok_or_else(|| Error::InvalidAutomorphism(format!("missing image for ({i}, {j})"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Automorphism::from_images_unchecked(field, d, images))
    }

    /// X -> A^-1 X A. The image of 1 + e_{i,j} is 1 + (A^-1 e_i)(e_j^T A).
    pub fn from_conjugator(a: &Matrix) -> Result<Self> {
        let f = &**a.field();
        let d = a.dim();
        let ai = a.inv()?;
        let mut images = Vec::with_capacity(d * (d - 1));
        let mut factors = Vec::with_capacity(d * (d - 1));
        for (i, j) in generator_pairs(d) {
            let u: Vec<FieldElement> = (0..d).map(|r| ai.at(r, i - 1).clone()).collect();
            let v: Vec<FieldElement> = (0..d).map(|c| a.at(j - 1, c).clone()).collect();
            let mut m = Matrix::identity(a.field(), d);
            for (r, ur) in u.iter().enumerate() {
                if ur.is_zero() {
                    continue;
                }
                for (c, vc) in v.iter().enumerate() {
                    if !vc.is_zero() {
                        let e = m.at_mut(r, c);
                        *e = f.add(e, &f.mul(ur, vc));
                    }
                }
            }
            images.push(m);
            factors.push(Some((u, v)));
        }
        Ok(Automorphism::with_factors(a.field(), d, images, factors))
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// Image of 1 + e_{i,j}.
    pub fn image(&self, i: usize, j: usize) -> &Matrix {
        &self.images[pair_index(self.d, i, j)]
    }

    /// Images in (i, j) order.
    pub fn images(&self) -> impl Iterator<Item = ((usize, usize), &Matrix)> {
        generator_pairs(self.d).into_iter().zip(&self.images)
    }

    pub fn is_identity(&self) -> bool {
        *self == Automorphism::identity(&self.field, self.d)
    }

    fn check_compatible(&self, other: &Automorphism) -> Result<()> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        if self.d != other.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: other.d,
            });
        }
        Ok(())
    }

    fn rank_one(&self, k: usize) -> &RankOne {
        self.factors[k].get_or_init(|| {
            let f = &*self.field;
            let d = self.d;
            let e = self.images[k]
                .sub(&Matrix::identity(&self.field, d))
                .expect("same shape");
            let (r, c) = (0..d * d)
                .map(|t| (t / d, t % d))
                .find(|&(r, c)| !e.at(r, c).is_zero())?;
            let pinv = f.inv(e.at(r, c)).expect("nonzero");
            let u: Vec<FieldElement> = (0..d).map(|t| e.at(t, c).clone()).collect();
            let v: Vec<FieldElement> = (0..d).map(|t| f.mul(e.at(r, t), &pinv)).collect();
            for (t, ut) in u.iter().enumerate() {
                for (s, vs) in v.iter().enumerate() {
                    let expected = if ut.is_zero() || vs.is_zero() {
                        f.zero()
                    } else {
                        f.mul(ut, vs)
                    };
                    if expected != *e.at(t, s) {
                        return None;
                    }
                }
            }
            Some((u, v))
        })
    }

    /// phi(X) for X in SL: decompose X into letters and multiply their images.
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        if x.field() != &self.field {
            return Err(Error::SpecMismatch);
        }
        if x.dim() != self.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: x.dim(),
            });
        }
        let word = TransvectionWord::decompose(x)?;
        Ok(self.apply_word(&word))
    }

    /// Product of the images of the letters of `word`.
    pub fn apply_word(&self, word: &TransvectionWord) -> Matrix {
        let f = &*self.field;
        let d = self.d;
        let mut m = Matrix::identity(&self.field, d);
        for l in word.letters() {
            let k = pair_index(d, l.i, l.j);
            match self.rank_one(k) {
                Some((u, v)) => {
                    // M (1 + lambda u v^T) = M + lambda (M u) v^T
                    for r in 0..d {
                        let mut mu = f.zero();
                        for (c, uc) in u.iter().enumerate() {
                            let mrc = m.at(r, c);
                            if !uc.is_zero() && !mrc.is_zero() {
                                mu = f.add(&mu, &f.mul(mrc, uc));
                            }
                        }
                        if mu.is_zero() {
                            continue;
                        }
                        let w = f.mul(&mu, &l.lambda);
                        for (c, vc) in v.iter().enumerate() {
                            if !vc.is_zero() {
                                let e = m.at_mut(r, c);
                                *e = f.add(e, &f.mul(&w, vc));
                            }
                        }
                    }
                }
                None => {
                    let e = self.images[k]
                        .sub(&Matrix::identity(&self.field, d))
                        .expect("same shape");
                    let step = (&m * &e).scale(&l.lambda);
                    m = m.add(&step).expect("same shape");
                }
            }
        }
        m
    }

    /// (phi o psi)(X) = psi(phi(X)): each image of phi pushed through psi.
    pub fn compose(&self, psi: &Automorphism) -> Result<Automorphism> {
        self.check_compatible(psi)?;
        let images = self.images.iter().map(|m| psi.apply(m)).collect::<Result<Vec<_>>>()?;
        Ok(Automorphism::from_images_unchecked(&self.field, self.d, images))
    }

    /// phi^m by left-to-right square-and-multiply; phi^0 is the identity.
    pub fn power(&self, m: &BigUint) -> Result<Automorphism> {
        if m.is_zero() {
            return Ok(Automorphism::identity(&self.field, self.d));
        }
        let mut acc = self.clone();
        for bit in (0..m.bits() - 1).rev() {
            acc = acc.compose(&acc)?;
            if m.bit(bit) {
                acc = acc.compose(self)?;
            }
        }
        Ok(acc)
    }

    pub fn power_u64(&self, m: u64) -> Result<Automorphism> {
        self.power(&BigUint::from(m))
    }

    fn conjugacy_rows(&self, k: usize, i: usize, j: usize) -> Vec<Vec<FieldElement>> {
        // Unknown B in row-major order; (e_{i,j} B - B (N - 1))[r][c] = 0 for all r, c.
        let f = &*self.field;
        let d = self.d;
        let n = &self.images[k];
        let mut rows = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let mut row = vec![f.zero(); d * d];
                if r == i - 1 {
                    row[(j - 1) * d + c] = f.one();
                }
                for t in 0..d {
                    let mut coeff = n.at(t, c).clone();
                    if t == c {
                        coeff = f.sub(&coeff, &f.one());
                    }
                    if !coeff.is_zero() {
                        let idx = r * d + t;
                        row[idx] = f.sub(&row[idx], &coeff);
                    }
                }
                rows.push(row);
            }
        }
        rows
    }

    /// Basis of {B : (1 + e_{i,j}) B = B N_{i,j} for all (i, j)}.
    pub fn conjugator_solution_space(&self) -> Vec<Matrix> {
        let d = self.d;
        let mut ech = Echelon::new(&self.field, d * d);
        for (k, (i, j)) in generator_pairs(d).into_iter().enumerate() {
            for row in self.conjugacy_rows(k, i, j) {
                ech.insert(row);
            }
        }
        ech.nullspace()
            .into_iter()
            .map(|v| Matrix::from_data(&self.field, d, v))
            .collect()
    }

    fn satisfies(&self, b: &Matrix) -> bool {
        self.images().all(|((i, j), n)| {
            let t = Matrix::transvection(&self.field, self.d, i, j, &self.field.one()).expect("valid pair");
            &t * b == b * n
        })
    }

    /// An invertible B with phi(X) = B^-1 X B, unique up to a nonzero scalar.
    pub fn recover_conjugator(&self) -> Result<Matrix> {
        let d = self.d;
        let mut ech = Echelon::new(&self.field, d * d);
        'outer: for (k, (i, j)) in generator_pairs(d).into_iter().enumerate() {
            for row in self.conjugacy_rows(k, i, j) {
                ech.insert(row);
                if ech.rank() == d * d - 1 {
                    break 'outer;
                }
            }
        }
        let basis: Vec<Matrix> = ech
            .nullspace()
            .into_iter()
            .map(|v| Matrix::from_data(&self.field, d, v))
            .collect();
        let candidate = pick_nonsingular(&self.field, &basis)
            .ok_or_else(|| Error::InvalidAutomorphism("no invertible conjugator exists".into()))?;
        if !self.satisfies(&candidate) {
            return Err(Error::InvalidAutomorphism(
                "generator images are not simultaneously realized by one conjugation".into(),
            ));
        }
        Ok(candidate)
    }

    /// phi^-1 = from_conjugator(B^-1) for a recovered conjugator B.
    pub fn invert(&self) -> Result<Automorphism> {
        let b = self.recover_conjugator()?;
        Automorphism::from_conjugator(&b.inv()?)
    }

    /// phi^(t - 1) where t is the least positive exponent with phi^t = 1; for cross-checks at toy scale.
    pub fn invert_by_order(&self, max_order: u64) -> Result<Automorphism> {
        let mut prev = Automorphism::identity(&self.field, self.d);
        let mut acc = self.clone();
        for _ in 1..=max_order {
            if acc.is_identity() {
                return Ok(prev);
            }
            prev = acc.clone();
            acc = acc.compose(self)?;
        }
        Err(Error::Unsupported(format!("order exceeds {max_order}")))
    }

    pub fn to_json(&self) -> AutomorphismJson {
        AutomorphismJson {
            d: self.d,
            spec: self.field.spec().clone(),
            convention: COMPOSITION_CONVENTION.to_string(),
            images: self
                .images()
                .map(|((i, j), m)| ImageJson {
                    i,
                    j,
                    matrix: m.to_json(),
                })
                .collect(),
        }
    }

    /// Parses against an existing field; a different spec is rejected.
    pub fn from_json(field: &Arc<Field>, json: &AutomorphismJson) -> Result<Self> {
        if json.spec != *field.spec() {
            return Err(Error::SpecMismatch);
        }
        let images = json
            .images
            .iter()
            .map(|im| {
                let m = Matrix::from_json(field, &im.matrix)?;
                Ok(((im.i, im.j), m))
            })
            .collect::<Result<Vec<_>>>()?;
        Automorphism::from_images(field, json.d, images)
    }
}

/// First invertible element among the basis vectors, then among small combinations
/// sum c_k b_k with c_k scanned lexicographically over {0, 1, ..., 3}.
fn pick_nonsingular(field: &Arc<Field>, basis: &[Matrix]) -> Option<Matrix> {
    if let Some(b) = basis.iter().find(|b| b.is_gl()) {
        return Some(b.clone());
    }
    if basis.is_empty() || basis.len() > 6 {
        return None;
    }
    let scan: Vec<FieldElement> = (0..4u64).map(|c| field.from_u64(c)).collect();
    let mut idx = vec![0usize; basis.len()];
    loop {
        let mut k = basis.len();
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < scan.len() {
                break;
            }
            idx[k] = 0;
        }
        let d = basis[0].dim();
        let mut m = Matrix::zero(field, d);
        for (b, &c) in basis.iter().zip(&idx) {
            if c != 0 {
                m = m.add(&b.scale(&scan[c])).expect("same shape");
            }
        }
        if m.is_gl() {
            return Some(m);
        }
    }
}

/// X -> (X^-1)^T.
pub fn apply_graph(x: &Matrix) -> Result<Matrix> {
    Ok(x.inv()?.transpose())
}

/// Entrywise Frobenius a -> a^(p^i).
pub fn apply_field(x: &Matrix, i: usize) -> Result<Matrix> {
    let f = x.field().clone();
    if i >= f.degree() {
        return Err(Error::Domain(format!(
            "Frobenius power {i} outside [0, {})",
            f.degree()
        )));
    }
    Ok(x.map(|a| f.frobenius(a, i).expect("in range")))
}

/// An element of the group generated by the graph and field automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BAutomorphism {
    pub graph: bool,
    pub field_power: usize,
}

impl BAutomorphism {
    pub fn apply(&self, x: &Matrix) -> Result<Matrix> {
        let y = if self.graph { apply_graph(x)? } else { x.clone() };
        apply_field(&y, self.field_power)
    }

    /// Applies `self`, then `other`.
    pub fn then(&self, other: &BAutomorphism, gamma: usize) -> BAutomorphism {
        BAutomorphism {
            graph: self.graph ^ other.graph,
            field_power: (self.field_power + other.field_power) % gamma,
        }
    }

    pub fn order(&self, gamma: usize) -> usize {
        use num_integer::Integer;
        let field_order = gamma / gamma.gcd(&self.field_power);
        let field_order = if self.field_power == 0 { 1 } else { field_order };
        field_order.lcm(&if self.graph { 2 } else { 1 })
    }
}
