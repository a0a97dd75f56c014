//! Two-generator presentation of SL(d, p) for d >= 5 and the constructive rewriting of
//! elementary transvections as words in C and D.
//!
//! Indices wrap: e_{i,j} = e_{d+i,j} = e_{i,d+j}.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{check_pair, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    C,
    D,
}

/// A word over {C, D} as runs of signed exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CDWord {
    field: Arc<Field>,
    d: usize,
    runs: Vec<(Generator, i64)>,
}

fn wrap(i: i64, d: usize) -> usize {
    (i - 1).rem_euclid(d as i64) as usize + 1
}

fn check_supported(field: &Field, d: usize) -> Result<()> {
    if d < 5 {
        return Err(Error::Unsupported(format!(
            "two-generator presentation needs d >= 5, got {d}"
        )));
    }
    if field.degree() != 1 {
        return Err(Error::Unsupported(
            "two-generator presentation needs a prime field".into(),
        ));
    }
    Ok(())
}

/// Sum of signed matrix units, indices wrapped.
fn units(field: &Arc<Field>, d: usize, terms: &[(i64, i64, i64)]) -> Matrix {
    let mut m = Matrix::zero(field, d);
    for &(i, j, s) in terms {
        let (r, c) = (wrap(i, d) - 1, wrap(j, d) - 1);
        let v = field.add(m.at(r, c), &field.from_i64(s));
        *m.at_mut(r, c) = v;
    }
    m
}

fn identity_plus(field: &Arc<Field>, d: usize, terms: &[(i64, i64, i64)]) -> Matrix {
    Matrix::identity(field, d)
        .add(&units(field, d, terms))
        .expect("same shape")
}

fn sign(dk: usize) -> i64 {
    if dk.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// C = 1 + e_{d-1,2} + e_{d,1} and D = (-1)^d (e_{1,2} - e_{2,3} + sum_{i=3}^{d} e_{i,i+1}).
pub fn albert_thompson_generators(field: &Arc<Field>, d: usize) -> Result<(Matrix, Matrix)> {
    check_supported(field, d)?;
    let di = d as i64;
    let c = identity_plus(field, d, &[(di - 1, 2, 1), (di, 1, 1)]);
    let s = sign(d);
    let mut terms = vec![(1, 2, s), (2, 3, -s)];
    terms.extend((3..=di).map(|i| (i, i + 1, s)));
    Ok((c, units(field, d, &terms)))
}

/// D^-1 = (-1)^d (e_{2,1} - e_{3,2} + sum_{i=3}^{d} e_{i+1,i}), as printed.
pub fn d_inverse_closed_form(field: &Arc<Field>, d: usize) -> Result<Matrix> {
    check_supported(field, d)?;
    let s = sign(d);
    let mut terms = vec![(2, 1, s), (3, 2, -s)];
    terms.extend((3..=d as i64).map(|i| (i + 1, i, s)));
    Ok(units(field, d, &terms))
}

/// C_1 = D^-1 C D = 1 - e_{d,3} + e_{1,2}, as printed.
pub fn c1_closed_form(field: &Arc<Field>, d: usize) -> Result<Matrix> {
    check_supported(field, d)?;
    Ok(identity_plus(field, d, &[(d as i64, 3, -1), (1, 2, 1)]))
}

/// D^k = (-1)^{dk} (-e_{1,1+k} - e_{2,2+k} + sum_{i=3}^{d} e_{i,i+k}), as printed.
pub fn d_power_closed_form(field: &Arc<Field>, d: usize, k: i64) -> Result<Matrix> {
    check_supported(field, d)?;
    let s = sign(d * k.unsigned_abs() as usize);
    let mut terms = vec![(1, 1 + k, -s), (2, 2 + k, -s)];
    terms.extend((3..=d as i64).map(|i| (i, i + k, s)));
    Ok(units(field, d, &terms))
}

/// D^-k = (-1)^{dk} (-e_{1+k,1} - e_{2+k,2} + sum_{i=3}^{d} e_{i+k,i}), as printed.
pub fn d_inverse_power_closed_form(field: &Arc<Field>, d: usize, k: i64) -> Result<Matrix> {
    check_supported(field, d)?;
    let s = sign(d * k.unsigned_abs() as usize);
    let mut terms = vec![(1 + k, 1, -s), (2 + k, 2, -s)];
    terms.extend((3..=d as i64).map(|i| (i + k, i, s)));
    Ok(units(field, d, &terms))
}

/// C_k = D^-k C D^k = 1 - e_{k-1,k+2} - e_{k,k+1}, as printed.
pub fn c_k_closed_form(field: &Arc<Field>, d: usize, k: i64) -> Result<Matrix> {
    check_supported(field, d)?;
    Ok(identity_plus(field, d, &[(k - 1, k + 2, -1), (k, k + 1, -1)]))
}

/// C_k^-1 = 1 + e_{k-1,k+2} + e_{k,k+1}, as printed.
pub fn c_k_inverse_closed_form(field: &Arc<Field>, d: usize, k: i64) -> Result<Matrix> {
    check_supported(field, d)?;
    Ok(identity_plus(field, d, &[(k - 1, k + 2, 1), (k, k + 1, 1)]))
}

/// Wire form: `[["C", e], ["D", e], ...]`.
pub type CDWordJson = Vec<(Generator, i64)>;

struct Ctx {
    field: Arc<Field>,
    d: usize,
    c: Matrix,
    dm: Matrix,
    c_inv: Matrix,
    d_inv: Matrix,
    ord_c: i64,
    ord_d: i64,
}

fn element_order(m: &Matrix, cap: u64) -> Result<i64> {
    let mut x = m.clone();
    for k in 1..=cap {
        if x.is_identity() {
            return Ok(k as i64);
        }
        x = &x * m;
    }
    Err(Error::Unsupported(format!("generator order exceeds {cap}")))
}

impl Ctx {
    fn new(field: &Arc<Field>, d: usize) -> Result<Self> {
        let (c, dm) = albert_thompson_generators(field, d)?;
        let c_inv = c.inv()?;
        let d_inv = dm.inv()?;
        // C is unipotent of order p; D is a signed permutation matrix of order dividing 2d.
        let cap = 4 * d as u64 * 1_000_000;
        let ord_c = element_order(&c, cap)?;
        let ord_d = element_order(&dm, cap)?;
        Ok(Ctx {
            field: field.clone(),
            d,
            c,
            dm,
            c_inv,
            d_inv,
            ord_c,
            ord_d,
        })
    }

    fn normalize(&self, runs: Vec<(Generator, i64)>) -> Vec<(Generator, i64)> {
        let mut out: Vec<(Generator, i64)> = Vec::with_capacity(runs.len());
        for (g, e) in runs {
            let ord = match g {
                Generator::C => self.ord_c,
                Generator::D => self.ord_d,
            };
            match out.last_mut() {
                Some((h, f)) if *h == g => *f += e,
                _ => out.push((g, e)),
            }
            let (_, f) = out.last_mut().unwrap();
            let mut r = f.rem_euclid(ord);
            if r > ord / 2 {
                r -= ord;
            }
            *f = r;
            if *f == 0 {
                out.pop();
            }
        }
        out
    }

    fn eval(&self, runs: &[(Generator, i64)]) -> Matrix {
        let mut m = Matrix::identity(&self.field, self.d);
        for &(g, e) in runs {
            let base = match (g, e >= 0) {
                (Generator::C, true) => &self.c,
                (Generator::C, false) => &self.c_inv,
                (Generator::D, true) => &self.dm,
                (Generator::D, false) => &self.d_inv,
            };
            m = &m * &base.pow_u64(e.unsigned_abs());
        }
        m
    }

    /// +1 or -1 if `runs` evaluates to 1 +- e_{i,j}.
    fn transvection_sign(&self, runs: &[(Generator, i64)], i: usize, j: usize) -> Option<i64> {
        let m = self.eval(runs);
        let f = &*self.field;
        for s in [1, -1] {
            let t = Matrix::transvection(&self.field, self.d, i, j, &f.from_i64(s)).ok()?;
            if m == t {
                return Some(s);
            }
        }
        None
    }

    /// Word for 1 + e_{i,j} given a word `w` for 1 + e_{a,b} with b - a = j - i (mod d).
    fn transport(&self, w: &[(Generator, i64)], a: usize, i: usize, j: usize) -> Result<Vec<(Generator, i64)>> {
        let s = (i as i64 - a as i64).rem_euclid(self.d as i64);
        let mut runs = vec![(Generator::D, -s)];
        runs.extend_from_slice(w);
        runs.push((Generator::D, s));
        let runs = self.normalize(runs);
        match self.transvection_sign(&runs, i, j) {
            Some(1) => Ok(runs),
            Some(_) => Ok(inverse(&runs)),
            None => Err(Error::Unsupported(format!(
                "conjugation by D does not carry ({a}, _) to ({i}, {j})"
            ))),
        }
    }
}

fn inverse(runs: &[(Generator, i64)]) -> Vec<(Generator, i64)> {
    runs.iter().rev().map(|&(g, e)| (g, -e)).collect()
}

fn commutator(x: &[(Generator, i64)], y: &[(Generator, i64)]) -> Vec<(Generator, i64)> {
    let mut out = x.to_vec();
    out.extend_from_slice(y);
    out.extend(inverse(x));
    out.extend(inverse(y));
    out
}

type RawWord = Vec<(Generator, i64)>;

/// For each index difference delta in 1..d, a word for 1 + e_{a, a+delta} and its row a.
fn difference_table(ctx: &Ctx) -> Result<BTreeMap<usize, (usize, RawWord)>> {
    use Generator::{C, D};
    let d = ctx.d;
    let mut table = BTreeMap::new();

    // C_1 = D^-1 C D and [C, C_1] = 1 + e_{d,2}.
    let c1 = vec![(D, -1), (C, 1), (D, 1)];
    let t_d2 = ctx.normalize(commutator(&[(C, 1)], &c1));
    if ctx.transvection_sign(&t_d2, d, 2) != Some(1) {
        return Err(Error::Unsupported("[C, C_1] is not 1 + e_{d,2}".into()));
    }

    // With C_2 = D^-2 C D^2: (1 + e_{d,2}) C_2 (1 - e_{d,2}) C_2^-1 = 1 - e_{d,3}; its inverse is [C_2, 1 + e_{d,2}].
    let c2 = vec![(D, -2), (C, 1), (D, 2)];
    let mut t_d3 = ctx.normalize(commutator(&c2, &t_d2));
    match ctx.transvection_sign(&t_d3, d, 3) {
        Some(1) => {}
        Some(_) => t_d3 = inverse(&t_d3),
        None => {
            return Err(Error::Unsupported(
                "commutator with C_2 is not a transvection at (d, 3)".into(),
            ))
        }
    }

    table.insert(2, (d, t_d2));
    table.insert(3 % d, (d, t_d3));

    // Close the set of differences under addition with the commutator
    // [1 + e_{i,i+a}, 1 + e_{i+a,i+a+b}] = 1 + e_{i,i+a+b}.
    while table.len() < d - 1 {
        let known: Vec<usize> = table.keys().copied().collect();
        let mut best: Option<(usize, Vec<(Generator, i64)>)> = None;
        for &a in &known {
            for &b in &known {
                let c = (a + b) % d;
                if c == 0 || table.contains_key(&c) {
                    continue;
                }
                let i = d;
                let mid = wrap((i + a) as i64, d);
                let end = wrap((i + a + b) as i64, d);
                let (ra, wa) = &table[&a];
                let (rb, wb) = &table[&b];
                let x = ctx.transport(wa, *ra, i, mid)?;
                let y = ctx.transport(wb, *rb, mid, end)?;
                let w = ctx.normalize(commutator(&x, &y));
                if best.as_ref().is_none_or(|(_, bw)| w.len() < bw.len()) {
                    best = Some((c, w));
                }
            }
        }
        let (c, w) = best.ok_or_else(|| Error::Unsupported("index differences do not close".into()))?;
        table.insert(c, (d, w));
    }
    Ok(table)
}

/// A word over C, D evaluating to 1 + lambda e_{i,j} in SL(d, p).
pub fn rewrite_transvection_in_cd(
    field: &Arc<Field>,
    d: usize,
    i: usize,
    j: usize,
    lambda: &FieldElement,
) -> Result<CDWord> {
    check_supported(field, d)?;
    check_pair(d, i, j)?;
    if lambda.is_zero() {
        return Err(Error::Domain("coefficient must be nonzero".into()));
    }
    let ctx = Ctx::new(field, d)?;
    let table = difference_table(&ctx)?;
    let delta = (j as i64 - i as i64).rem_euclid(d as i64) as usize;
    let (a, w) = &table[&delta];
    let unit = ctx.transport(w, *a, i, j)?;
    // 1 + lambda e = (1 + e)^lambda for lambda read as an integer in [1, p).
    let reps = num_traits::ToPrimitive::to_usize(&field.to_integer(lambda))
        .ok_or_else(|| Error::Unsupported("coefficient too large to repeat".into()))?;
    let mut runs = Vec::with_capacity(unit.len() * reps);
    for _ in 0..reps {
        runs.extend_from_slice(&unit);
    }
    Ok(CDWord {
        field: field.clone(),
        d,
        runs: ctx.normalize(runs),
    })
}

impl CDWord {
    pub fn new(field: &Arc<Field>, d: usize, runs: Vec<(Generator, i64)>) -> Result<Self> {
        check_supported(field, d)?;
        Ok(CDWord {
            field: field.clone(),
            d,
            runs,
        })
    }

    pub fn runs(&self) -> &[(Generator, i64)] {
        &self.runs
    }

    /// Total number of generator letters, counting exponents.
    pub fn letter_count(&self) -> u64 {
        self.runs.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn evaluate(&self) -> Result<Matrix> {
        let (c, dm) = albert_thompson_generators(&self.field, self.d)?;
        let mut m = Matrix::identity(&self.field, self.d);
        for &(g, e) in &self.runs {
            let base = match g {
                Generator::C => &c,
                Generator::D => &dm,
            };
            m = &m * &base.pow_i64(e)?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> CDWordJson {
        self.runs.clone()
    }
}
