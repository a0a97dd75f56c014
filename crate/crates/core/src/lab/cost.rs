//! Field-multiplication accounting for automorphism composition and word statistics.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::automorphism::Automorphism;
use crate::error::Result;
use crate::field::{cost_counter, Field};
use crate::matrix::{generator_pairs, Matrix};
use crate::words::TransvectionWord;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionCost {
    pub d: usize,
    pub p: String,
    pub gamma: usize,
    /// One-time factorization of the right operand's images.
    pub setup: u64,
    /// Largest count for a single image: decomposition plus pushing the word through.
    pub per_image_max: u64,
    pub per_image_mean: f64,
    /// Setup plus all images, as computed sequentially.
    pub total: u64,
    /// (p - 1) gamma d^4 + d^4.
    pub worst_case_bound: f64,
    /// d^2 + (gamma / 2) d^2.5.
    pub estimate: f64,
}

/// (p - 1) gamma d^4 + d^4.
pub fn composition_bound(p: f64, gamma: usize, d: usize) -> f64 {
    let d4 = (d as f64).powi(4);
    (p - 1.0) * gamma as f64 * d4 + d4
}

/// d^2 + (gamma / 2) d^2.5.
pub fn composition_estimate(gamma: usize, d: usize) -> f64 {
    let d = d as f64;
    d * d + gamma as f64 / 2.0 * d.powf(2.5)
}

/// Counts field multiplications in phi o psi. Reads a process-wide counter, so
/// concurrent field work on other threads inflates the figures.
pub fn measure_composition(phi: &Automorphism, psi: &Automorphism) -> Result<CompositionCost> {
    let field = phi.field();
    let d = phi.degree();
    let start = cost_counter();
    for (i, j) in generator_pairs(d) {
        psi.apply(&Matrix::transvection(field, d, i, j, &field.one())?)?;
    }
    let setup = cost_counter() - start;
    let mut counts = Vec::new();
    for (_, img) in phi.images() {
        let before = cost_counter();
        psi.apply(img)?;
        counts.push(cost_counter() - before);
    }
    let spec = field.spec();
    let p = spec.p();
    let pf = p.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    Ok(CompositionCost {
        d,
        p: p.to_string(),
        gamma: spec.gamma(),
        setup,
        per_image_max: counts.iter().copied().max().unwrap_or(0),
        per_image_mean: counts.iter().sum::<u64>() as f64 / counts.len().max(1) as f64,
        total: setup + counts.iter().sum::<u64>(),
        worst_case_bound: composition_bound(pf, spec.gamma(), d),
        estimate: composition_estimate(spec.gamma(), d),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WordStats {
    pub d: usize,
    pub samples: usize,
    pub max_len: usize,
    pub mean_len: f64,
    /// Mean after merging adjacent letters and splitting over the ground field.
    pub mean_ground_len: f64,
}

/// Decomposition lengths of uniformly random SL(d, q) matrices.
pub fn word_length_stats<R: Rng + ?Sized>(
    field: &Arc<Field>,
    d: usize,
    samples: usize,
    rng: &mut R,
) -> Result<WordStats> {
    let (mut max_len, mut sum, mut ground) = (0usize, 0usize, 0usize);
    for _ in 0..samples {
        let m = Matrix::random_sl(field, d, rng);
        let w = TransvectionWord::decompose(&m)?;
        max_len = max_len.max(w.len());
        sum += w.len();
        ground += w.simplify().split_ground().len();
    }
    let n = samples.max(1) as f64;
    Ok(WordStats {
        d,
        samples,
        max_len,
        mean_len: sum as f64 / n,
        mean_ground_len: ground as f64 / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_figures() {
        assert_eq!(composition_bound(2.0, 4, 3), 405.0);
        assert_eq!(composition_bound(3.0, 2, 5), 3125.0);
        assert!((composition_estimate(4, 3) - (9.0 + 2.0 * 3f64.powf(2.5))).abs() < 1e-12);
    }
}
