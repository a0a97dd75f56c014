//! Parameter report: target field of the lifted DLP, index-calculus and square-root cost estimates.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::charpoly::char_poly;
use super::lift::lift_operator;
use crate::error::Result;
use crate::field::FieldSpec;
use crate::matrix::Matrix;

/// (64/9)^(1/3), the number field sieve constant; o(1) is taken as 0.
pub const INDEX_CALCULUS_C: f64 = 1.923;

/// Reference field size in bits below which a warning is emitted.
pub const REFERENCE_FIELD_BITS: f64 = 160.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Subexponential,
    Exponential,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SecurityEstimate {
    pub d: usize,
    /// Decimal.
    pub q: String,
    pub log2_q: f64,
    pub lift_charpoly_irreducible: Option<bool>,
    pub dlp_field_exponent: usize,
    pub target_field: String,
    pub index_calculus_c: f64,
    pub index_calculus_log_cost: f64,
    pub index_calculus_regime: Regime,
    /// The d vs log q comparison uses base-2 logarithms.
    pub regime_log_base: u32,
    pub sqrt_attack_bits: f64,
    /// log2 |PGL(d, q)|, the size of the inner-diagonal automorphism group.
    pub log2_pgl_order: f64,
    pub warnings: Vec<String>,
}

/// log2 of a positive integer, accurate to f64 precision for any size.
pub fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top = (n >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.log2() + shift as f64
}

/// |PGL(d, q)| = q^{d(d-1)/2} prod_{i=2}^{d} (q^i - 1).
pub fn pgl_order(d: usize, q: &BigUint) -> BigUint {
    let mut n = num_traits::pow(q.clone(), d * (d - 1) / 2);
    for i in 2..=d {
        n *= num_traits::pow(q.clone(), i) - 1u32;
    }
    n
}

/// Field label "𝔽_{p^k}" for q^{d^2} = p^k.
fn field_label(p: &BigUint, k: u64) -> String {
    format!("𝔽_{{{p}^{{{k}}}}}")
}

pub fn validate_params(d: usize, spec: &FieldSpec, a: Option<&Matrix>) -> Result<SecurityEstimate> {
    let q = spec.order();
    let log2_q = log2_big(&q);
    let k = d * d;
    let ln_big_q = k as f64 * log2_q * std::f64::consts::LN_2;
    let log_cost_nats = INDEX_CALCULUS_C * ln_big_q.cbrt() * ln_big_q.ln().powf(2.0 / 3.0);
    let regime = if (d as f64) > log2_q {
        Regime::Exponential
    } else {
        Regime::Subexponential
    };
    let lift_irreducible = match a {
        Some(a) => {
            let lifted = lift_operator(a)?;
            Some(char_poly(lifted.matrix()).is_irreducible(a.field()))
        }
        None => None,
    };
    let mut warnings = Vec::new();
    if log2_q < REFERENCE_FIELD_BITS {
        warnings.push(format!("field size 2^{log2_q:.1} is below the 2^160 reference"));
    }
    if lift_irreducible == Some(false) {
        warnings.push("characteristic polynomial of the lifted operator is reducible".into());
    }
    Ok(SecurityEstimate {
        d,
        q: q.to_string(),
        log2_q,
        lift_charpoly_irreducible: lift_irreducible,
        dlp_field_exponent: k,
        target_field: field_label(spec.p(), (spec.gamma() * k) as u64),
        index_calculus_c: INDEX_CALCULUS_C,
        index_calculus_log_cost: log_cost_nats / std::f64::consts::LN_2,
        index_calculus_regime: regime,
        regime_log_base: 2,
        sqrt_attack_bits: 0.5 * k as f64 * log2_q,
        log2_pgl_order: log2_big(&pgl_order(d, &q)),
        warnings,
    })
}

impl SecurityEstimate {
    /// Two-column text table.
    pub fn table(&self) -> String {
        let irr = match self.lift_charpoly_irreducible {
            Some(b) => b.to_string(),
            None => "not checked".into(),
        };
        let rows = [
            ("d", self.d.to_string()),
            ("q", self.q.clone()),
            ("log2 q", format!("{:.2}", self.log2_q)),
            ("DLP field exponent", self.dlp_field_exponent.to_string()),
            ("target field", self.target_field.clone()),
            (
                "index calculus cost (bits)",
                format!("{:.1}", self.index_calculus_log_cost),
            ),
            (
                "index calculus regime",
                format!("{:?}", self.index_calculus_regime).to_lowercase(),
            ),
            ("square-root attack (bits)", format!("{:.1}", self.sqrt_attack_bits)),
            ("log2 |PGL(d, q)|", format!("{:.1}", self.log2_pgl_order)),
            ("lifted char poly irreducible", irr),
        ];
        let mut out = String::new();
        for (k, v) in rows {
            out.push_str(&format!("{k:<30} {v}\n"));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_parameters() {
        let spec = FieldSpec::new(BigUint::from(2u32), 160).unwrap();
        let e = validate_params(7, &spec, None).unwrap();
        assert_eq!(e.dlp_field_exponent, 49);
        assert_eq!(e.target_field, "𝔽_{2^{7840}}");
        assert_eq!(e.index_calculus_regime, Regime::Subexponential);
        assert!(e.warnings.is_empty());
        assert!((e.sqrt_attack_bits - 3920.0).abs() < 1e-9);
    }

    #[test]
    fn regimes() {
        let gf2 = FieldSpec::prime(2).unwrap();
        let e = validate_params(3, &gf2, None).unwrap();
        assert_eq!(e.index_calculus_regime, Regime::Exponential);
        assert_eq!(e.warnings.len(), 1);
        let big = FieldSpec::new(BigUint::from(2u32), 64).unwrap();
        assert_eq!(
            validate_params(2, &big, None).unwrap().index_calculus_regime,
            Regime::Subexponential
        );
    }

    #[test]
    fn pgl_orders() {
        // |PGL(2, q)| = q (q^2 - 1).
        for q in [2u32, 3, 5, 7, 9] {
            assert_eq!(pgl_order(2, &BigUint::from(q)), BigUint::from(q * (q * q - 1)));
        }
        // |PGL(3, 2)| = |GL(3, 2)| = 168.
        assert_eq!(pgl_order(3, &BigUint::from(2u32)), BigUint::from(168u32));
    }

    #[test]
    fn log2_of_large_numbers() {
        let n = BigUint::from(1u32) << 7840u32;
        assert!((log2_big(&n) - 7840.0).abs() < 1e-9);
        assert!((log2_big(&BigUint::from(1000u32)) - 1000f64.log2()).abs() < 1e-12);
    }
}
