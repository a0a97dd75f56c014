//! Attacks and parameter analysis at desk scale.

mod bsgs;
mod centralizer;
mod charpoly;
mod cost;
mod keyattack;
mod lift;
mod menezes_wu;
mod monomial;
mod params;

pub use bsgs::{bsgs_dlog, DlogGroup, FieldGroup, MatrixGroup, ProjectiveGroup, QuotientRingGroup};
pub use centralizer::centralizer_space;
pub use charpoly::{char_poly, companion_matrix, is_irreducible};
pub use cost::{
    composition_bound, composition_estimate, measure_composition, word_length_stats, CompositionCost, WordStats,
};
pub use keyattack::{bsgs_attack, mw_attack};
pub use lift::{lift_operator, LiftedOperator};
pub use menezes_wu::{mw_reduce, polynomial_in};
pub use monomial::{
    crt_merge, monomial_cycle_attack, monomial_matrix, multiplicative_order, orbit_length_distribution, MonomialReport,
    OrbitReport,
};
pub use params::{
    log2_big, pgl_order, validate_params, Regime, SecurityEstimate, INDEX_CALCULUS_C, REFERENCE_FIELD_BITS,
};
