//! Exact computations with Plücker forms: the total wedge product of `m`
//! vectors of `∧^r V` (`dim V = rm`), its polars and singular loci, the
//! Grassmannian recognized from the form's tangent data, and determinant
//! divisors of bundle pairs on the projective line.

pub mod bundle_pairs;
pub mod error;
pub mod exterior;
pub mod grassmann;
pub mod plucker_form;
pub mod scalars;

pub use bundle_pairs::{
    classify_point, det_map_matrix, det_map_rank, diagonal_factor_check, divisor_value, evaluation_matrix,
    has_plucker_form, lambda_image, make_pair, span_dimension, two_point_surjectivity, BundlePairP1, DivisorReport,
    P1Point,
};
pub use error::{Error, Result};
pub use exterior::{contract, merge_sign, plucker_relations_hold, random_exterior, ExteriorVector, MultiIndex};
pub use grassmann::{
    ev_m_det, is_decomposable, lemma33_threshold, mu_rank, plucker_embed, theorem31_classify, ClassifierVerdict,
    GrassPoint, VerdictTag,
};
pub use plucker_form::{
    build_tangent_system, diagonal_multiplicity, eval_form, expand_form, multiplicity_at, polar, tangent_codim,
    PointTuple,
};
pub use scalars::{mat_rank, sample_scalar, DenseMatrix, Field, FieldElement};
