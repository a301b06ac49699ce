//! Sunflower-free families of k-spaces of V(n, q), built from nested lifted
//! maximum-rank-distance codes, together with exact verification of their
//! sizes, their sunflower-freeness, and the associated counting bounds.
//!
//! Everything is exact: field arithmetic is table-driven over GF(q^e),
//! linear algebra is over GF(q), counts and bounds are big integers, and
//! all constructions are deterministic (no randomness, reproducible bytes).

pub mod bounds;
pub mod certify;
pub mod enumerate;
pub mod error;
pub mod expository;
pub mod family;
pub mod field;
pub mod format;
pub mod gabidulin;
pub mod gaussian;
pub mod lifted;
pub mod matrix;
pub mod nesting;
pub mod quotient;
pub mod subspace;
pub mod sunflower;

pub use error::{Error, Result};

/// Arbitrary-precision nonnegative integers carry every count and bound.
pub use num_bigint::BigUint;

pub use enumerate::{subspaces_of, SubspaceIter, DEFAULT_ENUM_CAP};
pub use family::{build_family, FamilySpec};
pub use field::{factor_prime_power, find_irreducible, ExtFieldSpec, FieldElem, FieldSpec};
pub use gabidulin::GabidulinCode;
pub use gaussian::{gauss_bracket, gaussian, gaussian_within};
pub use lifted::{
    cover_free_code, cover_free_size, lifted_mrd, lifted_mrd_size, LiftedMrdCode, Orientation,
};
pub use matrix::{MatrixGF, Rref};
pub use quotient::QuotientMap;
pub use subspace::{in_general_position, span_of, Subspace};
pub use nesting::{
    construct_a, construct_b, params_a, params_b, predicted_sizes, ConstructionTag, FamilyNode,
    FamilyTree, LevelParams, NestingParams, SizePrediction,
};
pub use expository::{construct_example1, construct_g, construct_partite};
pub use sunflower::{
    find_sunflower, set_like_kernel, sunflower_kernel, SearchBudget, SearchMode, SunflowerWitness,
};
pub use certify::{
    construction_lower_bound, family_hash, is_maximal, verify_family_conditions, verify_nesting,
    BoundReport, Certificate, Outcome, SearchStats, VerifyOptions,
};
pub use bounds::{
    bound_sandwich, bracket_sandwich_holds, floor_sum, lower_bound, lower_bound_exponent,
    upper_bound, Sandwich,
};
pub use format::{CertificateFile, FamilyFile, FieldRecord, TreeFile};
