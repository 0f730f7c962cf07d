//! Invariants of contact structures and Stein fillings for lens spaces
//! obtained by Legendrian surgery on a chain of unknots.
//!
//! The linear algebra in [`numeric`] is generic over the integer scalar;
//! everything downstream works with the arbitrary-precision aliases below.

pub mod classify;
pub mod filling;
pub mod json;
pub mod legendrian;
pub mod numeric;
pub mod openbook;
pub mod search;

use num_bigint::BigInt;
use num_rational::BigRational;

pub type IntMatrix = numeric::Matrix<BigInt>;
pub type Rational = BigRational;
pub type SmithForm = numeric::SmithForm<BigInt>;
pub type SmithDecomposition = numeric::SmithDecomposition<BigInt>;
pub type BinaryFormReduction = numeric::BinaryFormReduction<BigInt>;

pub use classify::{classify, expected_filling_profile, ClassificationReport, FillingCase};
pub use filling::{filling_invariants, incidence_matrix, FillingInvariants};
pub use legendrian::{
    cf_expand, cf_value, classify_structure, d3, d3_of_chain, enumerate_structures,
    linking_matrix, ChainSurgery, ContactClass, ContinuedFraction, D3Input, LegendrianComponent,
};
pub use openbook::{
    canonical_hopf_factorization, lantern_substitute, lantern_unsubstitute, multiplicity_profile,
    Curve, Factorization, MultiplicityProfile, PlanarPage,
};
pub use search::{enumerate_configs, verify_config, ConfigQuery, ConfigResult, Symmetry};
