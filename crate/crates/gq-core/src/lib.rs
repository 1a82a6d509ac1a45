//! Construction and verification toolkit for the classical finite
//! generalized quadrangles and their central-symmetry groups.
//!
//! The crate is organized around the pipeline: exact finite-field
//! arithmetic ([`field`]), forms and isometries on F^n ([`forms`]),
//! abstract incidence verification and combinatorics ([`geometry`]),
//! the five classical constructions ([`classical`]), and collineation
//! groups with their certified symmetry searches ([`symmetry`]).

pub mod classical;
pub mod field;
pub mod forms;
pub mod geometry;
pub mod symmetry;

pub use classical::{build, BuiltGeometry, FamilyTag};
pub use field::{conj_q, FieldElement, FiniteField};
pub use forms::{FormKind, FormSpec, LinearMap, ProjectivePoint};
pub use geometry::{
    check_parameter_bounds, check_subgq_params, verify_gq, verify_gq_collect,
    GeneralizedQuadrangle, GeometryFile,
};
pub use symmetry::{
    check_e_properties, check_orbit_lemmas, classify_fixed, full_symmetry_group, homology_group,
    is_central_symmetry, lift_matrix, CheckMode, Collineation, PropertyResult, SubstructureKind,
    SymmetryGroup,
};
