//! Wall-crossing machinery: the S-operator, Birkhoff factorization, mirror
//! maps, operator and Yukawa checks, and fixed-point reconstruction.

pub mod birkhoff;
pub mod error;
pub mod mirror;
pub mod polynomiality;
pub mod provider;
pub mod qde;
pub mod reconstruct;
pub mod s_operator;
pub mod theory;
pub mod util;
pub mod yukawa;

pub use birkhoff::{apply_z, birkhoff_induction, project_series, BirkhoffData};
pub use error::WallError;
pub use mirror::{
    generalized_string_transform, mirror_map_small, mirror_transform, string_transform, transformation_at_zero,
    MirrorMap, MirrorTransform,
};
pub use polynomiality::{equivariant_s_components, polynomiality_check, PolyReport, PolyViolation};
pub use provider::{
    bracket_key, classical_bracket, BracketKey, Envelope, IDerivedProvider, InvariantProvider, Marking, OracleProvider,
    SignFlip, TableProvider, ZeroProvider,
};
pub use qde::{apply_d, apply_operator, qde_find, QdeOperator};
pub use reconstruct::{recursion_data, recursion_reconstruct, uniqueness_reconstruct, Graded, RecursionEdge};
pub use s_operator::{
    build_s, build_s_matrix, compute_p_from_j, unitarity_check, SOperator, UnitarityReport, UnitarityViolation,
};
pub use theory::Theory;
pub use yukawa::{classical_triple, parse_series, yukawa_cy3};
