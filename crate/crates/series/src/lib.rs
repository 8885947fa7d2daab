//! Exact scalars, truncated Novikov series and Laurent-in-`z` series.

pub mod coh;
pub mod error;
pub mod field;
pub mod fp;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod ratfunc;
pub mod series;
pub mod zfrac;

pub use coh::{CohClass, CohRing, RingMode};
pub use error::SeriesError;
pub use field::{Coeff, Field, Module};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use series::{
    compose_t, invert_novikov_map, invert_transformation, substitute_novikov, substitute_t, Mono, NovikovSeries,
    PoleReport, Truncation, ZRow, ZSeries,
};
pub use zfrac::ZFrac;

/// Exact rationals.
pub type Q = num_rational::BigRational;
/// Reduced rational functions in the equivariant parameters.
pub type RatFn = RatFunc;
/// The prime field used for randomized identity checks.
pub type Fp = fp::Fp;

pub type QSeries = NovikovSeries<Q>;
pub type QZSeries = ZSeries<Q>;
