//! Hypergeometric small I-functions of toric targets, with optional twists.

pub mod asymptotics;
pub mod error;
pub mod factors;
pub mod laurent;
pub mod ops;
pub mod small_i;

pub use asymptotics::{epsilon_j0_j1, i0_i1, IAsymptotics};
pub use error::IError;
pub use factors::{factors, Factors, Source};
pub use laurent::ClassLaurent;
pub use ops::{apply_divisor_derivative, nonequivariant_limit, shift_q};
pub use small_i::{
    ambient_coefficient, fixed_point_coefficient, relaxed_coefficients, small_i, small_i_equivariant, SmallIFunction,
};
