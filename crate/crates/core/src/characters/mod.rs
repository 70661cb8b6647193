//! Additive and multiplicative characters of `F` and its quadratic extensions.

pub mod alpha;
pub mod cache;
pub mod enumerate;
pub mod langlands;
pub mod mult;
pub mod notation;

pub use alpha::{alpha_of_char, AlphaElement};
pub use enumerate::{enumerate_characters, CharConstraints};
pub use langlands::{delta_theta, eta, gauss_sum, lambda, lambda_angle, langlands_twist};
pub use mult::MultChar;
