//! Special functions and quadrature rules.

pub mod airy;
pub mod normal;
pub mod quadrature;

pub use airy::{airy_ai, airy_ai_prime, airy_tail};
pub use normal::std_normal_cdf;
pub use quadrature::{
    composite_gauss_legendre, gauss_hermite_prob, gauss_legendre, truncated_gauss_legendre,
    Domain, Quadrature,
};
