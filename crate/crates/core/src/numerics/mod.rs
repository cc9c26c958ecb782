//! Numerical substrate: complex matrices, Moore-Penrose pseudo-inverse,
//! splittable random streams and Gauss-Legendre quadrature.

mod matrix;
mod pinv;
mod quadrature;
mod rng;

pub use matrix::ComplexMatrix;
pub use pinv::{pseudo_inverse, pseudo_inverse_with_route, Pinv, PinvRoute, GRAM_CONDITION_LIMIT};
pub use quadrature::{integrate, GaussLegendre};
pub use rng::{sample_cn, trial_stream_id, RngStream};

/// Complex scalar used for channel coefficients, symbols and noise.
pub type Complex = num_complex::Complex64;
