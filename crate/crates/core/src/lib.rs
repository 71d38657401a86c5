pub mod admissible;
pub mod analysis;
pub mod charsum;
pub mod dd;
pub mod ek;
pub mod error;
pub mod prime_sums;
pub mod primes;
pub mod real;
pub mod special;
pub mod store;

pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use real::Real;
