//! Monomial ideals, their associated primes, and the enumerative and depth
//! theory of the BHH family `B = B_0 + B_c + X`.
//!
//! The exact linear algebra behind the Betti computations is generic over the
//! scalar type (see [`depth::linalg::rank`]); [`Integer`] and [`Rational`] are
//! the concrete scalars used throughout.

pub mod bhh;
pub mod decomposition;
pub mod depth;
pub mod error;
pub mod ggood;
pub mod ideal;
pub mod monomial;
pub mod registry;
pub mod table;

/// Arbitrary-precision integers, the default scalar for exact ranks.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rationals.
pub type Rational = num_rational::BigRational;

pub use bhh::BhhParams;
pub use decomposition::{DecomposeOptions, Decomposition, MonomialPrime};
pub use error::{Error, Result};
pub use ggood::GGoodPattern;
pub use ideal::MonomialIdeal;
pub use monomial::{Exp, Monomial};
pub use registry::VarRegistry;

/// Version tag folded into cache keys so results from older engines are not reused.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
