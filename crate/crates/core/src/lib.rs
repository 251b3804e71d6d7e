//! Exact, small-horizon algorithmic information theory.
//!
//! A fixed universal prefix machine ([`upm`]) is enumerated exhaustively up
//! to a horizon of program size and running time ([`enumerator`]). The
//! resulting table makes time-bounded Kolmogorov complexity and a-priori
//! probability exactly computable, which in turn gives exact logical depth,
//! computational depth, randomness deficiency and mutual information
//! ([`measures`]). Infinite-sequence quantities (dimension, normalized mutual
//! information, dimensional depth) are estimated from finite prefixes in
//! [`seqlab`].

pub mod bits;
pub mod dyadic;
pub mod enumerator;
pub mod error;
pub mod exec;
pub mod measures;
pub mod seqlab;
pub mod timebound;
pub mod upm;

pub use bits::BitString;
pub use dyadic::DyadicRational;
pub use enumerator::{enumerate, ComplexityTable, Horizon};
pub use error::{Error, Result};
pub use exec::Exec;
