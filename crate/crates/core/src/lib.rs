//! Exact maximum-clique algorithms for disk graphs with few radii, ball
//! graphs with centers on few planes, and unit-disk range queries.
//!
//! All geometry runs on exact rationals ([`Scalar`]). Every reported clique
//! is re-verified with the exact intersection predicates.

pub mod ball;
pub mod cobipartite;
pub mod error;
pub mod gen;
pub mod geom;
pub mod io;
pub mod kradii;
pub mod matching;
pub mod oracle;
pub mod range;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;
