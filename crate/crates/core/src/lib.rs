//! Rank-level combinatorics for the decomposition of GL_n Hitchin fibrations
//! over the reduced locus.
//!
//! The crate is organised bottom-up:
//!
//! * [`partitions`]: partitions of `n`, the degree-admissible subset, labeled
//!   groupings and factorial rank constants.
//! * [`quiver`]: multigraphs and quivers, the spectral dual graphs, vertex
//!   contraction, doubling, boundary matrices and canonical keys.
//! * [`intlinalg`]: exact integer matrices generic over the integer ring,
//!   Smith/Hermite normal forms, Gale duals and exactness certificates.
//! * [`matroid`]: cographic matroids, memoized Tutte polynomials, f/h-vectors
//!   and top-sphere counts.
//! * [`homology`]: brute-force reduced rational homology of small simplicial
//!   complexes, used as an oracle for the matroid module.
//! * [`hypertoric`]: Lawrence/hypertoric dimensions, circuit relations,
//!   vertex-partition strata and local decomposition multiplicities.
//! * [`strings`]: stratum dimensions on the Hitchin base and the recursive
//!   string-rank tables.
//!
//! Linear algebra is generic over any exact integer type implementing
//! [`ExactInteger`]; the aliases below fix the arbitrary-precision choice used
//! throughout the public API.

pub mod error;
pub mod homology;
pub mod hypertoric;
pub mod intlinalg;
pub mod matroid;
pub mod partitions;
pub mod quiver;
pub mod strings;

pub use error::{Error, Result};
pub use intlinalg::{ExactInteger, IntMatrix, SmithDecomposition};
pub use matroid::{CographicMatroid, TuttePolynomial};
pub use partitions::Partition;
pub use quiver::{MultiGraph, Quiver, VertexPartition};
pub use strings::StringTable;

/// Arbitrary-precision integer matrix; the default for boundary maps and Gale duals.
pub type Matrix = IntMatrix<num_bigint::BigInt>;

/// Machine-integer matrix for small inputs where overflow is ruled out.
pub type SmallMatrix = IntMatrix<i64>;

/// Smith decomposition over arbitrary-precision integers.
pub type Smith = SmithDecomposition<num_bigint::BigInt>;
