//! Exact combinatorics of level zero data for general linear groups.
//!
//! Characters of `F_{q^n}^*` are identified with exponents in `Z/(q^n - 1)`
//! and carry a Frobenius action `k -> q*k`; this crate computes with their
//! Galois orbits and the structures built on top of them:
//!
//! - [`lattice`]: orbits, regularity, the prime-to-`l` / `l`-primary
//!   splitting, norm inflation, and base-field twists.
//! - [`cyclotomic`]: exact arithmetic in `Z[zeta_M]` modulo the `M`-th
//!   cyclotomic polynomial, enough to evaluate cuspidal trace values.
//! - [`green`]: cuspidal tokens in characteristic zero and `l`, their
//!   elliptic trace values, reduction mod `l`, and supercuspidal support.
//! - [`inertial`]: simple inertial classes presented as triples of an
//!   endo-class descriptor, an unramified-lift index, and an orbit, with
//!   normal forms, torsor laws, and a flat serialization.
//! - [`verify`]: exhaustive brute-force checkers for the combinatorial
//!   facts the above relies on, reporting witnesses or counterexamples.
//!
//! Everything is deterministic and integer-exact; floating point appears
//! only in clearly-labeled display approximations.

pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod green;
pub mod inertial;
pub mod lattice;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use green::{CoeffChar, CuspidalToken, SupportEntry, SupportMultiset};
pub use inertial::{
    beta_twist_level_zero, BetaExtensionLabel, EndoClass, Side, SimpleInertialTriple, TripleRecord,
};
pub use lattice::{CharOrbit, FieldSpec, OrbitFilter};
pub use sweep::{Budget, SweepBound};
pub use verify::{RegularCover, Status, VerificationReport};
