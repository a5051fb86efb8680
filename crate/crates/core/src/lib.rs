//! Graded posets, their ab- and cd-indices, exact homology certificates,
//! subdivision verifiers and the sheaf operations that extract
//! cd-coefficients as stalk dimensions.
//!
//! Everything here is exact: integers are [`num_bigint::BigInt`] and
//! linear algebra runs over [`linalg::Q`]. The crate needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bitset;
pub mod constructions;
pub mod corpus;
pub mod flag;
pub mod homology;
pub mod linalg;
pub mod ncpoly;
pub mod poset;
pub mod sheaf;
pub mod subdivision;

pub use constructions::PosetMap;
pub use ncpoly::{AbPoly, AbWord, CdPoly, CdWord, NearCdIndex};
pub use poset::{Derived, ElementId, GradedPoset, PosetError, Upper};
