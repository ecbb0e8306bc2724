//! Even integral lattices, their discriminant forms, primitive embeddings and
//! prime-order isometries.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod embed;
pub mod error;
pub mod expr;
pub mod finite;
pub mod genus;
pub mod isometry;
pub mod lattice;
pub mod linalg;

pub use error::{Error, Result};
pub use expr::{parse_lattice, LatticeExpr};
pub use finite::{discriminant_form, FqfHom, FqfIsometry, TorsionQuadraticForm};
pub use lattice::{make_standard, Block, GramLattice, SignaturePair};
pub use linalg::{Int, IntMatrix, Rat};
