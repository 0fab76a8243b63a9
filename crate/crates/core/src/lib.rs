//! Exact linear algebra for monodromy filtrations, mod-ℓ unipotent calculus,
//! Weil-polynomial certification and weight spectral sequences of strictly
//! semistable degenerations.
//!
//! Every "for all but finitely many ℓ" statement is realized here as an
//! explicit finite set of primes, computed from elementary divisors and
//! Bézout cofactors over the integers.

pub mod arith;
pub mod cli;
pub mod error;
pub mod exact_linalg;
pub mod families;
pub mod filtration;
pub mod modl;
pub mod poly;
pub mod specseq;
pub mod weil;

pub use error::{Error, Result};
pub use exact_linalg::{ElementaryDivisors, IntMatrix, Lattice, LatticeMap, ModMatrix, Sublattice};

/// Version string recorded in every report.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
