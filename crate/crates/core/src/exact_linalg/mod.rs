//! Exact integer linear algebra: Hermite and Smith normal forms, kernels,
//! images, saturation, cokernel invariants and ranks modulo primes.
//!
//! Everything is computed with arbitrary-precision integers. Pivot choices
//! are deterministic, so repeated calls produce identical outputs.

pub mod hermite;
pub mod matrix;
pub mod modp;
pub mod quotient;
pub mod smith;
pub mod sublattice;

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use matrix::IntMatrix;
pub use modp::{ModMatrix, Subspace};
pub use quotient::FreeQuotient;
pub use smith::SmithForm;
pub use sublattice::Sublattice;

use crate::arith::{prime_divisors, PrimeSet};
use crate::{Error, Result};

/// The standard free module Z^rank, optionally labelled.
///
/// Labels are cosmetic: two lattices of equal rank compare equal.
#[derive(Clone, Debug, Default)]
pub struct Lattice {
    pub rank: usize,
    pub label: Option<String>,
}

impl Lattice {
    pub fn new(rank: usize) -> Self {
        Lattice { rank, label: None }
    }

    pub fn labelled(rank: usize, label: impl Into<String>) -> Self {
        Lattice { rank, label: Some(label.into()) }
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
    }
}

impl Eq for Lattice {}

impl Hash for Lattice {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
    }
}

/// A homomorphism Z^source → Z^target given by a (target × source) matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    source: Lattice,
    target: Lattice,
    matrix: IntMatrix,
}

impl LatticeMap {
    pub fn new(source: Lattice, target: Lattice, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.rank, source.rank) {
            return Err(Error::shape(format!(
                "matrix is {}×{} but the map goes Z^{} → Z^{}",
                matrix.nrows(),
                matrix.ncols(),
                source.rank,
                target.rank
            )));
        }
        Ok(LatticeMap { source, target, matrix })
    }

    /// The map whose matrix is `m`, between unlabelled lattices.
    pub fn from_matrix(matrix: IntMatrix) -> Self {
        LatticeMap { source: Lattice::new(matrix.ncols()), target: Lattice::new(matrix.nrows()), matrix }
    }

    pub fn endomorphism(matrix: IntMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::shape("an endomorphism needs a square matrix"));
        }
        Ok(Self::from_matrix(matrix))
    }

    pub fn identity(l: Lattice) -> Self {
        let m = IntMatrix::identity(l.rank);
        LatticeMap { source: l.clone(), target: l, matrix: m }
    }

    pub fn zero(source: Lattice, target: Lattice) -> Self {
        let m = IntMatrix::zeros(target.rank, source.rank);
        LatticeMap { source, target, matrix: m }
    }

    pub fn source(&self) -> &Lattice {
        &self.source
    }

    pub fn target(&self) -> &Lattice {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source.rank == self.target.rank
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LatticeMap) -> Result<LatticeMap> {
        if other.target.rank != self.source.rank {
            return Err(Error::shape("maps are not composable"));
        }
        Ok(LatticeMap {
            source: other.source.clone(),
            target: self.target.clone(),
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }
}

/// Diagonal of a Smith normal form: d_1 | d_2 | … with zeros last.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementaryDivisors {
    divisors: Vec<BigInt>,
}

impl ElementaryDivisors {
    /// Wraps a list already in Smith order. Panics if the divisibility
    /// chain is broken or an entry is negative.
    pub fn new(divisors: Vec<BigInt>) -> Self {
        let ed = ElementaryDivisors { divisors };
        assert!(ed.is_valid(), "not a divisibility chain: {ed}");
        ed
    }

    pub fn from_u64(divisors: &[u64]) -> Self {
        Self::new(divisors.iter().map(|&d| BigInt::from(d)).collect())
    }

    fn is_valid(&self) -> bool {
        let mut seen_zero = false;
        for w in self.divisors.iter() {
            if w.is_negative() || (seen_zero && !w.is_zero()) {
                return false;
            }
            seen_zero |= w.is_zero();
        }
        self.divisors.windows(2).all(|w| w[1].is_zero() || (&w[1] % &w[0]).is_zero())
    }

    pub fn as_slice(&self) -> &[BigInt] {
        &self.divisors
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    /// Number of nonzero divisors.
    pub fn rank(&self) -> usize {
        self.divisors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Number of zero divisors.
    pub fn rank_defect(&self) -> usize {
        self.len() - self.rank()
    }

    /// Divisors other than 0 and 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion().is_empty()
    }

    /// All nonzero divisors equal 1.
    pub fn is_unimodular(&self) -> bool {
        self.rank_defect() == 0 && self.is_torsion_free()
    }

    pub fn torsion_primes(&self) -> PrimeSet {
        torsion_primes(self)
    }

    /// Product of the nonzero divisors.
    pub fn product(&self) -> BigInt {
        self.divisors.iter().filter(|d| !d.is_zero()).product()
    }
}

impl fmt::Display for ElementaryDivisors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.divisors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

pub fn smith_normal_form(m: &LatticeMap) -> SmithForm {
    smith::smith(&m.matrix)
}

/// Saturated kernel of the map, in the source lattice.
pub fn kernel(m: &LatticeMap) -> Sublattice {
    let k = Sublattice::kernel_of(&m.matrix);
    Sublattice::from_rows(m.source.clone(), k.basis()).expect("kernel lives in the source")
}

/// Image of the map in the target lattice, not saturated.
pub fn image(m: &LatticeMap) -> Sublattice {
    Sublattice::new(m.target.clone(), &m.matrix).expect("image lives in the target")
}

pub fn saturate(s: &Sublattice) -> Sublattice {
    s.saturate()
}

/// Invariants of target / image, one entry per target basis vector.
///
/// Zeros account for the free part of the cokernel.
pub fn cokernel_invariants(m: &LatticeMap) -> ElementaryDivisors {
    let d = smith::smith(&m.matrix).divisors();
    let mut v: Vec<BigInt> = d.as_slice().to_vec();
    v.truncate(m.target.rank);
    v.resize(m.target.rank, BigInt::zero());
    ElementaryDivisors::new(v)
}

pub fn torsion_primes(e: &ElementaryDivisors) -> PrimeSet {
    e.torsion().iter().flat_map(prime_divisors).collect()
}

pub fn rank_mod_ell(m: &LatticeMap, ell: u64) -> Result<usize> {
    crate::arith::check_modulus(ell)?;
    Ok(ModMatrix::reduce(&m.matrix, ell).rank())
}
