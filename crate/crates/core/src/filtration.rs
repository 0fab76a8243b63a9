//! Monodromy filtrations of nilpotent integer operators.
//!
//! The filtration is built by Deligne's induction on the top power of N,
//! saturating at every step so that each M_i is the intersection of the
//! lattice with the rational filtration step. The same induction runs over
//! F_ℓ in [`crate::modl`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::PrimeSet;
use crate::exact_linalg::smith::smith;
use crate::exact_linalg::{cokernel_invariants, ElementaryDivisors, FreeQuotient, IntMatrix, Lattice, LatticeMap, ModMatrix, Sublattice, Subspace};
use crate::{Error, Result};

/// A nilpotent endomorphism N of Z^n together with its nilpotency index d,
/// the least d ≥ 0 with N^{d+1} = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentOperator {
    n: LatticeMap,
    index: usize,
    powers: Vec<IntMatrix>,
}

impl NilpotentOperator {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        Self::from_map(LatticeMap::endomorphism(matrix)?)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(IntMatrix::from_i64(rows))
    }

    pub fn from_map(n: LatticeMap) -> Result<Self> {
        if !n.is_endomorphism() {
            return Err(Error::shape("a nilpotent operator must be an endomorphism"));
        }
        let dim = n.source().rank;
        let mut powers = vec![IntMatrix::identity(dim)];
        loop {
            let last = powers.last().expect("nonempty");
            if last.is_zero() {
                powers.pop();
                break;
            }
            if powers.len() > dim {
                return Err(Error::NotNilpotent(format!("N^{} ≠ 0 on a lattice of rank {dim}", dim)));
            }
            let next = last.dot(n.matrix());
            powers.push(next);
        }
        let index = powers.len().saturating_sub(1);
        Ok(NilpotentOperator { n, index, powers })
    }

    pub fn space(&self) -> &Lattice {
        self.n.source()
    }

    pub fn rank(&self) -> usize {
        self.n.source().rank
    }

    pub fn map(&self) -> &LatticeMap {
        &self.n
    }

    pub fn matrix(&self) -> &IntMatrix {
        self.n.matrix()
    }

    pub fn nilpotency_index(&self) -> usize {
        self.index
    }

    /// N^k; zero beyond the nilpotency index.
    pub fn power(&self, k: usize) -> IntMatrix {
        self.powers.get(k).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(), self.rank()))
    }

    pub fn power_map(&self, k: usize) -> LatticeMap {
        LatticeMap::from_matrix(self.power(k))
    }

    /// c·N.
    pub fn scaled(&self, c: &BigInt) -> Result<Self> {
        Self::new(self.matrix().scale(c))
    }

    /// U·N·U^{-1} for a unimodular U given with its inverse.
    pub fn conjugate(&self, u: &IntMatrix, u_inv: &IntMatrix) -> Result<Self> {
        if !u.dot(u_inv).eq(&IntMatrix::identity(self.rank())) {
            return Err(Error::InvalidArgument("conjugating matrices are not mutually inverse".into()));
        }
        Self::new(u.dot(self.matrix()).dot(u_inv))
    }

    pub fn reduce_mod(&self, ell: u64) -> ModMatrix {
        ModMatrix::reduce(self.matrix(), ell)
    }
}

/// Subobjects of a free module on which Deligne's induction can run:
/// saturated sublattices of Z^n, or subspaces of F_ℓ^n.
pub trait Subobject: Clone + PartialEq + fmt::Debug {
    type Op;
    fn zero_like(&self) -> Self;
    fn full_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    /// Saturation over Z; identity over a field.
    fn close(&self) -> Self;
    fn image_under(&self, op: &Self::Op) -> Self;
    /// {x ∈ self : op·x ∈ target}.
    fn restrict_preimage(&self, op: &Self::Op, target: &Self) -> Self;
    fn is_within(&self, other: &Self) -> bool;
    fn size(&self) -> usize;
}

impl Subobject for Sublattice {
    type Op = IntMatrix;

    fn zero_like(&self) -> Self {
        Sublattice::zero(self.ambient_rank())
    }

    fn full_like(&self) -> Self {
        Sublattice::full(self.ambient_rank())
    }

    fn plus(&self, other: &Self) -> Self {
        self.sum(other)
    }

    fn close(&self) -> Self {
        self.saturate()
    }

    fn image_under(&self, op: &IntMatrix) -> Self {
        self.map(op).expect("endomorphism")
    }

    fn restrict_preimage(&self, op: &IntMatrix, target: &Self) -> Self {
        Sublattice::preimage(op, target).expect("endomorphism").intersect(self)
    }

    fn is_within(&self, other: &Self) -> bool {
        other.contains(self)
    }

    fn size(&self) -> usize {
        self.rank()
    }
}

impl Subobject for Subspace {
    type Op = ModMatrix;

    fn zero_like(&self) -> Self {
        Subspace::zero(self.modulus(), self.ambient_dim())
    }

    fn full_like(&self) -> Self {
        Subspace::full(self.modulus(), self.ambient_dim())
    }

    fn plus(&self, other: &Self) -> Self {
        self.sum(other)
    }

    fn close(&self) -> Self {
        self.clone()
    }

    fn image_under(&self, op: &ModMatrix) -> Self {
        self.map(op)
    }

    fn restrict_preimage(&self, op: &ModMatrix, target: &Self) -> Self {
        Subspace::preimage(op, target).intersect(self)
    }

    fn is_within(&self, other: &Self) -> bool {
        other.contains(self)
    }

    fn size(&self) -> usize {
        self.dim()
    }
}

/// An increasing filtration M_{-d} ⊆ … ⊆ M_d of a free module, with
/// M_i = 0 for i < −d and M_i = everything for i ≥ d.
#[derive(Clone, Debug, PartialEq)]
pub struct Filtration<S> {
    half_width: usize,
    zero: S,
    full: S,
    steps: Vec<S>,
}

/// The integral monodromy filtration; every step is saturated.
pub type MonodromyFiltration = Filtration<Sublattice>;

impl<S: Subobject> Filtration<S> {
    /// Runs Deligne's induction. `powers[k]` must be N^k for 0 ≤ k ≤ d, with
    /// N^{d+1} = 0 on `full`.
    pub fn deligne(full: S, powers: &[S::Op]) -> Self {
        let d = powers.len().saturating_sub(1);
        let zero = full.zero_like();
        let width = 2 * d + 1;
        let mut steps: Vec<Option<S>> = vec![None; width];
        let idx = |i: i64| (i + d as i64) as usize;

        let (mut lo, mut hi) = (zero.clone(), full.clone());
        let mut top = d as i64;
        let fill = |steps: &mut Vec<Option<S>>, range: std::ops::RangeInclusive<i64>, s: &S| {
            for i in range.filter(|i| i.abs() <= d as i64) {
                steps[idx(i)].get_or_insert_with(|| s.clone());
            }
        };
        loop {
            // largest power of N that still moves hi outside lo
            let k = powers.iter().rposition(|p| !hi.image_under(p).is_within(&lo)).map(|e| e as i64);
            let Some(k) = k else {
                fill(&mut steps, -top - 1..=top, &hi);
                break;
            };
            fill(&mut steps, k..=top, &hi);
            fill(&mut steps, -top - 1..=-k - 1, &lo);
            if k == 0 {
                break;
            }
            let p = &powers[k as usize];
            let new_lo = lo.plus(&hi.image_under(p)).close();
            let new_hi = hi.restrict_preimage(p, &lo);
            lo = new_lo;
            hi = new_hi;
            top = k - 1;
        }
        let steps = steps.into_iter().map(|s| s.expect("every step assigned")).collect();
        Filtration { half_width: d, zero, full, steps }
    }

    /// Index window [−d, d].
    pub fn window(&self) -> (i64, i64) {
        (-(self.half_width as i64), self.half_width as i64)
    }

    pub fn half_width(&self) -> usize {
        self.half_width
    }

    /// M_i, clamped outside the window.
    pub fn step(&self, i: i64) -> &S {
        let d = self.half_width as i64;
        if i < -d {
            &self.zero
        } else if i >= d {
            &self.full
        } else {
            &self.steps[(i + d) as usize]
        }
    }

    /// rank M_i − rank M_{i−1}.
    pub fn graded_rank(&self, i: i64) -> usize {
        self.step(i).size() - self.step(i - 1).size()
    }

    /// Graded ranks for i = −d..=d.
    pub fn graded_ranks(&self) -> Vec<usize> {
        let (a, b) = self.window();
        (a..=b).map(|i| self.graded_rank(i)).collect()
    }

    pub fn steps(&self) -> impl Iterator<Item = (i64, &S)> {
        let (a, b) = self.window();
        (a..=b).map(move |i| (i, self.step(i)))
    }
}

impl Filtration<Sublattice> {
    /// Steps reduced mod ℓ. Equals M_i ⊗ F_ℓ since every step is saturated.
    pub fn reduce_mod(&self, ell: u64) -> Filtration<Subspace> {
        Filtration {
            half_width: self.half_width,
            zero: self.zero.reduce_mod(ell),
            full: self.full.reduce_mod(ell),
            steps: self.steps.iter().map(|s| s.reduce_mod(ell)).collect(),
        }
    }

    pub fn is_saturated(&self) -> bool {
        self.steps.iter().all(Sublattice::is_saturated)
    }
}

impl<S: Subobject> fmt::Display for Filtration<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.window();
        let parts: Vec<String> = (a..=b).map(|i| format!("Gr_{i}={}", self.graded_rank(i))).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn monodromy_filtration_rational(op: &NilpotentOperator) -> MonodromyFiltration {
    Filtration::deligne(Sublattice::full(op.rank()), &op.powers)
}

/// Matrix of N^i : Gr_i → Gr_{−i} in the deterministic Hermite bases of
/// the graded quotients.
pub fn graded_map_matrix(op: &NilpotentOperator, fil: &MonodromyFiltration, i: usize) -> IntMatrix {
    let k = i as i64;
    let source = FreeQuotient::new(fil.step(k), fil.step(k - 1));
    let target = FreeQuotient::new(fil.step(-k), fil.step(-k - 1));
    source.induced_matrix(&op.power(i), &target)
}

/// Elementary divisors of N^i : Gr_i → Gr_{−i}.
pub fn graded_map_invariants(op: &NilpotentOperator, fil: &MonodromyFiltration, i: usize) -> ElementaryDivisors {
    smith(&graded_map_matrix(op, fil, i)).divisors()
}

/// i ↦ invariants of coker(N^i) on the full lattice, for 0 ≤ i ≤ d + 1.
pub fn cokernel_torsion_freeness(op: &NilpotentOperator) -> BTreeMap<usize, ElementaryDivisors> {
    (0..=op.nilpotency_index() + 1).map(|i| (i, cokernel_invariants(&op.power_map(i)))).collect()
}

/// Where a bad prime was found.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimeSource {
    /// A torsion divisor of coker(N^i).
    Cokernel { power: usize, divisor: BigInt },
    /// A divisor of the graded map N^i : Gr_i → Gr_{−i}.
    Graded { level: usize, divisor: BigInt },
}

impl fmt::Display for PrimeSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSource::Cokernel { power, divisor } => write!(f, "coker(N^{power}) has divisor {divisor}"),
            PrimeSource::Graded { level, divisor } => write!(f, "N^{level}: Gr_{level} → Gr_-{level} has divisor {divisor}"),
        }
    }
}

/// A finite set of primes, each with the places it came from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BadPrimes {
    pub primes: BTreeMap<BigInt, Vec<PrimeSource>>,
}

impl BadPrimes {
    pub fn insert(&mut self, p: BigInt, source: PrimeSource) {
        let v = self.primes.entry(p).or_default();
        if !v.contains(&source) {
            v.push(source);
        }
    }

    pub fn set(&self) -> PrimeSet {
        self.primes.keys().cloned().collect()
    }

    pub fn contains(&self, p: &BigInt) -> bool {
        self.primes.contains_key(p)
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Full report for one nilpotent operator.
#[derive(Clone, Debug)]
pub struct NilpotentReport {
    pub filtration: MonodromyFiltration,
    pub cokernels: BTreeMap<usize, ElementaryDivisors>,
    pub graded: BTreeMap<usize, ElementaryDivisors>,
    pub bad_primes: BadPrimes,
}

impl NilpotentReport {
    pub fn cokernels_torsion_free(&self) -> bool {
        self.cokernels.values().all(ElementaryDivisors::is_torsion_free)
    }

    pub fn graded_unimodular(&self) -> bool {
        self.graded.values().all(ElementaryDivisors::is_unimodular)
    }
}

/// Computes the filtration, both families of invariants and the bad primes,
/// and checks that cokernel torsion and graded divisors see the same primes.
pub fn analyze(op: &NilpotentOperator) -> Result<NilpotentReport> {
    let filtration = monodromy_filtration_rational(op);
    let cokernels = cokernel_torsion_freeness(op);
    let graded: BTreeMap<usize, ElementaryDivisors> =
        (0..=op.nilpotency_index()).map(|i| (i, graded_map_invariants(op, &filtration, i))).collect();

    let mut bad = BadPrimes::default();
    let mut from_coker = PrimeSet::new();
    for (&power, ed) in &cokernels {
        for divisor in ed.torsion() {
            for p in crate::arith::prime_divisors(&divisor) {
                from_coker.insert(p.clone());
                bad.insert(p, PrimeSource::Cokernel { power, divisor: divisor.clone() });
            }
        }
    }
    let mut from_graded = PrimeSet::new();
    for (&level, ed) in &graded {
        if ed.rank_defect() > 0 {
            return Err(Error::consistency(format!("N^{level} is not a rational isomorphism Gr_{level} → Gr_-{level}")));
        }
        for divisor in ed.torsion() {
            for p in crate::arith::prime_divisors(&divisor) {
                from_graded.insert(p.clone());
                bad.insert(p, PrimeSource::Graded { level, divisor: divisor.clone() });
            }
        }
    }
    if from_coker != from_graded {
        return Err(Error::consistency(format!(
            "cokernel torsion primes {from_coker:?} differ from graded-map primes {from_graded:?}"
        )));
    }
    Ok(NilpotentReport { filtration, cokernels, graded, bad_primes: bad })
}

/// Union over i of the torsion primes of coker(N^i), with provenance.
pub fn bad_primes_of_nilpotent(op: &NilpotentOperator) -> Result<BadPrimes> {
    analyze(op).map(|r| r.bad_primes)
}

/// Checks N(M_i) ⊆ M_{i−2} for every i and that each N^i : Gr_i → Gr_{−i}
/// has full rank over Q.
pub fn satisfies_characterization(op: &NilpotentOperator, fil: &MonodromyFiltration) -> bool {
    let (a, b) = fil.window();
    let n = op.matrix();
    let shifts = (a - 1..=b + 1).all(|i| fil.step(i - 2).contains(&fil.step(i).map(n).expect("endomorphism")));
    let isos = (0..=b as usize).all(|i| {
        let m = graded_map_matrix(op, fil, i);
        m.is_square() && (m.nrows() == 0 || !m.det().map(|d| d.is_zero()).unwrap_or(true))
    });
    shifts && isos
}
