use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::descriptor::{BoundaryKind, DegenerationDescriptor, StratumIndex};
use crate::arith::{check_modulus, prime_divisors, PrimeSet};
use crate::exact_linalg::{
    cokernel_invariants, FreeQuotient, IntMatrix, Lattice, LatticeMap, ModMatrix, Sublattice, Subspace,
};
use crate::{Error, Result};

/// Identifier of the sign convention used for d1.
pub const SIGN_CONVENTION: &str = "cech-alternating-v1";
/// Identifier of the basis convention used for E2 coordinates.
pub const BASIS_CONVENTION: &str = "hermite-quotient-v1";

/// One summand H^{degree}(D_I)(−twist) of an E1 entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    pub twist: usize,
    pub stratum: StratumIndex,
    pub degree: u32,
    pub offset: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E1Entry {
    pub v: i64,
    pub w: i64,
    pub summands: Vec<Summand>,
    pub lattice: Lattice,
}

impl E1Entry {
    pub fn rank(&self) -> usize {
        self.lattice.rank
    }

    fn find(&self, twist: usize, stratum: &[usize]) -> Option<&Summand> {
        self.summands.iter().find(|s| s.twist == twist && s.stratum == stratum)
    }
}

/// The E1 page with its differential d1 : E1^{v,w} → E1^{v+1,w}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralPage {
    relative_dimension: usize,
    entries: BTreeMap<(i64, i64), E1Entry>,
    differentials: BTreeMap<(i64, i64), LatticeMap>,
}

/// (−1)^{position of k in the larger multi-index}.
fn cech_sign(big: &[usize], k: usize) -> BigInt {
    let pos = big.iter().position(|&x| x == k).expect("k lies in the larger index");
    if pos % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) }
}

fn entry_summands(desc: &DegenerationDescriptor, v: i64, w: i64) -> Vec<Summand> {
    let d = desc.relative_dimension as i64;
    let mut out = Vec::new();
    let mut offset = 0;
    let mut i = (-v).max(0);
    while v + 2 * i <= d && w - 2 * i >= 0 {
        let level = (v + 2 * i) as usize;
        let degree = (w - 2 * i) as u32;
        for s in desc.strata_of_level(level) {
            let rank = s.rank(degree);
            out.push(Summand { twist: i as usize, stratum: s.index.clone(), degree, offset, rank });
            offset += rank;
        }
        i += 1;
    }
    out
}

/// Builds the E1 entries of the descriptor over the window |v| ≤ d, 0 ≤ w ≤ 2d.
pub fn assemble_e1(desc: &DegenerationDescriptor) -> Result<SpectralPage> {
    desc.validate()?;
    let d = desc.relative_dimension as i64;
    let mut entries = BTreeMap::new();
    for v in -d..=d {
        for w in 0..=2 * d {
            let summands = entry_summands(desc, v, w);
            let rank = summands.iter().map(|s| s.rank).sum();
            let lattice = Lattice::labelled(rank, format!("E1^{{{v},{w}}}"));
            entries.insert((v, w), E1Entry { v, w, summands, lattice });
        }
    }
    let mut page = SpectralPage { relative_dimension: desc.relative_dimension, entries, differentials: BTreeMap::new() };
    page.differentials = assemble_d1(desc, &page)?;
    page.check_square_zero()?;
    Ok(page)
}

/// d1 from the descriptor's boundary maps with alternating signs.
///
/// A restriction D_I → D_{I∪{k}} and a Gysin map D_{I∪{k}} → D_I both carry
/// the sign (−1)^{position of k in I∪{k}}. Missing maps are zero.
pub fn assemble_d1(desc: &DegenerationDescriptor, page: &SpectralPage) -> Result<BTreeMap<(i64, i64), LatticeMap>> {
    let mut out = BTreeMap::new();
    for (&(v, w), src) in &page.entries {
        let Some(tgt) = page.entries.get(&(v + 1, w)) else {
            continue;
        };
        let mut m = IntMatrix::zeros(tgt.rank(), src.rank());
        for b in &desc.maps {
            let k = b.extra_component().expect("validated");
            let (twist_shift, big) = match b.kind {
                BoundaryKind::Restriction => (0usize, &b.target),
                BoundaryKind::Gysin => (1usize, &b.source),
            };
            for s in src.summands.iter().filter(|s| s.stratum == b.source && s.degree == b.degree) {
                if s.twist < twist_shift {
                    continue;
                }
                let Some(t) = tgt.find(s.twist - twist_shift, &b.target) else {
                    continue;
                };
                if t.degree != b.target_degree() {
                    return Err(Error::consistency(format!("summand degrees disagree at E1^{{{v},{w}}}")));
                }
                let block = b.map.matrix().scale(&cech_sign(big, k));
                m.set_block(t.offset, s.offset, &block);
            }
        }
        out.insert((v, w), LatticeMap::new(src.lattice.clone(), tgt.lattice.clone(), m)?);
    }
    Ok(out)
}

impl SpectralPage {
    pub fn relative_dimension(&self) -> usize {
        self.relative_dimension
    }

    pub fn entries(&self) -> &BTreeMap<(i64, i64), E1Entry> {
        &self.entries
    }

    pub fn entry(&self, v: i64, w: i64) -> Option<&E1Entry> {
        self.entries.get(&(v, w))
    }

    /// Rank of E1^{v,w}; zero outside the window.
    pub fn rank(&self, v: i64, w: i64) -> usize {
        self.entry(v, w).map_or(0, E1Entry::rank)
    }

    /// Matrix of d1 : E1^{v,w} → E1^{v+1,w}; zero outside the window.
    pub fn d1(&self, v: i64, w: i64) -> IntMatrix {
        match self.differentials.get(&(v, w)) {
            Some(m) => m.matrix().clone(),
            None => IntMatrix::zeros(self.rank(v + 1, w), self.rank(v, w)),
        }
    }

    pub fn differentials(&self) -> &BTreeMap<(i64, i64), LatticeMap> {
        &self.differentials
    }

    fn check_square_zero(&self) -> Result<()> {
        for &(v, w) in self.entries.keys() {
            let dd = self.d1(v + 1, w).dot(&self.d1(v, w));
            if !dd.is_zero() {
                return Err(Error::descriptor(format!(
                    "d1∘d1 ≠ 0 on the square E1^{{{v},{w}}} → E1^{{{},{w}}} → E1^{{{},{w}}}",
                    v + 1,
                    v + 2
                )));
            }
        }
        Ok(())
    }

    /// The twist shift E1^{v,w} → E1^{v+2,w−2}: the identity from the
    /// summand of twist i onto the matching summand of twist i − 1, zero on
    /// twist 0.
    pub fn monodromy(&self, v: i64, w: i64) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank(v + 2, w - 2), self.rank(v, w));
        if let (Some(src), Some(tgt)) = (self.entry(v, w), self.entry(v + 2, w - 2)) {
            for s in src.summands.iter().filter(|s| s.twist > 0) {
                if let Some(t) = tgt.find(s.twist - 1, &s.stratum) {
                    m.set_block(t.offset, s.offset, &IntMatrix::identity(s.rank));
                }
            }
        }
        m
    }

    /// ν^k : E1^{v,w} → E1^{v+2k,w−2k}.
    pub fn monodromy_power(&self, v: i64, w: i64, k: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(self.rank(v, w));
        for step in 0..k as i64 {
            m = self.monodromy(v + 2 * step, w - 2 * step).dot(&m);
        }
        m
    }

    /// Checks d1 ∘ ν = ν ∘ d1 on every entry; returns the first failure.
    pub fn check_monodromy_commutes(&self) -> Result<()> {
        for &(v, w) in self.entries.keys() {
            let lhs = self.d1(v + 2, w - 2).dot(&self.monodromy(v, w));
            let rhs = self.monodromy(v + 1, w).dot(&self.d1(v, w));
            if lhs != rhs {
                return Err(Error::consistency(format!("d1 and the twist shift do not commute at E1^{{{v},{w}}}")));
            }
        }
        Ok(())
    }

    /// Frobenius on E1^{v,w}: the stratum Frobenius scaled by q^twist on each
    /// summand. None unless every nonzero summand carries a Frobenius.
    pub fn frobenius(&self, desc: &DegenerationDescriptor, v: i64, w: i64) -> Option<IntMatrix> {
        let q = desc.q.as_ref()?;
        let e = self.entry(v, w)?;
        let mut m = IntMatrix::zeros(e.rank(), e.rank());
        for s in e.summands.iter().filter(|s| s.rank > 0) {
            let c = desc.stratum(&s.stratum)?.cohomology.get(&s.degree)?;
            let f = c.frobenius.as_ref()?;
            m.set_block(s.offset, s.offset, &f.matrix().scale(&num_traits::pow(q.clone(), s.twist)));
        }
        Some(m)
    }
}

/// E2^{v,w} over Z: the free part of ker/im with its torsion reported apart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Entry {
    pub v: i64,
    pub w: i64,
    pub free_rank: usize,
    /// Nontrivial elementary divisors of the torsion of E2^{v,w}.
    pub torsion: Vec<BigInt>,
    /// Primes at which reduction mod ℓ changes the dimension, with the
    /// cokernel that produced each.
    pub bad_primes: BTreeMap<BigInt, Vec<String>>,
    cycles: Sublattice,
    quotient: FreeQuotient,
}

impl E2Entry {
    pub fn prime_set(&self) -> PrimeSet {
        self.bad_primes.keys().cloned().collect()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn cycles(&self) -> &Sublattice {
        &self.cycles
    }

    /// Basis of the free part, as cycles in E1 coordinates.
    pub fn quotient(&self) -> &FreeQuotient {
        &self.quotient
    }
}

pub type E2Table = BTreeMap<(i64, i64), E2Entry>;

fn note_torsion(into: &mut BTreeMap<BigInt, Vec<String>>, divisors: &[BigInt], what: String) {
    for t in divisors {
        for p in prime_divisors(t) {
            into.entry(p).or_default().push(format!("torsion {t} in {what}"));
        }
    }
}

/// E2^{v,w} over Z for a single entry.
pub fn e2_entry(page: &SpectralPage, v: i64, w: i64) -> E2Entry {
    let d_in = page.d1(v - 1, w);
    let d_out = page.d1(v, w);
    let cycles = Sublattice::kernel_of(&d_out);
    let boundaries = Sublattice::image_of(&d_in);
    let quotient = FreeQuotient::new(&cycles, &boundaries);
    let torsion = cokernel_invariants(&LatticeMap::from_matrix(d_in)).torsion();
    let out_torsion = cokernel_invariants(&LatticeMap::from_matrix(d_out)).torsion();
    let mut bad_primes = BTreeMap::new();
    note_torsion(&mut bad_primes, &torsion, format!("coker d1^{{{},{w}}}", v - 1));
    note_torsion(&mut bad_primes, &out_torsion, format!("coker d1^{{{v},{w}}}"));
    E2Entry { v, w, free_rank: quotient.rank(), torsion, bad_primes, cycles, quotient }
}

/// E2 over Z on the whole window.
pub fn compute_e2(page: &SpectralPage) -> E2Table {
    page.entries.keys().map(|&(v, w)| ((v, w), e2_entry(page, v, w))).collect()
}

/// E2^{v,w} over F_ℓ: dimension and cycles completing a basis of the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2ModEntry {
    pub v: i64,
    pub w: i64,
    pub dim: usize,
    pub basis: Vec<Vec<u64>>,
}

pub fn compute_e2_mod(page: &SpectralPage, ell: u64) -> Result<BTreeMap<(i64, i64), E2ModEntry>> {
    check_modulus(ell)?;
    let mut out = BTreeMap::new();
    for &(v, w) in page.entries.keys() {
        let d_in = ModMatrix::reduce(&page.d1(v - 1, w), ell);
        let d_out = ModMatrix::reduce(&page.d1(v, w), ell);
        let cycles = Subspace::kernel_of(&d_out);
        let mut span = Subspace::image_of(&d_in);
        let mut basis = Vec::new();
        for z in cycles.basis().to_rows() {
            if !span.contains_vector(&z) {
                let single = ModMatrix::from_rows(ell, std::slice::from_ref(&z), z.len())?;
                span = span.sum(&Subspace::span(&single));
                basis.push(z);
            }
        }
        out.insert((v, w), E2ModEntry { v, w, dim: basis.len(), basis });
    }
    Ok(out)
}
