use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::descriptor::DegenerationDescriptor;
use super::page::{assemble_e1, e2_entry, E2Table, SpectralPage, BASIS_CONVENTION, SIGN_CONVENTION};
use crate::arith::{prime_divisors, PrimeSet};
use crate::exact_linalg::{cokernel_invariants, ElementaryDivisors, IntMatrix, LatticeMap};
use crate::families::{weight_certify_family, IntegralFamily, WeightCertificate};
use crate::weil::bezout_bad_primes;
use crate::{Error, Result};

/// The map ν^i : E2^{−i,w+i} → E2^{i,w−i} for one i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVerdict {
    pub i: usize,
    pub source: (i64, i64),
    pub target: (i64, i64),
    pub source_rank: usize,
    pub target_rank: usize,
    /// Matrix in the Hermite quotient bases of the free parts.
    pub matrix: IntMatrix,
    pub divisors: ElementaryDivisors,
    pub rational_iso: bool,
    pub bad_primes: BTreeMap<BigInt, Vec<String>>,
}

impl LevelVerdict {
    pub fn prime_set(&self) -> PrimeSet {
        self.bad_primes.keys().cloned().collect()
    }

    /// Whether the map is an isomorphism of E2 terms mod ℓ.
    pub fn holds_mod(&self, ell: u64) -> bool {
        self.rational_iso && !self.bad_primes.contains_key(&BigInt::from(ell))
    }
}

/// Whether every ν^i is an isomorphism on E2, in one weight w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyVerdict {
    pub w: i64,
    pub sign_convention: &'static str,
    pub basis_convention: &'static str,
    pub levels: Vec<LevelVerdict>,
}

impl MonodromyVerdict {
    pub fn holds_rationally(&self) -> bool {
        self.levels.iter().all(|l| l.rational_iso)
    }

    pub fn level(&self, i: usize) -> Option<&LevelVerdict> {
        self.levels.iter().find(|l| l.i == i)
    }

    pub fn bad_primes(&self) -> PrimeSet {
        self.levels.iter().flat_map(|l| l.bad_primes.keys().cloned()).collect()
    }
}

fn add_primes(into: &mut BTreeMap<BigInt, Vec<String>>, from: &BTreeMap<BigInt, Vec<String>>, at: (i64, i64)) {
    for (p, why) in from {
        let e = into.entry(p.clone()).or_default();
        e.extend(why.iter().map(|s| format!("E2^{{{},{}}}: {s}", at.0, at.1)));
    }
}

/// Evaluates ν^i on E2 for 0 ≤ i ≤ d. E2 entries are taken from `e2` when
/// present and computed otherwise.
pub fn monodromy_on_e2(page: &SpectralPage, e2: &E2Table, w: i64) -> MonodromyVerdict {
    let d = page.relative_dimension();
    let fetch = |v: i64, ww: i64| e2.get(&(v, ww)).cloned().unwrap_or_else(|| e2_entry(page, v, ww));
    let mut levels = Vec::new();
    for i in 0..=d {
        let k = i as i64;
        let (source, target) = ((-k, w + k), (k, w - k));
        let src = fetch(source.0, source.1);
        let tgt = fetch(target.0, target.1);
        let nu = page.monodromy_power(source.0, source.1, i);
        let matrix = src.quotient().induced_matrix(&nu, tgt.quotient());
        let divisors = cokernel_invariants(&LatticeMap::from_matrix(matrix.clone()));
        let rational_iso = src.free_rank == tgt.free_rank && divisors.rank() == tgt.free_rank;
        let mut bad_primes: BTreeMap<BigInt, Vec<String>> = BTreeMap::new();
        for t in divisors.torsion() {
            for p in prime_divisors(&t) {
                bad_primes.entry(p).or_default().push(format!("elementary divisor {t} of ν^{i}"));
            }
        }
        add_primes(&mut bad_primes, &src.bad_primes, source);
        add_primes(&mut bad_primes, &tgt.bad_primes, target);
        levels.push(LevelVerdict {
            i,
            source,
            target,
            source_rank: src.free_rank,
            target_rank: tgt.free_rank,
            matrix,
            divisors,
            rational_iso,
            bad_primes,
        });
    }
    MonodromyVerdict { w, sign_convention: SIGN_CONVENTION, basis_convention: BASIS_CONVENTION, levels }
}

/// Assembles the descriptor and evaluates the verdict in weight w.
pub fn monodromy_verdict(desc: &DegenerationDescriptor, w: i64) -> Result<MonodromyVerdict> {
    let page = assemble_e1(desc)?;
    Ok(monodromy_on_e2(&page, &E2Table::new(), w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub computed: usize,
    pub claimed: Option<usize>,
}

impl DegreeCheck {
    pub fn consistent(&self) -> bool {
        self.claimed.is_none_or(|c| c == self.computed)
    }
}

/// Σ_{v+w=n} rank E2^{v,w} against claimed Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankConsistency {
    pub degrees: BTreeMap<usize, DegreeCheck>,
}

impl RankConsistency {
    pub fn consistent(&self) -> bool {
        self.degrees.values().all(DegreeCheck::consistent)
    }

    pub fn mismatches(&self) -> Vec<usize> {
        self.degrees.iter().filter(|(_, c)| !c.consistent()).map(|(&n, _)| n).collect()
    }
}

pub fn total_rank_consistency(e2: &E2Table, claimed: &BTreeMap<usize, usize>) -> RankConsistency {
    let mut degrees: BTreeMap<usize, DegreeCheck> = BTreeMap::new();
    for (&(v, w), e) in e2 {
        let n = v + w;
        if n >= 0 {
            degrees.entry(n as usize).or_insert(DegreeCheck { computed: 0, claimed: None }).computed += e.free_rank;
        }
    }
    for (&n, &c) in claimed {
        degrees.entry(n).or_insert(DegreeCheck { computed: 0, claimed: None }).claimed = Some(c);
    }
    RankConsistency { degrees }
}

/// Weight certificates for the E1 rows and the d2 maps they force to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightReport {
    pub q: BigInt,
    pub entries: BTreeMap<(i64, i64), std::result::Result<WeightCertificate, String>>,
    pub d2_vanishing: Vec<D2Vanishing>,
}

/// d2 : E2^{v,w} → E2^{v+2,w−1} vanishes mod every ℓ outside `primes`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Vanishing {
    pub source: (i64, i64),
    pub target: (i64, i64),
    pub primes: PrimeSet,
}

/// Certifies E1^{v,w} as weight w for every nonzero entry whose summands all
/// carry a Frobenius. Returns None without q or Frobenius data.
pub fn weight_report(desc: &DegenerationDescriptor, page: &SpectralPage) -> Result<Option<WeightReport>> {
    let Some(q) = desc.q.clone() else {
        return Ok(None);
    };
    if !desc.has_frobenius() {
        return Ok(None);
    }
    let mut frobs = BTreeMap::new();
    for (&(v, w), e) in page.entries() {
        if e.rank() > 0 {
            if let Some(f) = page.frobenius(desc, v, w) {
                frobs.insert((v, w), f);
            }
        }
    }
    for (&(v, w), f) in &frobs {
        if let Some(g) = frobs.get(&(v + 1, w)) {
            let d = page.d1(v, w);
            if d.dot(f) != g.dot(&d) {
                return Err(Error::descriptor(format!("d1^{{{v},{w}}} is not Frobenius-equivariant")));
            }
        }
    }
    let mut entries = BTreeMap::new();
    for (&(v, w), f) in &frobs {
        let fam = IntegralFamily::from_frobenius(f.clone())?;
        let cert = match weight_certify_family(&fam, &q, w as u32, None) {
            Ok(c) => Ok(c),
            Err(Error::NotOfWeight { reason, .. }) => Err(reason),
            Err(e) => return Err(e),
        };
        entries.insert((v, w), cert);
    }
    let mut d2_vanishing = Vec::new();
    for (&(v, w), c) in &entries {
        let (Ok(a), Some(Ok(b))) = (c, entries.get(&(v + 2, w - 1))) else {
            continue;
        };
        let bz = bezout_bad_primes(a.polynomial(), b.polynomial())?;
        d2_vanishing.push(D2Vanishing { source: (v, w), target: (v + 2, w - 1), primes: bz.primes });
    }
    Ok(Some(WeightReport { q, entries, d2_vanishing }))
}
