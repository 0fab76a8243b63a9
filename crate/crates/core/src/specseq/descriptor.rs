use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use crate::exact_linalg::{IntMatrix, Lattice, LatticeMap};
use crate::{Error, Result};

/// Ordered multi-index of components, 1-based and strictly increasing.
pub type StratumIndex = Vec<usize>;

/// One cohomology group of a stratum piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumCohomology {
    pub lattice: Lattice,
    pub frobenius: Option<LatticeMap>,
}

/// The intersection D_I together with its cohomology by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub index: StratumIndex,
    pub cohomology: BTreeMap<u32, StratumCohomology>,
}

impl Stratum {
    /// Codimension-style level |I| − 1.
    pub fn level(&self) -> usize {
        self.index.len() - 1
    }

    pub fn rank(&self, degree: u32) -> usize {
        self.cohomology.get(&degree).map_or(0, |c| c.lattice.rank)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundaryKind {
    /// H^j(D_I) → H^j(D_{I∪{k}}).
    Restriction,
    /// H^j(D_{I∪{k}}) → H^{j+2}(D_I).
    Gysin,
}

impl BoundaryKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryKind::Restriction => "restriction",
            BoundaryKind::Gysin => "gysin",
        }
    }
}

/// A restriction or Gysin map supplied without sign; the alternating sign is
/// applied when d1 is assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMap {
    pub kind: BoundaryKind,
    pub source: StratumIndex,
    pub target: StratumIndex,
    /// Cohomological degree on the source side.
    pub degree: u32,
    pub map: LatticeMap,
}

impl BoundaryMap {
    pub fn target_degree(&self) -> u32 {
        match self.kind {
            BoundaryKind::Restriction => self.degree,
            BoundaryKind::Gysin => self.degree + 2,
        }
    }

    /// The component k distinguishing the larger multi-index from the smaller.
    pub fn extra_component(&self) -> Option<usize> {
        let (small, big) = match self.kind {
            BoundaryKind::Restriction => (&self.source, &self.target),
            BoundaryKind::Gysin => (&self.target, &self.source),
        };
        if big.len() != small.len() + 1 {
            return None;
        }
        let extra: Vec<usize> = big.iter().filter(|k| !small.contains(k)).copied().collect();
        (extra.len() == 1 && small.iter().all(|k| big.contains(k))).then(|| extra[0])
    }
}

/// Combinatorial and cohomological data of a strictly semistable special
/// fiber: components, their intersections, and the boundary maps between
/// intersection cohomology groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationDescriptor {
    pub relative_dimension: usize,
    pub components: usize,
    pub strata: Vec<Stratum>,
    pub maps: Vec<BoundaryMap>,
    /// Residue field size, needed only for weight certification.
    pub q: Option<BigInt>,
}

impl DegenerationDescriptor {
    pub fn new(relative_dimension: usize, components: usize) -> Self {
        DegenerationDescriptor { relative_dimension, components, strata: Vec::new(), maps: Vec::new(), q: None }
    }

    /// Adds D_I with the given (degree, rank) cohomology.
    pub fn add_stratum(&mut self, index: &[usize], ranks: &[(u32, usize)]) -> &mut Self {
        let cohomology = ranks
            .iter()
            .map(|&(j, r)| (j, StratumCohomology { lattice: Lattice::labelled(r, label(index, j)), frobenius: None }))
            .collect();
        self.strata.push(Stratum { index: index.to_vec(), cohomology });
        self
    }

    pub fn set_frobenius(&mut self, index: &[usize], degree: u32, frob: IntMatrix) -> Result<&mut Self> {
        let s = self
            .strata
            .iter_mut()
            .find(|s| s.index == index)
            .ok_or_else(|| Error::descriptor(format!("no stratum {index:?}")))?;
        let c = s
            .cohomology
            .get_mut(&degree)
            .ok_or_else(|| Error::descriptor(format!("stratum {index:?} has no H^{degree}")))?;
        let l = c.lattice.clone();
        c.frobenius = Some(LatticeMap::new(l.clone(), l, frob)?);
        Ok(self)
    }

    pub fn add_restriction(&mut self, source: &[usize], target: &[usize], degree: u32, m: IntMatrix) -> &mut Self {
        self.push_map(BoundaryKind::Restriction, source, target, degree, m)
    }

    pub fn add_gysin(&mut self, source: &[usize], target: &[usize], degree: u32, m: IntMatrix) -> &mut Self {
        self.push_map(BoundaryKind::Gysin, source, target, degree, m)
    }

    fn push_map(&mut self, kind: BoundaryKind, source: &[usize], target: &[usize], degree: u32, m: IntMatrix) -> &mut Self {
        let map = LatticeMap::from_matrix(m);
        self.maps.push(BoundaryMap { kind, source: source.to_vec(), target: target.to_vec(), degree, map });
        self
    }

    pub fn with_q(mut self, q: impl Into<BigInt>) -> Self {
        self.q = Some(q.into());
        self
    }

    pub fn stratum(&self, index: &[usize]) -> Option<&Stratum> {
        self.strata.iter().find(|s| s.index == index)
    }

    /// Pieces of Y^(level), in lexicographic order of multi-index.
    pub fn strata_of_level(&self, level: usize) -> Vec<&Stratum> {
        let mut v: Vec<&Stratum> = self.strata.iter().filter(|s| s.level() == level).collect();
        v.sort_by(|a, b| a.index.cmp(&b.index));
        v
    }

    pub fn rank(&self, index: &[usize], degree: u32) -> usize {
        self.stratum(index).map_or(0, |s| s.rank(degree))
    }

    /// dim D_I = d − |I| + 1.
    pub fn piece_dimension(&self, index: &[usize]) -> Option<usize> {
        (self.relative_dimension + 1).checked_sub(index.len())
    }

    pub fn boundary(&self, kind: BoundaryKind, source: &[usize], target: &[usize], degree: u32) -> Option<&LatticeMap> {
        self.maps
            .iter()
            .find(|m| m.kind == kind && m.source == source && m.target == target && m.degree == degree)
            .map(|m| &m.map)
    }

    pub fn has_frobenius(&self) -> bool {
        self.strata.iter().any(|s| s.cohomology.values().any(|c| c.frobenius.is_some()))
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.relative_dimension;
        let m = self.components;
        if m == 0 {
            return Err(Error::descriptor("a degeneration needs at least one component"));
        }
        if let Some(q) = &self.q {
            if crate::arith::prime_power(q).is_none() {
                return Err(Error::NotPrimePower(q.to_string()));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &self.strata {
            let idx = &s.index;
            if idx.is_empty() || idx.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::descriptor(format!("stratum {idx:?} is not a strictly increasing multi-index")));
            }
            if idx.iter().any(|&k| k == 0 || k > m) {
                return Err(Error::descriptor(format!("stratum {idx:?} names a component outside 1..={m}")));
            }
            let Some(dim) = self.piece_dimension(idx) else {
                return Err(Error::descriptor(format!(
                    "stratum {idx:?} has {} components but relative dimension is {d}",
                    idx.len()
                )));
            };
            if !seen.insert(idx.clone()) {
                return Err(Error::descriptor(format!("stratum {idx:?} is listed twice")));
            }
            for (&j, c) in &s.cohomology {
                if j as usize > 2 * dim {
                    return Err(Error::descriptor(format!(
                        "stratum {idx:?} has dimension {dim} but declares H^{j}"
                    )));
                }
                if let Some(f) = &c.frobenius {
                    if f.source().rank != c.lattice.rank || f.target().rank != c.lattice.rank {
                        return Err(Error::descriptor(format!(
                            "Frobenius on H^{j} of {idx:?} is not an endomorphism of Z^{}",
                            c.lattice.rank
                        )));
                    }
                }
            }
        }
        for k in 1..=m {
            if !seen.contains(&vec![k]) {
                return Err(Error::descriptor(format!("component {k} has no stratum entry")));
            }
        }
        for idx in &seen {
            if idx.len() > 1 {
                for pos in 0..idx.len() {
                    let mut face = idx.clone();
                    face.remove(pos);
                    if !seen.contains(&face) {
                        return Err(Error::descriptor(format!(
                            "stratum {idx:?} is nonempty but its face {face:?} is missing"
                        )));
                    }
                }
            }
        }
        let mut keys = BTreeSet::new();
        for b in &self.maps {
            let what = format!("{} {:?} → {:?} in degree {}", b.kind.name(), b.source, b.target, b.degree);
            if b.extra_component().is_none() {
                return Err(Error::descriptor(format!("{what}: indices are not adjacent")));
            }
            let (Some(src), Some(tgt)) = (self.stratum(&b.source), self.stratum(&b.target)) else {
                return Err(Error::descriptor(format!("{what}: stratum not declared")));
            };
            let shape = (tgt.rank(b.target_degree()), src.rank(b.degree));
            if b.map.matrix().shape() != shape {
                return Err(Error::descriptor(format!(
                    "{what}: matrix is {}×{}, expected {}×{}",
                    b.map.matrix().nrows(),
                    b.map.matrix().ncols(),
                    shape.0,
                    shape.1
                )));
            }
            if !keys.insert((b.kind, b.source.clone(), b.target.clone(), b.degree)) {
                return Err(Error::descriptor(format!("{what}: given twice")));
            }
        }
        Ok(())
    }
}

fn label(index: &[usize], j: u32) -> String {
    let parts: Vec<String> = index.iter().map(|k| k.to_string()).collect();
    format!("H^{j}(D_{{{}}})", parts.join(","))
}
