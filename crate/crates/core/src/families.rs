//! Prime-indexed families of mod-ℓ modules presented by one integral model
//! plus finitely many explicit exceptions.
//!
//! "For all but finitely many ℓ" is always returned as an explicit finite
//! set of primes together with the reason each prime was excluded.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::arith::{check_modulus, prime_divisors, PrimeSet};
use crate::exact_linalg::{cokernel_invariants, IntMatrix, Lattice, LatticeMap, ModMatrix};
use crate::poly::IntPolynomial;
use crate::weil::{
    annihilation_exceptional_primes, bezout_bad_primes, certify_weil, characteristic_polynomial, Annihilation,
    WeilCertificate,
};
use crate::{Error, Result};

pub const FROBENIUS: &str = "frobenius";
pub const MONODROMY: &str = "monodromy";

/// Explicit fiber at one prime, replacing the reduction of the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberOverride {
    pub dim: usize,
    pub operators: BTreeMap<String, ModMatrix>,
}

/// The fiber of a family at ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub ell: u64,
    pub dim: usize,
    pub operators: BTreeMap<String, ModMatrix>,
    pub overridden: bool,
}

/// A weight together with the evidence for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightCertificate {
    pub w: u32,
    pub q: BigInt,
    pub certificate: WeilCertificate,
    /// Always `Annihilation::Integral` for a successful certificate.
    pub annihilation: Annihilation,
    /// Exception primes whose overriding Frobenius is not killed by P.
    pub exceptional: BTreeMap<BigInt, String>,
    /// Number of Frobenius matrices checked. The weight condition quantifies
    /// over every closed point; only the supplied ones are examined.
    pub points_checked: usize,
}

impl WeightCertificate {
    pub fn polynomial(&self) -> &IntPolynomial {
        &self.certificate.polynomial
    }

    pub fn exceptional_primes(&self) -> PrimeSet {
        self.exceptional.keys().cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralFamily {
    model: Lattice,
    operators: BTreeMap<String, LatticeMap>,
    exceptions: BTreeMap<u64, FiberOverride>,
    declared_weight: Option<WeightCertificate>,
}

impl IntegralFamily {
    pub fn new(model: Lattice, frobenius: IntMatrix) -> Result<Self> {
        let mut fam = IntegralFamily {
            model,
            operators: BTreeMap::new(),
            exceptions: BTreeMap::new(),
            declared_weight: None,
        };
        fam.add_operator(FROBENIUS, frobenius)?;
        Ok(fam)
    }

    pub fn from_frobenius(frobenius: IntMatrix) -> Result<Self> {
        Self::new(Lattice::new(frobenius.nrows()), frobenius)
    }

    pub fn add_operator(&mut self, name: &str, matrix: IntMatrix) -> Result<()> {
        let r = self.model.rank;
        let map = LatticeMap::new(self.model.clone(), self.model.clone(), matrix)
            .map_err(|e| Error::shape(format!("operator {name:?} on a rank-{r} model: {e}")))?;
        self.operators.insert(name.to_string(), map);
        Ok(())
    }

    pub fn with_operator(mut self, name: &str, matrix: IntMatrix) -> Result<Self> {
        self.add_operator(name, matrix)?;
        Ok(self)
    }

    pub fn add_exception(&mut self, ell: u64, fiber: FiberOverride) -> Result<()> {
        check_modulus(ell)?;
        for (name, m) in &fiber.operators {
            if m.shape() != (fiber.dim, fiber.dim) || m.modulus() != ell {
                return Err(Error::shape(format!("override {name:?} at ℓ = {ell} does not match its fiber")));
            }
        }
        self.exceptions.insert(ell, fiber);
        Ok(())
    }

    pub fn with_exception(mut self, ell: u64, fiber: FiberOverride) -> Result<Self> {
        self.add_exception(ell, fiber)?;
        Ok(self)
    }

    /// Certifies the family at weight w and records the certificate.
    pub fn declare_weight(&mut self, q: &BigInt, w: u32, candidate: Option<&IntPolynomial>) -> Result<()> {
        self.declared_weight = Some(weight_certify_family(self, q, w, candidate)?);
        Ok(())
    }

    pub fn model(&self) -> &Lattice {
        &self.model
    }

    pub fn rank(&self) -> usize {
        self.model.rank
    }

    pub fn operator(&self, name: &str) -> Option<&LatticeMap> {
        self.operators.get(name)
    }

    pub fn operators(&self) -> &BTreeMap<String, LatticeMap> {
        &self.operators
    }

    pub fn frobenius(&self) -> &LatticeMap {
        &self.operators[FROBENIUS]
    }

    pub fn exceptions(&self) -> &BTreeMap<u64, FiberOverride> {
        &self.exceptions
    }

    pub fn declared_weight(&self) -> Option<&WeightCertificate> {
        self.declared_weight.as_ref()
    }

    pub fn fiber(&self, ell: u64) -> Result<Fiber> {
        check_modulus(ell)?;
        if let Some(o) = self.exceptions.get(&ell) {
            return Ok(Fiber { ell, dim: o.dim, operators: o.operators.clone(), overridden: true });
        }
        let operators =
            self.operators.iter().map(|(k, v)| (k.clone(), ModMatrix::reduce(v.matrix(), ell))).collect();
        Ok(Fiber { ell, dim: self.model.rank, operators, overridden: false })
    }
}

fn eval_mod(p: &IntPolynomial, m: &ModMatrix) -> ModMatrix {
    let (ell, n) = (m.modulus(), m.nrows());
    let mut acc = ModMatrix::zeros(ell, n, n);
    for c in p.coeffs().iter().rev() {
        let c = crate::arith::reduce_mod(c, ell);
        acc = acc.dot(m).add(&ModMatrix::identity(ell, n).scale(c));
    }
    acc
}

/// Finds or validates a Weil q^w-polynomial killing the model Frobenius.
///
/// Without a candidate the characteristic polynomial is used.
pub fn weight_certify_family(
    fam: &IntegralFamily,
    q: &BigInt,
    w: u32,
    candidate: Option<&IntPolynomial>,
) -> Result<WeightCertificate> {
    let frob = fam.frobenius();
    let p = match candidate {
        Some(p) => p.clone(),
        None => characteristic_polynomial(frob.matrix())?,
    };
    let certificate = certify_weil(&p, q, w)?;
    if !certificate.is_certified() {
        let reason = match certificate.witness() {
            Some((f, wit)) => format!("{p} is not a Weil {q}^{w}-polynomial: factor {f}: {wit}"),
            None => format!("{p} is not a Weil {q}^{w}-polynomial"),
        };
        return Err(Error::NotOfWeight { w, reason });
    }
    let annihilation = annihilation_exceptional_primes(frob, &p)?;
    if let Annihilation::Content { content, .. } = &annihilation {
        return Err(Error::NotOfWeight {
            w,
            reason: format!("{p} does not kill the model Frobenius: P(F) ≠ 0 with content {content}"),
        });
    }
    let mut exceptional = BTreeMap::new();
    for (&ell, o) in &fam.exceptions {
        match o.operators.get(FROBENIUS) {
            Some(f) if !eval_mod(&p, f).is_zero() => {
                exceptional.insert(BigInt::from(ell), "override Frobenius is not killed by P".to_string());
            }
            Some(_) => {}
            None => {
                exceptional.insert(BigInt::from(ell), "override has no Frobenius".to_string());
            }
        }
    }
    Ok(WeightCertificate { w, q: q.clone(), certificate, annihilation, exceptional, points_checked: 1 })
}

/// A Frobenius-equivariant map of families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyMap {
    source: IntegralFamily,
    target: IntegralFamily,
    model_map: LatticeMap,
    overrides: BTreeMap<u64, ModMatrix>,
}

impl FamilyMap {
    pub fn new(source: IntegralFamily, target: IntegralFamily, matrix: IntMatrix) -> Result<Self> {
        let model_map = LatticeMap::new(source.model.clone(), target.model.clone(), matrix)?;
        let lhs = model_map.matrix().dot(source.frobenius().matrix());
        let rhs = target.frobenius().matrix().dot(model_map.matrix());
        if lhs != rhs {
            return Err(Error::InvalidArgument("map does not commute with Frobenius on the models".into()));
        }
        Ok(FamilyMap { source, target, model_map, overrides: BTreeMap::new() })
    }

    pub fn with_override(mut self, ell: u64, m: ModMatrix) -> Result<Self> {
        check_modulus(ell)?;
        let (s, t) = (self.source.fiber(ell)?, self.target.fiber(ell)?);
        if m.shape() != (t.dim, s.dim) || m.modulus() != ell {
            return Err(Error::shape(format!("override at ℓ = {ell} has the wrong shape")));
        }
        if let (Some(fs), Some(ft)) = (s.operators.get(FROBENIUS), t.operators.get(FROBENIUS)) {
            if m.dot(fs) != ft.dot(&m) {
                return Err(Error::InvalidArgument(format!("override at ℓ = {ell} does not commute with Frobenius")));
            }
        }
        self.overrides.insert(ell, m);
        Ok(self)
    }

    pub fn source(&self) -> &IntegralFamily {
        &self.source
    }

    pub fn target(&self) -> &IntegralFamily {
        &self.target
    }

    pub fn model_map(&self) -> &LatticeMap {
        &self.model_map
    }

    /// Primes at which some fiber or the map itself is given explicitly.
    pub fn exceptional_primes(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self
            .overrides
            .keys()
            .chain(self.source.exceptions.keys())
            .chain(self.target.exceptions.keys())
            .copied()
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// The map on fibers at ℓ. At a prime where a fiber is overridden but
    /// the map is not, the model reduction is used when shapes allow.
    pub fn fiber_map(&self, ell: u64) -> Result<ModMatrix> {
        if let Some(m) = self.overrides.get(&ell) {
            return Ok(m.clone());
        }
        let (s, t) = (self.source.fiber(ell)?, self.target.fiber(ell)?);
        if (t.dim, s.dim) != self.model_map.matrix().shape() {
            return Err(Error::InvalidArgument(format!("no map given between the overridden fibers at ℓ = {ell}")));
        }
        Ok(ModMatrix::reduce(self.model_map.matrix(), ell))
    }
}

/// Outcome of the almost-all-ℓ isomorphism question.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    /// The fiber map is an isomorphism for every ℓ outside the listed set.
    AlmostAll { bad_primes: BTreeMap<BigInt, Vec<String>> },
    /// The model map is not rationally invertible, so no fiber outside the
    /// exceptions is an isomorphism.
    NoPrime { reason: String },
}

impl IsoVerdict {
    pub fn bad_primes(&self) -> Option<PrimeSet> {
        match self {
            IsoVerdict::AlmostAll { bad_primes } => Some(bad_primes.keys().cloned().collect()),
            IsoVerdict::NoPrime { .. } => None,
        }
    }
}

pub fn almost_all_iso(f: &FamilyMap) -> Result<IsoVerdict> {
    let m = f.model_map.matrix();
    if f.source.rank() != f.target.rank() {
        return Ok(IsoVerdict::NoPrime {
            reason: format!("model ranks differ: {} vs {}", f.source.rank(), f.target.rank()),
        });
    }
    let inv = cokernel_invariants(&f.model_map);
    if inv.rank_defect() > 0 {
        return Ok(IsoVerdict::NoPrime {
            reason: format!("model map has rational rank {} < {}", inv.rank(), m.nrows()),
        });
    }
    let mut bad: BTreeMap<BigInt, Vec<String>> = BTreeMap::new();
    for d in inv.torsion() {
        for p in prime_divisors(&d) {
            bad.entry(p).or_default().push(format!("divides elementary divisor {d}"));
        }
    }
    for ell in f.exceptional_primes() {
        let iso = match f.fiber_map(ell) {
            Ok(fm) => fm.is_invertible(),
            Err(_) => false,
        };
        if !iso {
            bad.entry(BigInt::from(ell)).or_default().push("overridden fiber map is not an isomorphism".into());
        }
    }
    Ok(IsoVerdict::AlmostAll { bad_primes: bad })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub source_weight: WeightCertificate,
    pub target_weight: WeightCertificate,
    pub primes: BTreeMap<BigInt, Vec<String>>,
}

impl VanishingReport {
    pub fn prime_set(&self) -> PrimeSet {
        self.primes.keys().cloned().collect()
    }
}

/// The primes outside of which an equivariant map between families of
/// distinct weights must vanish.
pub fn vanishing_for_almost_all(f: &FamilyMap, q: &BigInt, w1: u32, w2: u32) -> Result<VanishingReport> {
    if w1 == w2 {
        return Err(Error::InvalidArgument(format!("weights must differ, both are {w1}")));
    }
    let cert = |fam: &IntegralFamily, w: u32| match fam.declared_weight() {
        Some(c) if c.w == w && &c.q == q => Ok(c.clone()),
        Some(c) => weight_certify_family(fam, q, w, Some(c.polynomial())),
        None => weight_certify_family(fam, q, w, None),
    };
    let source_weight = cert(&f.source, w1)?;
    let target_weight = cert(&f.target, w2)?;
    if !f.model_map.matrix().is_zero() {
        return Err(Error::consistency("equivariant model map between distinct weights is not zero"));
    }
    let mut primes: BTreeMap<BigInt, Vec<String>> = BTreeMap::new();
    let bez = bezout_bad_primes(source_weight.polynomial(), target_weight.polynomial())?;
    for p in bez.primes {
        primes.entry(p).or_default().push("Bézout cofactor denominator".into());
    }
    for p in source_weight.exceptional_primes() {
        primes.entry(p).or_default().push("source exception".into());
    }
    for p in target_weight.exceptional_primes() {
        primes.entry(p).or_default().push("target exception".into());
    }
    for (&ell, m) in &f.overrides {
        if !m.is_zero() {
            primes.entry(BigInt::from(ell)).or_default().push("nonzero map override".into());
        }
    }
    Ok(VanishingReport { source_weight, target_weight, primes })
}

/// Whether the fiber map vanishes at ℓ.
pub fn fiber_map_vanishes(f: &FamilyMap, ell: u64) -> Result<bool> {
    Ok(f.fiber_map(ell)?.is_zero())
}

/// The zero map of families.
pub fn zero_map(source: IntegralFamily, target: IntegralFamily) -> Result<FamilyMap> {
    let m = IntMatrix::zeros(target.rank(), source.rank());
    FamilyMap::new(source, target, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(rows: &[&[i64]]) -> IntegralFamily {
        IntegralFamily::from_frobenius(IntMatrix::from_i64(rows)).unwrap()
    }

    fn p(s: &str) -> IntPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn certify_examples() {
        let q = BigInt::from(5);
        let c = weight_certify_family(&fam(&[&[5]]), &q, 2, None).unwrap();
        assert_eq!(c.polynomial(), &p("T-5"));
        assert!(c.exceptional.is_empty());
        let comp = fam(&[&[0, -5], &[1, 3]]);
        assert!(weight_certify_family(&comp, &q, 1, None).is_ok());
        assert!(matches!(weight_certify_family(&fam(&[&[1, 0], &[0, 5]]), &q, 1, None), Err(Error::NotOfWeight { .. })));
    }

    #[test]
    fn exceptions_are_recorded() {
        let q = BigInt::from(3);
        let mut ops = BTreeMap::new();
        ops.insert(FROBENIUS.to_string(), ModMatrix::from_i64(7, &[&[2]]));
        let f = fam(&[&[3]]).with_exception(7, FiberOverride { dim: 1, operators: ops }).unwrap();
        let c = weight_certify_family(&f, &q, 2, None).unwrap();
        assert_eq!(c.exceptional_primes(), PrimeSet::from([BigInt::from(7)]));
    }

    #[test]
    fn iso_examples() {
        let a = fam(&[&[2]]);
        let id = FamilyMap::new(a.clone(), a.clone(), IntMatrix::identity(1)).unwrap();
        assert_eq!(almost_all_iso(&id).unwrap().bad_primes(), Some(PrimeSet::new()));
        let six = FamilyMap::new(a.clone(), a.clone(), IntMatrix::from_i64(&[&[6]])).unwrap();
        assert_eq!(almost_all_iso(&six).unwrap().bad_primes(), Some(PrimeSet::from([2.into(), 3.into()])));
        let z = zero_map(a.clone(), a).unwrap();
        assert!(matches!(almost_all_iso(&z).unwrap(), IsoVerdict::NoPrime { .. }));
    }

    #[test]
    fn vanishing_example() {
        let q = BigInt::from(5);
        let f = zero_map(fam(&[&[1]]), fam(&[&[5]])).unwrap();
        let r = vanishing_for_almost_all(&f, &q, 0, 2).unwrap();
        assert_eq!(r.prime_set(), PrimeSet::from([BigInt::from(2)]));
        assert!(vanishing_for_almost_all(&f, &q, 2, 2).is_err());
        assert!(FamilyMap::new(fam(&[&[1]]), fam(&[&[5]]), IntMatrix::from_i64(&[&[1]])).is_err());
    }
}
