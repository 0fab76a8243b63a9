//! Weil q^w-polynomials: exact certification that every complex root has
//! squared modulus q^w, the finite-extension transform, Bézout prime sets
//! for coprime pairs, and annihilation of integer matrices by polynomials.

pub mod factor;
pub mod sturm;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{prime_divisors, prime_power, PrimeSet};
use crate::exact_linalg::{IntMatrix, LatticeMap};
use crate::poly::{IntPolynomial, RatPolynomial};
use crate::{Error, Result};
use sturm::{root_bound, SturmSequence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WeilStatus {
    Certified,
    Refuted,
}

/// Why a factor has a root off the circle |z|² = q^w.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefutationWitness {
    /// The factor is T, so 0 is a root.
    ZeroRoot,
    /// The trace polynomial has non-real roots; each comes from a root α
    /// with α + q^w/α not real.
    NonRealTrace { real_roots: usize, distinct_roots: usize },
    /// A real trace root β = α + q^w/α lies in the interval (or is the
    /// endpoint when both are equal) and |β| > 2·q^{w/2}.
    TraceOutOfRange { lower: BigRational, upper: BigRational },
}

impl fmt::Display for RefutationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RefutationWitness::ZeroRoot => write!(f, "0 is a root"),
            RefutationWitness::NonRealTrace { real_roots, distinct_roots } => {
                write!(f, "trace polynomial has only {real_roots} real roots out of {distinct_roots}")
            }
            RefutationWitness::TraceOutOfRange { lower, upper } => {
                write!(f, "a trace root lies in [{lower}, {upper}], outside (-2R, 2R)")
            }
        }
    }
}

/// Record of the Sturm test on one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmTranscript {
    /// Square-free part of Res_x(f(x), x² − T·x + q^w).
    pub trace_polynomial: IntPolynomial,
    pub sequence_length: usize,
    pub distinct_roots: usize,
    pub real_roots: usize,
    /// Bits of precision k at which the bracket [L, U] around 2R settled.
    pub precision_bits: u32,
    pub inner: BigRational,
    pub outer: BigRational,
    pub roots_inside: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FactorVerdict {
    /// f divides T² − q^w, so its roots are ±q^{w/2}.
    Boundary,
    Sturm(SturmTranscript),
    Refuted(RefutationWitness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorCertificate {
    pub factor: IntPolynomial,
    pub multiplicity: u32,
    /// f divides T^e·f(q^w/T).
    pub inversion_symmetric: bool,
    pub verdict: FactorVerdict,
}

impl FactorCertificate {
    pub fn is_certified(&self) -> bool {
        !matches!(self.verdict, FactorVerdict::Refuted(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilCertificate {
    pub polynomial: IntPolynomial,
    pub q: BigInt,
    pub w: u32,
    pub status: WeilStatus,
    pub factors: Vec<FactorCertificate>,
}

impl WeilCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == WeilStatus::Certified
    }

    /// q^w.
    pub fn target_modulus(&self) -> BigInt {
        num_traits::pow(self.q.clone(), self.w as usize)
    }

    /// First refuted factor and its witness.
    pub fn witness(&self) -> Option<(&IntPolynomial, &RefutationWitness)> {
        self.factors.iter().find_map(|f| match &f.verdict {
            FactorVerdict::Refuted(w) => Some((&f.factor, w)),
            _ => None,
        })
    }
}

impl fmt::Display for WeilCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.is_certified() { "certified" } else { "refuted" };
        write!(f, "{} is {status} as a Weil {}^{}-polynomial", self.polynomial, self.q, self.w)?;
        if let Some((g, w)) = self.witness() {
            write!(f, " (factor {g}: {w})")?;
        }
        Ok(())
    }
}

/// f(x) mod (x² − T·x + Q) = a(T)·x + b(T).
fn reduce_mod_trace_quadratic(f: &IntPolynomial, big_q: &BigInt) -> (IntPolynomial, IntPolynomial) {
    let t = IntPolynomial::from_i64(&[0, 1]);
    let mq = IntPolynomial::constant(-big_q);
    // x^k ≡ A_k x + B_k
    let (mut ak, mut bk) = (IntPolynomial::zero(), IntPolynomial::one());
    let (mut a, mut b) = (IntPolynomial::zero(), IntPolynomial::zero());
    for c in f.coeffs() {
        let cc = IntPolynomial::constant(c.clone());
        a = a.add(&ak.mul(&cc));
        b = b.add(&bk.mul(&cc));
        let next_a = t.mul(&ak).add(&bk);
        bk = mq.mul(&ak);
        ak = next_a;
    }
    (a, b)
}

/// Res_x(f(x), x² − T·x + Q): its roots are α + Q/α over the roots α of f.
pub fn trace_polynomial(f: &IntPolynomial, big_q: &BigInt) -> IntPolynomial {
    let (a, b) = reduce_mod_trace_quadratic(f, big_q);
    let t = IntPolynomial::from_i64(&[0, 1]);
    a.mul(&a).scale(big_q).add(&t.mul(&a).mul(&b)).add(&b.mul(&b))
}

fn rational(n: BigInt, shift: u32) -> BigRational {
    BigRational::new(n, BigInt::one() << shift)
}

/// Decides whether every root of the trace polynomial is real and lies in
/// (−2R, 2R), R² = Q, given that none lies at ±2R.
///
/// 2R is bracketed by L_k = ⌊√(4Q·4^k)⌋ / 2^k ≤ 2R < U_k = L_k + 2^{−k}.
/// Roots in [−L_k, L_k] are inside and roots outside (−U_k, U_k) are
/// outside. Since no root equals ±2R, the gap between the two counts closes
/// once 2^{−k} is below the distance from ±2R to the nearest root, so the
/// loop terminates.
fn sturm_verdict(f: &IntPolynomial, big_q: &BigInt) -> FactorVerdict {
    let trace = trace_polynomial(f, big_q).square_free_part();
    let seq = SturmSequence::new(&trace);
    let distinct = trace.degree().max(0) as usize;
    let real = seq.real_roots();
    if real < distinct {
        return FactorVerdict::Refuted(RefutationWitness::NonRealTrace { real_roots: real, distinct_roots: distinct });
    }
    let four_q: BigInt = big_q * 4;
    let mut k = 0u32;
    loop {
        let root = (&four_q << (2 * k)).sqrt();
        let inner = rational(root.clone(), k);
        let outer = rational(root + 1, k);
        let closed_inside = seq.roots_in(&-&inner, &inner) + usize::from(seq.is_root(&-&inner));
        let open_inside = seq.roots_in(&-&outer, &outer) - usize::from(seq.is_root(&outer));
        if closed_inside == open_inside {
            if closed_inside == real {
                return FactorVerdict::Sturm(SturmTranscript {
                    trace_polynomial: trace,
                    sequence_length: seq.len(),
                    distinct_roots: distinct,
                    real_roots: real,
                    precision_bits: k,
                    inner,
                    outer,
                    roots_inside: closed_inside,
                });
            }
            return FactorVerdict::Refuted(outside_witness(&seq, &trace, &outer));
        }
        k += 1;
    }
}

/// Isolates one real root of the trace polynomial with |β| ≥ outer.
fn outside_witness(seq: &SturmSequence, trace: &IntPolynomial, outer: &BigRational) -> RefutationWitness {
    let bound = root_bound(trace);
    let (lower, upper) = if seq.is_root(outer) {
        (outer.clone(), outer.clone())
    } else if seq.roots_above(outer) > 0 {
        seq.isolate(outer, &bound)
    } else if seq.is_root(&-outer) {
        (-outer, -outer)
    } else {
        seq.isolate(&-&bound, &-outer)
    };
    RefutationWitness::TraceOutOfRange { lower, upper }
}

fn certify_factor(f: &IntPolynomial, multiplicity: u32, big_q: &BigInt) -> Result<FactorCertificate> {
    let inversion_symmetric = f.divides(&f.scaled_reversal(big_q));
    let verdict = if f.coeff(0).is_zero() {
        FactorVerdict::Refuted(RefutationWitness::ZeroRoot)
    } else {
        let boundary = IntPolynomial::new(vec![-big_q, BigInt::zero(), BigInt::one()]);
        if f.gcd(&boundary).degree() >= 1 {
            FactorVerdict::Boundary
        } else {
            sturm_verdict(f, big_q)
        }
    };
    let cert = FactorCertificate { factor: f.clone(), multiplicity, inversion_symmetric, verdict };
    if cert.is_certified() && !inversion_symmetric {
        return Err(Error::consistency(format!("{f} passed the Sturm test but is not inversion-symmetric")));
    }
    Ok(cert)
}

fn check_prime_power(q: &BigInt) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q.to_string()));
    }
    Ok(())
}

/// Decides whether every complex root of the monic polynomial p has
/// squared absolute value q^w.
pub fn certify_weil(p: &IntPolynomial, q: &BigInt, w: u32) -> Result<WeilCertificate> {
    check_prime_power(q)?;
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    let big_q = num_traits::pow(q.clone(), w as usize);
    let factors = factor::factor(p)
        .into_iter()
        .map(|(f, e)| certify_factor(&f, e, &big_q))
        .collect::<Result<Vec<_>>>()?;
    let status = if factors.iter().all(FactorCertificate::is_certified) {
        WeilStatus::Certified
    } else {
        WeilStatus::Refuted
    };
    Ok(WeilCertificate { polynomial: p.clone(), q: q.clone(), w, status, factors })
}

/// ∏_α (T^{f·n} − α^n) over the roots α of p.
pub fn finite_extension_transform(p: &IntPolynomial, f: u32, n: u32) -> Result<IntPolynomial> {
    if f < 1 || n < 1 {
        return Err(Error::InvalidArgument("residue degree and exponent must be positive".into()));
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(p.to_string()));
    }
    let e = p.degree() as usize;
    let n = n as usize;
    // elementary symmetric functions of the roots
    let el: Vec<BigInt> = (0..=e).map(|k| if k % 2 == 0 { p.coeff(e - k) } else { -p.coeff(e - k) }).collect();
    // Newton: power sums s_1..s_{e·n} of the roots
    let mut s = vec![BigInt::from(e)];
    for m in 1..=e * n {
        let mut acc = BigInt::zero();
        for i in 1..=m.min(e) {
            let term = if i == m { &el[i] * BigInt::from(m) } else { &el[i] * &s[m - i] };
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    // elementary symmetric functions of the α^n from their power sums
    let mut big_e = vec![BigInt::one()];
    for k in 1..=e {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &big_e[k - i] * &s[i * n];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        big_e.push(acc / BigInt::from(k));
    }
    let charpoly = IntPolynomial::new((0..=e).map(|j| {
        let k = e - j;
        if k.is_multiple_of(2) { big_e[k].clone() } else { -big_e[k].clone() }
    }).collect());
    Ok(charpoly.substitute_power(f as usize * n))
}

/// Cofactors with s·p1 + t·p2 = 1 over Q and the primes outside of which
/// p1 and p2 still generate the unit ideal mod ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutPrimes {
    pub cofactor1: RatPolynomial,
    pub cofactor2: RatPolynomial,
    pub primes: PrimeSet,
}

/// Primes dividing a denominator of the reduced Bézout cofactors, plus the
/// primes dividing both leading coefficients.
pub fn bezout_bad_primes(p1: &IntPolynomial, p2: &IntPolynomial) -> Result<BezoutPrimes> {
    if p1.is_zero() || p2.is_zero() {
        return Err(Error::NotRelativelyPrime(format!("{p1} and {p2}")));
    }
    let (g, s, t) = p1.to_rational().ext_gcd(&p2.to_rational());
    if g.degree() != 0 {
        return Err(Error::NotRelativelyPrime(format!("{p1} and {p2} share the factor {g}")));
    }
    let mut primes = PrimeSet::new();
    for c in s.coeffs().iter().chain(t.coeffs()) {
        primes.extend(prime_divisors(c.denom()));
    }
    let common = num_integer::Integer::gcd(&p1.leading(), &p2.leading());
    primes.extend(prime_divisors(&common));
    Ok(BezoutPrimes { cofactor1: s, cofactor2: t, primes })
}

/// p(M) by Horner's rule.
pub fn evaluate_at_matrix(p: &IntPolynomial, m: &IntMatrix) -> Result<IntMatrix> {
    if !m.is_square() {
        return Err(Error::shape("polynomials can only be evaluated at square matrices"));
    }
    let n = m.nrows();
    let mut acc = IntMatrix::zeros(n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.dot(m).add(&IntMatrix::scalar(n, c.clone()))?;
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Annihilation {
    /// p(F) = 0 over Z, hence modulo every prime.
    Integral,
    /// p(F) ≠ 0; it vanishes mod ℓ exactly for the primes dividing the
    /// content of its entries.
    Content { content: BigInt, primes: PrimeSet },
}

impl Annihilation {
    pub fn annihilates_mod(&self, ell: u64) -> bool {
        match self {
            Annihilation::Integral => true,
            Annihilation::Content { content, .. } => (content % ell).is_zero(),
        }
    }
}

pub fn annihilation_exceptional_primes(frob: &LatticeMap, p: &IntPolynomial) -> Result<Annihilation> {
    if !frob.is_endomorphism() {
        return Err(Error::shape("Frobenius must be an endomorphism"));
    }
    let value = evaluate_at_matrix(p, frob.matrix())?;
    if value.is_zero() {
        return Ok(Annihilation::Integral);
    }
    let content = value.content();
    let primes = prime_divisors(&content);
    Ok(Annihilation::Content { content, primes })
}

/// det(T·I − M), by the Faddeev–LeVerrier recursion with exact division.
pub fn characteristic_polynomial(m: &IntMatrix) -> Result<IntPolynomial> {
    if !m.is_square() {
        return Err(Error::shape("characteristic polynomial of a non-square matrix"));
    }
    let n = m.nrows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = IntMatrix::zeros(n, n);
    for k in 1..=n {
        mk = m.dot(&mk).add(&IntMatrix::scalar(n, coeffs[n + 1 - k].clone()))?;
        let am = m.dot(&mk);
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        coeffs[n - k] = -trace / BigInt::from(k);
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Whether q^w has an integral square root R, in which case T ∓ R are the
/// only degree-one Weil factors.
pub fn integral_half_weight(q: &BigInt, w: u32) -> Option<BigInt> {
    let big_q = num_traits::pow(q.clone(), w as usize);
    let r = big_q.sqrt();
    (&r * &r == big_q).then_some(r)
}
