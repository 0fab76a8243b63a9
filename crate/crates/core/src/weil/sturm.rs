//! Sturm sequences and exact real-root counting over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{IntPolynomial, RatPolynomial};

/// Sturm sequence of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    seq: Vec<RatPolynomial>,
}

impl SturmSequence {
    pub fn new(p: &IntPolynomial) -> Self {
        let p0 = p.to_rational();
        let mut seq = vec![p0.clone()];
        let mut prev = p0.clone();
        let mut cur = p0.derivative();
        while !cur.is_zero() {
            seq.push(cur.clone());
            let r = prev.div_rem(&cur).1.neg();
            prev = cur;
            cur = r;
        }
        SturmSequence { seq }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn changes(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut n = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                n += 1;
            }
            last = s;
        }
        n
    }

    fn sign(x: &BigRational) -> i8 {
        if x.is_positive() {
            1
        } else if x.is_negative() {
            -1
        } else {
            0
        }
    }

    /// Sign changes at x.
    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::changes(self.seq.iter().map(|p| Self::sign(&p.eval(x))))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::changes(self.seq.iter().map(|p| {
            let s = Self::sign(&p.leading());
            if positive || p.degree() % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots.
    pub fn real_roots(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Distinct roots in the half-open interval (a, b].
    pub fn roots_in(&self, a: &BigRational, b: &BigRational) -> usize {
        if a >= b {
            return 0;
        }
        self.variations_at(a) - self.variations_at(b)
    }

    /// Distinct roots in (b, +∞).
    pub fn roots_above(&self, b: &BigRational) -> usize {
        self.variations_at(b) - self.variations_at_infinity(true)
    }

    /// Distinct roots in (−∞, a].
    pub fn roots_below(&self, a: &BigRational) -> usize {
        self.variations_at_infinity(false) - self.variations_at(a)
    }

    pub fn is_root(&self, x: &BigRational) -> bool {
        self.seq[0].eval(x).is_zero()
    }

    /// Shrinks (a, b] by bisection until it holds exactly one root. The
    /// interval must contain at least one root.
    pub fn isolate(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        let (mut a, mut b) = (a.clone(), b.clone());
        let two = BigRational::from_integer(BigInt::from(2));
        while self.roots_in(&a, &b) > 1 {
            let mid = (&a + &b) / &two;
            if self.roots_in(&a, &mid) >= 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        (a, b)
    }
}

/// Cauchy bound: every complex root has |z| < 1 + max |c_i / c_n|.
pub fn root_bound(p: &IntPolynomial) -> BigRational {
    let lead = BigRational::from_integer(p.leading().abs());
    let m = p.coeffs().iter().rev().skip(1).map(|c| BigRational::from_integer(c.abs())).max().unwrap_or_else(BigRational::zero);
    BigRational::one() + m / lead
}
