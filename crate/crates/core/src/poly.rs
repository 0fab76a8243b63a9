//! Dense univariate polynomials over Z and Q, stored low degree first.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Integer polynomial in canonical form: no trailing zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// c·T^k.
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k];
        v.push(c);
        Self::new(v)
    }

    /// T − c.
    pub fn linear_root(c: &BigInt) -> Self {
        Self::new(vec![-c, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with −1 standing for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn product<'a>(it: impl IntoIterator<Item = &'a IntPolynomial>) -> Self {
        it.into_iter().fold(Self::one(), |acc, p| acc.mul(p))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    /// p(g(T)).
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| acc.mul(g).add(&Self::constant(c.clone())))
    }

    /// p(T^k).
    pub fn substitute_power(&self, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Self::new(v)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// p / content, with positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Σ c_k s^k T^{e−k}, which is T^e·p(s/T) for e = deg p.
    pub fn scaled_reversal(&self, s: &BigInt) -> Self {
        let e = self.coeffs.len();
        let mut v = vec![BigInt::zero(); e];
        let mut sk = BigInt::one();
        for (k, c) in self.coeffs.iter().enumerate() {
            v[e - 1 - k] = c * &sk;
            sk *= s;
        }
        Self::new(v)
    }

    /// Quotient when `d` divides `self` over Z.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.to_rational().div_rem(&d.to_rational());
        if !r.is_zero() {
            return None;
        }
        q.to_integer()
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.to_rational().div_rem(&self.to_rational()).1.is_zero()
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::new(self.coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// Primitive gcd over Q with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        self.to_rational().gcd(&other.to_rational()).to_primitive()
    }

    /// Square-free decomposition: primitive pairwise coprime (g_i, i) with
    /// pp(self) = ∏ g_i^i.
    pub fn square_free_decomposition(&self) -> Vec<(IntPolynomial, u32)> {
        let f = self.primitive_part();
        if f.degree() < 1 {
            return Vec::new();
        }
        // Yun's algorithm over Q
        let mut out = Vec::new();
        let fd = f.derivative();
        let a0 = f.gcd(&fd);
        let mut b = f.div_exact(&a0).expect("gcd divides").primitive_part();
        let mut c = fd.div_exact(&a0).expect("gcd divides");
        let mut i = 1;
        loop {
            let dd = c.sub(&b.derivative());
            if b.degree() < 1 {
                break;
            }
            let a = b.gcd(&dd);
            if a.degree() >= 1 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides").primitive_part();
            c = dd.div_exact(&a).expect("gcd divides");
            i += 1;
        }
        out
    }

    /// Primitive square-free part.
    pub fn square_free_part(&self) -> Self {
        let f = self.primitive_part();
        if f.degree() < 1 {
            return f;
        }
        f.div_exact(&f.gcd(&f.derivative())).expect("gcd divides").primitive_part()
    }

    /// Resultant over Z by the Euclidean algorithm over Q.
    pub fn resultant(&self, other: &Self) -> BigInt {
        let r = self.to_rational().resultant(&other.to_rational());
        assert!(r.is_integer());
        r.to_integer()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

fn fmt_terms<C: fmt::Display + Zero + One + PartialEq + Clone + Signed>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[C],
    var: &str,
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = a.is_one();
        match (k, unit) {
            (0, _) => write!(f, "{a}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{a}{var}")?,
            (_, true) => write!(f, "{var}^{k}")?,
            (_, false) => write!(f, "{a}{var}^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs, "T")
    }
}

/// Parses sums of terms like `3T^2`, `-T`, `+7` in the variable T (or x).
impl FromStr for IntPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if cleaned.is_empty() {
            return Err(Error::descriptor(format!("empty polynomial expression {s:?}")));
        }
        let bad = || Error::descriptor(format!("cannot parse polynomial {s:?}"));
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in cleaned.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&cleaned[start..i]);
                start = i;
            }
        }
        terms.push(&cleaned[start..]);

        let mut coeffs: Vec<BigInt> = Vec::new();
        for term in terms {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'+') => (1, &term[1..]),
                Some(b'-') => (-1, &term[1..]),
                _ => (1, term),
            };
            let var_pos = body.find(['T', 't', 'x', 'X']);
            let (coef, exp) = match var_pos {
                None => (body.parse::<BigInt>().map_err(|_| bad())?, 0usize),
                Some(p) => {
                    let c = if p == 0 { BigInt::one() } else { body[..p].parse::<BigInt>().map_err(|_| bad())? };
                    let rest = &body[p + 1..];
                    let e = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?
                    };
                    (c, e)
                }
            };
            if exp >= coeffs.len() {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += coef * sign;
        }
        Ok(Self::new(coeffs))
    }
}

/// Rational polynomial in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RatPolynomial {
    coeffs: Vec<BigRational>,
}

impl RatPolynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        RatPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::new(vec![BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dl = d.leading();
        let dd = d.coeffs.len();
        let mut r = self.coeffs.clone();
        if r.len() < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![BigRational::zero(); r.len() - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd - 1] / &dl;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s·self + t·other = g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.leading().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigRational::from_integer(i.into())).collect())
    }

    /// Resultant by the Euclidean algorithm.
    pub fn resultant(&self, other: &Self) -> BigRational {
        if self.is_zero() || other.is_zero() {
            return BigRational::zero();
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        let mut acc = BigRational::one();
        loop {
            let (da, db) = (a.degree(), b.degree());
            if db == 0 {
                return acc * b.leading().pow(da as i32);
            }
            if da == 0 {
                return acc * a.leading().pow(db as i32);
            }
            if da < db {
                // Res(a, b) = (−1)^{da·db} Res(b, a)
                if (da * db) % 2 == 1 {
                    acc = -acc;
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            // Res(a, b) = (−1)^{da·db} lc(b)^{da − dr} Res(b, r)
            let r = a.div_rem(&b).1;
            if r.is_zero() {
                return BigRational::zero();
            }
            let dr = r.degree();
            if (da * db) % 2 == 1 {
                acc = -acc;
            }
            acc *= b.leading().pow((da - dr) as i32);
            a = b;
            b = r;
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Integer polynomial when every coefficient is integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn to_primitive(&self) -> IntPolynomial {
        let l = BigRational::from_integer(self.denominator_lcm());
        IntPolynomial::new(self.coeffs.iter().map(|c| (c * &l).to_integer()).collect()).primitive_part()
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.coeffs, "T")
    }
}
