//! Exact rationals, multi-indices, half-integer binomial coefficients and the
//! summation identities that turn the multi-index heat formula into a single
//! binomial sum.
//!
//! Every identity comes in two halves: a literal enumeration (`*_lhs`) and a
//! closed form (`*_rhs`). Nothing here touches floating point.

use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::jet::Jet;

/// Arbitrary-precision fraction, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn integer(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Parses `"p"` or `"p/q"`. The fraction must already be in lowest terms and
/// `q` must be positive, so that every accepted string is the canonical
/// printed form of its value.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::ParseRational(s.to_string());
    let parse_int = |t: &str| -> Result<BigInt> {
        let digits = t.strip_prefix('-').unwrap_or(t);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        t.parse::<BigInt>().map_err(|_| err())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if !q.is_positive() || !p.gcd(&q).is_one() {
                return Err(err());
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn factorial_q(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

/// `4^k` as a rational.
pub fn pow4(k: u64) -> Rational {
    Rational::from_integer(BigInt::one() << (2 * k))
}

/// A multi-index `(α₁, …, α_d)` with `d ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidArgument(
                "multi-index needs dimension at least 1".into(),
            ));
        }
        Ok(MultiIndex(exponents))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "multi-index dimension must be positive");
        MultiIndex(vec![0; dim])
    }

    /// The unit index `e_axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut m = Self::zeros(dim);
        m.0[axis] = 1;
        m
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α| = α₁ + ⋯ + α_d`.
    pub fn modulus(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = α₁!⋯α_d!`.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a as u64)).product()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [u32] {
        &mut self.0
    }

    /// `2α`.
    pub fn doubled(&self) -> Self {
        MultiIndex(self.0.iter().map(|a| 2 * a).collect())
    }

    /// Component-wise sum. Panics on dimension mismatch.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// All multi-indices of dimension `dim` with `|α| = total`, in ascending
    /// lexicographic order of the exponent tuples.
    pub fn enumerate(dim: usize, total: u32) -> Vec<MultiIndex> {
        assert!(dim >= 1, "multi-index dimension must be positive");
        let mut out = Vec::new();
        let mut current = vec![0u32; dim];
        fill(&mut current, 0, total, &mut out);
        out
    }
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for a in 0..=remaining {
        current[pos] = a;
        fill(current, pos + 1, remaining - a, out);
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// An integer or half-odd-integer, stored as twice its value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: BigInt,
}

impl HalfInteger {
    pub fn from_twice(twice: impl Into<BigInt>) -> Self {
        HalfInteger {
            twice: twice.into(),
        }
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        HalfInteger {
            twice: v.into() * 2,
        }
    }

    /// `k + d/2`, the shape in which half-integers show up in heat formulas.
    pub fn int_plus_half_dim(k: i64, dim: usize) -> Self {
        Self::from_twice(2 * k + dim as i64)
    }

    pub fn twice_value(&self) -> &BigInt {
        &self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice.is_even()
    }

    /// `Some(v)` when the value is an integer `v ≥ 0` that fits in a `u64`.
    pub fn as_nonnegative_integer(&self) -> Option<u64> {
        if self.is_integer() && !self.twice.is_negative() {
            (&self.twice / 2u32).to_u64()
        } else {
            None
        }
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.twice.clone(), BigInt::from(2))
    }
}

impl Add for &HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: &HalfInteger) -> HalfInteger {
        HalfInteger::from_twice(&self.twice + &rhs.twice)
    }
}

impl Sub for &HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: &HalfInteger) -> HalfInteger {
        HalfInteger::from_twice(&self.twice - &rhs.twice)
    }
}

impl Add<i64> for &HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: i64) -> HalfInteger {
        HalfInteger::from_twice(&self.twice + 2 * rhs)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", &self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `z(z-1)⋯(z-a+1)/a!`, with the empty product giving 1 at `a = 0`.
pub fn binomial_general(z: &HalfInteger, a: u64) -> Rational {
    let z = z.to_rational();
    let mut num = Rational::one();
    let mut term = z;
    for _ in 0..a {
        num *= &term;
        term -= Rational::one();
    }
    num / factorial_q(a)
}

/// `binom(z, a)` where either `a` or `z - a` is a nonnegative integer; the
/// other case is reduced through `binom(z, a) = binom(z, z - a)`.
pub fn binomial_symmetric(z: &HalfInteger, a: &HalfInteger) -> Result<Rational> {
    if let Some(a) = a.as_nonnegative_integer() {
        return Ok(binomial_general(z, a));
    }
    if let Some(b) = (z - a).as_nonnegative_integer() {
        return Ok(binomial_general(z, b));
    }
    Err(Error::BinomialDomain {
        top: z.to_string(),
        bottom: a.to_string(),
    })
}

/// `Γ(k + 1/2)/√π = (2k)!/(4^k k!)`.
pub fn gamma_half_rational(k: u64) -> Rational {
    factorial_q(2 * k) / (pow4(k) * factorial_q(k))
}

/// `∑_{a=0}^{u} binom(z+a, a)·binom(w+u-a, u-a)`, summed term by term.
pub fn vandermonde_half_lhs(z: &HalfInteger, w: &HalfInteger, u: u64) -> Rational {
    (0..=u)
        .map(|a| {
            let a_i = a as i64;
            binomial_general(&(z + a_i), a) * binomial_general(&(w + (u as i64 - a_i)), u - a)
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// `binom(z+w+u+1, z+w+1)`, which is `binom(z+w+u+1, u)` by symmetry.
pub fn vandermonde_half_rhs(z: &HalfInteger, w: &HalfInteger, u: u64) -> Rational {
    let top = &(z + w) + (u as i64 + 1);
    binomial_general(&top, u)
}

/// `∑_{|α|=u} (2α+2β)!·β! / (α!·(α+β)!·(2β)!)` by enumerating every α.
pub fn comb1_lhs(beta: &MultiIndex, u: u32) -> Rational {
    let beta_fact = Rational::from_integer(beta.factorial());
    let two_beta_fact = Rational::from_integer(beta.doubled().factorial());
    MultiIndex::enumerate(beta.dim(), u)
        .iter()
        .map(|alpha| {
            let num = Rational::from_integer(alpha.plus(beta).doubled().factorial()) * &beta_fact;
            let den = Rational::from_integer(alpha.factorial() * alpha.plus(beta).factorial())
                * &two_beta_fact;
            num / den
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// `4^u · binom(u + v - 1 + d/2, u)`, where `v = |β|`.
pub fn comb1_rhs(v: u32, u: u32, dim: usize) -> Rational {
    let top = HalfInteger::int_plus_half_dim(u as i64 + v as i64 - 1, dim);
    pow4(u as u64) * binomial_general(&top, u as u64)
}

/// Compares `∑_{|β|=m} x^{2β}/β!` with `(x₁²+⋯+x_d²)^m / m!` as exact
/// polynomials, where `m = k - n`.
pub fn multinomial_check(k_minus_n: u32, dim: usize) -> bool {
    let order = 2 * k_minus_n;
    let mut lhs = Jet::zero(dim, order);
    for beta in MultiIndex::enumerate(dim, k_minus_n) {
        let coeff = Rational::one() / Rational::from_integer(beta.factorial());
        let term =
            Jet::monomial(dim, order, beta.doubled(), coeff).expect("|2β| equals the jet order");
        lhs = lhs.add(&term).expect("same shape");
    }
    let rhs = Jet::radius_squared_power(dim, order, k_minus_n)
        .expect("2j equals the jet order")
        .scale(&(Rational::one() / factorial_q(k_minus_n as u64)));
    lhs == rhs
}
