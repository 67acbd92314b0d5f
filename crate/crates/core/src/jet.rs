//! Truncated multivariate polynomials over the rationals.
//!
//! A [`Jet`] of dimension `d` and order `N` is a polynomial in `x₁, …, x_d`
//! whose terms of total degree above `N` have been discarded. Ring operations
//! truncate by total degree, so a jet behaves like a Taylor polynomial at the
//! origin.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::combinatorics::{MultiIndex, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Jet {
    dim: usize,
    order: u32,
    // no zero values, every key has `dim` entries and modulus <= order
    terms: BTreeMap<MultiIndex, Rational>,
}

impl Jet {
    pub fn zero(dim: usize, order: u32) -> Self {
        assert!(dim >= 1, "jet dimension must be positive");
        Jet {
            dim,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, order: u32, c: Rational) -> Self {
        let mut j = Self::zero(dim, order);
        j.add_term(MultiIndex::zeros(dim), c);
        j
    }

    pub fn one(dim: usize, order: u32) -> Self {
        Self::constant(dim, order, Rational::one())
    }

    /// The jet `c·x^alpha`.
    pub fn monomial(dim: usize, order: u32, alpha: MultiIndex, c: Rational) -> Result<Self> {
        if alpha.dim() != dim {
            return Err(Error::DimensionMismatch(alpha.dim(), dim));
        }
        if alpha.modulus() > order {
            return Err(Error::DegreeExceedsOrder {
                degree: alpha.modulus(),
                order,
            });
        }
        let mut j = Self::zero(dim, order);
        j.add_term(alpha, c);
        Ok(j)
    }

    /// The coordinate function `x_axis` (zero-based axis).
    pub fn variable(dim: usize, order: u32, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        if order == 0 {
            return Ok(Self::zero(dim, order));
        }
        Self::monomial(dim, order, MultiIndex::unit(dim, axis), Rational::one())
    }

    /// `(x₁² + ⋯ + x_d²)^j`, the squared geodesic distance to the origin in
    /// normal coordinates raised to the `j`-th power.
    pub fn radius_squared_power(dim: usize, order: u32, j: u32) -> Result<Self> {
        if 2 * j > order {
            return Err(Error::DegreeExceedsOrder {
                degree: 2 * j,
                order,
            });
        }
        let mut r2 = Self::zero(dim, order);
        for axis in 0..dim {
            r2.add_term(MultiIndex::unit(dim, axis).doubled(), Rational::one());
        }
        let mut out = Self::one(dim, order);
        for _ in 0..j {
            out = out.mul_to(&r2, order);
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.terms
            .get(alpha)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    /// The constant coefficient, i.e. the value at `x = 0`.
    pub fn value_at_origin(&self) -> Rational {
        self.coeff(&MultiIndex::zeros(self.dim))
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::modulus).max()
    }

    pub fn homogeneous_part(&self, degree: u32) -> Jet {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.modulus() == degree)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Jet {
            dim: self.dim,
            order: self.order,
            terms,
        }
    }

    /// Drops every term above `order`. Raising the order is rejected, since the
    /// missing terms of a truncated series are unknown.
    pub fn truncated(&self, order: u32) -> Result<Jet> {
        if order > self.order {
            return Err(Error::OrderMismatch(order, self.order));
        }
        Ok(self.truncated_unchecked(order))
    }

    pub(crate) fn truncated_unchecked(&self, order: u32) -> Jet {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| k.modulus() <= order)
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Jet {
            dim: self.dim,
            order,
            terms,
        }
    }

    /// Reinterprets an exact polynomial at a higher order. Only valid when the
    /// jet is known to be a polynomial rather than a truncated series.
    pub(crate) fn with_order_unchecked(&self, order: u32) -> Jet {
        self.truncated_unchecked(order)
    }

    fn check_shape(&self, other: &Jet) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        if self.order != other.order {
            return Err(Error::OrderMismatch(self.order, other.order));
        }
        Ok(())
    }

    pub(crate) fn add_term(&mut self, alpha: MultiIndex, c: Rational) {
        if c.is_zero() || alpha.modulus() > self.order {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self.sub_unchecked(other))
    }

    pub fn mul(&self, other: &Jet) -> Result<Jet> {
        self.check_shape(other)?;
        Ok(self.mul_to(other, self.order))
    }

    pub fn scale(&self, c: &Rational) -> Jet {
        if c.is_zero() {
            return Jet::zero(self.dim, self.order);
        }
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        Jet {
            dim: self.dim,
            order: self.order,
            terms,
        }
    }

    pub fn neg(&self) -> Jet {
        let terms = self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect();
        Jet {
            dim: self.dim,
            order: self.order,
            terms,
        }
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Jet) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub(crate) fn sub_unchecked(&self, other: &Jet) -> Jet {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), -v);
        }
        out
    }

    /// Product truncated at `order`, regardless of the operands' own orders.
    /// Callers are responsible for both operands being accurate up to `order`.
    pub(crate) fn mul_to(&self, other: &Jet, order: u32) -> Jet {
        debug_assert_eq!(self.dim, other.dim);
        let mut rhs: Vec<(u32, &MultiIndex, &Rational)> = other
            .terms
            .iter()
            .map(|(k, v)| (k.modulus(), k, v))
            .collect();
        rhs.sort_by_key(|t| t.0);
        let mut out = Jet::zero(self.dim, order);
        let mut key = MultiIndex::zeros(self.dim);
        for (ka, va) in &self.terms {
            let da = ka.modulus();
            if da > order {
                continue;
            }
            for &(db, kb, vb) in &rhs {
                if da + db > order {
                    break;
                }
                for (slot, (a, b)) in key
                    .as_mut_slice()
                    .iter_mut()
                    .zip(ka.as_slice().iter().zip(kb.as_slice()))
                {
                    *slot = a + b;
                }
                out.add_term(key.clone(), va * vb);
            }
        }
        out
    }

    /// Formal partial derivative along the zero-based `axis`. The order is kept,
    /// so on a truncated series the top-degree coefficients of the result are
    /// incomplete; on an exact polynomial the result is exact.
    pub fn partial_derivative(&self, axis: usize) -> Result<Jet> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let mut out = Jet::zero(self.dim, self.order);
        for (k, v) in &self.terms {
            let e = k.get(axis);
            if e == 0 {
                continue;
            }
            let mut nk = k.clone();
            nk.as_mut_slice()[axis] = e - 1;
            out.add_term(nk, v * Rational::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the jet order, by Newton iteration
    /// `b ← b(2 - ab)`, which doubles the number of correct degrees each step.
    pub fn reciprocal(&self) -> Result<Jet> {
        let c0 = self.value_at_origin();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let two = Jet::constant(self.dim, self.order, Rational::from_integer(2.into()));
        let mut b = Jet::constant(self.dim, self.order, c0.recip());
        let mut correct = 0u32;
        while correct < self.order {
            let next = (2 * correct + 1).min(self.order);
            let ab = self.mul_to(&b, next);
            let corr = two.truncated_unchecked(next).sub_unchecked(&ab);
            b = b.mul_to(&corr, next);
            correct = next;
        }
        Ok(b.with_order_unchecked(self.order))
    }

    /// `a^{-1/2}` for a jet with constant term 1, by Newton iteration
    /// `b ← b(3 - ab²)/2`.
    pub fn inv_sqrt(&self) -> Result<Jet> {
        let c0 = self.value_at_origin();
        if !c0.is_one() {
            return Err(Error::ConstantTermNotOne(c0.to_string()));
        }
        let three = Jet::constant(self.dim, self.order, Rational::from_integer(3.into()));
        let half = Rational::new(1.into(), 2.into());
        let mut b = Jet::one(self.dim, self.order);
        let mut correct = 0u32;
        while correct < self.order {
            let next = (2 * correct + 1).min(self.order);
            let bb = b.mul_to(&b, next);
            let abb = self.mul_to(&bb, next);
            let corr = three.truncated_unchecked(next).sub_unchecked(&abb);
            b = b.mul_to(&corr, next).scale(&half);
            correct = next;
        }
        Ok(b.with_order_unchecked(self.order))
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.modulus().cmp(&b.modulus()).then_with(|| b.cmp(a)));
        for (n, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let is_const = k.modulus() == 0;
            let mag = c.abs();
            if n == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if is_const || !mag.is_one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (axis, &e) in k.as_slice().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{}", axis + 1)?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
