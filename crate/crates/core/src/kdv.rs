//! KdV hierarchy polynomials `G_n[U]` in the formal variables
//! `U_0 = U, U_1 = U', U_2 = U'', …`.
//!
//! [`g_n_operator`] applies powers of the Schrödinger operator
//! `L = ∂² + U(x)` to `x^{2j}` and reads off the value at `x = 0`;
//! [`g_n_expanded`] sums the closed-form chain coefficients of
//! [`c_coefficient`] over all compositions instead. The two share only the
//! outer binomial weights.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::{binomial_symmetric, factorial, pow4, HalfInteger, Rational};
use crate::error::{Error, Result};

/// Polynomial in `U_0, U_1, …` over the rationals. Each monomial
/// `U_{k₁}⋯U_{k_p}` is keyed by its index list sorted ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DiffPolynomial {
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl DiffPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(Vec::new(), c);
        p
    }

    /// The variable `U_i`.
    pub fn variable(i: u32) -> Self {
        Self::monomial(vec![i], Rational::one())
    }

    /// `c·U_{k₁}⋯U_{k_p}`; the indices may come in any order.
    pub fn monomial(mut indices: Vec<u32>, c: Rational) -> Self {
        indices.sort_unstable();
        let mut p = Self::zero();
        p.add_term(indices, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Rational)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, indices: &[u32]) -> Rational {
        let mut key = indices.to_vec();
        key.sort_unstable();
        self.terms.get(&key).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest `i` with `U_i` present.
    pub fn max_index(&self) -> Option<u32> {
        self.terms.keys().filter_map(|k| k.last().copied()).max()
    }

    fn add_term(&mut self, key: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(key.windows(2).all(|w| w[0] <= w[1]));
        match self.terms.entry(key) {
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

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, v) in &other.terms {
            self.add_term(k.clone(), v.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        DiffPolynomial {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                out.add_term(merge_sorted(ka, kb), va * vb);
            }
        }
        out
    }

    /// Total `x`-derivative: `∂U_i = U_{i+1}`, extended by the Leibniz rule.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            for pos in 0..k.len() {
                // skip repeated factors; each distinct factor is handled once
                // with its multiplicity as weight
                if pos > 0 && k[pos] == k[pos - 1] {
                    continue;
                }
                let mult = k.iter().filter(|&&i| i == k[pos]).count();
                let mut nk = k.clone();
                nk[pos] += 1;
                nk.sort_unstable();
                out.add_term(nk, v * Rational::from_integer(BigInt::from(mult)));
            }
        }
        out
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// `∑ (k_i + 2)`: the grading in which `G_n` is homogeneous of weight `2n`.
pub fn monomial_weight(indices: &[u32]) -> u32 {
    indices.iter().map(|k| k + 2).sum()
}

fn print_order(a: &[u32], b: &[u32]) -> Ordering {
    monomial_weight(a)
        .cmp(&monomial_weight(b))
        .then(a.len().cmp(&b.len()))
        .then_with(|| a.cmp(b))
}

impl fmt::Display for DiffPolynomial {
    /// Terms ordered by weight, then number of factors, then index list; for
    /// example `U4 + 10*U0*U2 + 5*U1^2 + 10*U0^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by(|a, b| print_order(a, b));
        for (n, k) in keys.into_iter().enumerate() {
            let c = &self.terms[k];
            let mag = c.abs();
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut wrote = false;
            if k.is_empty() || !mag.is_one() {
                write!(f, "{mag}")?;
                wrote = true;
            }
            let mut idx = 0;
            while idx < k.len() {
                let var = k[idx];
                let run = k[idx..].iter().take_while(|&&i| i == var).count();
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "U{var}")?;
                if run > 1 {
                    write!(f, "^{run}")?;
                }
                wrote = true;
                idx += run;
            }
        }
        Ok(())
    }
}

/// `∑_m c_m(U) x^m`: a polynomial in `x` whose coefficients are differential
/// polynomials evaluated at the same point `x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XSeries {
    coeffs: BTreeMap<u32, DiffPolynomial>,
}

impl XSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn x_power(m: u32) -> Self {
        let mut s = Self::zero();
        s.add_at(m, &DiffPolynomial::constant(Rational::one()));
        s
    }

    pub fn coefficient(&self, degree: u32) -> DiffPolynomial {
        self.coeffs.get(&degree).cloned().unwrap_or_default()
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// Adds `p·x^degree`.
    pub fn add_at(&mut self, degree: u32, p: &DiffPolynomial) {
        let slot = self.coeffs.entry(degree).or_default();
        slot.add_assign(p);
        if slot.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    /// Drops every `x`-power above `degree`.
    pub fn truncated(&self, degree: u32) -> XSeries {
        XSeries {
            coeffs: self
                .coeffs
                .range(..=degree)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }
}

/// `L f = f'' + U f` with `∂(x^m c) = m x^{m-1} c + x^m c'`.
pub fn schrodinger_apply(f: &XSeries) -> XSeries {
    let mut out = XSeries::zero();
    let u0 = DiffPolynomial::variable(0);
    for (&m, c) in &f.coeffs {
        let dc = c.derivative();
        let ddc = dc.derivative();
        if m >= 2 {
            let k = Rational::from_integer(BigInt::from(m) * BigInt::from(m - 1));
            out.add_at(m - 2, &c.scale(&k));
        }
        if m >= 1 {
            let k = Rational::from_integer(BigInt::from(2 * m));
            out.add_at(m - 1, &dc.scale(&k));
        }
        out.add_at(m, &ddc);
        out.add_at(m, &u0.mul(c));
    }
    out
}

/// `L^{j+n}(x^{2j})` at `x = 0`, with `U_i(0)` renamed to `U_i`.
pub fn p_nj(n: u32, j: u32) -> Result<DiffPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if j > n {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds n = {n}")));
    }
    let steps = j + n;
    let mut f = XSeries::x_power(2 * j);
    for s in 0..steps {
        // L lowers the x-degree by at most two
        f = schrodinger_apply(&f).truncated(2 * (steps - s - 1));
    }
    let p = f.coefficient(0);
    if let Some(top) = p.max_index() {
        assert!(
            top + 2 <= 2 * (n + j),
            "U index {top} exceeds 2n + 2j - 2 for n = {n}, j = {j}"
        );
    }
    Ok(p)
}

fn q(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

/// `(2n)!/(2·n!)`, the rescaling from `h_n` to `G_n`.
fn kdv_prefactor(n: u32) -> Rational {
    Rational::new(factorial(2 * n as u64), factorial(n as u64) * 2)
}

/// `binom(n+1/2, j+1/2)·(-1)^j / (4^j j! (j+n)!)`.
fn outer_weight(n: u32, j: u32) -> Result<Rational> {
    let top = HalfInteger::from_twice(2 * n as i64 + 1);
    let bottom = HalfInteger::from_twice(2 * j as i64 + 1);
    let b = binomial_symmetric(&top, &bottom)?;
    let w = b / (pow4(j as u64) * q(factorial(j as u64)) * q(factorial((j + n) as u64)));
    Ok(if j.is_multiple_of(2) { w } else { -w })
}

/// `G_n` through powers of the Schrödinger operator.
pub fn g_n_operator(n: u32) -> Result<DiffPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut sum = DiffPolynomial::zero();
    for j in 0..=n {
        sum.add_assign(&p_nj(n, j)?.scale(&outer_weight(n, j)?));
    }
    Ok(sum.scale(&kdv_prefactor(n)))
}

fn binom_nat(top: u64, bottom: u64) -> BigInt {
    if bottom > top {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..bottom {
        acc = acc * (top - i) / (i + 1);
    }
    acc
}

/// Chain coefficient of `U_{k₁}⋯U_{k_p}` in `L^{j+n}(x^{2j})(0)/(2j)!`:
///
/// `∑ binom(2l₀, k₁) binom(2l₁ - k₁, k₂) ⋯ binom(2l_{p-1} - k₁ - ⋯ - k_{p-1}, k_p)`
///
/// over `0 ≤ l₀ ≤ ⋯ ≤ l_{p-1} ≤ j + n - p` with `2l_i ≥ k₁ + ⋯ + k_{i+1}`.
/// Here `l_i` counts the `∂²` factors to the left of the `(i+1)`-th `U`; the
/// trailing `∂²` factors are free, which is why `l_{p-1}` is only bounded.
pub fn c_coefficient(k_list: &[u32], j: u32, n: u32) -> Result<Rational> {
    let p = k_list.len() as u32;
    if p == 0 {
        return Err(Error::InvalidArgument("empty composition".into()));
    }
    if p > n || k_list.iter().sum::<u32>() != 2 * (n - p) {
        return Err(Error::InvalidArgument(format!(
            "indices {k_list:?} do not sum to 2(n - p) with n = {n}, p = {p}"
        )));
    }
    if j + n < p {
        return Err(Error::InvalidArgument(format!(
            "j + n - p is negative for j = {j}, n = {n}, p = {p}"
        )));
    }
    let top = (j + n - p) as u64;
    Ok(q(chain_sum(k_list, 0, 0, 0, top)))
}

// Sum over l_pos ∈ [lower, top] of binom(2l - partial, k[pos]) times the rest.
fn chain_sum(k: &[u32], pos: usize, lower: u64, partial: u64, top: u64) -> BigInt {
    if pos == k.len() {
        return BigInt::one();
    }
    let kp = k[pos] as u64;
    let need = partial + kp;
    let start = lower.max(need.div_ceil(2));
    let mut acc = BigInt::zero();
    for l in start..=top {
        let b = binom_nat(2 * l - partial, kp);
        if b.is_zero() {
            continue;
        }
        acc += b * chain_sum(k, pos + 1, l, need, top);
    }
    acc
}

/// Ordered compositions of `total` into `parts` nonnegative integers.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 1 {
            cur.push(total);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=total {
            cur.push(first);
            go(total - first, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts > 0 {
        go(total, parts, &mut Vec::new(), &mut out);
    }
    out
}

/// `G_n` fully expanded over compositions `k₁ + ⋯ + k_p = 2(n - p)`.
pub fn g_n_expanded(n: u32) -> Result<DiffPolynomial> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let mut sum = DiffPolynomial::zero();
    for j in 0..=n {
        let w = outer_weight(n, j)? * q(factorial(2 * j as u64));
        let mut inner = DiffPolynomial::zero();
        for p in 1..=n.min(j + n) {
            for ks in compositions(2 * (n - p), p) {
                let c = c_coefficient(&ks, j, n)?;
                inner.add_assign(&DiffPolynomial::monomial(ks, c));
            }
        }
        sum.add_assign(&inner.scale(&w));
    }
    Ok(sum.scale(&kdv_prefactor(n)))
}

/// `h_n = (2·n!/(2n)!)·G_n`, the heat coefficient of `L` with the
/// `(4πt)^{-1/2}` prefactor removed.
pub fn heat_coefficient_h_n(n: u32) -> Result<DiffPolynomial> {
    Ok(g_n_operator(n)?.scale(&kdv_prefactor(n).recip()))
}
