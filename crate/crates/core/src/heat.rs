//! Normalized heat invariants `ā_n = (4π)^{d/2} a_n(0)` of a metric jet.
//!
//! Two routes are provided. The multi-index route evaluates the quadruple sum
//! over `m, k, α, β` literally; the binomial route evaluates the single sum
//! over `j` with `|x|^{2j}`. They are related only through the summation
//! identities in [`crate::combinatorics`], so agreement between them is a
//! meaningful check of the engine.

use std::fmt;

use log::warn;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{
    binomial_symmetric, factorial, pow4, HalfInteger, MultiIndex, Rational,
};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::laplace::{LaplaceOperator, MetricJet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    #[serde(rename = "multiindex")]
    MultiIndex,
    Binomial,
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::MultiIndex => write!(f, "multiindex"),
            Form::Binomial => write!(f, "binomial"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatInvariantResult {
    pub n: u32,
    pub dim: usize,
    /// Coefficient of `(4π)^{-d/2}`.
    pub normalized_value: Rational,
    pub form: Form,
    pub truncation_order: u32,
}

/// Default jet order for `ā_n`: the sums apply `Δ` up to `4n` times to
/// polynomials of degree up to `6n`.
pub fn sufficient_order(n: u32) -> u32 {
    8 * n
}

fn prepare(g: &MetricJet, n: u32, order: Option<u32>) -> Result<(LaplaceOperator, u32)> {
    let order = order.unwrap_or_else(|| sufficient_order(n));
    if order < sufficient_order(n) {
        return Err(Error::InsufficientOrder {
            required: sufficient_order(n),
            actual: order,
        });
    }
    if g.order() < order {
        return Err(Error::InsufficientOrder {
            required: order,
            actual: g.order(),
        });
    }
    if !g.is_normal_form() {
        warn!(
            "metric is not flagged as normal coordinates; heat formulas assume normal coordinates"
        );
    }
    let op = LaplaceOperator::build(&g.truncated(order)?)?;
    Ok((op, order))
}

fn signed(n: u32, v: Rational) -> Rational {
    if n.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

fn fact(n: u32) -> Rational {
    Rational::from_integer(factorial(n as u64))
}

/// `(2α+2β)! / (α!(α+β)!(2β)!)`.
fn pair_weight(alpha: &MultiIndex, beta: &MultiIndex) -> Rational {
    let ab = alpha.plus(beta);
    Rational::new(
        ab.doubled().factorial(),
        alpha.factorial() * ab.factorial() * beta.doubled().factorial(),
    )
}

/// `ā_n` from the quadruple sum
/// `(-1)^n ∑_{m=n}^{4n} ∑_{k=n}^{m} 1/(k!·4^{m-n}) ∑_{|α|=m-k} ∑_{|β|=k-n}
/// (2α+2β)!/(α!(α+β)!(2β)!) · Δ^k(x^{2β})(0)`.
pub fn a_n_multiindex_form(g: &MetricJet, n: u32) -> Result<HeatInvariantResult> {
    a_n_multiindex_form_with_order(g, n, None)
}

pub fn a_n_multiindex_form_with_order(
    g: &MetricJet,
    n: u32,
    order: Option<u32>,
) -> Result<HeatInvariantResult> {
    let (op, order) = prepare(g, n, order)?;
    let d = g.dim();
    // each Δ^k(x^{2β})(0) is evaluated once and reused for every m ≥ k
    let terms: Vec<(u32, MultiIndex)> = (n..=4 * n)
        .flat_map(|k| {
            MultiIndex::enumerate(d, k - n)
                .into_iter()
                .map(move |b| (k, b))
        })
        .collect();
    let contributions = terms
        .par_iter()
        .map(|(k, beta)| -> Result<Rational> {
            let k = *k;
            let mut weight = Rational::zero();
            for m in k..=4 * n {
                let inner = MultiIndex::enumerate(d, m - k)
                    .iter()
                    .map(|alpha| pair_weight(alpha, beta))
                    .fold(Rational::zero(), |acc, t| acc + t);
                weight += inner / (fact(k) * pow4((m - n) as u64));
            }
            if weight.is_zero() {
                return Ok(weight);
            }
            let f = Jet::monomial(d, order, beta.doubled(), Rational::one())?;
            Ok(weight * op.power_value_at_origin(&f, k)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = contributions
        .into_iter()
        .fold(Rational::zero(), |acc, t| acc + t);
    Ok(HeatInvariantResult {
        n,
        dim: d,
        normalized_value: signed(n, sum),
        form: Form::MultiIndex,
        truncation_order: order,
    })
}

/// `ā_n` from the single sum
/// `(-1)^n ∑_{j=0}^{3n} binom(3n+d/2, j+d/2) Δ^{j+n}(|x|^{2j})(0) / (4^j j! (j+n)!)`.
pub fn a_n_binomial_form(g: &MetricJet, n: u32) -> Result<HeatInvariantResult> {
    a_n_binomial_form_with_order(g, n, None)
}

pub fn a_n_binomial_form_with_order(
    g: &MetricJet,
    n: u32,
    order: Option<u32>,
) -> Result<HeatInvariantResult> {
    let (op, order) = prepare(g, n, order)?;
    let d = g.dim();
    let top = HalfInteger::int_plus_half_dim(3 * n as i64, d);
    let contributions = (0..=3 * n)
        .into_par_iter()
        .map(|j| -> Result<Rational> {
            let bottom = HalfInteger::int_plus_half_dim(j as i64, d);
            let binom = binomial_symmetric(&top, &bottom)?;
            let f = Jet::radius_squared_power(d, order, j)?;
            let value = op.power_value_at_origin(&f, j + n)?;
            Ok(binom * value / (pow4(j as u64) * fact(j) * fact(j + n)))
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = contributions
        .into_iter()
        .fold(Rational::zero(), |acc, t| acc + t);
    Ok(HeatInvariantResult {
        n,
        dim: d,
        normalized_value: signed(n, sum),
        form: Form::Binomial,
        truncation_order: order,
    })
}

/// True iff both forms give the same rational.
pub fn cross_check(g: &MetricJet, n: u32) -> Result<bool> {
    let a = a_n_multiindex_form(g, n)?;
    let b = a_n_binomial_form(g, n)?;
    Ok(a.normalized_value == b.normalized_value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{integer, rational};
    use crate::fixtures::{constant_curvature_metric, random_normal_2jet};
    use crate::laplace::scalar_curvature_at_origin;

    #[test]
    fn zeroth_invariant_is_one() {
        let g = random_normal_2jet(3, 5, 4).unwrap();
        assert_eq!(
            a_n_multiindex_form(&g, 0).unwrap().normalized_value,
            integer(1)
        );
        assert_eq!(
            a_n_binomial_form(&g, 0).unwrap().normalized_value,
            integer(1)
        );
    }

    #[test]
    fn flat_invariants_vanish() {
        let g = MetricJet::flat(2, 24);
        for n in 1..=3 {
            assert!(a_n_multiindex_form(&g, n)
                .unwrap()
                .normalized_value
                .is_zero());
            assert!(a_n_binomial_form(&g, n).unwrap().normalized_value.is_zero());
            assert!(cross_check(&g, n).unwrap());
        }
    }

    #[test]
    fn round_sphere_first_two() {
        let g = constant_curvature_metric(2, &integer(1), 16).unwrap();
        let a1 = a_n_multiindex_form(&g, 1).unwrap();
        assert_eq!(a1.normalized_value, rational(1, 3));
        assert_eq!(a1.truncation_order, 8);
        assert_eq!(a1.form, Form::MultiIndex);
        assert_eq!(
            a_n_binomial_form(&g, 2).unwrap().normalized_value,
            rational(1, 15)
        );
        assert!(cross_check(&g, 2).unwrap());
    }

    #[test]
    fn random_two_jet_cross_check_and_curvature_law() {
        for seed in 0..3 {
            let g = random_normal_2jet(3, seed, 8).unwrap();
            assert!(cross_check(&g, 1).unwrap());
            let tau = scalar_curvature_at_origin(&g).unwrap();
            assert_eq!(
                a_n_binomial_form(&g, 1).unwrap().normalized_value,
                tau / integer(6)
            );
        }
    }

    #[test]
    fn order_checks() {
        let g = constant_curvature_metric(2, &integer(1), 8).unwrap();
        assert!(matches!(
            a_n_binomial_form(&g, 2),
            Err(Error::InsufficientOrder {
                required: 16,
                actual: 8
            })
        ));
        assert!(matches!(
            a_n_multiindex_form_with_order(&g, 1, Some(6)),
            Err(Error::InsufficientOrder {
                required: 8,
                actual: 6
            })
        ));
        let g = constant_curvature_metric(2, &integer(1), 10).unwrap();
        let lo = a_n_binomial_form_with_order(&g, 1, Some(8)).unwrap();
        let hi = a_n_binomial_form_with_order(&g, 1, Some(10)).unwrap();
        assert_eq!(lo.normalized_value, hi.normalized_value);
        assert_eq!(hi.truncation_order, 10);
    }
}
