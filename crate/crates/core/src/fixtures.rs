//! Test metrics: constant-curvature model spaces in normal coordinates and
//! random normal-form 2-jets built from algebraic curvature tensors.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{factorial, MultiIndex, Rational};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::laplace::MetricJet;

/// Four-index tensor `C_{ikjl}` with the algebraic symmetries of a curvature
/// tensor: antisymmetric in `(i,k)` and in `(j,l)`, symmetric under swapping
/// the pairs, and satisfying the first Bianchi identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureTensor {
    dim: usize,
    components: Vec<Rational>,
}

impl CurvatureTensor {
    pub fn zero(dim: usize) -> Self {
        CurvatureTensor {
            dim,
            components: vec![Rational::zero(); dim.pow(4)],
        }
    }

    /// Validates a raw component array indexed as `((i·d + k)·d + j)·d + l`.
    pub fn from_components(dim: usize, components: Vec<Rational>) -> Result<Self> {
        if components.len() != dim.pow(4) {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                dim.pow(4),
                components.len()
            )));
        }
        let t = CurvatureTensor { dim, components };
        if !t.has_curvature_symmetries() {
            return Err(Error::InvalidArgument(
                "components lack curvature-tensor symmetries".into(),
            ));
        }
        Ok(t)
    }

    /// Kulkarni–Nomizu product of two symmetric matrices (row-major):
    /// `(h ⊙ q)_{ikjl} = h_ij q_kl + h_kl q_ij - h_il q_kj - h_kj q_il`.
    pub fn kulkarni_nomizu(dim: usize, h: &[Rational], q: &[Rational]) -> Self {
        let m = |a: &[Rational], r: usize, c: usize| a[r * dim + c].clone();
        let mut t = CurvatureTensor::zero(dim);
        for i in 0..dim {
            for k in 0..dim {
                for j in 0..dim {
                    for l in 0..dim {
                        let v = m(h, i, j) * m(q, k, l) + m(h, k, l) * m(q, i, j)
                            - m(h, i, l) * m(q, k, j)
                            - m(h, k, j) * m(q, i, l);
                        *t.at_mut(i, k, j, l) = v;
                    }
                }
            }
        }
        t
    }

    /// Seeded random tensor with integer components in `[-3, 3]`, drawn as a
    /// sum of two Kulkarni–Nomizu products of small symmetric matrices and
    /// resampled until every component is in range.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut sym = || {
                let mut a = vec![Rational::zero(); dim * dim];
                for r in 0..dim {
                    for c in r..dim {
                        let v = Rational::from_integer(rng.gen_range(-1i64..=1).into());
                        a[r * dim + c] = v.clone();
                        a[c * dim + r] = v;
                    }
                }
                a
            };
            let (h1, q1, h2, q2) = (sym(), sym(), sym(), sym());
            let t1 = Self::kulkarni_nomizu(dim, &h1, &q1);
            let t2 = Self::kulkarni_nomizu(dim, &h2, &q2);
            let components: Vec<Rational> = t1
                .components
                .iter()
                .zip(&t2.components)
                .map(|(a, b)| a + b)
                .collect();
            let bound = Rational::from_integer(3.into());
            if components
                .iter()
                .all(|c| c <= &bound && c >= &-bound.clone())
            {
                return CurvatureTensor { dim, components };
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn index(&self, i: usize, k: usize, j: usize, l: usize) -> usize {
        ((i * self.dim + k) * self.dim + j) * self.dim + l
    }

    pub fn at(&self, i: usize, k: usize, j: usize, l: usize) -> &Rational {
        &self.components[self.index(i, k, j, l)]
    }

    fn at_mut(&mut self, i: usize, k: usize, j: usize, l: usize) -> &mut Rational {
        let idx = self.index(i, k, j, l);
        &mut self.components[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Zero::is_zero)
    }

    pub fn has_curvature_symmetries(&self) -> bool {
        let d = self.dim;
        for i in 0..d {
            for k in 0..d {
                for j in 0..d {
                    for l in 0..d {
                        let v = self.at(i, k, j, l);
                        if *v != -self.at(k, i, j, l)
                            || *v != -self.at(i, k, l, j)
                            || v != self.at(j, l, i, k)
                        {
                            return false;
                        }
                        let bianchi = v + self.at(k, j, i, l) + self.at(j, i, k, l);
                        if !bianchi.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// `g_ij = δ_ij + ∑_{k,l} C_{ikjl} x_k x_l`. The Gauss condition holds exactly
/// because `C` is antisymmetric in its last pair.
pub fn metric_from_curvature(c: &CurvatureTensor, order: u32) -> Result<MetricJet> {
    let d = c.dim();
    if order < 2 {
        return Err(Error::InvalidArgument(
            "2-jet metric needs order >= 2".into(),
        ));
    }
    let rows = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let mut g = if i == j {
                        Jet::one(d, order)
                    } else {
                        Jet::zero(d, order)
                    };
                    for k in 0..d {
                        for l in 0..d {
                            let coeff = c.at(i, k, j, l);
                            if coeff.is_zero() {
                                continue;
                            }
                            let alpha = MultiIndex::unit(d, k).plus(&MultiIndex::unit(d, l));
                            g.add_term(alpha, coeff.clone());
                        }
                    }
                    g
                })
                .collect()
        })
        .collect();
    MetricJet::new(rows)?.with_normal_form()
}

/// Seeded random normal-coordinate 2-jet of dimension `d ≥ 2`.
pub fn random_normal_2jet(dim: usize, seed: u64, order: u32) -> Result<MetricJet> {
    if dim < 2 {
        return Err(Error::InvalidArgument("random 2-jets need d >= 2".into()));
    }
    metric_from_curvature(&CurvatureTensor::random(dim, seed), order)
}

/// Normal-coordinate metric of the model space of constant sectional
/// curvature `K`:
/// `g_ij = δ_ij + φ(r²)(r² δ_ij - x_i x_j)` with `φ(u) = (sn(u) - 1)/u` and
/// `sn(u) = (sin(√K r)/(√K r))² = ∑_m (-1)^m 2^{2m+1} K^m u^m / (2m+2)!`.
pub fn constant_curvature_metric(
    dim: usize,
    curvature: &Rational,
    order: u32,
) -> Result<MetricJet> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "order must be even and at least 2, got {order}"
        )));
    }
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    // φ(u) = ∑_{m≥1} (-1)^m 2^{2m+1} K^m u^{m-1} / (2m+2)!, needed up to u^{order/2 - 1}
    let r2 = Jet::radius_squared_power(dim, order, 1)?;
    let mut phi = Jet::zero(dim, order);
    let mut r2_pow = Jet::one(dim, order);
    let mut k_pow = curvature.clone();
    for m in 1..=(order / 2) {
        let sign = if m % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let two_pow = Rational::from_integer(num_bigint::BigInt::one() << (2 * m + 1));
        let c = sign * two_pow * &k_pow / Rational::from_integer(factorial(2 * m as u64 + 2));
        phi.add_assign_unchecked(&r2_pow.scale(&c));
        r2_pow = r2_pow.mul_to(&r2, order);
        k_pow *= curvature;
    }
    let rows = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let xi = Jet::variable(dim, order, i).expect("axis in range");
                    let xj = Jet::variable(dim, order, j).expect("axis in range");
                    let mut bracket = xi.mul_to(&xj, order).neg();
                    let mut g = Jet::zero(dim, order);
                    if i == j {
                        bracket.add_assign_unchecked(&r2);
                        g = Jet::one(dim, order);
                    }
                    g.add_assign_unchecked(&phi.mul_to(&bracket, order));
                    g
                })
                .collect()
        })
        .collect();
    MetricJet::new(rows)?.with_normal_form()
}
