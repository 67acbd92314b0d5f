//! Metric jets and the Laplace–Beltrami operator
//! `Δf = -(1/√g) ∑ ∂_j(√g g^{ij} ∂_i f)` in expanded form.

use num_traits::{One, Zero};

use crate::combinatorics::{MultiIndex, Rational};
use crate::error::{Error, Result};
use crate::jet::Jet;

/// Symmetric `d×d` matrix of jets with `g_ij(0) = δ_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricJet {
    dim: usize,
    order: u32,
    entries: Vec<Jet>,
    normal_form: bool,
}

impl MetricJet {
    /// Validates and wraps a full `d×d` matrix (row-major rows).
    pub fn new(rows: Vec<Vec<Jet>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidMetric("empty matrix".into()));
        }
        let order = rows[0]
            .first()
            .map(Jet::order)
            .ok_or_else(|| Error::InvalidMetric("empty row".into()))?;
        let mut entries = Vec::with_capacity(dim * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::InvalidMetric(format!(
                    "row {} has {} entries, expected {dim}",
                    i + 1,
                    row.len()
                )));
            }
            for jet in row {
                if jet.dim() != dim {
                    return Err(Error::DimensionMismatch(jet.dim(), dim));
                }
                if jet.order() != order {
                    return Err(Error::OrderMismatch(jet.order(), order));
                }
                entries.push(jet);
            }
        }
        let g = MetricJet {
            dim,
            order,
            entries,
            normal_form: false,
        };
        for i in 0..dim {
            for j in 0..dim {
                if j > i && g.get(i, j) != g.get(j, i) {
                    return Err(Error::InvalidMetric(format!(
                        "g_{}{} differs from g_{}{}",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
                let expect = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                if g.get(i, j).value_at_origin() != expect {
                    return Err(Error::InvalidMetric(format!(
                        "g_{}{}(0) = {}, expected {expect}",
                        i + 1,
                        j + 1,
                        g.get(i, j).value_at_origin()
                    )));
                }
            }
        }
        Ok(g)
    }

    pub fn flat(dim: usize, order: u32) -> Self {
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            Jet::one(dim, order)
                        } else {
                            Jet::zero(dim, order)
                        }
                    })
                    .collect()
            })
            .collect();
        MetricJet::new(rows).expect("identity is a valid metric")
    }

    /// Marks the coordinates as normal after checking the Gauss condition
    /// `∑_j g_ij x_j = x_i` up to the jet order.
    pub fn with_normal_form(mut self) -> Result<Self> {
        if !self.satisfies_gauss_condition() {
            return Err(Error::InvalidMetric(
                "normal_form claimed but sum_j g_ij x_j = x_i fails".into(),
            ));
        }
        self.normal_form = true;
        Ok(self)
    }

    pub fn satisfies_gauss_condition(&self) -> bool {
        (0..self.dim).all(|i| {
            let mut lhs = Jet::zero(self.dim, self.order);
            for j in 0..self.dim {
                let xj = Jet::variable(self.dim, self.order, j).expect("axis in range");
                lhs.add_assign_unchecked(&self.get(i, j).mul_to(&xj, self.order));
            }
            lhs == Jet::variable(self.dim, self.order, i).expect("axis in range")
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_normal_form(&self) -> bool {
        self.normal_form
    }

    /// Zero-based entry `g_ij`.
    pub fn get(&self, i: usize, j: usize) -> &Jet {
        &self.entries[i * self.dim + j]
    }

    pub fn truncated(&self, order: u32) -> Result<MetricJet> {
        if order > self.order {
            return Err(Error::OrderMismatch(order, self.order));
        }
        Ok(MetricJet {
            dim: self.dim,
            order,
            entries: self
                .entries
                .iter()
                .map(|e| e.truncated_unchecked(order))
                .collect(),
            normal_form: self.normal_form,
        })
    }

    /// Inverse matrix and determinant, by Gauss–Jordan elimination over the jet
    /// ring. Every pivot is `1 + O(x)` since `g(0) = I`, so no row exchanges
    /// are needed.
    pub fn inverse_and_determinant(&self) -> Result<(Vec<Jet>, Jet)> {
        let d = self.dim;
        let n = self.order;
        let mut a = self.entries.clone();
        let mut inv: Vec<Jet> = (0..d * d)
            .map(|k| {
                if k / d == k % d {
                    Jet::one(d, n)
                } else {
                    Jet::zero(d, n)
                }
            })
            .collect();
        let mut det = Jet::one(d, n);
        for col in 0..d {
            let pivot = a[col * d + col].clone();
            det = det.mul_to(&pivot, n);
            let pinv = pivot.reciprocal()?;
            for c in 0..d {
                a[col * d + c] = a[col * d + c].mul_to(&pinv, n);
                inv[col * d + c] = inv[col * d + c].mul_to(&pinv, n);
            }
            for row in 0..d {
                if row == col || a[row * d + col].is_zero() {
                    continue;
                }
                let factor = a[row * d + col].clone();
                for c in 0..d {
                    let da = factor.mul_to(&a[col * d + c], n);
                    a[row * d + c] = a[row * d + c].sub_unchecked(&da);
                    let di = factor.mul_to(&inv[col * d + c], n);
                    inv[row * d + c] = inv[row * d + c].sub_unchecked(&di);
                }
            }
        }
        Ok((inv, det))
    }
}

/// `f ↦ ∑ A^{ij} ∂_i∂_j f + ∑ B^i ∂_i f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplaceOperator {
    dim: usize,
    order: u32,
    second_order: Vec<Jet>,
    first_order: Vec<Jet>,
}

impl LaplaceOperator {
    /// Builds the geometer's (positive) Laplacian of `g`:
    /// `A^{ij} = -g^{ij}` and `B^i = -(1/√g) ∑_j ∂_j(√g g^{ij})`.
    pub fn build(g: &MetricJet) -> Result<Self> {
        let d = g.dim();
        let n = g.order();
        let (ginv, det) = g.inverse_and_determinant()?;
        let inv_sqrt_det = det.inv_sqrt()?;
        let sqrt_det = det.mul_to(&inv_sqrt_det, n);
        let second_order = ginv.iter().map(Jet::neg).collect();
        let mut first_order = Vec::with_capacity(d);
        for i in 0..d {
            let mut div = Jet::zero(d, n);
            for j in 0..d {
                let flux = sqrt_det.mul_to(&ginv[i * d + j], n);
                div.add_assign_unchecked(&flux.partial_derivative(j)?);
            }
            first_order.push(inv_sqrt_det.mul_to(&div, n).neg());
        }
        Ok(LaplaceOperator {
            dim: d,
            order: n,
            second_order,
            first_order,
        })
    }

    /// Assembles an operator from explicit coefficients. `A` must be symmetric
    /// with `A(0) = -I`.
    pub fn from_parts(second_order: Vec<Jet>, first_order: Vec<Jet>) -> Result<Self> {
        let dim = first_order.len();
        if dim == 0 || second_order.len() != dim * dim {
            return Err(Error::InvalidArgument(
                "coefficient arrays do not form a d×d / d pair".into(),
            ));
        }
        let order = first_order[0].order();
        for jet in second_order.iter().chain(&first_order) {
            if jet.dim() != dim {
                return Err(Error::DimensionMismatch(jet.dim(), dim));
            }
            if jet.order() != order {
                return Err(Error::OrderMismatch(jet.order(), order));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                if second_order[i * dim + j] != second_order[j * dim + i] {
                    return Err(Error::InvalidArgument("A is not symmetric".into()));
                }
                let expect = if i == j {
                    -Rational::one()
                } else {
                    Rational::zero()
                };
                if second_order[i * dim + j].value_at_origin() != expect {
                    return Err(Error::InvalidArgument("A(0) is not -I".into()));
                }
            }
        }
        Ok(LaplaceOperator {
            dim,
            order,
            second_order,
            first_order,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn second_order(&self, i: usize, j: usize) -> &Jet {
        &self.second_order[i * self.dim + j]
    }

    pub fn first_order(&self, i: usize) -> &Jet {
        &self.first_order[i]
    }

    /// The constant-coefficient principal part, `-∑ ∂²/∂x_i²` for every valid
    /// metric.
    pub fn frozen(&self) -> LaplaceOperator {
        let d = self.dim;
        let n = self.order;
        LaplaceOperator {
            dim: d,
            order: n,
            second_order: self
                .second_order
                .iter()
                .map(|a| Jet::constant(d, n, a.value_at_origin()))
                .collect(),
            first_order: (0..d).map(|_| Jet::zero(d, n)).collect(),
        }
    }

    fn check_operand(&self, f: &Jet) -> Result<()> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch(f.dim(), self.dim));
        }
        if f.order() != self.order {
            return Err(Error::OrderMismatch(f.order(), self.order));
        }
        Ok(())
    }

    pub fn apply(&self, f: &Jet) -> Result<Jet> {
        self.check_operand(f)?;
        Ok(self.apply_to(f, self.order))
    }

    pub fn apply_power(&self, f: &Jet, k: u32) -> Result<Jet> {
        self.check_operand(f)?;
        let mut cur = f.clone();
        for _ in 0..k {
            cur = self.apply_to(&cur, self.order);
        }
        Ok(cur)
    }

    /// `(Δ^k f)(0)` with the working order shrinking by two per application:
    /// after `i` steps only degrees `≤ 2(k - i)` can still reach the constant
    /// term. Needs `order ≥ 2k`.
    pub fn power_value_at_origin(&self, f: &Jet, k: u32) -> Result<Rational> {
        if f.dim() != self.dim {
            return Err(Error::DimensionMismatch(f.dim(), self.dim));
        }
        let need = 2 * k;
        if self.order < need || f.order() < need {
            return Err(Error::InsufficientOrder {
                required: need,
                actual: self.order.min(f.order()),
            });
        }
        let mut cur = f.truncated_unchecked(need);
        for i in 0..k {
            cur = self.apply_to(&cur, 2 * (k - i - 1));
        }
        Ok(cur.value_at_origin())
    }

    // Output truncated at `out`; `f` must be accurate through degree `out + 2`.
    fn apply_to(&self, f: &Jet, out: u32) -> Jet {
        let d = self.dim;
        let mut result = Jet::zero(d, out);
        let firsts: Vec<Jet> = (0..d)
            .map(|i| f.partial_derivative(i).expect("axis in range"))
            .collect();
        for (i, fi) in firsts.iter().enumerate() {
            for j in i..d {
                let a = &self.second_order[i * d + j];
                if a.is_zero() {
                    continue;
                }
                let dij = fi.partial_derivative(j).expect("axis in range");
                let mut term = a.mul_to(&dij, out);
                if i != j {
                    term = term.scale(&Rational::from_integer(2.into()));
                }
                result.add_assign_unchecked(&term);
            }
            let b = &self.first_order[i];
            if !b.is_zero() {
                result.add_assign_unchecked(&b.mul_to(fi, out));
            }
        }
        result
    }
}

/// Scalar curvature at the origin from Christoffel symbols, normalized so the
/// unit round sphere `S^d` has `τ = d(d-1)`.
pub fn scalar_curvature_at_origin(g: &MetricJet) -> Result<Rational> {
    if g.order() < 2 {
        return Err(Error::InsufficientOrder {
            required: 2,
            actual: g.order(),
        });
    }
    let d = g.dim();
    let n = g.order();
    let (ginv, _) = g.inverse_and_determinant()?;
    // dg[k][i*d+j] = ∂_k g_ij
    let dg: Vec<Vec<Jet>> = (0..d)
        .map(|k| {
            (0..d * d)
                .map(|ij| g.entries[ij].partial_derivative(k))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let half = Rational::new(1.into(), 2.into());
    // gamma[r][i][j] = Γ^r_{ij} as jets
    let mut gamma = vec![vec![vec![Jet::zero(d, n); d]; d]; d];
    for r in 0..d {
        for i in 0..d {
            for j in 0..d {
                let mut acc = Jet::zero(d, n);
                for l in 0..d {
                    let inner = dg[i][l * d + j]
                        .add(&dg[j][l * d + i])?
                        .sub(&dg[l][i * d + j])?;
                    acc.add_assign_unchecked(&ginv[r * d + l].mul_to(&inner, n));
                }
                gamma[r][i][j] = acc.scale(&half);
            }
        }
    }
    let g0 = |r: usize, i: usize, j: usize| gamma[r][i][j].value_at_origin();
    let dg0 = |m: usize, r: usize, i: usize, j: usize| -> Result<Rational> {
        Ok(gamma[r][i][j].partial_derivative(m)?.value_at_origin())
    };
    // R^r_{s m v} = ∂_m Γ^r_{vs} - ∂_v Γ^r_{ms} + Γ^r_{ml} Γ^l_{vs} - Γ^r_{vl} Γ^l_{ms}
    let mut tau = Rational::zero();
    for s in 0..d {
        for v in 0..d {
            let ginv_sv = ginv[s * d + v].value_at_origin();
            if ginv_sv.is_zero() {
                continue;
            }
            let mut ric = Rational::zero();
            for r in 0..d {
                let m = r;
                let mut riem = dg0(m, r, v, s)? - dg0(v, r, m, s)?;
                for l in 0..d {
                    riem += g0(r, m, l) * g0(l, v, s) - g0(r, v, l) * g0(l, m, s);
                }
                ric += riem;
            }
            tau += ginv_sv * ric;
        }
    }
    Ok(tau)
}

/// Closed form of a constant-coefficient power:
/// `Δ₀^m f = (-1)^m ∑_{|β|=m} (m!/β!) ∂^{2β} f`.
pub fn flat_power_closed_form(f: &Jet, m: u32) -> Jet {
    let d = f.dim();
    let m_fact = Rational::from_integer(crate::combinatorics::factorial(m as u64));
    let sign = if m.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    };
    let mut out = Jet::zero(d, f.order());
    for beta in MultiIndex::enumerate(d, m) {
        let mut term = f.clone();
        for (axis, &b) in beta.as_slice().iter().enumerate() {
            for _ in 0..2 * b {
                term = term.partial_derivative(axis).expect("axis in range");
            }
        }
        let c = &sign * &m_fact / Rational::from_integer(beta.factorial());
        out.add_assign_unchecked(&term.scale(&c));
    }
    out
}
