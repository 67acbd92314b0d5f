//! Floating-point heat-trace oracle for the unit round sphere `S²`.
//!
//! The Laplacian on `S²` has eigenvalues `k(k+1)` with multiplicity `2k+1`, so
//! `Z(t) = ∑_k (2k+1) e^{-t k(k+1)} ∼ a₀/t + a₁ + a₂ t + ⋯` as `t → 0`.
//! Fitting `t·Z(t)` by a polynomial in `t` recovers the integrated invariants,
//! which coincide with the normalized pointwise ones because
//! `Area(S²)/(4π) = 1`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest accepted sample time.
pub const MAX_T: f64 = 0.05;
/// Bound on the first omitted eigenvalue term.
pub const TAIL_BOUND: f64 = 1e-15;
/// Fits whose singular-value ratio exceeds this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFit {
    /// Fitted `a_0, …, a_{n_max}`.
    pub coefficients: Vec<f64>,
    /// Ratio of extreme singular values of the scaled design matrix.
    pub condition: f64,
}

/// `∑_{k=0}^{k_max} (2k+1) e^{-t k(k+1)}`, summed from the small tail terms up.
pub fn sphere_trace(t: f64, k_max: u64) -> f64 {
    (0..=k_max)
        .rev()
        .map(|k| {
            let k = k as f64;
            (2.0 * k + 1.0) * (-t * k * (k + 1.0)).exp()
        })
        .sum()
}

/// Smallest `k_max` whose tail bound `e^{-t k_max²}` is below [`TAIL_BOUND`].
pub fn default_k_max(t_min: f64) -> u64 {
    ((-TAIL_BOUND.ln()) / t_min).sqrt().ceil() as u64 + 1
}

/// `count` geometrically spaced times from `t_min` to `t_max`.
pub fn geometric_times(t_min: f64, t_max: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![t_min];
    }
    let ratio = (t_max / t_min).powf(1.0 / (count - 1) as f64);
    (0..count)
        .map(|i| {
            if i + 1 == count {
                t_max
            } else {
                t_min * ratio.powi(i as i32)
            }
        })
        .collect()
}

/// Least-squares fit of `t·Z(t) = ∑_{n=0}^{n_max + extra} a_n t^n` over `t_list`.
/// The `extra` higher terms soak up the truncation bias of the reported
/// `a_0, …, a_{n_max}`.
pub fn sphere_trace_fit_with(
    n_max: usize,
    extra: usize,
    t_list: &[f64],
    k_max: u64,
) -> Result<SpectralFit> {
    let terms = n_max + 1 + extra;
    if t_list.len() < terms {
        return Err(Error::InvalidArgument(format!(
            "{} sample times cannot determine {terms} coefficients",
            t_list.len()
        )));
    }
    for &t in t_list {
        if !(t > 0.0 && t <= MAX_T) {
            return Err(Error::InvalidArgument(format!(
                "sample time {t} outside (0, {MAX_T}]"
            )));
        }
        if (-t * (k_max as f64).powi(2)).exp() >= TAIL_BOUND {
            return Err(Error::InvalidArgument(format!(
                "k_max = {k_max} leaves a tail above {TAIL_BOUND:e} at t = {t}"
            )));
        }
    }
    // t·Z(t) = O(1) for every sample, so rows carry comparable weight
    let design = DMatrix::from_fn(t_list.len(), terms, |r, c| t_list[r].powi(c as i32));
    let rhs = DVector::from_iterator(
        t_list.len(),
        t_list.iter().map(|&t| t * sphere_trace(t, k_max)),
    );
    // column equilibration keeps the condition estimate meaningful
    let scales: Vec<f64> = (0..terms).map(|c| design.column(c).norm()).collect();
    let mut scaled = design.clone();
    for (c, s) in scales.iter().enumerate() {
        scaled.column_mut(c).unscale_mut(*s);
    }
    let svd = scaled.svd(true, true);
    let sv = &svd.singular_values;
    let condition = sv.max() / sv.min();
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::IllConditioned(condition));
    }
    let solution = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let coefficients = (0..=n_max).map(|c| solution[c] / scales[c]).collect();
    Ok(SpectralFit {
        coefficients,
        condition,
    })
}

/// Fit with two extra correction terms.
pub fn sphere_trace_fit(n_max: usize, t_list: &[f64], k_max: u64) -> Result<SpectralFit> {
    sphere_trace_fit_with(n_max, 2, t_list, k_max)
}

/// Default sampling: 10 geometric times in `[0.002, 0.05]`.
pub fn default_sphere_fit(n_max: usize) -> Result<SpectralFit> {
    let ts = geometric_times(0.002, MAX_T, 10);
    sphere_trace_fit(n_max, &ts, default_k_max(ts[0]))
}
