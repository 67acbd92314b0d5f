//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the report is always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use heatjet::combinatorics::{
    comb1_lhs, comb1_rhs, integer, multinomial_check, rational, vandermonde_half_lhs,
    vandermonde_half_rhs, HalfInteger, MultiIndex,
};
use heatjet::fixtures::{constant_curvature_metric, random_normal_2jet};
use heatjet::heat::{a_n_binomial_form, a_n_multiindex_form, sufficient_order};
use heatjet::kdv::{g_n_expanded, g_n_operator};
use heatjet::laplace::scalar_curvature_at_origin;
use heatjet::oracle::default_sphere_fit;
use heatjet::{DiffPolynomial, MetricJet, Rational};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn poly(terms: &[(&[u32], i64)]) -> DiffPolynomial {
    terms.iter().fold(DiffPolynomial::zero(), |acc, (idx, c)| {
        acc.add(&DiffPolynomial::monomial(idx.to_vec(), integer(*c)))
    })
}

fn kdv_golden() -> Outcome {
    let expected = [
        poly(&[(&[0], 1)]),
        poly(&[(&[2], 1), (&[0, 0], 3)]),
        poly(&[(&[4], 1), (&[0, 2], 10), (&[1, 1], 5), (&[0, 0, 0], 10)]),
    ];
    for (n, want) in (1..=3).zip(&expected) {
        let got = g_n_operator(n).map_err(|e| e.to_string())?;
        ensure(&got == want, || format!("G_{n} = {got}, expected {want}"))?;
    }
    Ok(format!("G_3 = {}", expected[2]))
}

fn kdv_dual_path() -> Outcome {
    for n in 1..=5 {
        let a = g_n_operator(n).map_err(|e| e.to_string())?;
        let b = g_n_expanded(n).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("n = {n}: operator {a} vs expanded {b}"))?;
    }
    Ok("n = 1..5 agree".into())
}

fn identities() -> Outcome {
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for d in 1..=4usize {
        for v in 0..=4u32 {
            for beta in MultiIndex::enumerate(d, v) {
                for u in 0..=6 {
                    checked += 1;
                    if comb1_lhs(&beta, u) != comb1_rhs(v, u, d) {
                        failures.push(format!("comb1 beta={beta} u={u}"));
                    }
                }
            }
        }
    }
    for z in 0..=9 {
        for w in 0..=9 {
            let (z, w) = (HalfInteger::from_twice(z), HalfInteger::from_twice(w));
            for u in 0..=8 {
                checked += 1;
                if vandermonde_half_lhs(&z, &w, u) != vandermonde_half_rhs(&z, &w, u) {
                    failures.push(format!("vandermonde z={z} w={w} u={u}"));
                }
            }
        }
    }
    for m in 0..=4 {
        for d in 1..=3 {
            checked += 1;
            if !multinomial_check(m, d) {
                failures.push(format!("multinomial k-n={m} d={d}"));
            }
        }
    }
    ensure(failures.is_empty(), || {
        format!("{} failures, first: {}", failures.len(), failures[0])
    })?;
    Ok(format!("{checked} cases, 0 failures"))
}

fn flat_vanishing() -> Outcome {
    let cases: Vec<(usize, u32)> = (1..=3).flat_map(|d| (0..=3).map(move |n| (d, n))).collect();
    cases.par_iter().try_for_each(|&(d, n)| {
        let g = MetricJet::flat(d, sufficient_order(n));
        let want = if n == 0 { integer(1) } else { Rational::zero() };
        let a = a_n_multiindex_form(&g, n).map_err(|e| e.to_string())?;
        let b = a_n_binomial_form(&g, n).map_err(|e| e.to_string())?;
        ensure(
            a.normalized_value == want && b.normalized_value == want,
            || {
                format!(
                    "d={d} n={n}: {} / {}",
                    a.normalized_value, b.normalized_value
                )
            },
        )
    })?;
    Ok(format!("{} (d, n) pairs", cases.len()))
}

fn forms_agree(label: &str, g: &MetricJet, n: u32) -> Result<(), String> {
    let a = a_n_multiindex_form(g, n).map_err(|e| format!("{label}: {e}"))?;
    let b = a_n_binomial_form(g, n).map_err(|e| format!("{label}: {e}"))?;
    ensure(a.normalized_value == b.normalized_value, || {
        format!(
            "{label} n={n}: {} vs {}",
            a.normalized_value, b.normalized_value
        )
    })
}

fn random_jets() -> Vec<(String, usize, u64)> {
    [2usize, 3]
        .into_iter()
        .flat_map(|d| (0..20u64).map(move |s| (format!("random d={d} seed={s}"), d, s)))
        .collect()
}

fn form_equivalence() -> Outcome {
    let order = sufficient_order(2);
    let mut cases: Vec<(String, MetricJet)> = Vec::new();
    for d in 1..=3 {
        cases.push((format!("flat d={d}"), MetricJet::flat(d, order)));
    }
    for d in 2..=3 {
        for k in [1, -1, 2] {
            let g = constant_curvature_metric(d, &integer(k), order).map_err(|e| e.to_string())?;
            cases.push((format!("K={k} d={d}"), g));
        }
    }
    for (label, d, seed) in random_jets() {
        let g = random_normal_2jet(d, seed, order).map_err(|e| e.to_string())?;
        cases.push((label, g));
    }
    let jobs: Vec<(&String, &MetricJet, u32)> = cases
        .iter()
        .flat_map(|(l, g)| (0..=2).map(move |n| (l, g, n)))
        .collect();
    jobs.par_iter()
        .try_for_each(|(l, g, n)| forms_agree(l, g, *n))?;
    Ok(format!("{} metrics x n = 0..2", cases.len()))
}

fn curvature_law() -> Outcome {
    let six = integer(6);
    random_jets().par_iter().try_for_each(|(label, d, seed)| {
        let g = random_normal_2jet(*d, *seed, sufficient_order(1)).map_err(|e| e.to_string())?;
        let tau = scalar_curvature_at_origin(&g).map_err(|e| e.to_string())?;
        let a1 = a_n_binomial_form(&g, 1).map_err(|e| e.to_string())?;
        ensure(a1.normalized_value == &tau / &six, || {
            format!("{label}: a1 = {}, tau = {tau}", a1.normalized_value)
        })
    })?;
    Ok("20 random 2-jets per dimension".into())
}

fn spectral() -> Outcome {
    let g = constant_curvature_metric(2, &integer(1), sufficient_order(2))
        .map_err(|e| e.to_string())?;
    let a1 = a_n_binomial_form(&g, 1)
        .map_err(|e| e.to_string())?
        .normalized_value;
    let a2 = a_n_binomial_form(&g, 2)
        .map_err(|e| e.to_string())?
        .normalized_value;
    ensure(a1 == rational(1, 3) && a2 == rational(1, 15), || {
        format!("engine a1 = {a1}, a2 = {a2}")
    })?;
    let fit = default_sphere_fit(2).map_err(|e| e.to_string())?;
    let c = &fit.coefficients;
    let e0 = (c[0] - 1.0).abs();
    let e1 = (c[1] - a1.to_f64().unwrap_or(f64::NAN)).abs();
    let e2 = (c[2] - a2.to_f64().unwrap_or(f64::NAN)).abs();
    let summary = format!("|da0| = {e0:.1e}, |da1| = {e1:.1e}, |da2| = {e2:.1e}");
    ensure(e0 <= 1e-6 && e1 <= 1e-4 && e2 <= 1e-3, || summary.clone())?;
    Ok(summary)
}

fn homogeneity() -> Outcome {
    let order = sufficient_order(2);
    let mut jobs = Vec::new();
    for d in 2..=3 {
        for k in [integer(1), integer(-1), rational(1, 2)] {
            for c in [2i64, 4] {
                for n in 1..=2u32 {
                    jobs.push((d, k.clone(), c, n));
                }
            }
        }
    }
    jobs.par_iter().try_for_each(|(d, k, c, n)| {
        let base = constant_curvature_metric(*d, k, order).map_err(|e| e.to_string())?;
        let scaled =
            constant_curvature_metric(*d, &(k * integer(*c)), order).map_err(|e| e.to_string())?;
        let a = a_n_binomial_form(&base, *n)
            .map_err(|e| e.to_string())?
            .normalized_value;
        let b = a_n_binomial_form(&scaled, *n)
            .map_err(|e| e.to_string())?
            .normalized_value;
        let factor = integer(c.pow(*n));
        ensure(b == &a * &factor, || {
            format!("d={d} K={k} c={c} n={n}: {b} vs {}", &a * &factor)
        })
    })?;
    Ok(format!("{} cases", jobs.len()))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "KdV golden values",
            budget: Duration::from_secs(1),
            run: kdv_golden,
        },
        Criterion {
            id: 2,
            name: "KdV operator vs expanded",
            budget: Duration::from_secs(60),
            run: kdv_dual_path,
        },
        Criterion {
            id: 3,
            name: "combinatorial identities",
            budget: Duration::from_secs(30),
            run: identities,
        },
        Criterion {
            id: 4,
            name: "flat-space vanishing",
            budget: Duration::from_secs(30),
            run: flat_vanishing,
        },
        Criterion {
            id: 5,
            name: "formula form equivalence",
            budget: Duration::from_secs(300),
            run: form_equivalence,
        },
        Criterion {
            id: 6,
            name: "a1 = tau/6",
            budget: Duration::from_secs(120),
            run: curvature_law,
        },
        Criterion {
            id: 7,
            name: "sphere spectral fit",
            budget: Duration::from_secs(10),
            run: spectral,
        },
        Criterion {
            id: 8,
            name: "curvature homogeneity",
            budget: Duration::from_secs(120),
            run: homogeneity,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (status, detail) = match outcome {
            Ok(_) if elapsed > c.budget => (
                "FAIL",
                format!("over budget {:.1}s", c.budget.as_secs_f64()),
            ),
            Ok(detail) => ("PASS", detail),
            Err(detail) => ("FAIL", detail),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "{status} [{}] {} ({:.2}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
