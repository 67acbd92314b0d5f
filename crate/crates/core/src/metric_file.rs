//! JSON metric files.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "order": 8,
//!   "normal_form": true,
//!   "entries": [
//!     {"i":1,"j":1,"monomial":[0,2],"coeff":"-1/3"}
//!   ]
//! }
//! ```
//!
//! Indices are 1-based with `i ≤ j`; `g_ji` mirrors `g_ij`. Entries that are
//! not listed default to `δ_ij` for the constant monomial and to zero
//! otherwise. Coefficients are `"p"` or `"p/q"` in lowest terms.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use crate::combinatorics::{parse_rational, MultiIndex};
use crate::jet::Jet;
use crate::laplace::MetricJet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricEntry {
    pub i: usize,
    pub j: usize,
    pub monomial: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub dimension: usize,
    pub order: u32,
    pub normal_form: bool,
    pub entries: Vec<MetricEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetricFile<'a> {
    dimension: usize,
    order: u32,
    normal_form: bool,
    #[serde(borrow)]
    entries: Vec<&'a RawValue>,
}

/// A parse or validation failure, anchored to a 1-based line when the fault
/// belongs to one place in the file.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct MetricFileError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for MetricFileError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

fn at(line: usize, message: impl Into<String>) -> MetricFileError {
    MetricFileError {
        line: Some(line),
        message: message.into(),
    }
}

fn json_error(e: serde_json::Error, first_line: usize) -> MetricFileError {
    let message = e.to_string();
    // serde_json appends " at line L column C"; the line is reported separately
    let message = match message.rfind(" at line ") {
        Some(pos) => message[..pos].to_string(),
        None => message,
    };
    at(first_line + e.line().max(1) - 1, message)
}

/// Parses and validates a metric file.
pub fn parse_metric(text: &str) -> Result<MetricJet, MetricFileError> {
    let raw: RawMetricFile = serde_json::from_str(text).map_err(|e| json_error(e, 1))?;
    let d = raw.dimension;
    let order = raw.order;
    if d == 0 {
        return Err(MetricFileError {
            line: None,
            message: "dimension must be at least 1".into(),
        });
    }
    let mut jets: Vec<Jet> = (0..d * d).map(|_| Jet::zero(d, order)).collect();
    let mut seen = BTreeSet::new();
    for entry in &raw.entries {
        let line = line_of(text, entry.get());
        let e: MetricEntry =
            serde_json::from_str(entry.get()).map_err(|err| json_error(err, line))?;
        if e.i == 0 || e.j == 0 || e.i > d || e.j > d {
            return Err(at(
                line,
                format!("index ({}, {}) outside 1..={d}", e.i, e.j),
            ));
        }
        if e.i > e.j {
            return Err(at(
                line,
                format!("entry ({}, {}) must satisfy i <= j", e.i, e.j),
            ));
        }
        if e.monomial.len() != d {
            return Err(at(
                line,
                format!("monomial has {} exponents, expected {d}", e.monomial.len()),
            ));
        }
        let alpha = MultiIndex::new(e.monomial.clone()).expect("dimension checked above");
        if alpha.modulus() > order {
            return Err(at(
                line,
                format!("monomial degree {} exceeds order {order}", alpha.modulus()),
            ));
        }
        let coeff = parse_rational(&e.coeff).map_err(|err| at(line, err.to_string()))?;
        if alpha.modulus() == 0 {
            let expect = e.i == e.j;
            if (expect && !coeff.is_one()) || (!expect && !coeff.is_zero()) {
                return Err(at(
                    line,
                    format!("g_{}{}(0) must be {}", e.i, e.j, if expect { 1 } else { 0 }),
                ));
            }
        }
        if !seen.insert((e.i, e.j, e.monomial.clone())) {
            return Err(at(line, "duplicate entry"));
        }
        let (i, j) = (e.i - 1, e.j - 1);
        jets[i * d + j].add_term(alpha.clone(), coeff.clone());
        if i != j {
            jets[j * d + i].add_term(alpha, coeff);
        }
    }
    for i in 0..d {
        if !seen.contains(&(i + 1, i + 1, vec![0; d])) {
            jets[i * d + i].add_term(MultiIndex::zeros(d), num_rational::BigRational::one());
        }
    }
    let rows = jets.chunks(d).map(|r| r.to_vec()).collect();
    let whole = |e: crate::error::Error| MetricFileError {
        line: None,
        message: e.to_string(),
    };
    let g = MetricJet::new(rows).map_err(whole)?;
    if raw.normal_form {
        g.with_normal_form().map_err(whole)
    } else {
        Ok(g)
    }
}

fn line_of(text: &str, fragment: &str) -> usize {
    let offset = fragment.as_ptr() as usize - text.as_ptr() as usize;
    text[..offset].matches('\n').count() + 1
}

/// Canonical file for a metric: only entries with `i ≤ j` that differ from the
/// identity default, sorted by `(i, j, monomial)`.
pub fn to_metric_file(g: &MetricJet) -> MetricFile {
    let d = g.dim();
    let mut entries = Vec::new();
    for i in 0..d {
        for j in i..d {
            for (alpha, c) in g.get(i, j).terms() {
                if alpha.modulus() == 0 {
                    continue;
                }
                entries.push(MetricEntry {
                    i: i + 1,
                    j: j + 1,
                    monomial: alpha.as_slice().to_vec(),
                    coeff: c.to_string(),
                });
            }
        }
    }
    MetricFile {
        dimension: d,
        order: g.order(),
        normal_form: g.is_normal_form(),
        entries,
    }
}

/// Serializes with one entry per line, so that error messages can point at
/// entries by line number.
pub fn render_metric_file(file: &MetricFile) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"dimension\": {},\n", file.dimension));
    out.push_str(&format!("  \"order\": {},\n", file.order));
    out.push_str(&format!("  \"normal_form\": {},\n", file.normal_form));
    if file.entries.is_empty() {
        out.push_str("  \"entries\": []\n");
    } else {
        out.push_str("  \"entries\": [\n");
        for (n, e) in file.entries.iter().enumerate() {
            let sep = if n + 1 == file.entries.len() { "" } else { "," };
            let json = serde_json::to_string(e).expect("entries serialize");
            out.push_str(&format!("    {json}{sep}\n"));
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

pub fn write_metric(g: &MetricJet) -> String {
    render_metric_file(&to_metric_file(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::integer;
    use crate::fixtures::{constant_curvature_metric, random_normal_2jet};
    use proptest::prelude::*;

    const FLAT2: &str =
        "{\n  \"dimension\": 2,\n  \"order\": 4,\n  \"normal_form\": true,\n  \"entries\": []\n}\n";

    #[test]
    fn flat_template() {
        let g = parse_metric(FLAT2).unwrap();
        assert_eq!(g, MetricJet::flat(2, 4).with_normal_form().unwrap());
        assert_eq!(write_metric(&g), FLAT2);
    }

    #[test]
    fn fixture_round_trip() {
        let g = constant_curvature_metric(3, &integer(-2), 6).unwrap();
        let text = write_metric(&g);
        assert_eq!(parse_metric(&text).unwrap(), g);
    }

    #[test]
    fn explicit_diagonal_constant_is_allowed() {
        let text = r#"{"dimension": 1, "order": 2, "normal_form": false,
            "entries": [{"i":1,"j":1,"monomial":[0],"coeff":"1"}, {"i":1,"j":1,"monomial":[2],"coeff":"3/2"}]}"#;
        let g = parse_metric(text).unwrap();
        assert_eq!(g.get(0, 0).value_at_origin(), integer(1));
        // canonical form drops the default constant
        assert_eq!(to_metric_file(&g).entries.len(), 1);
    }

    fn err_of(text: &str) -> MetricFileError {
        parse_metric(text).unwrap_err()
    }

    #[test]
    fn errors_point_at_the_offending_line() {
        let text = "{\n  \"dimension\": 2,\n  \"order\": 4,\n  \"normal_form\": false,\n  \"entries\": [\n    {\"i\":1,\"j\":1,\"monomial\":[0,2],\"coeff\":\"1\"},\n    {\"i\":1,\"j\":2,\"monomial\":[1,1],\"coeff\":\"1/0\"}\n  ]\n}\n";
        let e = err_of(text);
        assert_eq!(e.line, Some(7));
        assert!(e.to_string().starts_with("line 7:"), "{e}");

        let bad_json = "{\n  \"dimension\": 2,\n  \"order\": 4,\n  \"normal_form\": false,\n  \"entries\": [\n    {\"i\":1,\"j\":1,\"monomial\":[0,2],\"coeff\":\"1\"},,\n  ]\n}\n";
        assert_eq!(err_of(bad_json).line, Some(6));
    }

    #[test]
    fn validation_errors() {
        let wrap = |entry: &str| {
            format!("{{\"dimension\": 2, \"order\": 4, \"normal_form\": false,\n\"entries\": [\n{entry}\n]}}")
        };
        for entry in [
            r#"{"i":2,"j":1,"monomial":[1,1],"coeff":"1"}"#,
            r#"{"i":1,"j":3,"monomial":[1,1],"coeff":"1"}"#,
            r#"{"i":0,"j":1,"monomial":[1,1],"coeff":"1"}"#,
            r#"{"i":1,"j":1,"monomial":[1],"coeff":"1"}"#,
            r#"{"i":1,"j":1,"monomial":[3,2],"coeff":"1"}"#,
            r#"{"i":1,"j":1,"monomial":[0,0],"coeff":"2"}"#,
            r#"{"i":1,"j":2,"monomial":[0,0],"coeff":"1"}"#,
            r#"{"i":1,"j":1,"monomial":[2,0],"coeff":"2/4"}"#,
            r#"{"i":1,"j":1,"monomial":[2,0],"coeff":"1", "extra": 3}"#,
            "{\"i\":1,\"j\":1,\"monomial\":[2,0],\"coeff\":\"1\"},\n{\"i\":1,\"j\":1,\"monomial\":[2,0],\"coeff\":\"2\"}",
        ] {
            let e = err_of(&wrap(entry));
            assert!(e.line.is_some(), "{entry}: {e}");
        }
        // normal_form claimed for a metric that is not in normal coordinates
        let text = r#"{"dimension": 2, "order": 2, "normal_form": true,
            "entries": [{"i":1,"j":2,"monomial":[1,0],"coeff":"1"}]}"#;
        let e = err_of(text);
        assert_eq!(e.line, None);
        assert!(e.message.contains("normal_form"));
        assert!(
            err_of(r#"{"dimension": 0, "order": 2, "normal_form": false, "entries": []}"#)
                .message
                .contains("dimension")
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn canonical_form_is_a_fixed_point(seed in 0u64..1000, d in 2usize..4) {
            let g = random_normal_2jet(d, seed, 4).unwrap();
            let text = write_metric(&g);
            let parsed = parse_metric(&text).unwrap();
            prop_assert_eq!(&parsed, &g);
            prop_assert_eq!(write_metric(&parsed), text);
        }
    }
}
