//! Exact computation of local heat-kernel invariants from metric jets in
//! normal coordinates, and symbolic generation of the KdV hierarchy.
//!
//! Every quantity on the exact path is a [`Rational`]; the only floating-point
//! code lives in [`oracle`], which fits the heat trace of the round 2-sphere
//! from its spectrum.

pub mod combinatorics;
pub mod error;
pub mod fixtures;
pub mod heat;
pub mod jet;
pub mod kdv;
pub mod laplace;
pub mod metric_file;
pub mod oracle;

pub use combinatorics::{HalfInteger, MultiIndex, Rational};
pub use error::{Error, Result};
pub use heat::{Form, HeatInvariantResult};
pub use jet::Jet;
pub use kdv::{DiffPolynomial, XSeries};
pub use laplace::{LaplaceOperator, MetricJet};
