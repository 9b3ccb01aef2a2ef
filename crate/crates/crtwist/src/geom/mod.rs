//! Separable toric Kähler metrics and their (weighted) scalar curvature.

pub mod curvature;
pub mod engine;
pub mod evaluate;
pub mod metric;
pub mod weight;

pub use curvature::{
    check_weight_positive, is_affine_in_momenta, scal, weight_expr, weighted_scal, weighted_scal_closed_form, weighted_scal_definitional,
    AffineVerdict,
};
pub use evaluate::{default_probes, evaluate_metric, probe_points};
pub use metric::{
    AmbiSign, Ambitoric, CalabiBundle1D, KillingBasis, Orthotoric, Profile1D, SeparableMetric, TwistedOrthotoric,
    TwistedProduct,
};
pub use weight::WeightFunction;

use serde::{Deserialize, Serialize};

use crate::poly::PolyError;

/// An affine chart `⟨ε, z⟩ = 1` of the projectivized momentum space: `z_ε = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineChart {
    pub epsilon_index: usize,
    pub basis_dim: usize,
}

impl AffineChart {
    pub fn standard(m: usize) -> Self {
        AffineChart { epsilon_index: 0, basis_dim: m + 1 }
    }

    /// Homogeneous coordinates of a chart point.
    pub fn lift(&self, z: &[f64]) -> Vec<f64> {
        assert_eq!(z.len() + 1, self.basis_dim);
        let mut out = z.to_vec();
        out.insert(self.epsilon_index, 1.0);
        out
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("incompatible weight: {0}")]
    IncompatibleWeight(String),
    #[error("weight is {value} ≤ 0 at probe point {point:?}")]
    NonPositiveWeightSample { point: Vec<f64>, value: f64 },
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("unsupported kind: {0}")]
    UnsupportedKind(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
