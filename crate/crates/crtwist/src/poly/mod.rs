//! Exact polynomial and rational-function arithmetic over ℚ.

pub mod invariants;
pub mod linalg;
pub mod mpoly;
pub mod ratfn;
pub mod rational;
pub mod rexpr;
pub mod sturm;
pub mod univariate;

pub use invariants::{
    harmonic_pairing, mobius, mobius_inverse, mobius_transform, poisson_bracket, quadratic_pairing, transvectant2,
    transvectant2_variant, PaperQuadratic, TransvectantVariant, Transvectants,
};
pub use mpoly::MPoly;
pub use ratfn::RatFn;
pub use rational::{format_rational, int, parse_rational, rat, rationalize, to_f64, Rational};
pub use rexpr::RationalExpr;
pub use sturm::{count_roots, isolate_roots, positive_on_open_interval, Positivity, RootInterval};
pub use univariate::{arith, ArithOp, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("cannot parse rational `{0}`")]
    Parse(String),
    #[error("variable mismatch: `{0}` vs `{1}`")]
    VarMismatch(String, String),
    #[error("singular Möbius map (αδ − βγ = 0)")]
    SingularMap,
    #[error("degree {degree} exceeds weight {weight}")]
    DegreeTooHigh { degree: usize, weight: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("empty or reversed interval")]
    BadInterval,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("singular linear system")]
    SingularSystem,
}
