//! Polynomial immersions, exact differentiation along the chart, and the
//! Gauss–Weingarten objects built from the bundle decomposition.

pub mod expr;
pub mod fields;
pub mod gauss_weingarten;
pub mod immersion;
pub mod poly;

use thiserror::Error;

use crate::bundles::BundleError;
use crate::linalg::LinalgError;

pub use expr::{parse_expression, parse_scalar, ExprContext, ExprError};
pub use fields::{Bundle, Evaluator, FieldExpr, Part, ScreenMode};
pub use gauss_weingarten::{
    bundle_samples, defect_value, gauss_weingarten, identity_suite, metric_defect, tangent_samples,
    DefectRow, GaussWeingartenData, IdentityRow, NamedField,
};
pub use immersion::{ChartField, ImmersionInstance};
pub use poly::{Poly, PolyVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error("jacobian frame has rank below {expected} at sample point {point}")]
    RankDeficient { point: usize, expected: usize },
    #[error("field is not tangent at sample point {point}")]
    NotTangent { point: usize },
    #[error("field `{0}` is not available for this structure")]
    Unavailable(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
