//! Exact lightlike-submanifold analysis over metallic semi-Riemannian
//! ambient spaces with a flat connection.

pub mod bundles;
pub mod calculus;
pub mod cli;
pub mod field;
pub mod linalg;
pub mod scalar;
pub mod structure;
pub mod verifier;

use thiserror::Error;

use bundles::BundleError;
use calculus::CalculusError;
use cli::ManifestError;
use linalg::LinalgError;
use verifier::VerifierError;

/// Command-level failure, split by exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// 2 for invalid input, 3 for unsupported structures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Invalid(_) => 2,
            Self::Unsupported(_) => 3,
        }
    }
}

impl From<ManifestError> for Error {
    fn from(e: ManifestError) -> Self {
        if e.is_unsupported() {
            Self::Unsupported(e.to_string())
        } else {
            Self::Invalid(e.to_string())
        }
    }
}

impl From<BundleError> for Error {
    fn from(e: BundleError) -> Self {
        match e {
            BundleError::NotLightlike => Self::Unsupported(format!("NotLightlike: {e}")),
            BundleError::DependentFrame | BundleError::InvalidScreen(_) => Self::Invalid(e.to_string()),
            BundleError::Linalg(LinalgError::DimensionMismatch { .. }) => Self::Invalid(e.to_string()),
            _ => Self::Unsupported(e.to_string()),
        }
    }
}

impl From<CalculusError> for Error {
    fn from(e: CalculusError) -> Self {
        match e {
            CalculusError::Bundle(b) => b.into(),
            CalculusError::RankDeficient { .. }
            | CalculusError::NotTangent { .. }
            | CalculusError::DimensionMismatch { .. } => Self::Invalid(e.to_string()),
            _ => Self::Unsupported(e.to_string()),
        }
    }
}

impl From<VerifierError> for Error {
    fn from(e: VerifierError) -> Self {
        match e {
            VerifierError::UnknownCheck(_) => Self::Invalid(e.to_string()),
            VerifierError::WrongStructureKind { .. } => Self::Unsupported(e.to_string()),
            VerifierError::Calculus(c) => c.into(),
        }
    }
}
