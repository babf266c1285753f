use serde::{Deserialize, Serialize};

/// Scalar field of a frame. Complex scalars are stored as `(re, im)` pairs
/// everywhere, so the tag is data rather than a compile-time split; one code
/// path serves both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

impl ScalarField {
    pub fn is_real(self) -> bool {
        matches!(self, ScalarField::Real)
    }
}

impl std::fmt::Display for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScalarField::Real => write!(f, "real"),
            ScalarField::Complex => write!(f, "complex"),
        }
    }
}
