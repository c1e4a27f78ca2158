//! Exact machinery for simple translation-invariant valuations on rational
//! polytopes: convex hulls and face lattices over Q, iterated-face frames,
//! Hadwiger-style invariants, and equidecomposability certificates.

pub mod certify;
pub mod exactnum;
pub mod frames;
pub mod io;
pub mod polytope;
pub mod valuations;

pub use certify::{invariance_cross_check, verify_certificate, Certificate, Verdict};
pub use exactnum::{
    format_rational, gram_determinant, parse_rational, rat, ratio, to_f64, RMatrix, RVector,
    Rational,
};
pub use frames::{
    canonicalize_direction, face_of_frame, measurement_basis, tight_frames, Frame,
    MeasurementBasis,
};
pub use polytope::{disjoint_copies, simplex_chain, Body, Polytope, UnionBody};
pub use valuations::{
    equidecomposable, evaluate_valuation, hadwiger, homogeneous_components, invariant_table,
    klain_schneider_eval, surface_area_measure, CoefficientTable, Evaluation, HadwigerValue,
    HomogeneousDecomposition, InvariantTable,
};

/// Maximum supported ambient dimension. Frame enumeration is exponential in
/// the dimension, so the library hard-caps it rather than degrade silently.
pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("ambient dimension {0} unsupported (must be 1..={MAX_DIM})")]
    UnsupportedDimension(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty point set")]
    EmptyInput,
    #[error("zero vector where a direction is required")]
    ZeroVector,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("polytope has dimension {dim} but ambient dimension is {ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("dilation factor must be positive")]
    NonPositiveDilation,
    #[error("frame of length {got} invalid here (max {max})")]
    FrameTooLong { got: usize, max: usize },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("basis does not span the required direction space")]
    BasisMismatch,
    #[error("union pieces {0} and {1} overlap in their interiors")]
    OverlappingPieces(usize, usize),
    #[error("certificate has {pieces} pieces but {translations} translations")]
    CertificateShape { pieces: usize, translations: usize },
    #[error("cross-check requires an accepted certificate: {0}")]
    RejectedCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
}
