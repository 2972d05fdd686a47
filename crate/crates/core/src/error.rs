use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("zero argument: {0}")]
    ZeroArgument(String),
    #[error("unsupported field size {0}")]
    UnsupportedField(u64),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("rank deficient: {0}")]
    RankDeficient(String),
    #[error("incomplete plot: {0}")]
    IncompletePlot(String),
    #[error("boundary module: c is only defined for proper nonzero summands")]
    BoundaryModule,
    #[error("two distinct minimal summands at rank {0} on the canonical path")]
    ViolatedUniqueness(usize),
    #[error("scale error: {0}")]
    Scale(String),
    #[error("form is not positive definite")]
    NotPositiveDefinite,
    #[error("not projective: {0}")]
    NotProjective(String),
    #[error("singular matrix")]
    Singular,
    #[error("determinant condition violated: {0}")]
    Determinant(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPlace(_) => "invalid_place",
            Error::ZeroArgument(_) => "zero_argument",
            Error::UnsupportedField(_) => "unsupported_field",
            Error::UnsupportedRing(_) => "unsupported_ring",
            Error::Dimension(_) => "dimension",
            Error::RankDeficient(_) => "rank_deficient",
            Error::IncompletePlot(_) => "incomplete_plot",
            Error::BoundaryModule => "boundary_module",
            Error::ViolatedUniqueness(_) => "violated_uniqueness",
            Error::Scale(_) => "scale",
            Error::NotPositiveDefinite => "not_positive_definite",
            Error::NotProjective(_) => "not_projective",
            Error::Singular => "singular",
            Error::Determinant(_) => "determinant",
            Error::OutOfRange(_) => "out_of_range",
            Error::Parse(_) => "parse",
        }
    }

    /// Whether the error concerns malformed input rather than mathematics.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Parse(_) | Error::Dimension(_) | Error::OutOfRange(_) | Error::InvalidPlace(_) | Error::UnsupportedField(_)
        )
    }
}
