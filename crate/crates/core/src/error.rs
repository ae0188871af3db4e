use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report. `code()` is the stable identifier
/// surfaced by the command line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("ambient dimension {0} exceeds the supported maximum of 6")]
    DimensionOverflow(usize),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron contains a line; only pointed polyhedra are supported")]
    Lineality,
    #[error("polytope has zero volume")]
    ZeroVolume,
    #[error("polytope is not full-dimensional (lineality of the normal fan has dimension {})", .lineality.len())]
    LowerDimensional { lineality: Vec<Vec<num_bigint::BigInt>> },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("denominator vanishes at the algebraic number")]
    DenominatorVanishes,
    #[error("point lies outside the admissible domain: {0}")]
    OutsideDomain(String),
    #[error("domain is empty")]
    EmptyDomain,
    #[error("operation needs a one-dimensional coefficient space, got k = {0}")]
    NotOneDimensional(usize),
    #[error("class {0} is not nef")]
    NotNef(usize),
    #[error("ray {0} is not a primitive lattice vector")]
    NonPrimitiveRay(usize),
    #[error("fan is not complete: {0}")]
    IncompleteFan(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("coefficient polytope is empty")]
    EmptyCoeffPolytope,
    #[error("schema error at line {line}, field `{field}`: {message}")]
    Schema {
        line: usize,
        field: String,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyPolyhedron => "E_EMPTY_POLYHEDRON",
            Error::DimensionOverflow(_) => "E_DIMENSION_OVERFLOW",
            Error::Unbounded => "E_UNBOUNDED",
            Error::Lineality => "E_LINEALITY",
            Error::ZeroVolume => "E_ZERO_VOLUME",
            Error::LowerDimensional { .. } => "E_LOWER_DIMENSIONAL",
            Error::DimensionMismatch { .. } => "E_DIMENSION_MISMATCH",
            Error::DenominatorVanishes => "E_DENOMINATOR_VANISHES",
            Error::OutsideDomain(_) => "E_OUTSIDE_DOMAIN",
            Error::EmptyDomain => "E_EMPTY_DOMAIN",
            Error::NotOneDimensional(_) => "E_NOT_ONE_DIMENSIONAL",
            Error::NotNef(_) => "E_NOT_NEF",
            Error::NonPrimitiveRay(_) => "E_NON_PRIMITIVE_RAY",
            Error::IncompleteFan(_) => "E_INCOMPLETE_FAN",
            Error::InvalidFan(_) => "E_INVALID_FAN",
            Error::EmptyCoeffPolytope => "E_EMPTY_COEFF_POLYTOPE",
            Error::Schema { .. } => "E_SCHEMA",
            Error::InvalidInput(_) => "E_INVALID_INPUT",
        }
    }
}
