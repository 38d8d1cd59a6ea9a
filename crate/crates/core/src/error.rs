use thiserror::Error;

/// Errors raised by the relation and boundary-triple machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(&'static str),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("basis columns are not orthonormal (residual {0:e})")]
    NotOrthonormal(f64),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("fundamental symmetry does not square to the identity (residual {0:e})")]
    NotInvolution(f64),
    #[error("form matrix is singular")]
    SingularForm,
    #[error("{0} is singular")]
    Singular(&'static str),
    #[error("relation is not square")]
    NotSquare,
    #[error("relation is not symmetric")]
    NotSymmetric,
    #[error("relation is not an everywhere defined operator")]
    NotOperator,
    #[error("not a dual pair: A is not contained in the adjoint of B")]
    NotDualPair,
    #[error("not an isometric boundary pair: {0}")]
    NotIsometric(&'static str),
    #[error("not a boundary triple: {0}")]
    NotBoundaryTriple(&'static str),
    #[error("not a D-boundary triple: Gamma^A differs from E Gamma^B (angle {0:e})")]
    NotDTriple(f64),
    #[error("operator is not a contraction (norm {0})")]
    NotContraction(f64),
    #[error("subspace N does not contain the range of T* - T")]
    DefectSpaceTooSmall,
    #[error("lambda lies in the point spectrum of A_0")]
    PointSpectrum,
    #[error("lambda lies outside the resolvent set of A_0")]
    NotResolvent,
    #[error("points lambda and conj(mu) coincide")]
    ConjugatePoints,
    #[error("theta is not a subspace of the boundary space")]
    ThetaOutsideBoundary,
    #[error("extension is not between ker Gamma^B and B^c")]
    ExtensionOutsideBracket,
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid too small: defect vectors span {found} of {expected} dimensions")]
    RankDeficientSpan { expected: usize, found: usize },
    #[error("Gram data of the two triples differ (residual {0:e})")]
    GramMismatch(f64),
    #[error("intertwiner is not a standard unitary (residual {0:e})")]
    NotStandardUnitary(f64),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("unknown generator kind {0:?}")]
    UnknownKind(String),
    #[error("dimension {0} out of range 1..=16")]
    DimOutOfRange(usize),
    #[error("operator is multivalued")]
    Multivalued,
}

pub type Result<T> = std::result::Result<T, Error>;
