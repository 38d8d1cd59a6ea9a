//! Finite-dimensional linear relations in Krein spaces, boundary triples for
//! dual pairs, Weyl families and their transforms.

pub mod boundary;
pub mod coupling;
pub mod equivalence;
pub mod error;
pub mod generate;
pub mod krein;
pub mod linalg;
pub mod relation;
pub mod scalar;
pub mod transforms;
pub mod weyl;

pub use boundary::{BoundaryPair, DualPair, Flavor};
pub use error::{Error, Result};
pub use krein::{GraphSpace, HatSpace, KreinSpace};
pub use linalg::{CMatrix, CVector, Comparison, Subspace, Tol};
pub use relation::{LinearRelation, SpectralClass, SpectralPoint};
pub use scalar::Scalar;

pub type Subspace64 = Subspace<f64>;
pub type Relation64 = LinearRelation<f64>;
pub type Krein64 = KreinSpace<f64>;
pub type Tol64 = Tol<f64>;
pub type CMatrix64 = CMatrix<f64>;
