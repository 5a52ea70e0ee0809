//! Linear codes of points and subspaces of finite projective spaces, their
//! weight spectra, and the blocking sets that govern their small weights.

pub mod blocking;
pub mod budget;
pub mod codes;
pub mod error;
pub mod galois;
pub mod geometry;
pub mod io;
pub mod spectrum;

pub use blocking::{BlockingSetReport, PointSet, Spread};
pub use budget::Budget;
pub use codes::{Code, CodeParams, Codeword};
pub use error::{Error, Result};
pub use galois::{make_field, ExtensionField, FieldElement, PrimeField};
pub use geometry::{theta, Geometry, Subspace};
pub use spectrum::theorems::{Instance, TheoremReport, Verdict};
pub use spectrum::{GapReport, WeightDistribution, WeightInterval};
