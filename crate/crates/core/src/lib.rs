//! Hilbert depth and Stanley depth of finitely generated ℤⁿ-graded modules, with
//! exact arithmetic over ℚ and prime fields.
//!
//! A module is given by a graded presentation and studied on a box `[0, g]` of
//! degrees beyond which it is determined. Hilbert decompositions are found by
//! partitioning the truncated Hilbert series into intervals; whether one is induced by
//! a Stanley decomposition is decided by the invertibility of a family of matrices
//! with generic entries (see [`stanley`]).

pub mod degree;
pub mod error;
pub mod field;
pub mod hilbert;
pub mod io;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod polytope;
pub mod stanley;

pub use degree::{DegreeBox, MultiDegree, VarSet};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use hilbert::{
    hdepth, Depth, HilbertDecomposition, HilbertPartition, Interval, Summand, TruncatedSeries,
};
pub use module::{GradedModule, Presentation, RelationTerm};
pub use stanley::{check, sdepth, CheckMode, CheckOptions, CheckReport, SdepthOptions, Verdict};
