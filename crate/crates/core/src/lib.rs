//! Step-2 sub-Riemannian homogeneous spaces given by structure constants:
//! canonical connection, torsion and curvature, BG-form based lower bounds on
//! the first sub-Laplacian eigenvalue, and an exact su(2) spectral oracle.
//!
//! ```no_run
//! use subriem_core::{builtin, lambda1, optimize, Analysis, SweepOptions};
//!
//! let inst = builtin("so3_twisted").unwrap().instantiate(&[("c".into(), 0.1)]).unwrap();
//! let an = Analysis::new(inst.algebra.clone()).unwrap();
//! let report = optimize(&an, &SweepOptions::default());
//! let spec = lambda1(inst.oracle.as_ref().unwrap()).unwrap();
//! assert!(report.best().unwrap().bound <= spec.lambda1);
//! ```

pub mod algebra;
pub mod analysis;
pub mod bounds;
pub mod builtins;
pub mod connection;
pub mod curvature;
pub mod expr;
pub mod spectral;
pub mod specfile;
pub mod tensor;

pub use algebra::{AlgebraError, Diagnostic, SrcAlgebra, ZERO_TOL};
pub use analysis::{Analysis, GeometricConstants};
pub use bounds::{optimize, BoundReport, BoundsError, SweepOptions, Theorem};
pub use builtins::{builtin, Builtin, BUILTINS};
pub use connection::{canonical_connection, check_axioms, Connection, ConnectionError, TorsionPack};
pub use curvature::{CurvatureReport, Flags};
pub use spectral::{certify, lambda1, Certification, OracleConfig, SpectralError};
pub use specfile::{Instance, ParseError, SpecError, SpecFile};
pub use tensor::{Tensor3, Tensor4};

use thiserror::Error;

/// Any error produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Spec(#[from] SpecError),
}
