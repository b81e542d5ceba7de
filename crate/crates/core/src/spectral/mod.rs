//! Representation-theoretic spectral oracle and bound certification.

mod certify;
mod oracle;
mod su2;

pub use certify::{certify, CertLine, Certification, CERT_TOL};
pub use oracle::{
    hlap_matrix, irrep_matrices, irrep_spectrum, lambda1, Factor, FactorKind, IrrepLabel, IrrepSpectrum,
    OracleConfig, Parity, SpectralError, SpectrumResult, SpinPolicy, TailBound, DEFAULT_CUTOFF,
};
pub use su2::{generators, spin_matrices, C64};
