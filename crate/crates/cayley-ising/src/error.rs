//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Error`]. The variants
//! partition into parameter validation (`SpinOutOfRange` through
//! `NonPositiveTemperature`), numeric failures detected mid-computation
//! (`NumericOverflow`, `NegativeSpectralProduct`, `SingularChain`,
//! `EigenFailure`), root-finding failures (`NoBracketFound`,
//! `RootNotBracketed`), and domain checks on caller-supplied data
//! (`DomainError`, `NotStationary`).

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Spin magnitude outside the supported window.
    #[error("spin magnitude s = {0} is outside the supported range 1..=10")]
    SpinOutOfRange(i64),

    /// Branching number (forward degree) below 2.
    #[error("branching number k = {0} is outside the supported range k >= 2")]
    BranchingOutOfRange(i64),

    /// Thermal parameter outside the guarded window.
    #[error("thermal parameter phi = {0} is outside the guarded range [0.01, 100]")]
    PhiOutOfRange(f64),

    /// Temperature must be strictly positive.
    #[error("temperature T = {0} must be strictly positive")]
    NonPositiveTemperature(f64),

    /// A computed quantity left the representable range or became non-finite.
    #[error("numeric overflow: {0}")]
    NumericOverflow(String),

    /// A sign scan found no bracket containing a root.
    #[error("no sign-change bracket found: {0}")]
    NoBracketFound(String),

    /// A threshold root expected on one side of phi = 1 is missing.
    #[error("root not bracketed: {0}")]
    RootNotBracketed(String),

    /// The spectral product h.g came out negative beyond tolerance.
    #[error("negative spectral product h.g = {0}")]
    NegativeSpectralProduct(f64),

    /// The stationary-distribution linear system is singular.
    #[error("singular chain: {0}")]
    SingularChain(String),

    /// The dense eigenvalue solver failed or produced non-real spectrum.
    #[error("eigenvalue computation failed: {0}")]
    EigenFailure(String),

    /// An argument violated a mathematical domain restriction.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A supplied distribution is not stationary for the supplied chain.
    #[error("distribution is not stationary: l1 residual = {0}")]
    NotStationary(f64),
}
