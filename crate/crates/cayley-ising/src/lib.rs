//! Analytic pipeline for the mixed spin-(s, 1/2) Ising model on an order-k
//! Cayley tree.
//!
//! The model places an integer spin from `{-s, ..., s}` on each vertex of an
//! infinite Cayley tree and a half-integer spin from `{-1/2, +1/2}` on each
//! edge midpoint. Everything here is parameterised by the spin magnitude
//! `s`, the branching number `k`, and the thermal parameter `phi`, with
//! `phi > 1` ferromagnetic, `phi < 1` antiferromagnetic, and `phi = 1`
//! infinite temperature.
//!
//! The crate covers the full analytic pipeline:
//!
//! * [`model`]: validated parameters and boundary-law states.
//! * [`recursion`]: the boundary-law consistency recursion, its scalar
//!   reduction, and a fixed-point census.
//! * [`stability`]: the Jacobian at the symmetric law, its closed-form
//!   spectrum, and stability thresholds in `phi`.
//! * [`channels`]: the tree-indexed Markov kernels `P` and `Q`, the two-step
//!   chains, and their spectra.
//! * [`criteria`]: Dobrushin and Kesten-Stigum extremality tests, threshold
//!   tables, and the regime taxonomy.
//! * [`entropy`]: entropy rates of the two-step chains and averaged
//!   inhomogeneous entropies.
//! * [`sweep`]: one-stop records combining all of the above over `phi`
//!   grids.
//!
//! # Example
//!
//! ```
//! use cayley_ising::criteria::{dobrushin_test, Verdict};
//! use cayley_ising::model::ModelParams;
//! use cayley_ising::recursion::scalar_map;
//!
//! let params = ModelParams::new(1, 3, 2.0)?;
//! // The free symmetric boundary law is always consistent.
//! assert!((scalar_map(&params, 1.0)? - 1.0).abs() <= 1e-12);
//! // At phi = 2 the spin-(1, 1/2) chain satisfies the Dobrushin condition.
//! assert_eq!(dobrushin_test(&params).verdict, Verdict::CertifiedExtremal);
//! # Ok::<(), cayley_ising::error::Error>(())
//! ```

#![deny(missing_docs)]

pub mod channels;
pub mod criteria;
pub mod entropy;
pub mod error;
pub mod model;
mod numeric;
pub mod recursion;
pub mod stability;
pub mod sweep;
pub mod tolerances;

pub use error::{Error, Result};
pub use model::{FieldState, ModelParams};
