//! Assembly of full pipeline records over thermal-parameter grids.
//!
//! A [`SweepRecord`] gathers everything the pipeline knows about one
//! parameter point: both Dobrushin coefficients, the criterion test values,
//! the leading Jacobian eigenvalue together with the scalar-map derivative
//! it must square to, both entropy rates, and the regime label. The CLI and
//! the acceptance suite both consume this module, so the CSV schema lives
//! here next to the record.

use serde::Serialize;

use crate::criteria::{dobrushin_test, ks_test, tau_closed_forms, RegimeThresholds};
use crate::channels::second_eigenvalue_psi;
use crate::entropy::{entropy_rate_phi, entropy_rate_psi};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::numeric;
use crate::recursion::scalar_map_derivative_at_one;
use crate::stability::lambda_max_closed_form;

/// Column order of the sweep CSV schema.
pub const SWEEP_CSV_HEADER: &str =
    "s,k,phi,tau_p,tau_q,dobrushin,lambda2,ks,lambda_max,fprime1,h_psi,h_phi,regime";

/// Grid spacing for parameter sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    /// Equal steps in `phi`.
    Linear,
    /// Equal steps in `ln phi`.
    Log,
}

/// Everything the pipeline computes at a single `(s, k, phi)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    /// Spin magnitude.
    pub s: u32,
    /// Branching number.
    pub k: u32,
    /// Thermal parameter.
    pub phi: f64,
    /// Dobrushin coefficient of `P`.
    pub tau_p: f64,
    /// Dobrushin coefficient of `Q`.
    pub tau_q: f64,
    /// Dobrushin test value `k tau_p tau_q - 1`.
    pub dobrushin: f64,
    /// Second eigenvalue of the half-integer two-step chain.
    pub lambda2: f64,
    /// Kesten-Stigum test value `k lambda2^2 - 1`.
    pub ks: f64,
    /// Leading Jacobian eigenvalue at the symmetric law.
    pub lambda_max: f64,
    /// Scalar-map derivative `F'(1)`; equals `lambda_max^2` up to round-off.
    pub fprime1: f64,
    /// Entropy rate of the half-integer chain.
    pub h_psi: f64,
    /// Entropy rate of the integer chain.
    pub h_phi: f64,
    /// Regime label at this point.
    pub regime: String,
}

impl SweepRecord {
    /// Renders the record as one CSV row in [`SWEEP_CSV_HEADER`] order.
    ///
    /// Floats use the shortest representation that round-trips.
    #[must_use]
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.s,
            self.k,
            self.phi,
            self.tau_p,
            self.tau_q,
            self.dobrushin,
            self.lambda2,
            self.ks,
            self.lambda_max,
            self.fprime1,
            self.h_psi,
            self.h_phi,
            self.regime
        )
    }
}

/// Computes one sweep record against precomputed regime thresholds.
///
/// Pass the same [`RegimeThresholds`] for every point of a grid so the
/// expensive root-finding runs once per `(s, k)`.
///
/// # Errors
///
/// Propagates errors from the entropy pipeline.
pub fn sweep_record(params: &ModelParams, thresholds: &RegimeThresholds) -> Result<SweepRecord> {
    let (tau_p, tau_q) = tau_closed_forms(params);
    let lambda2 = second_eigenvalue_psi(params);
    Ok(SweepRecord {
        s: params.s(),
        k: params.k(),
        phi: params.phi(),
        tau_p,
        tau_q,
        dobrushin: dobrushin_test(params).value,
        lambda2,
        ks: ks_test(params).value,
        lambda_max: lambda_max_closed_form(params),
        fprime1: scalar_map_derivative_at_one(params),
        h_psi: entropy_rate_psi(params),
        h_phi: entropy_rate_phi(params)?,
        regime: thresholds.classify(params.phi()).to_string(),
    })
}

/// Convenience wrapper computing the thresholds itself.
///
/// # Errors
///
/// Same as [`sweep_record`] plus threshold root-finding errors.
pub fn sweep_record_standalone(params: &ModelParams) -> Result<SweepRecord> {
    let thresholds = crate::criteria::regime_thresholds(params.s(), params.k())?;
    sweep_record(params, &thresholds)
}

/// Builds an inclusive `phi` grid of `points` nodes.
///
/// # Errors
///
/// * [`Error::DomainError`] unless `0 < min < max` and `points >= 2`.
pub fn phi_grid(min: f64, max: f64, points: usize, scale: GridScale) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min <= 0.0 || max <= min {
        return Err(Error::DomainError(format!(
            "phi grid [{min}, {max}] must satisfy 0 < min < max"
        )));
    }
    if points < 2 {
        return Err(Error::DomainError(format!(
            "phi grid needs at least 2 points, got {points}"
        )));
    }
    Ok(match scale {
        GridScale::Linear => numeric::linear_spaced(min, max, points),
        GridScale::Log => numeric::log_spaced(min, max, points),
    })
}
