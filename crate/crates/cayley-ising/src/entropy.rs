//! Entropy rates of the two-step sublattice chains.
//!
//! All entropies are in nats. For a stationary chain with transition matrix
//! `R` and stationary law `pi` the entropy rate is
//!
//! ```text
//! h = - sum_i pi_i sum_j R(i, j) ln R(i, j),
//! ```
//!
//! with the usual convention `0 ln 0 = 0`. The half-integer chain
//! `[[p, 1-p], [1-p, p]]` has uniform stationary law, so its rate collapses
//! to the binary entropy `H2(p)`; the integer chain goes through the general
//! pipeline. Both peak at `phi = 1` (`ln 2` and `ln(2s + 1)`) and decay to 0
//! as the coupling dominates.

use crate::channels::{stationary_distribution, two_step_psi, TransitionMatrix};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::tolerances::STATIONARY_RESIDUAL_TOL;

/// Entropy rates of one parameter point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyRecord {
    /// Spin magnitude.
    pub s: u32,
    /// Branching number.
    pub k: u32,
    /// Thermal parameter.
    pub phi: f64,
    /// Rate of the half-integer two-step chain, at most `ln 2`.
    pub h_psi: f64,
    /// Rate of the integer two-step chain, at most `ln(2s + 1)`.
    pub h_phi: f64,
}

/// Binary entropy `H2(x) = -x ln x - (1 - x) ln(1 - x)` in nats.
///
/// # Errors
///
/// * [`Error::DomainError`] unless `0 <= x <= 1`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !x.is_finite() || !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!(
            "binary entropy argument {x} must lie in [0, 1]"
        )));
    }
    Ok(entropy_term(x) + entropy_term(1.0 - x))
}

/// One `-p ln p` term with the `0 ln 0 = 0` convention.
fn entropy_term(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Shannon entropy of one chain row.
fn row_entropy(row: &[f64]) -> f64 {
    row.iter().map(|&p| entropy_term(p)).sum()
}

/// Entropy rate of an arbitrary stationary chain.
///
/// # Errors
///
/// * [`Error::DomainError`] if `t` is not square, `pi` has the wrong length,
///   or `pi` is not a probability vector.
/// * [`Error::NotStationary`] if the l1 residual `||pi T - pi||` exceeds
///   [`STATIONARY_RESIDUAL_TOL`].
pub fn entropy_rate_general(t: &TransitionMatrix, pi: &[f64]) -> Result<f64> {
    if t.rows() != t.cols() {
        return Err(Error::DomainError(format!(
            "entropy rate needs a square chain, got {} x {}",
            t.rows(),
            t.cols()
        )));
    }
    if pi.len() != t.rows() {
        return Err(Error::DomainError(format!(
            "stationary law has {} entries for a {}-state chain",
            pi.len(),
            t.rows()
        )));
    }
    if pi.iter().any(|&v| !v.is_finite() || v < 0.0) || (pi.iter().sum::<f64>() - 1.0).abs() > 1e-8
    {
        return Err(Error::DomainError(
            "stationary law must be a probability vector".into(),
        ));
    }
    let n = t.rows();
    let mut residual = 0.0;
    for c in 0..n {
        let image: f64 = (0..n).map(|r| pi[r] * t.get(r, c)).sum();
        residual += (image - pi[c]).abs();
    }
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::NotStationary(residual));
    }
    Ok((0..n).map(|r| pi[r] * row_entropy(t.row(r))).sum())
}

/// Entropy rate of the half-integer two-step chain, `H2(p)`.
///
/// The chain is doubly stochastic, so its stationary law is uniform and the
/// rate is the binary entropy of the diagonal.
#[must_use]
pub fn entropy_rate_psi(params: &ModelParams) -> f64 {
    let p = two_step_psi(params).get(0, 0);
    binary_entropy(p).expect("a transition probability lies in [0, 1]")
}

/// Entropy rate of the integer two-step chain through the general pipeline.
///
/// # Errors
///
/// Propagates [`Error::SingularChain`] from the stationary solve and the
/// checks of [`entropy_rate_general`].
pub fn entropy_rate_phi(params: &ModelParams) -> Result<f64> {
    let chain = crate::channels::two_step_phi(params);
    let pi = stationary_distribution(&chain)?;
    entropy_rate_general(&chain, &pi)
}

/// Both entropy rates bundled with the parameter point.
///
/// # Errors
///
/// Same as [`entropy_rate_phi`].
pub fn entropy_record(params: &ModelParams) -> Result<EntropyRecord> {
    Ok(EntropyRecord {
        s: params.s(),
        k: params.k(),
        phi: params.phi(),
        h_psi: entropy_rate_psi(params),
        h_phi: entropy_rate_phi(params)?,
    })
}

/// Time-averaged conditional entropy of an inhomogeneous half-integer chain.
///
/// Starting from the uniform law `p_0 = (1/2, 1/2)`, each scheduled `phi_t`
/// contributes the conditional entropy `sum_i p_t(i) H(R_t(i, .))` of its
/// two-step kernel before the law is advanced by `p_(t+1) = p_t R_t`; the
/// mean over the schedule is returned. A constant schedule reproduces
/// [`entropy_rate_psi`] exactly.
///
/// # Errors
///
/// * [`Error::DomainError`] for an empty schedule.
/// * Parameter validation errors for any scheduled `phi`.
pub fn averaged_inhomogeneous_entropy(s: u32, k: u32, schedule: &[f64]) -> Result<f64> {
    if schedule.is_empty() {
        return Err(Error::DomainError(
            "inhomogeneous schedule must contain at least one phi".into(),
        ));
    }
    let mut law = [0.5, 0.5];
    let mut total = 0.0;
    for &phi in schedule {
        let params = ModelParams::new(s, k, phi)?;
        let chain = two_step_psi(&params);
        total += law[0] * row_entropy(chain.row(0)) + law[1] * row_entropy(chain.row(1));
        law = [
            law[0] * chain.get(0, 0) + law[1] * chain.get(1, 0),
            law[0] * chain.get(0, 1) + law[1] * chain.get(1, 1),
        ];
    }
    Ok(total / schedule.len() as f64)
}
