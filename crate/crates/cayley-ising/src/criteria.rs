//! Extremality criteria and the regime taxonomy.
//!
//! Two one-sided certificates bracket the extremality of the symmetric
//! Gibbs measure:
//!
//! * Dobrushin contraction: if `k tau(P) tau(Q) < 1`, where `tau` is the
//!   Dobrushin ergodicity coefficient of a kernel, the measure is extremal.
//! * Kesten-Stigum: if `k lambda2^2 > 1`, where `lambda2` is the second
//!   eigenvalue of the half-integer two-step chain, the measure is not
//!   extremal.
//!
//! Both test values are negative at `phi = 1` and grow towards the window
//! edges, so each criterion has exactly one threshold on either side of 1,
//! reciprocal to each other. Together with the stability thresholds these
//! cut the ferromagnetic side into regimes `F1..F4` (and mirror images
//! `AF1..AF4`): symmetric law stable and certified extremal, unstable but
//! still certified, certificate gap, and certified non-extremal.

use crate::channels::{build_q, second_eigenvalue_psi, TransitionMatrix};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::stability;
use crate::tolerances::{THRESHOLD_BISECT_TOL, TOL_BOUNDARY};

/// The three threshold-generating criteria of the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Linear stability of the symmetric boundary law.
    Stability,
    /// Dobrushin contraction certificate for extremality.
    Dobrushin,
    /// Kesten-Stigum certificate for non-extremality.
    KestenStigum,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Criterion::Stability => "stability",
            Criterion::Dobrushin => "dobrushin",
            Criterion::KestenStigum => "ks",
        };
        f.write_str(label)
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stability" => Ok(Criterion::Stability),
            "dobrushin" => Ok(Criterion::Dobrushin),
            "ks" | "kesten-stigum" => Ok(Criterion::KestenStigum),
            other => Err(Error::DomainError(format!(
                "unknown criterion '{other}' (expected stability, dobrushin, or ks)"
            ))),
        }
    }
}

/// Outcome of evaluating a criterion at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// The criterion certifies extremality.
    CertifiedExtremal,
    /// The criterion certifies non-extremality.
    CertifiedNonExtremal,
    /// The criterion is silent at this point.
    Inconclusive,
    /// The test value sits inside the boundary band around zero.
    Boundary,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Verdict::CertifiedExtremal => "certified-extremal",
            Verdict::CertifiedNonExtremal => "certified-non-extremal",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Boundary => "boundary",
        };
        f.write_str(label)
    }
}

/// A criterion evaluation: the signed test value and its verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionResult {
    /// Which criterion was evaluated.
    pub criterion: Criterion,
    /// Signed test value; negative means the defining inequality holds.
    pub value: f64,
    /// Classification of `value` against the boundary band.
    pub verdict: Verdict,
}

/// One row of a threshold table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdRow {
    /// Spin magnitude.
    pub s: u32,
    /// Criterion the roots belong to.
    pub criterion: Criterion,
    /// Root below `phi = 1`.
    pub phi_low: f64,
    /// Root above `phi = 1`.
    pub phi_high: f64,
}

/// Threshold rows for a family of spin magnitudes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ThresholdTable {
    /// Rows ordered by ascending `s`, Dobrushin before Kesten-Stigum.
    pub rows: Vec<ThresholdRow>,
}

/// The eight phase labels plus the measure-zero boundary set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeLabel {
    /// Ferromagnetic, symmetric law stable, certified extremal.
    F1,
    /// Ferromagnetic, unstable, still certified extremal.
    F2,
    /// Ferromagnetic, between the certificates.
    F3,
    /// Ferromagnetic, certified non-extremal.
    F4,
    /// Antiferromagnetic mirrors of `F1..F4`.
    AF1,
    /// See [`RegimeLabel::AF1`].
    AF2,
    /// See [`RegimeLabel::AF1`].
    AF3,
    /// See [`RegimeLabel::AF1`].
    AF4,
    /// Within the boundary band of `phi = 1` or of any threshold.
    Boundary,
}

impl std::fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            RegimeLabel::F1 => "F1",
            RegimeLabel::F2 => "F2",
            RegimeLabel::F3 => "F3",
            RegimeLabel::F4 => "F4",
            RegimeLabel::AF1 => "AF1",
            RegimeLabel::AF2 => "AF2",
            RegimeLabel::AF3 => "AF3",
            RegimeLabel::AF4 => "AF4",
            RegimeLabel::Boundary => "Boundary",
        };
        f.write_str(label)
    }
}

/// The six thresholds that organise the phase diagram for one `(s, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    /// Stability roots `(phi_low, phi_high)`.
    pub stability: (f64, f64),
    /// Dobrushin roots.
    pub dobrushin: (f64, f64),
    /// Kesten-Stigum roots.
    pub kesten_stigum: (f64, f64),
}

impl RegimeThresholds {
    /// Labels a thermal parameter against the stored thresholds.
    #[must_use]
    pub fn classify(&self, phi: f64) -> RegimeLabel {
        let all = [
            self.stability.0,
            self.stability.1,
            self.dobrushin.0,
            self.dobrushin.1,
            self.kesten_stigum.0,
            self.kesten_stigum.1,
            1.0,
        ];
        if all.iter().any(|&t| (phi - t).abs() <= TOL_BOUNDARY) {
            return RegimeLabel::Boundary;
        }
        if phi > 1.0 {
            if phi < self.stability.1 {
                RegimeLabel::F1
            } else if phi < self.dobrushin.1 {
                RegimeLabel::F2
            } else if phi < self.kesten_stigum.1 {
                RegimeLabel::F3
            } else {
                RegimeLabel::F4
            }
        } else if phi > self.stability.0 {
            RegimeLabel::AF1
        } else if phi > self.dobrushin.0 {
            RegimeLabel::AF2
        } else if phi > self.kesten_stigum.0 {
            RegimeLabel::AF3
        } else {
            RegimeLabel::AF4
        }
    }
}

/// Dobrushin ergodicity coefficient of a kernel.
///
/// Half the largest total-variation distance between two rows:
///
/// ```text
/// tau(T) = (1/2) max_(r, r') sum_c |T(r, c) - T(r', c)|.
/// ```
#[must_use]
pub fn dobrushin_tau(t: &TransitionMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r1 in 0..t.rows() {
        for r2 in (r1 + 1)..t.rows() {
            let l1: f64 = t
                .row(r1)
                .iter()
                .zip(t.row(r2))
                .map(|(a, b)| (a - b).abs())
                .sum();
            worst = worst.max(l1);
        }
    }
    0.5 * worst
}

/// Closed-form coefficients `(tau_P, tau_Q)`.
///
/// The extreme rows of `P` are the outermost spins, giving
/// `tau_P = |phi^(2s) - 1| / (phi^(2s) + 1)` for every `k`. For `k = 3`
/// `tau_Q` closes as a polynomial ratio; other `k` fall back to the
/// definitional coefficient of the built kernel.
#[must_use]
pub fn tau_closed_forms(params: &ModelParams) -> (f64, f64) {
    let phi = params.phi();
    let s = params.s() as i32;
    let t = phi.powi(2 * s);
    let tau_p = (t - 1.0).abs() / (t + 1.0);
    let tau_q = if params.k() == 3 {
        let mut num = 0.0;
        let mut den = 1.0;
        for n in 1..=s {
            let q = phi.powi(2 * n) + 1.0;
            num += q * q * q * (phi.powi(2 * n) - 1.0).abs() / (8.0 * phi.powi(4 * n));
            den += q * q * q * q / (8.0 * phi.powi(4 * n));
        }
        num / den
    } else {
        dobrushin_tau(&build_q(params))
    };
    (tau_p, tau_q)
}

/// Classifies a signed test value against the boundary band.
fn verdict_for(criterion: Criterion, value: f64) -> Verdict {
    if value.abs() <= TOL_BOUNDARY {
        return Verdict::Boundary;
    }
    match criterion {
        Criterion::Dobrushin => {
            if value < 0.0 {
                Verdict::CertifiedExtremal
            } else {
                Verdict::Inconclusive
            }
        }
        Criterion::KestenStigum => {
            if value > 0.0 {
                Verdict::CertifiedNonExtremal
            } else {
                Verdict::Inconclusive
            }
        }
        Criterion::Stability => Verdict::Inconclusive,
    }
}

/// Evaluates the Dobrushin contraction test `k tau_P tau_Q - 1`.
#[must_use]
pub fn dobrushin_test(params: &ModelParams) -> CriterionResult {
    let (tau_p, tau_q) = tau_closed_forms(params);
    let value = f64::from(params.k()) * tau_p * tau_q - 1.0;
    CriterionResult {
        criterion: Criterion::Dobrushin,
        value,
        verdict: verdict_for(Criterion::Dobrushin, value),
    }
}

/// Evaluates the Kesten-Stigum test `k lambda2^2 - 1`.
#[must_use]
pub fn ks_test(params: &ModelParams) -> CriterionResult {
    let lambda2 = second_eigenvalue_psi(params);
    let value = f64::from(params.k()) * lambda2 * lambda2 - 1.0;
    CriterionResult {
        criterion: Criterion::KestenStigum,
        value,
        verdict: verdict_for(Criterion::KestenStigum, value),
    }
}

/// Threshold roots of one criterion, bisected to width `tol`.
///
/// # Errors
///
/// * Parameter validation errors from [`ModelParams::new`].
/// * [`Error::DomainError`] for a non-positive `tol`.
/// * [`Error::RootNotBracketed`] if a root is missing on either side of 1
///   (the message names the offending `s` and criterion).
pub fn criterion_thresholds_with_tol(
    s: u32,
    k: u32,
    criterion: Criterion,
    tol: f64,
) -> Result<(f64, f64)> {
    ModelParams::new(s, k, 1.0)?;
    match criterion {
        Criterion::Stability => stability::stability_thresholds_with_tol(s, k, tol),
        Criterion::Dobrushin => stability::find_threshold_pair(
            |phi| {
                let params = ModelParams::new(s, k, phi).expect("scan stays inside the window");
                dobrushin_test(&params).value
            },
            tol,
            &format!("dobrushin criterion for s = {s}, k = {k}"),
        ),
        Criterion::KestenStigum => stability::find_threshold_pair(
            |phi| {
                let params = ModelParams::new(s, k, phi).expect("scan stays inside the window");
                ks_test(&params).value
            },
            tol,
            &format!("ks criterion for s = {s}, k = {k}"),
        ),
    }
}

/// [`criterion_thresholds_with_tol`] at the standard width
/// [`THRESHOLD_BISECT_TOL`].
pub fn criterion_thresholds(s: u32, k: u32, criterion: Criterion) -> Result<(f64, f64)> {
    criterion_thresholds_with_tol(s, k, criterion, THRESHOLD_BISECT_TOL)
}

/// Dobrushin and Kesten-Stigum rows for each requested spin magnitude.
///
/// Rows are ordered by ascending `s` (duplicates collapsed), Dobrushin
/// before Kesten-Stigum within each `s`.
///
/// # Errors
///
/// Propagates any error from [`criterion_thresholds`].
pub fn threshold_tables(s_values: &[u32], k: u32) -> Result<ThresholdTable> {
    let mut sorted: Vec<u32> = s_values.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut rows = Vec::with_capacity(2 * sorted.len());
    for &s in &sorted {
        for criterion in [Criterion::Dobrushin, Criterion::KestenStigum] {
            let (phi_low, phi_high) = criterion_thresholds(s, k, criterion)?;
            rows.push(ThresholdRow {
                s,
                criterion,
                phi_low,
                phi_high,
            });
        }
    }
    Ok(ThresholdTable { rows })
}

/// Computes all six regime thresholds for one `(s, k)`.
///
/// # Errors
///
/// Propagates any error from [`criterion_thresholds_with_tol`].
pub fn regime_thresholds_with_tol(s: u32, k: u32, tol: f64) -> Result<RegimeThresholds> {
    Ok(RegimeThresholds {
        stability: criterion_thresholds_with_tol(s, k, Criterion::Stability, tol)?,
        dobrushin: criterion_thresholds_with_tol(s, k, Criterion::Dobrushin, tol)?,
        kesten_stigum: criterion_thresholds_with_tol(s, k, Criterion::KestenStigum, tol)?,
    })
}

/// [`regime_thresholds_with_tol`] at the standard width.
pub fn regime_thresholds(s: u32, k: u32) -> Result<RegimeThresholds> {
    regime_thresholds_with_tol(s, k, THRESHOLD_BISECT_TOL)
}

/// Labels one parameter point against the full threshold set.
///
/// # Errors
///
/// Parameter validation errors, plus anything surfaced while computing the
/// thresholds.
pub fn classify_regime(s: u32, k: u32, phi: f64) -> Result<RegimeLabel> {
    ModelParams::new(s, k, phi)?;
    Ok(regime_thresholds(s, k)?.classify(phi))
}
