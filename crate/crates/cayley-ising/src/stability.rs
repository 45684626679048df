//! Linear stability of the symmetric boundary law.
//!
//! The consistency recursion updates the activities from `Z` and `Z` from
//! the activities, so its Jacobian at the symmetric law `l_0` has arrow
//! shape: a zero `(2s) x (2s)` block, a column `g` of activity sensitivities
//! `g_i = dX_i'/dZ`, a row `h` of `Z` sensitivities `h_j = dZ'/dX_j`, and a
//! zero corner. At `l_0` the entries close in `phi` (`m = |i| >= 1`):
//!
//! ```text
//! g_(+/-m) = +/- k (phi^(2m) + 1)^(k-1) (phi^(2m) - 1) / (2^(k+1) phi^(km)),
//! h_j      = k (phi^j - phi^(-j)) / S,
//! S        = sum_i X_i^0 phi^(-i) = 1 + 2 sum_m ((phi^(2m) + 1) / (2 phi^m))^(k+1).
//! ```
//!
//! Squaring the arrow matrix block-diagonalises it, so the spectrum is
//! `{0 (2s - 1 times), +sqrt(h.g), -sqrt(h.g)}` and the whole stability
//! question reduces to the scalar product `h . g`. The symmetric law turns
//! unstable exactly where `h . g` crosses 1; [`stability_thresholds`] locates
//! the two crossings around `phi = 1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::{FieldState, ModelParams, SpectralSummary, PHI_MAX, PHI_MIN};
use crate::numeric;
use crate::recursion::evaluate_recursion;
use crate::tolerances::{SPECTRAL_PRODUCT_TOL, THRESHOLD_BISECT_TOL, THRESHOLD_SCAN_POINTS};

/// Jacobian of the recursion at the symmetric law, stored by its arrow data.
///
/// `g` and `h` list the levels `i = -s, ..., -1, 1, ..., s` in that order
/// (the normalised level `i = 0` carries no degree of freedom).
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianAtL0 {
    /// Activity sensitivities `dX_i'/dZ`.
    pub g: Vec<f64>,
    /// `Z` sensitivities `dZ'/dX_j`.
    pub h: Vec<f64>,
}

impl JacobianAtL0 {
    /// The spectral product `h . g`, non-negative up to round-off.
    #[must_use]
    pub fn spectral_product(&self) -> f64 {
        self.h.iter().zip(&self.g).map(|(h, g)| h * g).sum()
    }

    /// Assembles the full `(2s + 1) x (2s + 1)` matrix.
    ///
    /// Coordinates are ordered `X_{-s}, ..., X_{-1}, X_1, ..., X_s, Z`; the
    /// upper-left `(2s) x (2s)` block and the lower-right corner are zero.
    #[must_use]
    pub fn dense(&self) -> DMatrix<f64> {
        let free = self.g.len();
        let n = free + 1;
        DMatrix::from_fn(n, n, |r, c| {
            if r < free && c == free {
                self.g[r]
            } else if r == free && c < free {
                self.h[c]
            } else {
                0.0
            }
        })
    }
}

/// Spectral product `h . g` straight from the closed forms.
fn spectral_product_raw(s: u32, k: u32, phi: f64) -> f64 {
    let k_i = k as i32;
    let kf = f64::from(k);
    let mut norm = 1.0;
    for m in 1..=s as i32 {
        let c = (phi.powi(2 * m) + 1.0) / (2.0 * phi.powi(m));
        norm += 2.0 * c.powi(k_i + 1);
    }
    let mut product = 0.0;
    for m in 1..=s as i32 {
        let gm = kf * (phi.powi(2 * m) + 1.0).powi(k_i - 1) * (phi.powi(2 * m) - 1.0)
            / (2f64.powi(k_i + 1) * phi.powi(k_i * m));
        let hm = kf * (phi.powi(m) - phi.powi(-m)) / norm;
        product += 2.0 * hm * gm;
    }
    product
}

/// Evaluates the closed-form Jacobian entries at the symmetric law.
#[must_use]
pub fn jacobian_at_symmetric_point(params: &ModelParams) -> JacobianAtL0 {
    let s = params.s() as i32;
    let k = params.k() as i32;
    let kf = f64::from(params.k());
    let phi = params.phi();
    let mut norm = 1.0;
    for m in 1..=s {
        let c = (phi.powi(2 * m) + 1.0) / (2.0 * phi.powi(m));
        norm += 2.0 * c.powi(k + 1);
    }
    let mut g = Vec::with_capacity(2 * s as usize);
    let mut h = Vec::with_capacity(2 * s as usize);
    for i in (-s..=s).filter(|&i| i != 0) {
        let m = i.abs();
        let magnitude = kf * (phi.powi(2 * m) + 1.0).powi(k - 1) * (phi.powi(2 * m) - 1.0)
            / (2f64.powi(k + 1) * phi.powi(k * m));
        g.push(if i < 0 { -magnitude } else { magnitude });
        h.push(kf * (phi.powi(i) - phi.powi(-i)) / norm);
    }
    JacobianAtL0 { g, h }
}

/// Spectrum of the arrow Jacobian: `2s - 1` zeros and `+/- sqrt(h . g)`.
///
/// # Errors
///
/// * [`Error::NegativeSpectralProduct`] if `h . g` is negative beyond
///   round-off, which no valid parameter point produces.
pub fn jacobian_spectrum(jacobian: &JacobianAtL0) -> Result<SpectralSummary> {
    let product = jacobian.spectral_product();
    if product < -SPECTRAL_PRODUCT_TOL {
        return Err(Error::NegativeSpectralProduct(product));
    }
    let lambda = product.max(0.0).sqrt();
    let mut eigenvalues = vec![lambda, -lambda];
    eigenvalues.extend(std::iter::repeat_n(0.0, jacobian.g.len().saturating_sub(1)));
    Ok(SpectralSummary::from_eigenvalues(eigenvalues))
}

/// Leading Jacobian eigenvalue `sqrt(h . g)` from the closed forms.
///
/// Independent of the scalar-map route: agreement with
/// `scalar_map_derivative_at_one` (as `lambda_max^2 = F'(1)`) is one of the
/// pipeline's cross-checks, not a tautology.
#[must_use]
pub fn lambda_max_closed_form(params: &ModelParams) -> f64 {
    spectral_product_raw(params.s(), params.k(), params.phi())
        .max(0.0)
        .sqrt()
}

/// Locates the two `phi` values where the symmetric law changes stability.
///
/// Scans `lambda_max^2 - 1` over [`THRESHOLD_SCAN_POINTS`] geometric nodes
/// spanning the guarded window and bisects each bracket to width `tol`.
/// Returns `(phi_low, phi_high)` with `phi_low < 1 < phi_high`; the product
/// of the two is 1 by the `phi <-> 1/phi` symmetry.
///
/// # Errors
///
/// * [`Error::SpinOutOfRange`] / [`Error::BranchingOutOfRange`] for invalid
///   `(s, k)`.
/// * [`Error::DomainError`] for a non-positive `tol`.
/// * [`Error::RootNotBracketed`] if either side of `phi = 1` lacks a root.
pub fn stability_thresholds_with_tol(s: u32, k: u32, tol: f64) -> Result<(f64, f64)> {
    ModelParams::new(s, k, 1.0)?;
    find_threshold_pair(
        |phi| spectral_product_raw(s, k, phi) - 1.0,
        tol,
        &format!("stability criterion for s = {s}, k = {k}"),
    )
}

/// [`stability_thresholds_with_tol`] at the standard width
/// [`THRESHOLD_BISECT_TOL`].
pub fn stability_thresholds(s: u32, k: u32) -> Result<(f64, f64)> {
    stability_thresholds_with_tol(s, k, THRESHOLD_BISECT_TOL)
}

/// Shared scan-and-bisect driver for every threshold criterion.
///
/// `f` must be negative at `phi = 1` and positive towards both window edges;
/// the routine returns the outermost bracketing roots `(below, above)`.
pub(crate) fn find_threshold_pair(
    f: impl Fn(f64) -> f64,
    tol: f64,
    what: &str,
) -> Result<(f64, f64)> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::DomainError(format!(
            "bisection tolerance {tol} must be finite and positive"
        )));
    }
    let grid = numeric::log_spaced(PHI_MIN, PHI_MAX, THRESHOLD_SCAN_POINTS);
    let scan = numeric::scan_sign_changes(&f, &grid);
    let mut roots = scan.roots_on_grid;
    for (a, b) in scan.brackets {
        roots.push(numeric::bisect(&f, a, b, numeric::stop_absolute(tol)));
    }
    let below = roots
        .iter()
        .copied()
        .filter(|&r| r < 1.0)
        .fold(f64::NAN, f64::max);
    let above = roots
        .iter()
        .copied()
        .filter(|&r| r > 1.0)
        .fold(f64::NAN, f64::min);
    if below.is_nan() {
        return Err(Error::RootNotBracketed(format!(
            "{what}: no root below phi = 1"
        )));
    }
    if above.is_nan() {
        return Err(Error::RootNotBracketed(format!(
            "{what}: no root above phi = 1"
        )));
    }
    Ok((below, above))
}

/// Central-difference Jacobian of the recursion at an arbitrary state.
///
/// Rows and columns use the same coordinate order as
/// [`JacobianAtL0::dense`]. Every coordinate is displaced by the absolute
/// `step` in both directions.
///
/// # Errors
///
/// * [`Error::DomainError`] for a non-positive `step` or a state/parameter
///   mismatch, and any error surfaced by the perturbed recursion evaluations.
pub fn numeric_jacobian(
    params: &ModelParams,
    state: &FieldState,
    step: f64,
) -> Result<DMatrix<f64>> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::DomainError(format!(
            "finite-difference step {step} must be finite and positive"
        )));
    }
    let free = 2 * params.s() as usize;
    let n = free + 1;
    let base_x = state.free_activities();
    let base_z = state.z();

    let eval = |x: &[f64], z: f64| -> Result<Vec<f64>> {
        let perturbed = FieldState::new(params.s(), x, z)?;
        let image = evaluate_recursion(params, &perturbed)?;
        let mut out = image.free_activities();
        out.push(image.z());
        Ok(out)
    };

    let mut jac = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut x_plus = base_x.clone();
        let mut x_minus = base_x.clone();
        let mut z_plus = base_z;
        let mut z_minus = base_z;
        if col < free {
            x_plus[col] += step;
            x_minus[col] -= step;
        } else {
            z_plus += step;
            z_minus -= step;
        }
        let f_plus = eval(&x_plus, z_plus)?;
        let f_minus = eval(&x_minus, z_minus)?;
        for row in 0..n {
            jac[(row, col)] = (f_plus[row] - f_minus[row]) / (2.0 * step);
        }
    }
    Ok(jac)
}
