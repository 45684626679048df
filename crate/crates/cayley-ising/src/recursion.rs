//! Consistency recursion for translation-invariant boundary laws.
//!
//! A boundary law `(X, Z)` is consistent precisely when it satisfies, for
//! `m = |i| >= 1`,
//!
//! ```text
//! X_{-m} = ((phi^(2m) + Z) / (phi^m (1 + Z)))^k,
//! X_{+m} = ((1 + phi^(2m) Z) / (phi^m (1 + Z)))^k,
//! Z      = (sum_i phi^(s+i) X_i / sum_i phi^(s-i) X_i)^k,
//! ```
//!
//! with `X_0 = 1`. The first two lines determine every `X_i` from `Z`, so
//! substituting them into the third collapses the whole system to a single
//! scalar equation `Z = F(Z)`; [`scalar_map`] evaluates that composition and
//! [`find_scalar_fixed_points`] enumerates its roots. Each scalar root lifts
//! back to a full boundary law via [`lift_scalar_fixed_point`].
//!
//! [`evaluate_recursion`] applies one parallel update (new `X` from the old
//! `Z`, new `Z` from the old `X`); its fixed points are exactly the
//! consistent laws and its linearisation at the symmetric law is the
//! Jacobian studied in the stability module.

use crate::error::{Error, Result};
use crate::model::{FieldState, ModelParams};
use crate::numeric;
use crate::tolerances::{
    FD_CLASSIFY_STEP_REL, FIXED_POINT_MERGE_REL, FIXED_POINT_REL_TOL, TOL_NEUTRAL,
};

/// Default lower edge of the scalar fixed-point scan window.
pub const DEFAULT_Z_MIN: f64 = 1e-4;

/// Default upper edge of the scalar fixed-point scan window.
pub const DEFAULT_Z_MAX: f64 = 1e4;

/// Local stability of a scalar fixed point under iteration of `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    /// `|F'(z*)| < 1` beyond the neutral band.
    Attracting,
    /// `|F'(z*)| > 1` beyond the neutral band.
    Repelling,
    /// `|F'(z*)|` within [`TOL_NEUTRAL`] of 1.
    Neutral,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let label = match self {
            Stability::Attracting => "attracting",
            Stability::Repelling => "repelling",
            Stability::Neutral => "neutral",
        };
        f.write_str(label)
    }
}

/// A root of `F(z) = z` together with its finite-difference multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarFixedPoint {
    /// Location of the fixed point.
    pub z_star: f64,
    /// `|F'(z*)|` estimated by a central difference.
    pub derivative_abs: f64,
    /// Classification of `derivative_abs` against 1.
    pub stability: Stability,
}

/// Activity `X_i` as a function of `z`, for `i != 0`.
fn layer_activity(phi: f64, k: i32, i: i32, z: f64) -> f64 {
    debug_assert!(i != 0);
    let m = i.abs();
    let base = if i < 0 {
        (phi.powi(2 * m) + z) / (phi.powi(m) * (1.0 + z))
    } else {
        (1.0 + phi.powi(2 * m) * z) / (phi.powi(m) * (1.0 + z))
    };
    base.powi(k)
}

/// Derivative of [`layer_activity`] with respect to `z`.
fn layer_activity_derivative(phi: f64, k: i32, i: i32, z: f64) -> f64 {
    debug_assert!(i != 0);
    let m = i.abs();
    let one_plus_z_sq = (1.0 + z) * (1.0 + z);
    let (base, base_dot) = if i < 0 {
        (
            (phi.powi(2 * m) + z) / (phi.powi(m) * (1.0 + z)),
            (1.0 - phi.powi(2 * m)) / (phi.powi(m) * one_plus_z_sq),
        )
    } else {
        (
            (1.0 + phi.powi(2 * m) * z) / (phi.powi(m) * (1.0 + z)),
            (phi.powi(2 * m) - 1.0) / (phi.powi(m) * one_plus_z_sq),
        )
    };
    f64::from(k) * base.powi(k - 1) * base_dot
}

/// The `Z`-update: `(sum_i phi^(s+i) X_i / sum_i phi^(s-i) X_i)^k`.
fn z_update(params: &ModelParams, x: impl Fn(i32) -> f64) -> f64 {
    let s = params.s() as i32;
    let k = params.k() as i32;
    let phi = params.phi();
    let mut num = 0.0;
    let mut den = 0.0;
    for i in -s..=s {
        let xi = x(i);
        num += phi.powi(s + i) * xi;
        den += phi.powi(s - i) * xi;
    }
    (num / den).powi(k)
}

/// Applies one parallel step of the consistency recursion.
///
/// The new activities come from the old `Z` and the new `Z` from the old
/// activities, so the map's Jacobian has the arrow structure exploited by
/// the stability module.
///
/// # Errors
///
/// * [`Error::DomainError`] if `state.s() != params.s()`.
/// * [`Error::NumericOverflow`] if any updated component is not finite.
pub fn evaluate_recursion(params: &ModelParams, state: &FieldState) -> Result<FieldState> {
    if state.s() != params.s() {
        return Err(Error::DomainError(format!(
            "state has s = {}, parameters have s = {}",
            state.s(),
            params.s()
        )));
    }
    let s = params.s() as i32;
    let k = params.k() as i32;
    let phi = params.phi();
    let z_new = z_update(params, |i| state.x(i));
    if !z_new.is_finite() {
        return Err(Error::NumericOverflow(format!(
            "z-update diverged at phi = {phi}, k = {k}"
        )));
    }
    let mut x_new = Vec::with_capacity(2 * s as usize);
    for i in (-s..=s).filter(|&i| i != 0) {
        let v = layer_activity(phi, k, i, state.z());
        if !v.is_finite() {
            return Err(Error::NumericOverflow(format!(
                "activity update X_{i} diverged at phi = {phi}, k = {k}"
            )));
        }
        x_new.push(v);
    }
    FieldState::new(params.s(), &x_new, z_new)
}

/// Evaluates the composed scalar map `F(z)`.
///
/// `F` substitutes the activity equations into the `Z`-equation, so
/// consistent boundary laws correspond exactly to roots of `F(z) = z`.
///
/// # Errors
///
/// * [`Error::DomainError`] if `z` is not finite and strictly positive.
/// * [`Error::NumericOverflow`] if the composition leaves `f64` range.
pub fn scalar_map(params: &ModelParams, z: f64) -> Result<f64> {
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::DomainError(format!(
            "scalar map argument z = {z} must be finite and positive"
        )));
    }
    let k = params.k() as i32;
    let phi = params.phi();
    let value = z_update(params, |i| {
        if i == 0 {
            1.0
        } else {
            layer_activity(phi, k, i, z)
        }
    });
    if !value.is_finite() {
        return Err(Error::NumericOverflow(format!(
            "scalar map diverged at phi = {phi}, z = {z}"
        )));
    }
    Ok(value)
}

/// Analytic derivative `F'(1)` of the composed scalar map at `z = 1`.
///
/// Differentiates the implemented composition directly: with
/// `N(z) = sum_i phi^(s+i) X_i(z)` and `D(z) = sum_i phi^(s-i) X_i(z)`,
///
/// ```text
/// F'(1) = k (N/D)^(k-1) (N' D - N D') / D^2   evaluated at z = 1.
/// ```
///
/// This route is independent of the Jacobian-based closed form in the
/// stability module, which is what makes cross-checking the two meaningful.
#[must_use]
pub fn scalar_map_derivative_at_one(params: &ModelParams) -> f64 {
    let s = params.s() as i32;
    let k = params.k() as i32;
    let phi = params.phi();
    let mut num = 0.0;
    let mut den = 0.0;
    let mut num_dot = 0.0;
    let mut den_dot = 0.0;
    for i in -s..=s {
        let (xi, xi_dot) = if i == 0 {
            (1.0, 0.0)
        } else {
            (
                layer_activity(phi, k, i, 1.0),
                layer_activity_derivative(phi, k, i, 1.0),
            )
        };
        num += phi.powi(s + i) * xi;
        den += phi.powi(s - i) * xi;
        num_dot += phi.powi(s + i) * xi_dot;
        den_dot += phi.powi(s - i) * xi_dot;
    }
    f64::from(k) * (num / den).powi(k - 1) * (num_dot * den - num * den_dot) / (den * den)
}

/// Reconstructs the full boundary law over a scalar root `z*`.
///
/// # Errors
///
/// * [`Error::DomainError`] if `z_star` is not finite and strictly positive.
/// * [`Error::NumericOverflow`] if an activity leaves `f64` range.
pub fn lift_scalar_fixed_point(params: &ModelParams, z_star: f64) -> Result<FieldState> {
    if !z_star.is_finite() || z_star <= 0.0 {
        return Err(Error::DomainError(format!(
            "fixed point z = {z_star} must be finite and positive"
        )));
    }
    let s = params.s() as i32;
    let k = params.k() as i32;
    let phi = params.phi();
    let mut x = Vec::with_capacity(2 * s as usize);
    for i in (-s..=s).filter(|&i| i != 0) {
        let v = layer_activity(phi, k, i, z_star);
        if !v.is_finite() {
            return Err(Error::NumericOverflow(format!(
                "activity X_{i} diverged while lifting z = {z_star}"
            )));
        }
        x.push(v);
    }
    FieldState::new(params.s(), &x, z_star)
}

/// Enumerates the roots of `F(z) = z` in `[z_min, z_max]`.
///
/// The residual `F(z) - z` is evaluated on a geometric grid of `grid_points`
/// nodes; each sign change is refined by bisection to relative width
/// [`FIXED_POINT_REL_TOL`]. The symmetric root `z = 1` is inserted
/// explicitly whenever the window contains it (it solves the equation for
/// every parameter choice), duplicates closer than
/// [`FIXED_POINT_MERGE_REL`] (relative) are merged, and each surviving root
/// is classified through a central difference of step
/// [`FD_CLASSIFY_STEP_REL`]` * z*`.
///
/// # Errors
///
/// * [`Error::DomainError`] on an empty or non-positive window, or
///   `grid_points < 2`.
/// * [`Error::NumericOverflow`] propagated from [`scalar_map`].
/// * [`Error::NoBracketFound`] if the scan ends with no roots at all (only
///   possible when the window excludes `z = 1`).
pub fn find_scalar_fixed_points(
    params: &ModelParams,
    z_min: f64,
    z_max: f64,
    grid_points: usize,
) -> Result<Vec<ScalarFixedPoint>> {
    if !(z_min.is_finite() && z_max.is_finite()) || z_min <= 0.0 || z_max <= z_min {
        return Err(Error::DomainError(format!(
            "fixed-point window [{z_min}, {z_max}] must satisfy 0 < z_min < z_max"
        )));
    }
    if grid_points < 2 {
        return Err(Error::DomainError(format!(
            "fixed-point scan needs at least 2 grid points, got {grid_points}"
        )));
    }

    let residual = |z: f64| scalar_map(params, z).map(|f| f - z);
    let grid = numeric::log_spaced(z_min, z_max, grid_points);
    let mut values = Vec::with_capacity(grid.len());
    for &z in &grid {
        values.push(residual(z)?);
    }

    let mut roots = Vec::new();
    for (idx, (&z, &g)) in grid.iter().zip(&values).enumerate() {
        if g == 0.0 {
            roots.push(z);
            continue;
        }
        if idx + 1 < grid.len() {
            let g_next = values[idx + 1];
            if g_next != 0.0 && g.signum() != g_next.signum() {
                let root = numeric::bisect(
                    |z| residual(z).expect("residual is finite inside a scanned bracket"),
                    z,
                    grid[idx + 1],
                    numeric::stop_relative(FIXED_POINT_REL_TOL),
                );
                roots.push(root);
            }
        }
    }
    if (z_min..=z_max).contains(&1.0) {
        roots.push(1.0);
    }
    if roots.is_empty() {
        return Err(Error::NoBracketFound(format!(
            "no fixed point of the scalar map in [{z_min}, {z_max}]"
        )));
    }

    roots.sort_by(|a, b| a.partial_cmp(b).expect("roots are finite"));
    let mut merged: Vec<f64> = Vec::new();
    for root in roots {
        match merged.last_mut() {
            Some(last) if (root - *last).abs() <= FIXED_POINT_MERGE_REL * root.abs() => {
                if root == 1.0 {
                    *last = 1.0;
                }
            }
            _ => merged.push(root),
        }
    }

    merged
        .into_iter()
        .map(|z_star| {
            let h = FD_CLASSIFY_STEP_REL * z_star;
            let derivative =
                (scalar_map(params, z_star + h)? - scalar_map(params, z_star - h)?) / (2.0 * h);
            let derivative_abs = derivative.abs();
            let stability = if (derivative_abs - 1.0).abs() <= TOL_NEUTRAL {
                Stability::Neutral
            } else if derivative_abs < 1.0 {
                Stability::Attracting
            } else {
                Stability::Repelling
            };
            Ok(ScalarFixedPoint {
                z_star,
                derivative_abs,
                stability,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::symmetric_fixed_point;

    fn params(s: u32, k: u32, phi: f64) -> ModelParams {
        ModelParams::new(s, k, phi).unwrap()
    }

    /// Closed-form rational for the composed map at s = 5, k = 3:
    /// F(z) = ((a + 33 phi^20 z + 3 a z^2 + c z^3) /
    ///         (c + 3 a z + 33 phi^20 z^2 + a z^3))^3
    /// with a = phi^10 sum_{n=0..10} phi^(2n) and c = sum_{n=0..10} phi^(4n).
    fn scalar_map_s5_k3_closed(phi: f64, z: f64) -> f64 {
        let a = phi.powi(10) * (0..=10).map(|n| phi.powi(2 * n)).sum::<f64>();
        let c = (0..=10).map(|n| phi.powi(4 * n)).sum::<f64>();
        let t = 33.0 * phi.powi(20);
        let num = a + t * z + 3.0 * a * z * z + c * z * z * z;
        let den = c + 3.0 * a * z + t * z * z + a * z * z * z;
        (num / den).powi(3)
    }

    #[test]
    fn scalar_map_fixes_one() {
        for &(s, k, phi) in &[(1, 3, 2.0), (2, 2, 0.4), (5, 3, 1.31), (10, 4, 87.0)] {
            let p = params(s, k, phi);
            let f1 = scalar_map(&p, 1.0).unwrap();
            assert!((f1 - 1.0).abs() <= 1e-12, "s={s} k={k} phi={phi}: {f1}");
        }
    }

    #[test]
    fn scalar_map_is_constant_at_phi_one() {
        let p = params(4, 3, 1.0);
        for &z in &[1e-3, 0.3, 1.0, 7.0, 2e3] {
            assert_eq!(scalar_map(&p, z).unwrap(), 1.0);
        }
    }

    #[test]
    fn scalar_map_rejects_nonpositive_argument() {
        let p = params(1, 3, 2.0);
        assert!(matches!(
            scalar_map(&p, 0.0).unwrap_err(),
            Error::DomainError(_)
        ));
        assert!(matches!(
            scalar_map(&p, -1.0).unwrap_err(),
            Error::DomainError(_)
        ));
    }

    #[test]
    fn scalar_map_matches_spin_five_closed_form() {
        let p = params(5, 3, 1.2);
        let got = scalar_map(&p, 2.0).unwrap();
        let expected = scalar_map_s5_k3_closed(1.2, 2.0);
        let rel = (got - expected).abs() / expected;
        assert!(rel <= 1e-10, "composition {got} vs closed form {expected}");
    }

    #[test]
    fn scalar_map_matches_spin_five_closed_form_on_grid() {
        for &phi in &[0.55, 0.86, 1.12434, 2.4] {
            let p = params(5, 3, phi);
            for &z in &[0.02, 0.5, 1.0, 4.0, 60.0] {
                let got = scalar_map(&p, z).unwrap();
                let expected = scalar_map_s5_k3_closed(phi, z);
                let rel = (got - expected).abs() / expected;
                assert!(rel <= 1e-10, "phi={phi} z={z}: {got} vs {expected}");
            }
        }
    }

    #[test]
    fn derivative_at_one_matches_spin_five_closed_form() {
        for &phi in &[0.7, 0.901258081777163, 1.0, 1.10956009185308, 1.31, 2.0] {
            let p = params(5, 3, phi);
            let a = phi.powi(10) * (0..=10).map(|n| phi.powi(2 * n)).sum::<f64>();
            let c = (0..=10).map(|n| phi.powi(4 * n)).sum::<f64>();
            let expected = 9.0 * (c - 11.0 * phi.powi(20)) / (4.0 * a + c + 33.0 * phi.powi(20));
            let got = scalar_map_derivative_at_one(&p);
            assert!(
                (got - expected).abs() <= 1e-9 * expected.abs().max(1.0),
                "phi={phi}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn derivative_at_one_spin_one_example() {
        let p = params(1, 3, 2.0);
        let got = scalar_map_derivative_at_one(&p);
        let expected = 9.0 * 225.0 / 753.0;
        assert!((got - expected).abs() <= 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn derivative_at_one_vanishes_at_phi_one() {
        for s in 1..=5 {
            let p = params(s, 3, 1.0);
            assert_eq!(scalar_map_derivative_at_one(&p), 0.0);
        }
    }

    #[test]
    fn derivative_at_one_matches_finite_difference() {
        for &(s, k, phi) in &[(1, 3, 2.0), (3, 2, 0.8), (5, 3, 1.12434), (2, 4, 1.9)] {
            let p = params(s, k, phi);
            let h = 1e-6;
            let fd =
                (scalar_map(&p, 1.0 + h).unwrap() - scalar_map(&p, 1.0 - h).unwrap()) / (2.0 * h);
            let analytic = scalar_map_derivative_at_one(&p);
            assert!(
                (fd - analytic).abs() <= 1e-6 * analytic.abs().max(1.0),
                "s={s} k={k} phi={phi}: fd {fd} vs analytic {analytic}"
            );
        }
    }

    #[test]
    fn recursion_fixes_symmetric_point() {
        for &(s, k, phi) in &[(1, 3, 2.0), (2, 3, 0.5), (5, 3, 1.31), (4, 2, 11.0)] {
            let p = params(s, k, phi);
            let state = symmetric_fixed_point(&p);
            let next = evaluate_recursion(&p, &state).unwrap();
            assert!((next.z() - 1.0).abs() <= 1e-12);
            for i in p.spin_levels() {
                let rel = (next.x(i) - state.x(i)).abs() / state.x(i);
                assert!(rel <= 1e-12, "s={s} k={k} phi={phi} i={i}");
            }
        }
    }

    #[test]
    fn recursion_rejects_mismatched_state() {
        let p = params(2, 3, 1.5);
        let state = symmetric_fixed_point(&params(1, 3, 1.5));
        assert!(matches!(
            evaluate_recursion(&p, &state).unwrap_err(),
            Error::DomainError(_)
        ));
    }

    #[test]
    fn recursion_reports_overflow_for_enormous_branching() {
        let p = params(1, 600_000, 2.0);
        let state = symmetric_fixed_point(&params(1, 3, 2.0));
        assert!(matches!(
            evaluate_recursion(&p, &state).unwrap_err(),
            Error::NumericOverflow(_)
        ));
    }

    #[test]
    fn lift_at_one_reproduces_symmetric_point() {
        for &(s, k, phi) in &[(1, 3, 2.0), (5, 3, 0.86), (3, 4, 1.7)] {
            let p = params(s, k, phi);
            let lifted = lift_scalar_fixed_point(&p, 1.0).unwrap();
            let symmetric = symmetric_fixed_point(&p);
            for i in p.spin_levels() {
                assert_eq!(lifted.x(i).to_bits(), symmetric.x(i).to_bits(), "i = {i}");
            }
            assert_eq!(lifted.z(), 1.0);
        }
    }

    #[test]
    fn lift_matches_explicit_activities_near_z_four() {
        let phi = 1.12434;
        let p = params(5, 3, phi);
        let lifted = lift_scalar_fixed_point(&p, 4.0).unwrap();
        for t in p.spin_levels().filter(|&t| t != 0) {
            let expected = ((1.0 + 4.0 * phi.powi(2 * t)) / (5.0 * phi.powi(t))).powi(3);
            let rel = (lifted.x(t) - expected).abs() / expected;
            assert!(rel <= 2e-2, "t = {t}: {} vs {expected}", lifted.x(t));
        }
        let next = evaluate_recursion(&p, &lifted).unwrap();
        assert!((next.z() - 4.0).abs() <= 2e-2 * 4.0, "z' = {}", next.z());
    }

    #[test]
    fn census_single_root_inside_stable_window() {
        let p = params(5, 3, 0.91);
        let roots = find_scalar_fixed_points(&p, DEFAULT_Z_MIN, DEFAULT_Z_MAX, 10_000).unwrap();
        assert_eq!(roots.len(), 1, "roots: {roots:?}");
        assert_eq!(roots[0].z_star, 1.0);
        assert_eq!(roots[0].stability, Stability::Attracting);
    }

    #[test]
    fn census_multiple_roots_outside_stable_window() {
        for &phi in &[0.86, 1.12] {
            let p = params(5, 3, phi);
            let roots = find_scalar_fixed_points(&p, DEFAULT_Z_MIN, DEFAULT_Z_MAX, 10_000).unwrap();
            assert!(roots.len() >= 3, "phi = {phi}: {roots:?}");
        }
    }

    #[test]
    fn census_finds_attracting_root_near_four() {
        let p = params(5, 3, 1.12434);
        let roots = find_scalar_fixed_points(&p, DEFAULT_Z_MIN, DEFAULT_Z_MAX, 10_000).unwrap();
        let near_four = roots
            .iter()
            .find(|r| (r.z_star - 4.0).abs() <= 2e-2 * 4.0)
            .expect("a root near z = 4");
        assert_eq!(near_four.stability, Stability::Attracting);
        let at_one = roots.iter().find(|r| r.z_star == 1.0).expect("z = 1 root");
        assert_eq!(at_one.stability, Stability::Repelling);
    }

    #[test]
    fn census_handles_degenerate_phi_one() {
        let p = params(5, 3, 1.0);
        let roots = find_scalar_fixed_points(&p, DEFAULT_Z_MIN, DEFAULT_Z_MAX, 10_000).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].z_star, 1.0);
        assert_eq!(roots[0].derivative_abs, 0.0);
        assert_eq!(roots[0].stability, Stability::Attracting);
    }

    #[test]
    fn census_rejects_bad_window() {
        let p = params(1, 3, 2.0);
        assert!(find_scalar_fixed_points(&p, 0.0, 1.0, 100).is_err());
        assert!(find_scalar_fixed_points(&p, 2.0, 1.0, 100).is_err());
        assert!(find_scalar_fixed_points(&p, 0.1, 10.0, 1).is_err());
    }

    #[test]
    fn census_errors_when_window_excludes_all_roots() {
        let p = params(5, 3, 0.91);
        let err = find_scalar_fixed_points(&p, 100.0, 1000.0, 50).unwrap_err();
        assert!(matches!(err, Error::NoBracketFound(_)));
    }
}
