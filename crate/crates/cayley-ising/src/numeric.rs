//! Internal grid and bisection helpers shared by the root-finding routines.
//!
//! Every threshold in the pipeline is a root of a smooth scalar function of
//! `phi` (or of `z`), isolated by a sign scan over a deterministic grid and
//! then refined by plain bisection. Bisection is deliberate: the scanned
//! functions are cheap, and bisection gives reproducible, bracket-certified
//! roots with no derivative bookkeeping.

/// `n` geometrically spaced points from `min` to `max` inclusive.
///
/// Endpoints are set exactly so scans cover the full guarded window.
pub(crate) fn log_spaced(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two points");
    assert!(min > 0.0 && max > min, "log grid needs 0 < min < max");
    let ratio = max / min;
    let denom = (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| min * ratio.powf(i as f64 / denom))
        .collect();
    grid[0] = min;
    grid[n - 1] = max;
    grid
}

/// `n` linearly spaced points from `min` to `max` inclusive.
pub(crate) fn linear_spaced(min: f64, max: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "a grid needs at least two points");
    assert!(max > min, "linear grid needs min < max");
    let step = (max - min) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| min + step * i as f64).collect();
    grid[0] = min;
    grid[n - 1] = max;
    grid
}

/// Result of scanning a function over a grid: exact zeros hit on grid nodes
/// and open intervals over which the sign flips.
pub(crate) struct SignScan {
    pub roots_on_grid: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
}

/// Evaluates `f` on `grid` and collects sign-change brackets.
///
/// Grid nodes where `f` vanishes exactly are reported as roots; a bracket
/// `(a, b)` is recorded whenever `f(a) * f(b) < 0` for consecutive nodes.
pub(crate) fn scan_sign_changes(mut f: impl FnMut(f64) -> f64, grid: &[f64]) -> SignScan {
    let mut roots_on_grid = Vec::new();
    let mut brackets = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &x in grid {
        let fx = f(x);
        if fx == 0.0 {
            roots_on_grid.push(x);
            prev = None;
            continue;
        }
        if let Some((px, pfx)) = prev {
            if pfx.signum() != fx.signum() {
                brackets.push((px, x));
            }
        }
        prev = Some((x, fx));
    }
    SignScan {
        roots_on_grid,
        brackets,
    }
}

/// Refines a sign-change bracket `(a, b)` by bisection.
///
/// `stop(a, b)` decides when the bracket is tight enough; the midpoint of the
/// final bracket is returned. The caller guarantees `f(a) * f(b) < 0`.
pub(crate) fn bisect(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    stop: impl Fn(f64, f64) -> bool,
) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        if stop(a, b) {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Stop predicate: absolute bracket width at most `tol`.
pub(crate) fn stop_absolute(tol: f64) -> impl Fn(f64, f64) -> bool {
    move |a, b| (b - a).abs() <= tol
}

/// Stop predicate: bracket width at most `tol` times the midpoint magnitude.
pub(crate) fn stop_relative(tol: f64) -> impl Fn(f64, f64) -> bool {
    move |a, b| (b - a).abs() <= tol * 0.5 * (a + b).abs()
}
