//! Centralised numeric tolerances.
//!
//! Every cutoff used by the pipeline lives here so the choices are visible in
//! one place. Two rules of thumb set the sizes: quantities assembled from a
//! handful of `f64` operations are trusted to roughly 1e-14 relative, and
//! classification decisions (stability, extremality verdicts) use a much
//! coarser 1e-9 so that a value must be decisively on one side of a
//! threshold before it is labelled.

/// Half-width of the neutral band when classifying a scalar fixed point.
///
/// A multiplier `|F'(z*)|` within this distance of 1 is reported as
/// `Neutral` rather than attracting or repelling.
pub const TOL_NEUTRAL: f64 = 1e-9;

/// Half-width of the boundary band for extremality verdicts and regime
/// labels.
///
/// Criterion values within this of 0, and `phi` within this of a threshold
/// (or of 1), are reported as boundary cases.
pub const TOL_BOUNDARY: f64 = 1e-9;

/// Maximum deviation of a transition-matrix row sum from 1.
///
/// Rows are built as explicitly normalised ratios, so they sum to 1 up to a
/// few ulps; 1e-12 leaves three orders of headroom while still catching any
/// construction bug.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Relative width to which a scalar fixed-point bracket is bisected.
pub const FIXED_POINT_REL_TOL: f64 = 1e-12;

/// Relative distance under which two scalar roots are merged as duplicates.
pub const FIXED_POINT_MERGE_REL: f64 = 1e-8;

/// Relative step (times `z*`) of the central difference used to classify a
/// scalar fixed point.
///
/// `1e-6` balances truncation (`O(h^2)`) against rounding (`O(eps / h)`)
/// for the smooth maps scanned here.
pub const FD_CLASSIFY_STEP_REL: f64 = 1e-6;

/// Absolute width to which a threshold bracket in `phi` is bisected.
///
/// Threshold roots lie in roughly `[0.3, 3]`, so absolute and relative
/// widths coincide to within one order of magnitude.
pub const THRESHOLD_BISECT_TOL: f64 = 1e-12;

/// Number of scan points used to isolate threshold roots in `phi`.
pub const THRESHOLD_SCAN_POINTS: usize = 4096;

/// Default number of scan points used to isolate scalar fixed points in `z`.
pub const FIXED_POINT_SCAN_POINTS: usize = 10_000;

/// Maximum l1 residual `||pi T - pi||` accepted by the entropy-rate routine.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-8;

/// Magnitude of negative round-off tolerated (and clamped to zero) in a
/// solved stationary distribution.
pub const STATIONARY_CLAMP_TOL: f64 = 1e-14;

/// Maximum imaginary part accepted when a real spectrum is expected,
/// relative to `max(1, |Re|)`.
pub const EIGEN_IMAG_TOL: f64 = 1e-9;

/// Maximum deviation of the leading eigenvalue of a row-stochastic matrix
/// from 1.
pub const STOCHASTIC_LAMBDA1_TOL: f64 = 1e-10;

/// Tolerance below which the spectral product `h . g` may dip negative from
/// round-off before it is treated as a genuine sign violation.
pub const SPECTRAL_PRODUCT_TOL: f64 = 1e-12;
