//! Core model types for the mixed spin-(s, 1/2) Ising model on a Cayley tree.
//!
//! The tree has forward branching number `k` (each vertex other than the root
//! has `k` children). Vertices on even generations carry spins in
//! `{-s, ..., s}`, odd generations carry spins in `{-1/2, +1/2}`, and nearest
//! neighbours interact through a coupling `J`. All thermodynamics enters
//! through the single thermal parameter
//!
//! ```text
//! phi = exp(beta J / 2),        beta = 1 / T,
//! ```
//!
//! so `phi > 1` is the ferromagnetic side, `phi < 1` the antiferromagnetic
//! side, and `phi <-> 1/phi` swaps the two.
//!
//! A translation-invariant boundary law is described by [`FieldState`]: one
//! positive activity `X_i` per integer spin level `i != 0` (with the
//! normalisation `X_0 = 1`) together with a positive activity `Z` for the
//! half-integer layer.

use crate::error::{Error, Result};

/// Lower edge of the guarded thermal-parameter window.
pub const PHI_MIN: f64 = 1e-2;

/// Upper edge of the guarded thermal-parameter window.
pub const PHI_MAX: f64 = 1e2;

/// Largest supported integer-spin magnitude.
///
/// The window keeps every polynomial in `phi` used by the pipeline (degrees
/// up to `8 s`) comfortably inside `f64` range over `[PHI_MIN, PHI_MAX]`.
pub const S_MAX: u32 = 10;

/// Validated model parameters `(s, k, phi)`.
///
/// `s` is the integer-spin magnitude of the even layers, `k >= 2` the
/// branching number, and `phi` the thermal parameter, constrained to
/// `[PHI_MIN, PHI_MAX]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    s: u32,
    k: u32,
    phi: f64,
}

impl ModelParams {
    /// Validates and constructs model parameters.
    ///
    /// # Errors
    ///
    /// * [`Error::SpinOutOfRange`] unless `1 <= s <= 10`.
    /// * [`Error::BranchingOutOfRange`] unless `k >= 2`.
    /// * [`Error::PhiOutOfRange`] unless `phi` is finite and inside
    ///   `[PHI_MIN, PHI_MAX]`.
    pub fn new(s: u32, k: u32, phi: f64) -> Result<Self> {
        if !(1..=S_MAX).contains(&s) {
            return Err(Error::SpinOutOfRange(i64::from(s)));
        }
        if k < 2 || k > i32::MAX as u32 {
            return Err(Error::BranchingOutOfRange(i64::from(k)));
        }
        if !phi.is_finite() || !(PHI_MIN..=PHI_MAX).contains(&phi) {
            return Err(Error::PhiOutOfRange(phi));
        }
        Ok(Self { s, k, phi })
    }

    /// Integer-spin magnitude `s`.
    #[must_use]
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Branching number `k`.
    #[must_use]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Thermal parameter `phi`.
    #[must_use]
    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Inverse-temperature-scaled coupling `beta J = 2 ln phi`.
    #[must_use]
    pub fn beta_j(&self) -> f64 {
        2.0 * self.phi.ln()
    }

    /// Number of integer spin levels, `2 s + 1`.
    #[must_use]
    pub fn spin_count(&self) -> usize {
        2 * self.s as usize + 1
    }

    /// Iterator over the integer spin levels `-s, ..., s`.
    pub fn spin_levels(&self) -> impl Iterator<Item = i32> {
        let s = self.s as i32;
        -s..=s
    }
}

/// Converts a coupling and a temperature to the thermal parameter.
///
/// Returns `phi = exp(J / (2 T))`. The result is not clamped to the guarded
/// window; feed it through [`ModelParams::new`] before running the pipeline.
///
/// # Errors
///
/// * [`Error::NonPositiveTemperature`] if `t <= 0` or `t` is not finite.
pub fn phi_from_temperature(j: f64, t: f64) -> Result<f64> {
    if !t.is_finite() || t <= 0.0 {
        return Err(Error::NonPositiveTemperature(t));
    }
    Ok((j / (2.0 * t)).exp())
}

/// A translation-invariant boundary law.
///
/// Stores one positive activity `X_i` per spin level `i` in `-s..=s` (with
/// `X_0 = 1` fixed by normalisation) and the half-integer activity `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    s: u32,
    /// Activities indexed by `i + s`, so `xs[0] = X_{-s}` and `xs[2s] = X_s`.
    xs: Vec<f64>,
    z: f64,
}

impl FieldState {
    /// Builds a state from the `2 s` free activities and `z`.
    ///
    /// `x` lists `X_{-s}, ..., X_{-1}, X_1, ..., X_s` in that order; the
    /// normalised `X_0 = 1` entry is inserted internally.
    ///
    /// # Errors
    ///
    /// * [`Error::DomainError`] if `x.len() != 2 s`, or any activity (or `z`)
    ///   is not finite and strictly positive.
    pub fn new(s: u32, x: &[f64], z: f64) -> Result<Self> {
        if x.len() != 2 * s as usize {
            return Err(Error::DomainError(format!(
                "expected {} free activities for s = {}, got {}",
                2 * s,
                s,
                x.len()
            )));
        }
        if !z.is_finite() || z <= 0.0 {
            return Err(Error::DomainError(format!(
                "half-integer activity z = {z} must be finite and positive"
            )));
        }
        let mut xs = Vec::with_capacity(2 * s as usize + 1);
        xs.extend_from_slice(&x[..s as usize]);
        xs.push(1.0);
        xs.extend_from_slice(&x[s as usize..]);
        for (idx, &v) in xs.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::DomainError(format!(
                    "activity X_{} = {v} must be finite and positive",
                    idx as i64 - i64::from(s)
                )));
            }
        }
        Ok(Self { s, xs, z })
    }

    /// Builds a state by evaluating `f` on every level `i in -s..=s, i != 0`.
    ///
    /// # Errors
    ///
    /// Same as [`FieldState::new`].
    pub fn from_fn(s: u32, mut f: impl FnMut(i32) -> f64, z: f64) -> Result<Self> {
        let si = s as i32;
        let x: Vec<f64> = (-si..=si).filter(|&i| i != 0).map(&mut f).collect();
        Self::new(s, &x, z)
    }

    /// Spin magnitude `s`.
    #[must_use]
    pub fn s(&self) -> u32 {
        self.s
    }

    /// Activity `X_i` for `i in -s..=s` (`X_0` is always 1).
    ///
    /// # Panics
    ///
    /// Panics if `|i| > s`.
    #[must_use]
    pub fn x(&self, i: i32) -> f64 {
        let s = self.s as i32;
        assert!(i.abs() <= s, "spin level {i} outside -{s}..={s}");
        self.xs[(i + s) as usize]
    }

    /// Half-integer activity `Z`.
    #[must_use]
    pub fn z(&self) -> f64 {
        self.z
    }

    /// The `2 s` free activities in the order `X_{-s}, ..., X_{-1}, X_1, ..., X_s`.
    #[must_use]
    pub fn free_activities(&self) -> Vec<f64> {
        let s = self.s as usize;
        let mut out = Vec::with_capacity(2 * s);
        out.extend_from_slice(&self.xs[..s]);
        out.extend_from_slice(&self.xs[s + 1..]);
        out
    }
}

/// The symmetric (disordered) boundary law `l_0`.
///
/// Setting `Z = 1` in the consistency recursion gives
///
/// ```text
/// X_i = ((phi^(2|i|) + 1) / (2 phi^|i|))^k = cosh(beta J |i| / 2)^k,
/// ```
///
/// which is a fixed point for every `(s, k, phi)`. The returned state has
/// `X_i` and `X_{-i}` bitwise equal.
#[must_use]
pub fn symmetric_fixed_point(params: &ModelParams) -> FieldState {
    let s = params.s();
    let k = params.k() as i32;
    let phi = params.phi();
    let mut x = vec![0.0; 2 * s as usize];
    for n in 1..=s as i32 {
        let c = (phi.powi(2 * n) + 1.0) / (2.0 * phi.powi(n));
        let v = c.powi(k);
        x[(s as i32 - n) as usize] = v;
        x[(s as i32 + n - 1) as usize] = v;
    }
    FieldState::new(s, &x, 1.0).expect("symmetric activities are positive within the guarded window")
}

/// Real spectrum of a matrix, ordered by decreasing absolute value.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    /// All eigenvalues, sorted by `|lambda|` descending (ties: value descending).
    pub eigenvalues: Vec<f64>,
    /// Eigenvalue of largest absolute value.
    pub lambda1: f64,
    /// Eigenvalue of second-largest absolute value (0 for a 1 x 1 spectrum).
    pub lambda2: f64,
}

impl SpectralSummary {
    /// Sorts the eigenvalues and records the two leading ones.
    #[must_use]
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(|a, b| {
            b.abs()
                .partial_cmp(&a.abs())
                .expect("eigenvalues are finite")
                .then(b.partial_cmp(a).expect("eigenvalues are finite"))
        });
        let lambda1 = eigenvalues.first().copied().unwrap_or(0.0);
        let lambda2 = eigenvalues.get(1).copied().unwrap_or(0.0);
        Self {
            eigenvalues,
            lambda1,
            lambda2,
        }
    }
}
