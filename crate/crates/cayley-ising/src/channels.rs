//! Broadcast channels of the tree-indexed Markov chain.
//!
//! Conditioned on the symmetric boundary law, the spin of a child given its
//! parent is a fixed stochastic kernel. Two alternate along the tree:
//!
//! * `P`, `(2s + 1) x 2`: integer parent `i` to half-integer child, with
//!   `P(i, -1/2) = 1 / (1 + phi^(2i))`;
//! * `Q`, `2 x (2s + 1)`: half-integer parent to integer child, with
//!   `Q(-1/2, j)` proportional to `X_j^0 phi^(-j)` (and the mirrored weights
//!   for the `+1/2` row), normalised by `S = sum_j X_j^0 phi^(-j)`.
//!
//! Their compositions give the two-step chains seen by each sublattice: the
//! half-integer chain `QP` (a symmetric 2 x 2 matrix `[[p, 1-p], [1-p, p]]`)
//! and the integer chain `PQ`. The second eigenvalue `2p - 1` of `QP` drives
//! the Kesten-Stigum criterion, and both chains feed the entropy rates.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{ModelParams, SpectralSummary};
use crate::tolerances::{
    EIGEN_IMAG_TOL, ROW_SUM_TOL, STATIONARY_CLAMP_TOL, STOCHASTIC_LAMBDA1_TOL,
};

/// A validated row-stochastic matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl TransitionMatrix {
    /// Validates shape, entry range, and row sums.
    ///
    /// # Errors
    ///
    /// * [`Error::DomainError`] if `entries.len() != rows * cols`, any entry
    ///   falls outside `[0, 1]`, or a row sum deviates from 1 by more than
    ///   [`ROW_SUM_TOL`].
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::DomainError(format!(
                "transition matrix shape {rows} x {cols} does not match {} entries",
                entries.len()
            )));
        }
        for (idx, &v) in entries.iter().enumerate() {
            if !v.is_finite() || !(0.0..=1.0).contains(&v) {
                return Err(Error::DomainError(format!(
                    "transition entry at flat index {idx} is {v}, outside [0, 1]"
                )));
            }
        }
        for r in 0..rows {
            let sum: f64 = entries[r * cols..(r + 1) * cols].iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::DomainError(format!(
                    "row {r} sums to {sum}, deviating from 1 beyond {ROW_SUM_TOL}"
                )));
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Number of rows.
    #[must_use]
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    #[must_use]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry at `(row, col)`.
    ///
    /// # Panics
    ///
    /// Panics if the indices are out of range.
    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col]
    }

    /// One row as a slice.
    ///
    /// # Panics
    ///
    /// Panics if `row` is out of range.
    #[must_use]
    pub fn row(&self, row: usize) -> &[f64] {
        assert!(row < self.rows, "row out of range");
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    /// Row-major entries.
    #[must_use]
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Matrix product `self * other`, itself row-stochastic.
    ///
    /// # Errors
    ///
    /// * [`Error::DomainError`] if the inner dimensions disagree.
    pub fn multiply(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.cols != other.rows {
            return Err(Error::DomainError(format!(
                "cannot multiply {} x {} by {} x {}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![0.0; self.rows * other.cols];
        for r in 0..self.rows {
            for m in 0..self.cols {
                let lhs = self.entries[r * self.cols + m];
                for c in 0..other.cols {
                    entries[r * other.cols + c] += lhs * other.entries[m * other.cols + c];
                }
            }
        }
        TransitionMatrix::new(self.rows, other.cols, entries)
    }

    /// Copies into a dense nalgebra matrix.
    #[must_use]
    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |r, c| self.get(r, c))
    }
}

/// Symmetric-law activity `X_n^0` for `n = |i|`.
fn symmetric_activity(phi: f64, k: i32, n: i32) -> f64 {
    ((phi.powi(2 * n) + 1.0) / (2.0 * phi.powi(n))).powi(k)
}

/// Integer-to-half-integer kernel `P`.
///
/// Rows are indexed by the parent spin `i = -s, ..., s`; columns by the
/// child spin `(-1/2, +1/2)`. Independent of `k`.
#[must_use]
pub fn build_p(params: &ModelParams) -> TransitionMatrix {
    let phi = params.phi();
    let mut entries = Vec::with_capacity(2 * params.spin_count());
    for i in params.spin_levels() {
        let t = phi.powi(2 * i);
        entries.push(1.0 / (1.0 + t));
        entries.push(t / (1.0 + t));
    }
    TransitionMatrix::new(params.spin_count(), 2, entries)
        .expect("P rows are normalised by construction")
}

/// Half-integer-to-integer kernel `Q`.
///
/// Row 0 is the `-1/2` parent, row 1 the `+1/2` parent; columns are the
/// child spins `j = -s, ..., s`. The two rows are mirror images:
/// `Q(-1/2, j) = Q(+1/2, -j)`.
#[must_use]
pub fn build_q(params: &ModelParams) -> TransitionMatrix {
    let phi = params.phi();
    let k = params.k() as i32;
    let weights: Vec<f64> = params
        .spin_levels()
        .map(|j| symmetric_activity(phi, k, j.abs()) * phi.powi(-j))
        .collect();
    let mut entries = Vec::with_capacity(2 * params.spin_count());
    let sum_minus: f64 = weights.iter().sum();
    for &w in &weights {
        entries.push(w / sum_minus);
    }
    let sum_plus: f64 = weights.iter().rev().sum();
    for &w in weights.iter().rev() {
        entries.push(w / sum_plus);
    }
    TransitionMatrix::new(2, params.spin_count(), entries)
        .expect("Q rows are normalised by construction")
}

/// Diagonal entry `p` of the half-integer two-step chain `QP`.
fn two_step_psi_diagonal(params: &ModelParams) -> f64 {
    let phi = params.phi();
    if params.k() == 3 {
        let mut a = 0.5;
        let mut s = 1.0;
        for n in 1..=params.s() as i32 {
            let q = phi.powi(2 * n) + 1.0;
            a += q * q * (phi.powi(4 * n) + 1.0) / (8.0 * phi.powi(4 * n));
            s += q * q * q * q / (8.0 * phi.powi(4 * n));
        }
        a / s
    } else {
        build_q(params)
            .multiply(&build_p(params))
            .expect("inner dimensions match")
            .get(0, 0)
    }
}

/// Two-step chain on the half-integer sublattice, `QP = [[p, 1-p], [1-p, p]]`.
///
/// For `k = 3` the diagonal `p` is evaluated from its polynomial closed
/// form; other `k` fall back to the explicit product. Either way the result
/// agrees with `build_q * build_p` to within a few ulps.
#[must_use]
pub fn two_step_psi(params: &ModelParams) -> TransitionMatrix {
    let p = two_step_psi_diagonal(params);
    TransitionMatrix::new(2, 2, vec![p, 1.0 - p, 1.0 - p, p])
        .expect("a symmetric binary chain is row-stochastic")
}

/// Two-step chain on the integer sublattice, `PQ`.
#[must_use]
pub fn two_step_phi(params: &ModelParams) -> TransitionMatrix {
    build_p(params)
        .multiply(&build_q(params))
        .expect("inner dimensions match")
}

/// Second eigenvalue `2p - 1` of the half-integer two-step chain.
///
/// Non-negative for every parameter point, zero exactly at `phi = 1`, and
/// shared with the nonzero sub-leading spectrum of `PQ`. Strictly below 1
/// in exact arithmetic; at extreme `phi` the diagonal saturates in floating
/// point and the value rounds up to exactly 1.
#[must_use]
pub fn second_eigenvalue_psi(params: &ModelParams) -> f64 {
    2.0 * two_step_psi_diagonal(params) - 1.0
}

/// Stationary distribution of a square chain via a bordered linear solve.
///
/// Solves `(T' - I) pi = 0` with the last equation replaced by
/// `sum_i pi_i = 1` using an LU factorisation. Round-off negatives larger
/// than `-`[`STATIONARY_CLAMP_TOL`] are clamped to zero and the vector is
/// renormalised.
///
/// # Errors
///
/// * [`Error::DomainError`] if `t` is not square.
/// * [`Error::SingularChain`] if the bordered system is singular (the chain
///   has more than one stationary law) or the solution has a genuinely
///   negative entry.
pub fn stationary_distribution(t: &TransitionMatrix) -> Result<Vec<f64>> {
    if t.rows() != t.cols() {
        return Err(Error::DomainError(format!(
            "stationary distribution needs a square chain, got {} x {}",
            t.rows(),
            t.cols()
        )));
    }
    let n = t.rows();
    let mut m = DMatrix::from_fn(n, n, |r, c| {
        let delta = if r == c { 1.0 } else { 0.0 };
        t.get(c, r) - delta
    });
    for c in 0..n {
        m[(n - 1, c)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let solution = m
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::SingularChain("bordered system is not invertible".into()))?;
    let mut pi: Vec<f64> = solution.iter().copied().collect();
    for v in &mut pi {
        if *v < 0.0 {
            if *v < -STATIONARY_CLAMP_TOL {
                return Err(Error::SingularChain(format!(
                    "stationary solve produced a negative mass {v}"
                )));
            }
            *v = 0.0;
        }
    }
    let total: f64 = pi.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::SingularChain(format!(
            "stationary solve produced total mass {total}"
        )));
    }
    for v in &mut pi {
        *v /= total;
    }
    Ok(pi)
}

/// Real spectrum of a square chain, ordered by decreasing magnitude.
///
/// Uses the dense Schur-based eigenvalue solver and insists the spectrum is
/// real: the chains built here are similar to symmetric matrices, so any
/// sizeable imaginary part signals a numerical failure.
///
/// # Errors
///
/// * [`Error::DomainError`] if `t` is not square.
/// * [`Error::EigenFailure`] if an eigenvalue has imaginary part beyond
///   [`EIGEN_IMAG_TOL`]` * max(1, |Re|)`, or the leading eigenvalue strays
///   from 1 by more than [`STOCHASTIC_LAMBDA1_TOL`].
pub fn spectrum(t: &TransitionMatrix) -> Result<SpectralSummary> {
    if t.rows() != t.cols() {
        return Err(Error::DomainError(format!(
            "spectrum needs a square chain, got {} x {}",
            t.rows(),
            t.cols()
        )));
    }
    let complex = t.to_dmatrix().complex_eigenvalues();
    let mut real = Vec::with_capacity(t.rows());
    for e in complex.iter() {
        if e.im.abs() > EIGEN_IMAG_TOL * e.re.abs().max(1.0) {
            return Err(Error::EigenFailure(format!(
                "complex eigenvalue {} + {}i on a chain expected to be real-diagonalisable",
                e.re, e.im
            )));
        }
        real.push(e.re);
    }
    let summary = SpectralSummary::from_eigenvalues(real);
    if (summary.lambda1 - 1.0).abs() > STOCHASTIC_LAMBDA1_TOL {
        return Err(Error::EigenFailure(format!(
            "leading eigenvalue {} of a row-stochastic chain strayed from 1",
            summary.lambda1
        )));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(s: u32, k: u32, phi: f64) -> ModelParams {
        ModelParams::new(s, k, phi).unwrap()
    }

    #[test]
    fn matrix_validation_rejects_bad_input() {
        assert!(TransitionMatrix::new(2, 2, vec![0.5; 3]).is_err());
        assert!(TransitionMatrix::new(1, 2, vec![0.5, 0.6]).is_err());
        assert!(TransitionMatrix::new(1, 2, vec![-0.1, 1.1]).is_err());
        assert!(TransitionMatrix::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn p_kernel_spin_one_phi_two() {
        let p = build_p(&params(1, 3, 2.0));
        assert_eq!(p.rows(), 3);
        assert_eq!(p.cols(), 2);
        let expected = [[0.8, 0.2], [0.5, 0.5], [0.2, 0.8]];
        for (r, row) in expected.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert!((p.get(r, c) - v).abs() <= 1e-15, "entry ({r},{c})");
            }
        }
    }

    #[test]
    fn p_kernel_is_uniform_at_phi_one() {
        let p = build_p(&params(3, 3, 1.0));
        for r in 0..7 {
            assert_eq!(p.get(r, 0), 0.5);
            assert_eq!(p.get(r, 1), 0.5);
        }
    }

    #[test]
    fn q_kernel_spin_one_phi_two() {
        let q = build_q(&params(1, 3, 2.0));
        assert_eq!(q.rows(), 2);
        assert_eq!(q.cols(), 3);
        let d = 753.0;
        for (c, expected) in [500.0 / d, 128.0 / d, 125.0 / d].into_iter().enumerate() {
            assert!(
                (q.get(0, c) - expected).abs() <= 1e-15,
                "column {c}: {} vs {expected}",
                q.get(0, c)
            );
        }
    }

    #[test]
    fn q_kernel_rows_are_mirror_images() {
        let q = build_q(&params(4, 3, 1.7));
        for c in 0..9 {
            let diff = (q.get(0, c) - q.get(1, 8 - c)).abs();
            assert!(diff <= 1e-15, "column {c}");
        }
    }

    #[test]
    fn q_kernel_is_uniform_at_phi_one() {
        let q = build_q(&params(2, 3, 1.0));
        for r in 0..2 {
            for c in 0..5 {
                assert!((q.get(r, c) - 0.2).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn two_step_psi_spin_one_phi_two() {
        let psi = two_step_psi(&params(1, 3, 2.0));
        let p = 163.0 / 251.0;
        assert!((psi.get(0, 0) - p).abs() <= 1e-15);
        assert!((psi.get(0, 1) - (1.0 - p)).abs() <= 1e-15);
        assert!((psi.get(1, 0) - (1.0 - p)).abs() <= 1e-15);
        assert!((psi.get(1, 1) - p).abs() <= 1e-15);
    }

    #[test]
    fn two_step_psi_matches_literal_product() {
        for &(s, k, phi) in &[(1, 3, 2.0), (2, 3, 0.7), (5, 3, 1.2861), (3, 4, 1.5)] {
            let pr = params(s, k, phi);
            let closed = two_step_psi(&pr);
            let product = build_q(&pr).multiply(&build_p(&pr)).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let diff = (closed.get(r, c) - product.get(r, c)).abs();
                    assert!(diff <= 1e-12, "s={s} k={k} phi={phi} ({r},{c}): {diff}");
                }
            }
        }
    }

    #[test]
    fn two_step_psi_spin_two_denominator_polynomial() {
        for &phi in &[0.8, 1.3, 2.1] {
            let pr = params(2, 3, phi);
            let p = two_step_psi(&pr).get(0, 0);
            let d = phi.powi(16)
                + 5.0 * phi.powi(12)
                + 4.0 * phi.powi(10)
                + 20.0 * phi.powi(8)
                + 4.0 * phi.powi(6)
                + 5.0 * phi.powi(4)
                + 1.0;
            let num = 4.0 * phi.powi(8)
                + phi.powi(4) * (phi.powi(2) + 1.0).powi(2) * (phi.powi(4) + 1.0)
                + (phi.powi(4) + 1.0).powi(2) * (phi.powi(8) + 1.0);
            let rel = (p - num / d).abs() / (num / d);
            assert!(rel <= 1e-12, "phi = {phi}: {p} vs {}", num / d);
        }
    }

    #[test]
    fn two_step_phi_spin_one_closed_form() {
        for &phi in &[0.7, 1.9, 2.0] {
            let pr = params(1, 3, phi);
            let r = two_step_phi(&pr);
            let a = (phi.powi(2) + 1.0).powi(2) * (phi.powi(4) + 1.0);
            let b = 8.0 * phi.powi(4);
            let c = 2.0 * phi.powi(2) * (phi.powi(2) + 1.0).powi(2);
            let d = (phi.powi(2) + 1.0).powi(4) / 2.0;
            let delta = phi.powi(8) + 4.0 * phi.powi(6) + 14.0 * phi.powi(4) + 4.0 * phi.powi(2) + 1.0;
            let expected = [
                [a / delta, b / delta, c / delta],
                [d / delta, b / delta, d / delta],
                [c / delta, b / delta, a / delta],
            ];
            for (row, cols) in expected.iter().enumerate() {
                for (col, &v) in cols.iter().enumerate() {
                    let diff = (r.get(row, col) - v).abs();
                    assert!(diff <= 1e-12, "phi={phi} entry ({row},{col}): {diff}");
                }
            }
            assert!((a + b + c - delta).abs() <= 1e-12 * delta);
            assert!((2.0 * d + b - delta).abs() <= 1e-12 * delta);
        }
    }

    #[test]
    fn two_step_phi_spin_one_phi_two_corner() {
        let r = two_step_phi(&params(1, 3, 2.0));
        assert!((r.get(0, 0) - 425.0 / 753.0).abs() <= 1e-15);
        assert!((r.get(1, 0) - 312.5 / 753.0).abs() <= 1e-15);
    }

    #[test]
    fn second_eigenvalue_examples() {
        assert!((second_eigenvalue_psi(&params(1, 3, 2.0)) - 75.0 / 251.0).abs() <= 1e-15);
        assert_eq!(second_eigenvalue_psi(&params(3, 3, 1.0)), 0.0);
        let ks_root = second_eigenvalue_psi(&params(2, 3, 1.780873));
        assert!(
            (ks_root - 1.0 / 3.0f64.sqrt()).abs() <= 1e-5,
            "lambda2 = {ks_root}"
        );
        let saturated = second_eigenvalue_psi(&params(1, 3, 100.0));
        assert!((saturated - 1.0).abs() <= 1e-3);
    }

    #[test]
    fn second_eigenvalue_is_nonnegative_and_reciprocal() {
        for &phi in &[0.04, 0.3, 0.99, 1.01, 4.0, 60.0] {
            for s in 1..=5 {
                let lam = second_eigenvalue_psi(&params(s, 3, phi));
                let mirror = second_eigenvalue_psi(&params(s, 3, 1.0 / phi));
                assert!((0.0..=1.0).contains(&lam), "s={s} phi={phi}: {lam}");
                if (0.25..=4.0).contains(&phi) {
                    assert!(lam < 1.0, "s={s} phi={phi}: {lam}");
                }
                assert!((lam - mirror).abs() <= 1e-10, "s={s} phi={phi}");
            }
        }
    }

    #[test]
    fn stationary_spin_one_phi_two() {
        let pi = stationary_distribution(&two_step_phi(&params(1, 3, 2.0))).unwrap();
        assert!((pi[0] - 625.0 / 1506.0).abs() <= 1e-12);
        assert!((pi[1] - 128.0 / 753.0).abs() <= 1e-12);
        assert!((pi[2] - 625.0 / 1506.0).abs() <= 1e-12);
    }

    #[test]
    fn stationary_of_uniform_chain_is_uniform() {
        let t = TransitionMatrix::new(3, 3, vec![1.0 / 3.0; 9]).unwrap();
        let pi = stationary_distribution(&t).unwrap();
        for &v in &pi {
            assert!((v - 1.0 / 3.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn stationary_rejects_non_square_and_singular() {
        let rect = build_p(&params(1, 3, 2.0));
        assert!(matches!(
            stationary_distribution(&rect).unwrap_err(),
            Error::DomainError(_)
        ));
        let identity = TransitionMatrix::new(
            3,
            3,
            vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        assert!(matches!(
            stationary_distribution(&identity).unwrap_err(),
            Error::SingularChain(_)
        ));
    }

    #[test]
    fn stationary_residual_is_tiny() {
        for &(s, phi) in &[(1, 0.6), (3, 1.4), (5, 2.3)] {
            let t = two_step_phi(&params(s, 3, phi));
            let pi = stationary_distribution(&t).unwrap();
            let n = t.rows();
            for c in 0..n {
                let image: f64 = (0..n).map(|r| pi[r] * t.get(r, c)).sum();
                assert!((image - pi[c]).abs() <= 1e-12, "s={s} phi={phi} col {c}");
            }
        }
    }

    #[test]
    fn spectrum_of_identity_and_psi_chain() {
        let identity = TransitionMatrix::new(2, 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let s = spectrum(&identity).unwrap();
        assert_eq!(s.eigenvalues.len(), 2);
        for &v in &s.eigenvalues {
            assert!((v - 1.0).abs() <= 1e-12);
        }

        let psi = spectrum(&two_step_psi(&params(1, 3, 2.0))).unwrap();
        assert!((psi.lambda1 - 1.0).abs() <= 1e-12);
        assert!((psi.lambda2 - 75.0 / 251.0).abs() <= 1e-12);
    }

    #[test]
    fn psi_and_phi_chains_share_nonzero_spectrum() {
        for &(s, phi) in &[(1, 2.0), (2, 1.3), (5, 0.8)] {
            let pr = params(s, 3, phi);
            let qp = spectrum(&two_step_psi(&pr)).unwrap();
            let pq = spectrum(&two_step_phi(&pr)).unwrap();
            assert!((pq.lambda1 - 1.0).abs() <= 1e-10);
            assert!(
                (pq.lambda2 - qp.lambda2).abs() <= 1e-10,
                "s={s} phi={phi}: {} vs {}",
                pq.lambda2,
                qp.lambda2
            );
            for &rest in &pq.eigenvalues[2..] {
                assert!(rest.abs() <= 1e-10, "s={s} phi={phi}: {rest}");
            }
        }
    }

    #[test]
    fn spectrum_rejects_non_square() {
        let rect = build_p(&params(1, 3, 2.0));
        assert!(matches!(
            spectrum(&rect).unwrap_err(),
            Error::DomainError(_)
        ));
    }
}
