//! Eigenvalues of symmetric(-izable) tridiagonal matrices by Sturm-sequence
//! bisection.
//!
//! Matrices are described by their diagonal and the products
//! `off_sq[i] = A[i][i+1] * A[i+1][i]`, which is all the Sturm count needs
//! and lets diagonally-similar non-symmetric stencils be used directly.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off_sq: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off_sq: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off_sq.len() + 1 != diag.len() {
            return Err(Error::Eigensolver(format!(
                "inconsistent tridiagonal sizes: {} diagonal, {} off-diagonal",
                diag.len(),
                off_sq.len()
            )));
        }
        if off_sq.iter().any(|&e| e < 0.0 || !e.is_finite()) || diag.iter().any(|d| !d.is_finite()) {
            return Err(Error::Eigensolver(
                "matrix is not symmetrizable with real spectrum".into(),
            ));
        }
        Ok(Self { diag, off_sq })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0f64;
        for (i, &d) in self.diag.iter().enumerate() {
            let coupling = if i == 0 { 0.0 } else { self.off_sq[i - 1] / q };
            q = d - x - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (d.abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.len();
        let off: Vec<f64> = self.off_sq.iter().map(|e| e.sqrt()).collect();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { off[i - 1] } else { 0.0 } + if i + 1 < n { off[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::Eigensolver(format!(
                "eigenvalue index {k} out of range for a {} x {} matrix",
                self.len(),
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.bounds();
        let pad = 1e-12 * (lo.abs().max(hi.abs())).max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= 2.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) || mid == lo || mid == hi {
                return Ok(mid);
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `count` smallest eigenvalues, ascending.
    pub fn lowest(&self, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }
}
