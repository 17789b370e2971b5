//! Symmetric-tridiagonal eigenvalue machinery: Sturm counts, bisection
//! eigensolvers and Householder reduction of dense symmetric matrices.
//!
//! All functions here are pure and deterministic; there is no shared state,
//! so concurrent use is unrestricted.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("matrix must have at least one diagonal entry")]
    Empty,
    #[error("off-diagonal length {got} does not match diagonal length {n} minus one")]
    LengthMismatch { n: usize, got: usize },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("dense matrix must be square and symmetric")]
    NotSymmetric,
}

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self, MatrixError> {
        if diag.is_empty() {
            return Err(MatrixError::Empty);
        }
        if offdiag.len() != diag.len() - 1 {
            return Err(MatrixError::LengthMismatch {
                n: diag.len(),
                got: offdiag.len(),
            });
        }
        if !diag.iter().chain(offdiag.iter()).all(|v| v.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { diag, offdiag })
    }

    pub fn order(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    /// The matrix `-T`, whose spectrum is the negated spectrum of `T`.
    pub fn negated(&self) -> Self {
        Self {
            diag: self.diag.iter().map(|d| -d).collect(),
            offdiag: self.offdiag.clone(),
        }
    }

    /// Interval `[lo, hi]` certainly containing every eigenvalue.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.order();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Largest absolute entry; used to scale pivot guards and tolerances.
    pub fn scale(&self) -> f64 {
        self.diag
            .iter()
            .chain(self.offdiag.iter())
            .fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Default bisection tolerance: `1e-12 * max(1, spectral scale)`.
    pub fn default_tolerance(&self) -> f64 {
        1e-12 * self.scale().max(1.0)
    }
}

/// Dense real symmetric matrix in row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymmetricMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseSymmetricMatrix {
    /// Builds from row-major entries, requiring exact symmetry.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if entries.len() != n * n {
            return Err(MatrixError::NotSymmetric);
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(MatrixError::NotSymmetric);
                }
            }
        }
        Ok(Self { n, entries })
    }

    /// Builds from the lower triangle (row-major, `i >= j`), mirroring it.
    pub fn from_lower(n: usize, lower: impl Fn(usize, usize) -> f64) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = lower(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(MatrixError::NonFinite);
        }
        Ok(Self { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }
}

/// Number of eigenvalues of `t` strictly less than `x`.
///
/// Standard Sturm pivot recurrence. Pivots whose magnitude underflows a
/// guard proportional to the matrix scale are clamped to the guard with
/// their sign preserved; an exactly zero pivot is treated as positive,
/// which keeps the count strict (eigenvalues equal to `x` are not counted).
pub fn sturm_count(t: &TridiagonalMatrix, x: f64) -> usize {
    let guard = pivot_guard(t);
    let mut count = 0usize;
    let mut q = t.diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..t.order() {
        let safe = if q.abs() < guard {
            if q < 0.0 {
                -guard
            } else {
                guard
            }
        } else {
            q
        };
        q = (t.diag[i] - x) - t.offdiag[i - 1] * t.offdiag[i - 1] / safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn pivot_guard(t: &TridiagonalMatrix) -> f64 {
    let s = t.scale().max(1.0);
    (f64::EPSILON * f64::EPSILON * s).max(f64::MIN_POSITIVE)
}

/// Largest eigenvalue to within `tol`, by bisection on the Sturm count.
pub fn largest_eigenvalue(t: &TridiagonalMatrix, tol: f64) -> f64 {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = t.order();
    kth_eigenvalue_in(t, n - 1, t.gershgorin_bounds(), tol)
}

/// All `N` eigenvalues in ascending order, each to within `tol`.
pub fn all_eigenvalues(t: &TridiagonalMatrix, tol: f64) -> Vec<f64> {
    assert!(tol > 0.0, "tolerance must be positive");
    let n = t.order();
    let bounds = t.gershgorin_bounds();
    // The Gershgorin interval brackets the whole spectrum: 0 below, N above.
    debug_assert_eq!(sturm_count(t, bounds.0 - 1.0), 0);
    debug_assert_eq!(sturm_count(t, bounds.1 + 1.0), n);
    (0..n).map(|k| kth_eigenvalue_in(t, k, bounds, tol)).collect()
}

/// k-th eigenvalue (0-based, ascending) located by bisection inside `bounds`.
fn kth_eigenvalue_in(t: &TridiagonalMatrix, k: usize, bounds: (f64, f64), tol: f64) -> f64 {
    let (mut lo, mut hi) = bounds;
    if lo == hi {
        return lo;
    }
    // Invariant: count(lo) <= k < count(hi).
    lo -= tol;
    hi += tol;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        if sturm_count(t, mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Reduces a dense symmetric matrix to an orthogonally similar tridiagonal
/// matrix by Householder reflections.
pub fn householder_tridiagonalize(m: &DenseSymmetricMatrix) -> TridiagonalMatrix {
    let n = m.order();
    let mut a = m.entries.clone();
    let at = |a: &Vec<f64>, i: usize, j: usize| a[i * n + j];

    for k in 0..n.saturating_sub(2) {
        // Householder vector annihilating column k below the subdiagonal.
        let mut norm2 = 0.0;
        for i in (k + 1)..n {
            norm2 += at(&a, i, k) * at(&a, i, k);
        }
        let norm = norm2.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = at(&a, k + 1, k);
        let alpha = if x0 >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n];
        v[k + 1] = x0 - alpha;
        for i in (k + 2)..n {
            v[i] = at(&a, i, k);
        }
        let vtv: f64 = v.iter().map(|vi| vi * vi).sum();
        if vtv == 0.0 {
            continue;
        }

        // Symmetric rank-2 update A <- A - v q^T - q v^T with
        // p = 2 A v / v^T v and q = p - (v^T p / v^T v) v.
        let mut p = vec![0.0; n];
        for i in 0..n {
            let mut s = 0.0;
            for j in (k + 1)..n {
                s += at(&a, i, j) * v[j];
            }
            p[i] = 2.0 * s / vtv;
        }
        let vtp: f64 = v.iter().zip(p.iter()).map(|(vi, pi)| vi * pi).sum();
        let kappa = vtp / vtv;
        let q: Vec<f64> = p.iter().zip(v.iter()).map(|(pi, vi)| pi - kappa * vi).collect();
        for i in 0..n {
            for j in 0..n {
                a[i * n + j] -= v[i] * q[j] + q[i] * v[j];
            }
        }
    }

    let diag = (0..n).map(|i| at(&a, i, i)).collect();
    let offdiag = (0..n - 1).map(|i| at(&a, i + 1, i)).collect();
    TridiagonalMatrix::new(diag, offdiag).expect("reduction preserves finiteness")
}
