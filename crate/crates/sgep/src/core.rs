//! Problem foundations: the validated (A, B) matrix pair, sparse iterates,
//! the generalized Rayleigh quotient, hard truncation, and support
//! arithmetic including the ℓ0 distance.

use crate::error::{Result, SgepError};
use crate::linalg::{cholesky, norm_inf, Mat};
use crate::scalar::{cast, Scalar};

/// Relative symmetry tolerance accepted (and silently repaired) at load.
pub const EPS_SYM: f64 = 1e-10;
/// Relative shift used when validating positive semidefiniteness of A.
pub const EPS_PSD: f64 = 1e-8;

/// A validated sGEP matrix pair: A symmetric PSD, B symmetric PD.
#[derive(Debug, Clone)]
pub struct MatrixPair<T> {
    n: usize,
    a: Mat<T>,
    b: Mat<T>,
}

impl<T: Scalar> MatrixPair<T> {
    /// Validates and stores a pair. Both matrices are symmetrized after the
    /// asymmetry gate; B must admit a Cholesky factorization and A must pass
    /// a shifted-Cholesky PSD check.
    pub fn new(mut a: Mat<T>, mut b: Mat<T>) -> Result<Self> {
        if !a.is_square() {
            return Err(SgepError::DimensionMismatch { expected: a.nrows(), got: a.ncols() });
        }
        if !b.is_square() || b.nrows() != a.nrows() {
            return Err(SgepError::DimensionMismatch { expected: a.nrows(), got: b.nrows() });
        }
        let n = a.nrows();
        if n == 0 {
            return Err(SgepError::InvalidSparsity { s: 0, n: 0 });
        }
        let eps_sym = cast::<T>(EPS_SYM);
        for (m, name) in [(&a, "A"), (&b, "B")] {
            let scale = T::one().max(m.max_abs());
            let asym = m.max_asymmetry();
            if asym > eps_sym * scale {
                return Err(SgepError::NotSymmetric {
                    name,
                    asym: asym.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        a.symmetrize();
        b.symmetrize();
        cholesky(&b, "B")?;
        // PSD gate: A + eps*scale*I must be PD.
        let shift = cast::<T>(EPS_PSD) * T::one().max(a.max_abs());
        let mut shifted = a.clone();
        for i in 0..n {
            shifted[(i, i)] = shifted[(i, i)] + shift;
        }
        cholesky(&shifted, "A")
            .map_err(|_| SgepError::NotPositiveSemidefinite { name: "A" })?;
        Ok(MatrixPair { n, a, b })
    }

    /// Pair with B = I.
    pub fn with_identity_b(a: Mat<T>) -> Result<Self> {
        let n = a.nrows();
        Self::new(a, Mat::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &Mat<T> {
        &self.a
    }

    pub fn b(&self) -> &Mat<T> {
        &self.b
    }

    pub fn b_is_identity(&self) -> bool {
        self.b.is_identity_within(cast::<T>(1e-12))
    }
}

/// One sGEP instance: a pair plus the sparsity budget.
#[derive(Debug, Clone)]
pub struct SGepInstance<T> {
    pub pair: MatrixPair<T>,
    pub s: usize,
}

impl<T: Scalar> SGepInstance<T> {
    pub fn new(pair: MatrixPair<T>, s: usize) -> Result<Self> {
        let n = pair.dim();
        if s < 1 || s > n {
            return Err(SgepError::InvalidSparsity { s, n });
        }
        Ok(SGepInstance { pair, s })
    }

    pub fn dim(&self) -> usize {
        self.pair.dim()
    }
}

/// Nonzero vector with its support recomputed from the entries.
#[derive(Debug, Clone)]
pub struct SparseIterate<T> {
    x: Vec<T>,
    support: Vec<usize>,
}

impl<T: Scalar> SparseIterate<T> {
    pub fn new(x: Vec<T>) -> Result<Self> {
        if norm_inf(&x) == T::zero() {
            return Err(SgepError::ZeroVector);
        }
        let support = support(&x);
        Ok(SparseIterate { x, support })
    }

    pub fn vector(&self) -> &[T] {
        &self.x
    }

    pub fn into_vector(self) -> Vec<T> {
        self.x
    }

    /// Sorted 0-based support.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn sparsity(&self) -> usize {
        self.support.len()
    }
}

/// Generalized Rayleigh quotient (xᵀAx)/(xᵀBx).
///
/// Tiny negative numerators from rounding are clamped to zero.
pub fn rayleigh<T: Scalar>(pair: &MatrixPair<T>, x: &[T]) -> Result<T> {
    if x.len() != pair.dim() {
        return Err(SgepError::DimensionMismatch { expected: pair.dim(), got: x.len() });
    }
    if norm_inf(x) == T::zero() {
        return Err(SgepError::ZeroVector);
    }
    let num = pair.a.quad(x);
    let den = pair.b.quad(x);
    let r = num / den;
    Ok(if r < T::zero() { T::zero() } else { r })
}

/// Keeps the s largest-magnitude entries of x, zeroing the rest.
/// Magnitude ties are broken in favor of the smaller index.
pub fn truncate<T: Scalar>(x: &[T], s: usize) -> Result<Vec<T>> {
    let n = x.len();
    if s < 1 || s > n {
        return Err(SgepError::InvalidSparsity { s, n });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        x[j].abs().partial_cmp(&x[i].abs()).unwrap().then(i.cmp(&j))
    });
    let mut out = vec![T::zero(); n];
    for &i in order.iter().take(s) {
        out[i] = x[i];
    }
    Ok(out)
}

/// τ(x, y) = ‖x − y‖₀: number of coordinates where x and y differ exactly.
pub fn l0_distance<T: Scalar>(x: &[T], y: &[T]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(SgepError::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// Sorted 0-based index set of the nonzero entries.
pub fn support<T: Scalar>(x: &[T]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter_map(|(i, &v)| (v != T::zero()).then_some(i))
        .collect()
}

/// Sorted 0-based index set of the zero entries.
pub fn zero_set<T: Scalar>(x: &[T]) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter_map(|(i, &v)| (v == T::zero()).then_some(i))
        .collect()
}

/// ‖x‖₀ under the library's exact-zero convention.
pub fn l0_norm<T: Scalar>(x: &[T]) -> usize {
    x.iter().filter(|&&v| v != T::zero()).count()
}
