//! Exact small-instance solver: enumerate all size-s supports and take the
//! best dense generalized eigenvalue of the principal submatrix pair.
//! Enumerating size exactly s suffices because the feasible sets nest:
//! any |S| < s support sits inside some |S| = s support with at least the
//! same submatrix optimum.

use crate::core::SGepInstance;
use crate::error::{Result, SgepError};
use crate::linalg::{cholesky, jacobi_eigh, solve_lower, solve_lower_transpose, Mat};
use crate::scalar::{cast, Scalar};

/// Default cap on the number of supports the oracle may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct OracleResult<T> {
    /// Optimal Rayleigh quotient.
    pub value: T,
    /// Sorted 0-based optimal support (lexicographically smallest on ties).
    pub support: Vec<usize>,
    /// An optimal solution, B-normalized so x'Bx = 1, zero off support.
    pub vector: Vec<T>,
    /// Number of supports visited; equals C(n, s).
    pub enumerated: u64,
}

/// Largest generalized eigenpair of a dense pair via Cholesky whitening:
/// factor b = LL', eigensolve L⁻¹ a L⁻ᵀ, map back. The returned vector
/// satisfies v' b v = 1 and has its largest-magnitude entry positive.
pub fn dense_gev<T: Scalar>(a_sub: &Mat<T>, b_sub: &Mat<T>) -> Result<(T, Vec<T>)> {
    let k = a_sub.nrows();
    let l = cholesky(b_sub, "B")?;
    // W = L⁻¹ A, then C = (L⁻¹ Wᵀ)ᵀ = L⁻¹ A L⁻ᵀ
    let mut w = Mat::zeros(k, k);
    for col in 0..k {
        let a_col: Vec<T> = (0..k).map(|r| a_sub[(r, col)]).collect();
        let z = solve_lower(&l, &a_col);
        for r in 0..k {
            w[(r, col)] = z[r];
        }
    }
    let mut c = Mat::zeros(k, k);
    for col in 0..k {
        let w_row: Vec<T> = (0..k).map(|r| w[(col, r)]).collect();
        let z = solve_lower(&l, &w_row);
        for r in 0..k {
            c[(col, r)] = z[r];
        }
    }
    c.symmetrize();
    let (vals, vecs) = jacobi_eigh(&c);
    let u: Vec<T> = (0..k).map(|r| vecs[(r, 0)]).collect();
    let mut v = solve_lower_transpose(&l, &u);
    // normalize v'Bv = 1 exactly and fix the sign
    let nrm = b_sub.quad(&v).sqrt();
    let mut lead = 0usize;
    for (i, &vi) in v.iter().enumerate() {
        if vi.abs() > v[lead].abs() {
            lead = i;
        }
    }
    let sign = if v[lead] < T::zero() { -T::one() } else { T::one() };
    for vi in &mut v {
        *vi = *vi * sign / nrm;
    }
    Ok((vals[0], v))
}

/// C(n, s), saturating at u64::MAX.
pub fn binomial(n: usize, s: usize) -> u64 {
    if s > n {
        return 0;
    }
    let s = s.min(n - s);
    let mut acc: u128 = 1;
    for i in 0..s {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn exact_sgep<T: Scalar>(instance: &SGepInstance<T>) -> Result<OracleResult<T>> {
    exact_sgep_with_budget(instance, DEFAULT_BUDGET)
}

pub fn exact_sgep_with_budget<T: Scalar>(
    instance: &SGepInstance<T>,
    budget: u64,
) -> Result<OracleResult<T>> {
    let n = instance.dim();
    let s = instance.s;
    let total = binomial(n, s);
    if total > budget {
        return Err(SgepError::BudgetExceeded { n, s, budget });
    }
    let tie = cast::<T>(1e-12);
    let mut best_value = T::neg_infinity();
    let mut best_support: Vec<usize> = vec![];
    let mut best_vector: Vec<T> = vec![];
    let mut enumerated = 0u64;

    let mut idx: Vec<usize> = (0..s).collect();
    loop {
        enumerated += 1;
        let a_sub = instance.pair.a().principal_submatrix(&idx);
        let b_sub = instance.pair.b().principal_submatrix(&idx);
        // B's principal submatrices inherit positive definiteness
        let (value, vec_sub) = dense_gev(&a_sub, &b_sub)?;
        // lexicographic enumeration: the first attainer of the max survives
        let gate = if best_support.is_empty() {
            T::neg_infinity()
        } else {
            best_value + tie * T::one().max(best_value.abs())
        };
        if value > gate {
            best_value = value;
            best_support = idx.clone();
            let mut full = vec![T::zero(); n];
            for (pos, &i) in idx.iter().enumerate() {
                full[i] = vec_sub[pos];
            }
            best_vector = full;
        }
        // next lexicographic s-combination of {0..n-1}
        let mut advanced = false;
        let mut pos = s;
        while pos > 0 {
            pos -= 1;
            if idx[pos] < n - (s - pos) {
                idx[pos] += 1;
                for later in (pos + 1)..s {
                    idx[later] = idx[later - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Ok(OracleResult {
                value: best_value,
                support: best_support,
                vector: best_vector,
                enumerated,
            });
        }
    }
}
