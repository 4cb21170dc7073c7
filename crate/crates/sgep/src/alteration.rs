//! Stage-2 support alteration: the closed-form maximizer of the
//! one-dimensional swap objective, single-swap application, and the greedy
//! and partial multi-swap procedures.

use crate::core::{l0_norm, support, zero_set, MatrixPair};
use crate::error::{Result, SgepError};
use crate::linalg::norm_inf;
use crate::scalar::{cast, Scalar};

/// Relative gate for treating a 2x2 determinant of Q as zero.
pub const EPS_DET: f64 = 1e-12;

/// Shape of the maximizer set of the one-dimensional swap objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaCase<T> {
    /// Every real alpha attains the (constant) objective.
    AllReals,
    /// Every nonzero alpha attains it (the swap emptied the vector).
    AllRealsExceptZero,
    /// A unique finite maximizer.
    Finite(T),
    /// The supremum is approached as alpha goes to plus/minus infinity.
    Infinite,
}

/// Maximizer set plus the attained (or limit) objective value M.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSolution<T> {
    pub case: AlphaCase<T>,
    pub m_value: T,
}

/// The 2x3 array of quadratic-form coefficients behind the closed form:
/// row 0 = (A_ii, (Ay)_i, y'Ay), row 1 = (B_ii, (By)_i, y'By),
/// where y is x with its j-th entry zeroed.
#[derive(Debug, Clone, Copy)]
pub struct QMatrix<T> {
    pub q: [[T; 3]; 2],
}

impl<T: Scalar> QMatrix<T> {
    pub fn build(pair: &MatrixPair<T>, y: &[T], i: usize) -> Self {
        let ay = pair.a().matvec(y);
        let by = pair.b().matvec(y);
        let yay = y.iter().zip(&ay).map(|(&u, &v)| u * v).sum();
        let yby = y.iter().zip(&by).map(|(&u, &v)| u * v).sum();
        QMatrix {
            q: [
                [pair.a()[(i, i)], ay[i], yay],
                [pair.b()[(i, i)], by[i], yby],
            ],
        }
    }

    /// Determinant of the 2x2 block on columns (c1, c2).
    #[inline]
    pub fn det(&self, c1: usize, c2: usize) -> T {
        self.q[0][c1] * self.q[1][c2] - self.q[0][c2] * self.q[1][c1]
    }

    /// The swap objective as a function of alpha.
    #[inline]
    pub fn objective(&self, alpha: T) -> T {
        let two = cast::<T>(2.0);
        let num = self.q[0][0] * alpha * alpha + two * self.q[0][1] * alpha + self.q[0][2];
        let den = self.q[1][0] * alpha * alpha + two * self.q[1][1] * alpha + self.q[1][2];
        num / den
    }

    /// Relative zero gate for the determinants.
    pub fn det_gate(&self) -> T {
        let mut scale = T::one();
        for row in &self.q {
            for &v in row {
                scale = scale.max(v.abs());
            }
        }
        cast::<T>(EPS_DET) * scale * scale
    }
}

/// Planned swaps of one alteration run, in application order.
#[derive(Debug, Clone)]
pub struct SwapPlan<T> {
    pub out_indices: Vec<usize>,
    pub in_indices: Vec<usize>,
    pub solutions: Vec<AlphaSolution<T>>,
}

/// Result of a greedy or partial alteration.
#[derive(Debug, Clone)]
pub struct SaOutcome<T> {
    pub x: Vec<T>,
    pub plan: SwapPlan<T>,
    /// Number of one-dimensional closed-form solves performed.
    pub best_alpha_calls: usize,
}

/// Closed-form maximizer of alpha -> R(x - x_j e_j + alpha e_i).
///
/// Requires x nonzero, x_i = 0, and j distinct from i; j may already be
/// outside the support, in which case y = x.
pub fn best_alpha<T: Scalar>(
    pair: &MatrixPair<T>,
    x: &[T],
    j: usize,
    i: usize,
) -> Result<AlphaSolution<T>> {
    let n = pair.dim();
    if j >= n {
        return Err(SgepError::IndexOutOfRange { index: j, n });
    }
    if i >= n || i == j {
        return Err(SgepError::IndexOutOfRange { index: i, n });
    }
    if x[i] != T::zero() {
        return Err(SgepError::IntoSupportNotZero { index: i });
    }
    let mut y = x.to_vec();
    y[j] = T::zero();
    let diag_ratio = pair.a()[(i, i)] / pair.b()[(i, i)];
    if l0_norm(&y) == 0 {
        return Ok(AlphaSolution { case: AlphaCase::AllRealsExceptZero, m_value: diag_ratio });
    }
    let q = QMatrix::build(pair, &y, i);
    let gate = q.det_gate();
    let d12 = q.det(0, 1);
    let d13 = q.det(0, 2);
    let d23 = q.det(1, 2);
    if d12.abs() <= gate {
        if d13.abs() <= gate {
            // constant quotient; both rows of Q are proportional
            return Ok(AlphaSolution { case: AlphaCase::AllReals, m_value: q.q[0][2] / q.q[1][2] });
        }
        if d13 < T::zero() {
            let alpha = -d23 / d13;
            return Ok(AlphaSolution { case: AlphaCase::Finite(alpha), m_value: q.objective(alpha) });
        }
        return Ok(AlphaSolution { case: AlphaCase::Infinite, m_value: diag_ratio });
    }
    let disc = d13 * d13 - cast::<T>(4.0) * d12 * d23;
    debug_assert!(disc > T::zero(), "swap discriminant must be positive");
    let alpha = (-d13 - disc.max(T::zero()).sqrt()) / (cast::<T>(2.0) * d12);
    Ok(AlphaSolution { case: AlphaCase::Finite(alpha), m_value: q.objective(alpha) })
}

/// Applies one swap: zeroes entry j and writes the maximizing value at i.
/// The unbounded case collapses to e_i; the constant cases write 1.
pub fn apply_swap<T: Scalar>(
    x: &[T],
    j: usize,
    i: usize,
    sol: &AlphaSolution<T>,
) -> Result<Vec<T>> {
    if x[i] != T::zero() {
        return Err(SgepError::IntoSupportNotZero { index: i });
    }
    match sol.case {
        AlphaCase::Infinite => {
            let mut out = vec![T::zero(); x.len()];
            out[i] = T::one();
            Ok(out)
        }
        AlphaCase::Finite(v) => {
            let mut out = x.to_vec();
            out[j] = T::zero();
            out[i] = v;
            Ok(out)
        }
        AlphaCase::AllReals | AlphaCase::AllRealsExceptZero => {
            let mut out = x.to_vec();
            out[j] = T::zero();
            out[i] = T::one();
            Ok(out)
        }
    }
}

fn check_r<T: Scalar>(x: &[T], r: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if norm_inf(x) == T::zero() {
        return Err(SgepError::ZeroVector);
    }
    let s_idx = support(x);
    let z_idx = zero_set(x);
    let max = s_idx.len().min(z_idx.len());
    if r > max {
        return Err(SgepError::InvalidR { r, max });
    }
    Ok((s_idx, z_idx))
}

/// Options for the greedy alteration.
#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyOptions {
    /// Recompute selection scores at the current iterate each round instead
    /// of freezing them at the input vector. Off by default.
    pub refresh_scores: bool,
}

/// Greedy alteration: scores all (out, in) pairs once at the input vector,
/// then performs r swaps, each re-solving the one-dimensional problem at the
/// current iterate. Score ties break lexicographically on (j, i).
pub fn greedy_sa<T: Scalar>(pair: &MatrixPair<T>, x: &[T], r: usize) -> Result<SaOutcome<T>> {
    greedy_sa_with(pair, x, r, GreedyOptions::default())
}

pub fn greedy_sa_with<T: Scalar>(
    pair: &MatrixPair<T>,
    x: &[T],
    r: usize,
    opts: GreedyOptions,
) -> Result<SaOutcome<T>> {
    let (s_idx, z_idx) = check_r(x, r)?;
    let mut calls = 0usize;
    let mut plan = SwapPlan { out_indices: vec![], in_indices: vec![], solutions: vec![] };
    if r == 0 {
        return Ok(SaOutcome { x: x.to_vec(), plan, best_alpha_calls: calls });
    }

    let mut scores: Vec<((usize, usize), T)> = Vec::with_capacity(s_idx.len() * z_idx.len());
    for &j in &s_idx {
        for &i in &z_idx {
            let sol = best_alpha(pair, x, j, i)?;
            calls += 1;
            scores.push(((j, i), sol.m_value));
        }
    }

    let mut cur = x.to_vec();
    let mut used_j: Vec<usize> = vec![];
    let mut used_i: Vec<usize> = vec![];
    for _ in 0..r {
        if opts.refresh_scores {
            scores.clear();
            for &j in &s_idx {
                if used_j.contains(&j) {
                    continue;
                }
                for &i in &z_idx {
                    if used_i.contains(&i) {
                        continue;
                    }
                    let sol = best_alpha(pair, &cur, j, i)?;
                    calls += 1;
                    scores.push(((j, i), sol.m_value));
                }
            }
        }
        let mut best: Option<((usize, usize), T)> = None;
        for &((j, i), m) in &scores {
            if used_j.contains(&j) || used_i.contains(&i) {
                continue;
            }
            match best {
                Some((_, bm)) if m <= bm => {}
                _ => best = Some(((j, i), m)),
            }
        }
        let ((j, i), _) = best.expect("r <= min(|S|,|Z|) leaves a pair available");
        let sol = best_alpha(pair, &cur, j, i)?;
        calls += 1;
        cur = apply_swap(&cur, j, i, &sol)?;
        used_j.push(j);
        used_i.push(i);
        plan.out_indices.push(j);
        plan.in_indices.push(i);
        plan.solutions.push(sol);
    }
    Ok(SaOutcome { x: cur, plan, best_alpha_calls: calls })
}

/// Partial alteration: the r smallest-magnitude support entries leave in
/// magnitude order; each round scans the remaining zero set for the best
/// into-support index at the current iterate.
pub fn partial_sa<T: Scalar>(pair: &MatrixPair<T>, x: &[T], r: usize) -> Result<SaOutcome<T>> {
    let (s_idx, z_idx) = check_r(x, r)?;
    let mut calls = 0usize;
    let mut plan = SwapPlan { out_indices: vec![], in_indices: vec![], solutions: vec![] };
    if r == 0 {
        return Ok(SaOutcome { x: x.to_vec(), plan, best_alpha_calls: calls });
    }

    let mut out_order = s_idx.clone();
    out_order.sort_by(|&a, &b| {
        x[a].abs().partial_cmp(&x[b].abs()).unwrap().then(a.cmp(&b))
    });
    out_order.truncate(r);

    let mut cur = x.to_vec();
    let mut used_i: Vec<usize> = vec![];
    for &j in &out_order {
        let mut best: Option<(usize, AlphaSolution<T>)> = None;
        for &i in &z_idx {
            if used_i.contains(&i) {
                continue;
            }
            let sol = best_alpha(pair, &cur, j, i)?;
            calls += 1;
            match &best {
                Some((_, b)) if sol.m_value <= b.m_value => {}
                _ => best = Some((i, sol)),
            }
        }
        let (i, sol) = best.expect("r <= min(|S|,|Z|) leaves an index available");
        cur = apply_swap(&cur, j, i, &sol)?;
        used_i.push(i);
        plan.out_indices.push(j);
        plan.in_indices.push(i);
        plan.solutions.push(sol);
    }
    Ok(SaOutcome { x: cur, plan, best_alpha_calls: calls })
}
