//! Gradient-based Stage-1 solvers: the monotone-line-search proximity
//! gradient method, plus its two special cases (truncated power iteration
//! for B = I, and the fixed-step truncated Rayleigh flow).

use crate::core::{l0_norm, rayleigh, truncate, MatrixPair, SGepInstance, SparseIterate};
use crate::error::{Result, SgepError};
use crate::linalg::{dot, norm2, norm_inf, spectral_norm_sym};
use crate::scalar::{cast, Scalar};

/// Which Stage-1 solver a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbaVariant {
    PgsaMl,
    Tpm,
    Rifle,
}

/// Tunables shared by all Stage-1 solvers.
#[derive(Debug, Clone)]
pub struct GbaConfig<T> {
    pub variant: GbaVariant,
    /// Line-search strength a ≥ 0 in the sufficient-increase test.
    pub a: T,
    /// Backtracking factor in (0,1).
    pub eta: T,
    pub alpha_lo: T,
    pub alpha_hi: T,
    /// Fixed step for the Rayleigh-flow variant; must lie in (0, 1/(2‖B‖₂²)).
    pub rifle_alpha: T,
    /// Relative objective-change stopping tolerance.
    pub tol: T,
    pub max_iter: usize,
    /// Backtracked steps below this accept the previous iterate and stop.
    pub alpha_abort: T,
    /// When set, every outer iteration starts from this step instead of the
    /// Barzilai-Borwein estimate. Used by the power-iteration special case.
    pub fixed_alpha: Option<T>,
}

impl<T: Scalar> Default for GbaConfig<T> {
    fn default() -> Self {
        GbaConfig {
            variant: GbaVariant::PgsaMl,
            a: T::zero(),
            eta: cast(0.5),
            alpha_lo: cast(1e-10),
            alpha_hi: cast(1e10),
            rifle_alpha: cast(0.25),
            tol: cast(1e-10),
            max_iter: 5000,
            alpha_abort: cast(1e-15),
            fixed_alpha: None,
        }
    }
}

/// Run record of one Stage-1 solve.
#[derive(Debug, Clone)]
pub struct GbaTrace<T> {
    /// Accepted outer iterations.
    pub iterations: usize,
    /// R(x^(0)), R(x^(1)), ...; nondecreasing for a ≥ 0.
    pub objective_history: Vec<T>,
    pub final_iterate: SparseIterate<T>,
}

impl<T: Scalar> GbaTrace<T> {
    pub fn objective(&self) -> T {
        *self.objective_history.last().unwrap()
    }
}

/// Barzilai-Borwein initial step for one outer iteration.
///
/// With Δx = x_prev − x_prev2 and ΔBx = 2B·Δx, returns
/// clamp(‖Δx‖² / |⟨Δx, ΔBx⟩|) when the inner product is nonzero, otherwise
/// the upper clamp. The first iteration (no x_prev2) also gets the upper
/// clamp.
pub fn bb_alpha_init<T: Scalar>(
    x_prev: &[T],
    x_prev2: Option<&[T]>,
    pair: &MatrixPair<T>,
    cfg: &GbaConfig<T>,
) -> T {
    let Some(older) = x_prev2 else {
        return cfg.alpha_hi;
    };
    let dx: Vec<T> = x_prev.iter().zip(older).map(|(&a, &b)| a - b).collect();
    let two = cast::<T>(2.0);
    let dbx: Vec<T> = pair.b().matvec(&dx).into_iter().map(|v| v * two).collect();
    let denom = dot(&dx, &dbx);
    if denom == T::zero() {
        return cfg.alpha_hi;
    }
    let ratio = dot(&dx, &dx) / denom.abs();
    ratio.max(cfg.alpha_lo).min(cfg.alpha_hi)
}

/// One proximal-gradient trial step: truncate then renormalize
/// x + 2α(−Bx + Ax / R(x)). Returns None when the trial collapses to zero.
fn trial_step<T: Scalar>(pair: &MatrixPair<T>, x: &[T], r: T, alpha: T, s: usize) -> Option<Vec<T>> {
    let ax = pair.a().matvec(x);
    let bx = pair.b().matvec(x);
    let two_alpha = cast::<T>(2.0) * alpha;
    let y: Vec<T> = x
        .iter()
        .zip(ax.iter().zip(bx))
        .map(|(&xi, (&axi, bxi))| xi + two_alpha * (axi / r - bxi))
        .collect();
    let mut t = truncate(&y, s).ok()?;
    let nrm = norm2(&t);
    if nrm == T::zero() {
        return None;
    }
    for v in &mut t {
        *v = *v / nrm;
    }
    Some(t)
}

/// Projects x0 onto the feasible set (truncate to s nonzeros, unit norm) and
/// checks the remaining preconditions. Denser-than-s starts are accepted and
/// truncated: the first update step would truncate them anyway.
fn validate_x0<T: Scalar>(instance: &SGepInstance<T>, x0: &[T]) -> Result<Vec<T>> {
    let n = instance.dim();
    if x0.len() != n {
        return Err(SgepError::DimensionMismatch { expected: n, got: x0.len() });
    }
    if norm_inf(x0) == T::zero() {
        return Err(SgepError::BadInitialPoint("x0 is the zero vector".into()));
    }
    let mut x = if l0_norm(x0) > instance.s { truncate(x0, instance.s)? } else { x0.to_vec() };
    if instance.pair.a().quad(&x) == T::zero() {
        return Err(SgepError::BadInitialPoint("x0' A x0 = 0".into()));
    }
    let nrm = norm2(&x);
    for v in &mut x {
        *v = *v / nrm;
    }
    Ok(x)
}

/// PGSA with monotone line search. Every accepted iterate is unit-norm with
/// at most s nonzeros, and the objective history never decreases for a ≥ 0.
pub fn pgsa_ml<T: Scalar>(
    instance: &SGepInstance<T>,
    x0: &[T],
    cfg: &GbaConfig<T>,
) -> Result<GbaTrace<T>> {
    let pair = &instance.pair;
    let mut x = validate_x0(instance, x0)?;
    let mut x_prev2: Option<Vec<T>> = None;
    let mut r = rayleigh(pair, &x)?;
    let mut history = vec![r];
    let mut iterations = 0usize;
    let half_a = cfg.a * cast::<T>(0.5);

    'outer: for _ in 0..cfg.max_iter {
        if pair.a().quad(&x) == T::zero() {
            return Err(SgepError::DegenerateIterate);
        }
        let mut alpha = cfg
            .fixed_alpha
            .unwrap_or_else(|| bb_alpha_init(&x, x_prev2.as_deref(), pair, cfg));
        let accepted = loop {
            if let Some(cand) = trial_step(pair, &x, r, alpha, instance.s) {
                let r_cand = rayleigh(pair, &cand)?;
                if r_cand > T::zero() {
                    let d2 = cand
                        .iter()
                        .zip(&x)
                        .map(|(&a, &b)| (a - b) * (a - b))
                        .sum::<T>();
                    // acceptance is evaluated on the trial computed with the
                    // current alpha; the eta decrement only affects retries
                    if r_cand.recip() <= r.recip() - half_a * d2 {
                        break Some((cand, r_cand));
                    }
                }
            }
            alpha = alpha * cfg.eta;
            if alpha < cfg.alpha_abort {
                break None;
            }
        };
        let Some((next, r_next)) = accepted else {
            // stagnation: keep the previous iterate
            break 'outer;
        };
        iterations += 1;
        x_prev2 = Some(std::mem::replace(&mut x, next));
        let r_old = r;
        r = r_next;
        history.push(r);
        if (r - r_old).abs() <= cfg.tol * T::one().max(r) {
            break;
        }
    }

    Ok(GbaTrace {
        iterations,
        objective_history: history,
        final_iterate: SparseIterate::new(x)?,
    })
}

/// Truncated power iteration: the B = I, a = 0, α = 1/2 special case. Shares
/// the PGSA code path so the iterate sequences agree bit-for-bit.
pub fn tpm<T: Scalar>(
    instance: &SGepInstance<T>,
    x0: &[T],
    cfg: &GbaConfig<T>,
) -> Result<GbaTrace<T>> {
    if !instance.pair.b_is_identity() {
        return Err(SgepError::NotIdentityB);
    }
    let mut cfg = cfg.clone();
    cfg.variant = GbaVariant::Tpm;
    cfg.a = T::zero();
    cfg.fixed_alpha = Some(cast(0.5));
    pgsa_ml(instance, x0, &cfg)
}

/// Truncated Rayleigh flow: fixed step, no backtracking. If an update ever
/// decreases R, the step is halved once and retried; a second decrease stops
/// the run at the current iterate.
pub fn rifle<T: Scalar>(
    instance: &SGepInstance<T>,
    x0: &[T],
    cfg: &GbaConfig<T>,
) -> Result<GbaTrace<T>> {
    let pair = &instance.pair;
    let b_norm = spectral_norm_sym(pair.b());
    let bound = (cast::<T>(2.0) * b_norm * b_norm).recip();
    if cfg.rifle_alpha <= T::zero() || cfg.rifle_alpha >= bound {
        return Err(SgepError::InvalidStep {
            alpha: cfg.rifle_alpha.to_f64().unwrap_or(f64::NAN),
            bound: bound.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut x = validate_x0(instance, x0)?;
    let mut r = rayleigh(pair, &x)?;
    let mut history = vec![r];
    let mut iterations = 0usize;

    for _ in 0..cfg.max_iter {
        if pair.a().quad(&x) == T::zero() {
            return Err(SgepError::DegenerateIterate);
        }
        let mut step = cfg.rifle_alpha;
        let mut accepted = None;
        for _ in 0..2 {
            if let Some(cand) = trial_step(pair, &x, r, step, instance.s) {
                let r_cand = rayleigh(pair, &cand)?;
                if r_cand >= r {
                    accepted = Some((cand, r_cand));
                    break;
                }
            }
            step = step * cast::<T>(0.5);
        }
        let Some((next, r_next)) = accepted else {
            break;
        };
        iterations += 1;
        x = next;
        let r_old = r;
        r = r_next;
        history.push(r);
        if (r - r_old).abs() <= cfg.tol * T::one().max(r) {
            break;
        }
    }

    Ok(GbaTrace {
        iterations,
        objective_history: history,
        final_iterate: SparseIterate::new(x)?,
    })
}

/// Dispatches on `cfg.variant`.
pub fn solve<T: Scalar>(
    instance: &SGepInstance<T>,
    x0: &[T],
    cfg: &GbaConfig<T>,
) -> Result<GbaTrace<T>> {
    match cfg.variant {
        GbaVariant::PgsaMl => pgsa_ml(instance, x0, cfg),
        GbaVariant::Tpm => tpm(instance, x0, cfg),
        GbaVariant::Rifle => rifle(instance, x0, cfg),
    }
}

/// Deterministic default initial point: e_i with i the smallest index among
/// the maximizers of A_ii / B_ii. Feasible for every budget, and x0'Ax0 > 0
/// whenever A has a nonzero diagonal.
pub fn default_init<T: Scalar>(pair: &MatrixPair<T>) -> Vec<T> {
    let n = pair.dim();
    let mut best = 0usize;
    let mut best_val = pair.a()[(0, 0)] / pair.b()[(0, 0)];
    for i in 1..n {
        let v = pair.a()[(i, i)] / pair.b()[(i, i)];
        if v > best_val {
            best_val = v;
            best = i;
        }
    }
    let mut x = vec![T::zero(); n];
    x[best] = T::one();
    x
}
