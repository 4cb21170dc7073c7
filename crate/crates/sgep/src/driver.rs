//! Outer loop: self-adaptive swap-count selection and the successive
//! two-stage solve that alternates a gradient-based stage with support
//! alteration until no swap count improves the objective.

use crate::alteration::{greedy_sa, partial_sa, SaOutcome};
use crate::core::{rayleigh, SGepInstance, SparseIterate};
use crate::error::Result;
use crate::gba::{self, GbaConfig, GbaTrace};
use crate::scalar::{cast, Scalar};

/// Relative strict-improvement gate for accepting a swap count.
pub const EPS_IMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaVariant {
    Partial,
    Greedy,
}

/// Tunables of the outer loop.
#[derive(Debug, Clone)]
pub struct DriverConfig<T> {
    pub gba: GbaConfig<T>,
    pub sa_variant: SaVariant,
    /// Safety cap on outer iterations; defaults to s + 1.
    pub max_outer: Option<usize>,
    /// Optional iteration cap for the GBA solves inside step-size trials.
    pub ss_gba_max_iter: Option<usize>,
}

impl<T: Scalar> Default for DriverConfig<T> {
    fn default() -> Self {
        DriverConfig {
            gba: GbaConfig::default(),
            sa_variant: SaVariant::Partial,
            max_outer: None,
            ss_gba_max_iter: None,
        }
    }
}

/// One outer iteration of the two-stage loop.
#[derive(Debug, Clone)]
pub struct OuterRecord<T> {
    pub t: usize,
    pub r_hat: usize,
    pub r: usize,
    /// Objective of the Stage-1 output x^(t).
    pub objective: T,
    /// Iterations of the GBA run that produced x^(t).
    pub gba_iterations: usize,
    pub ss_trials: usize,
}

/// Full trace of one successive two-stage run.
#[derive(Debug, Clone)]
pub struct OuterTrace<T> {
    pub records: Vec<OuterRecord<T>>,
    pub final_iterate: SparseIterate<T>,
    /// GBA iterations over the whole run, failed step-size trials included.
    pub gba_iterations_total: usize,
    pub ss_trials_total: usize,
    pub best_alpha_calls: usize,
}

impl<T: Scalar> OuterTrace<T> {
    pub fn objective(&self) -> T {
        self.records.last().unwrap().objective
    }

    pub fn outer_iterations(&self) -> usize {
        self.records.len()
    }
}

fn run_sa<T: Scalar>(
    variant: SaVariant,
    instance: &SGepInstance<T>,
    x: &[T],
    r: usize,
) -> Result<SaOutcome<T>> {
    match variant {
        SaVariant::Partial => partial_sa(&instance.pair, x, r),
        SaVariant::Greedy => greedy_sa(&instance.pair, x, r),
    }
}

struct SsOutcome<T> {
    r: usize,
    /// The GBA trace of the winning trial, reused as the next Stage-1 output.
    winner: Option<GbaTrace<T>>,
    trials: usize,
    gba_iterations: usize,
    best_alpha_calls: usize,
}

fn select_detailed<T: Scalar>(
    instance: &SGepInstance<T>,
    x: &SparseIterate<T>,
    r_hat: usize,
    cfg: &DriverConfig<T>,
) -> Result<SsOutcome<T>> {
    let base = rayleigh(&instance.pair, x.vector())?;
    let gate = base + cast::<T>(EPS_IMP) * T::one().max(base);
    let mut gba_cfg = cfg.gba.clone();
    if let Some(cap) = cfg.ss_gba_max_iter {
        gba_cfg.max_iter = cap;
    }
    let mut out = SsOutcome { r: 0, winner: None, trials: 0, gba_iterations: 0, best_alpha_calls: 0 };
    for r in (1..=r_hat).rev() {
        let altered = run_sa(cfg.sa_variant, instance, x.vector(), r)?;
        out.trials += 1;
        out.best_alpha_calls += altered.best_alpha_calls;
        // an altered start that violates GBA preconditions is a failed trial
        let Ok(trace) = gba::solve(instance, &altered.x, &gba_cfg) else {
            continue;
        };
        out.gba_iterations += trace.iterations;
        if trace.objective() > gate {
            out.r = r;
            out.winner = Some(trace);
            return Ok(out);
        }
    }
    Ok(out)
}

/// Largest r <= r_hat whose altered-then-resolved objective strictly beats
/// R(x); 0 when no swap count improves.
pub fn select_step_size<T: Scalar>(
    instance: &SGepInstance<T>,
    x: &SparseIterate<T>,
    r_hat: usize,
    cfg: &DriverConfig<T>,
) -> Result<usize> {
    Ok(select_detailed(instance, x, r_hat, cfg)?.r)
}

/// The successive two-stage algorithm. `x0` defaults to the deterministic
/// diagonal-ratio initial point. The winning trial inside the step-size
/// search is reused as the next Stage-1 output; GBA is deterministic, so
/// this matches recomputing it.
pub fn sa_gba<T: Scalar>(
    instance: &SGepInstance<T>,
    x0: Option<&[T]>,
    cfg: &DriverConfig<T>,
) -> Result<OuterTrace<T>> {
    let n = instance.dim();
    let start = match x0 {
        Some(v) => v.to_vec(),
        None => gba::default_init(&instance.pair),
    };
    let max_outer = cfg.max_outer.unwrap_or(instance.s + 1);

    let first = gba::solve(instance, &start, &cfg.gba)?;
    let mut gba_total = first.iterations;
    let mut ss_total = 0usize;
    let mut alpha_calls = 0usize;
    let mut records: Vec<OuterRecord<T>> = vec![];
    let mut current = first;
    let mut r_prev: Option<usize> = None;

    for t in 1..=max_outer {
        let sparsity = current.final_iterate.sparsity();
        let mut r_hat = sparsity.min(n - sparsity);
        if let Some(rp) = r_prev {
            r_hat = r_hat.min(rp.saturating_sub(1));
        }
        let ss = select_detailed(instance, &current.final_iterate, r_hat, cfg)?;
        ss_total += ss.trials;
        alpha_calls += ss.best_alpha_calls;
        gba_total += ss.gba_iterations;
        records.push(OuterRecord {
            t,
            r_hat,
            r: ss.r,
            objective: current.objective(),
            gba_iterations: current.iterations,
            ss_trials: ss.trials,
        });
        match ss.winner {
            Some(next) if ss.r > 0 => {
                r_prev = Some(ss.r);
                current = next;
            }
            _ => break,
        }
    }

    Ok(OuterTrace {
        records,
        final_iterate: current.final_iterate,
        gba_iterations_total: gba_total,
        ss_trials_total: ss_total,
        best_alpha_calls: alpha_calls,
    })
}
