use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sgep::datagen::random_sparse_unit;
use sgep::driver::{sa_gba, DriverConfig, SaVariant};
use sgep::gba::{self, GbaConfig, GbaVariant};
use sgep::io::{load_matrix, load_vector};
use sgep::oracle::exact_sgep_with_budget;
use sgep::{rayleigh, support, MatrixPair, SGepInstance};

use crate::args::{SaVariantArg, SolveArgs, Solver};
use crate::report::{ConfigEcho, SolveReport};
use crate::{CliError, CliResult};

pub fn load_pair(a_path: &Path, b_path: Option<&Path>) -> CliResult<MatrixPair<f64>> {
    let a = load_matrix::<f64>(a_path)?;
    let pair = match b_path {
        Some(p) => MatrixPair::new(a, load_matrix::<f64>(p)?)?,
        None => MatrixPair::with_identity_b(a)?,
    };
    Ok(pair)
}

fn initial_point(args: &SolveArgs, instance: &SGepInstance<f64>) -> CliResult<Vec<f64>> {
    match args.init.as_str() {
        "default" => Ok(gba::default_init(&instance.pair)),
        "seeded-random" => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            Ok(random_sparse_unit(instance.dim(), instance.s, &mut rng))
        }
        other => {
            let Some(path) = other.strip_prefix("csv:") else {
                return Err(CliError::usage(format!(
                    "unknown --init {other:?}; expected default, seeded-random, or csv:<path>"
                )));
            };
            let mut x = load_vector::<f64>(Path::new(path))?;
            for v in &mut x {
                if v.abs() <= args.zero_tol {
                    *v = 0.0;
                }
            }
            Ok(x)
        }
    }
}

fn gba_config(args: &SolveArgs, variant: GbaVariant) -> GbaConfig<f64> {
    GbaConfig {
        variant,
        a: args.line_search_a,
        eta: args.eta,
        rifle_alpha: args.rifle_alpha,
        tol: args.tol,
        max_iter: args.max_iter,
        ..GbaConfig::default()
    }
}

fn gba_variant(solver: Solver) -> GbaVariant {
    match solver {
        Solver::Tpm | Solver::SaTpm => GbaVariant::Tpm,
        Solver::Rifle | Solver::SaRifle => GbaVariant::Rifle,
        _ => GbaVariant::PgsaMl,
    }
}

pub fn run_solve(args: &SolveArgs) -> CliResult<SolveReport> {
    let start = Instant::now();
    let pair = load_pair(&args.matrix_a, args.matrix_b.as_deref())?;
    let instance = SGepInstance::new(pair, args.sparsity)?;
    let n = instance.dim();

    let (objective, vector, outer, gba_total, ss_trials, alpha_calls) = match args.solver {
        Solver::Oracle => {
            let res = exact_sgep_with_budget(&instance, args.budget)?;
            (res.value, res.vector, 0, 0, 0, 0)
        }
        Solver::Tpm | Solver::Rifle | Solver::PgsaMl => {
            let x0 = initial_point(args, &instance)?;
            let cfg = gba_config(args, gba_variant(args.solver));
            let trace = gba::solve(&instance, &x0, &cfg)?;
            let obj = trace.objective();
            (obj, trace.final_iterate.into_vector(), 1, trace.iterations, 0, 0)
        }
        Solver::SaTpm | Solver::SaRifle | Solver::SaPgsaMl => {
            let x0 = initial_point(args, &instance)?;
            let cfg = DriverConfig {
                gba: gba_config(args, gba_variant(args.solver)),
                sa_variant: match args.sa_variant {
                    SaVariantArg::Partial => SaVariant::Partial,
                    SaVariantArg::Greedy => SaVariant::Greedy,
                },
                ..DriverConfig::default()
            };
            let trace = sa_gba(&instance, Some(&x0), &cfg)?;
            let obj = trace.objective();
            (
                obj,
                trace.final_iterate.vector().to_vec(),
                trace.outer_iterations(),
                trace.gba_iterations_total,
                trace.ss_trials_total,
                trace.best_alpha_calls,
            )
        }
    };

    let objective_check = rayleigh(&instance.pair, &vector)?;
    debug_assert!((objective_check - objective).abs() <= 1e-10 * objective.max(1.0));

    Ok(SolveReport {
        schema: 1,
        solver: args.solver.name().to_string(),
        n,
        s: args.sparsity,
        objective,
        support: support(&vector).iter().map(|i| i + 1).collect(),
        vector,
        outer_iterations: outer,
        gba_iterations_total: gba_total,
        ss_trials,
        best_alpha_calls: alpha_calls,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        seed: args.seed,
        config: ConfigEcho {
            init: args.init.clone(),
            zero_tol: args.zero_tol,
            max_iter: args.max_iter,
            tol: args.tol,
            line_search_a: args.line_search_a,
            eta: args.eta,
            rifle_alpha: args.rifle_alpha,
            sa_variant: format!("{:?}", args.sa_variant).to_lowercase(),
            budget: args.budget,
        },
    })
}
