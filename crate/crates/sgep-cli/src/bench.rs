use std::fmt::Write as _;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sgep::datagen::{
    block_toeplitz_cov, cca_pair, explained_variance_proportion, fda_pair, gaussian_cov, pitprops,
    recovery_rate, spike_model, BlockCovSpec, SpikeModelSpec,
};
use sgep::driver::{sa_gba, DriverConfig};
use sgep::gba::{self, GbaConfig, GbaVariant};
use sgep::{MatrixPair, SGepInstance};

use crate::args::{BenchArgs, Suite};
use crate::CliResult;

pub const CSV_HEADER: &str = "suite,seed,solver,n,m,s,sigma,metric,value,wall_time_ms";

/// One tidy output row; empty fields mean "not applicable to this suite".
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub suite: &'static str,
    pub seed: u64,
    pub solver: &'static str,
    pub n: usize,
    pub m: Option<usize>,
    pub s: usize,
    pub sigma: Option<f64>,
    pub metric: &'static str,
    pub value: f64,
    pub wall_time_ms: f64,
}

impl BenchRow {
    pub fn csv_line(&self) -> String {
        let mut out = String::new();
        let m = self.m.map(|v| v.to_string()).unwrap_or_default();
        let sigma = self.sigma.map(|v| v.to_string()).unwrap_or_default();
        let _ = write!(
            out,
            "{},{},{},{},{},{},{},{},{},{:.3}",
            self.suite,
            self.seed,
            self.solver,
            self.n,
            m,
            self.s,
            sigma,
            self.metric,
            self.value,
            self.wall_time_ms
        );
        out
    }
}

/// Runs one named solver from the default initial point.
fn run_solver(
    solver: &'static str,
    instance: &SGepInstance<f64>,
) -> sgep::Result<(f64, Vec<f64>, f64)> {
    let start = Instant::now();
    let variant = if solver.ends_with("tpm") { GbaVariant::Tpm } else { GbaVariant::PgsaMl };
    let gba_cfg = GbaConfig { variant, ..GbaConfig::default() };
    let (obj, x) = if solver.starts_with("sa-") {
        let cfg = DriverConfig { gba: gba_cfg, ..DriverConfig::default() };
        let trace = sa_gba(instance, None, &cfg)?;
        (trace.objective(), trace.final_iterate.vector().to_vec())
    } else {
        let x0 = gba::default_init(&instance.pair);
        let trace = gba::solve(instance, &x0, &gba_cfg)?;
        (trace.objective(), trace.final_iterate.into_vector())
    };
    Ok((obj, x, start.elapsed().as_secs_f64() * 1e3))
}

fn pitprops_suite(seed: u64) -> CliResult<Vec<BenchRow>> {
    let a = pitprops();
    let pair = MatrixPair::with_identity_b(a.clone())?;
    let mut rows = vec![];
    for s in 1..=13 {
        let instance = SGepInstance::new(pair.clone(), s)?;
        for solver in ["tpm", "sa-tpm"] {
            let (_, x, ms) = run_solver(solver, &instance)?;
            rows.push(BenchRow {
                suite: "pitprops",
                seed,
                solver,
                n: 13,
                m: None,
                s,
                sigma: None,
                metric: "explained_variance",
                value: explained_variance_proportion(&a, &x)?,
                wall_time_ms: ms,
            });
        }
    }
    Ok(rows)
}

fn gaussian_trial(seed: u64) -> CliResult<Vec<BenchRow>> {
    let mut rows = vec![];
    for (n, m, s) in [(20, 50, 5), (20, 200, 5), (50, 100, 10)] {
        let pair = gaussian_cov(n, m, seed)?;
        let instance = SGepInstance::new(pair, s)?;
        for solver in ["tpm", "sa-tpm"] {
            let (obj, _, ms) = run_solver(solver, &instance)?;
            rows.push(BenchRow {
                suite: "gaussian",
                seed,
                solver,
                n,
                m: Some(m),
                s,
                sigma: None,
                metric: "objective",
                value: obj,
                wall_time_ms: ms,
            });
        }
    }
    Ok(rows)
}

fn spike_trial(seed: u64, sigma: f64) -> CliResult<Vec<BenchRow>> {
    let spec = SpikeModelSpec { sigma, ..SpikeModelSpec::new(30, 50, 5, sigma, seed) };
    let model = spike_model(&spec)?;
    let instance = SGepInstance::new(model.pair, 5)?;
    let (_, x, ms) = run_solver("sa-tpm", &instance)?;
    Ok(vec![BenchRow {
        suite: "spike",
        seed,
        solver: "sa-tpm",
        n: 30,
        m: Some(50),
        s: 5,
        sigma: Some(sigma),
        metric: "recovery",
        value: recovery_rate(&x, &model.truth, 5)?,
        wall_time_ms: ms,
    }])
}

fn fda_suite(seed: u64) -> CliResult<Vec<BenchRow>> {
    let n = 40;
    let cov = block_toeplitz_cov(&BlockCovSpec::new(n))?;
    let mu1 = vec![0.0; n];
    let mut mu2 = vec![0.0; n];
    for j in (1..n).step_by(2) {
        mu2[j] = 0.5;
    }
    let pair = fda_pair(&mu1, &mu2, &cov, &cov)?;
    let instance = SGepInstance::new(pair, 10)?;
    let mut rows = vec![];
    for solver in ["pgsa-ml", "sa-pgsa-ml"] {
        let (obj, _, ms) = run_solver(solver, &instance)?;
        rows.push(BenchRow {
            suite: "fda",
            seed,
            solver,
            n,
            m: None,
            s: 10,
            sigma: None,
            metric: "objective",
            value: obj,
            wall_time_ms: ms,
        });
    }
    Ok(rows)
}

fn cca_trial(seed: u64) -> CliResult<Vec<BenchRow>> {
    let p = 40;
    let cov = block_toeplitz_cov(&BlockCovSpec::new(p))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vx = sgep::datagen::random_sparse_unit(p, 8, &mut rng);
    let vy = sgep::datagen::random_sparse_unit(p, 8, &mut rng);
    let pair = cca_pair(&cov, &cov, &vx, &vy, 0.9)?;
    let instance = SGepInstance::new(pair, 16)?;
    let mut rows = vec![];
    for solver in ["pgsa-ml", "sa-pgsa-ml"] {
        let (obj, _, ms) = run_solver(solver, &instance)?;
        rows.push(BenchRow {
            suite: "cca",
            seed,
            solver,
            n: 2 * p,
            m: None,
            s: 16,
            sigma: None,
            metric: "objective",
            value: obj,
            wall_time_ms: ms,
        });
    }
    Ok(rows)
}

pub fn run_bench(args: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    // (sigma, trial seed) work list; sigma is None outside the spike suite
    let work: Vec<(Option<f64>, u64)> = match args.suite {
        Suite::Pitprops | Suite::Fda => vec![(None, args.seed)],
        Suite::Gaussian | Suite::Cca => {
            (0..args.trials as u64).map(|t| (None, args.seed.wrapping_add(t))).collect()
        }
        Suite::Spike => args
            .sigmas
            .iter()
            .enumerate()
            .flat_map(|(si, &sigma)| {
                (0..args.trials as u64)
                    .map(move |t| (Some(sigma), args.seed.wrapping_add(1000 * si as u64 + t)))
            })
            .collect(),
    };

    let run_one = |&(sigma, seed): &(Option<f64>, u64)| -> CliResult<Vec<BenchRow>> {
        match args.suite {
            Suite::Pitprops => pitprops_suite(seed),
            Suite::Gaussian => gaussian_trial(seed),
            Suite::Spike => spike_trial(seed, sigma.unwrap()),
            Suite::Fda => fda_suite(seed),
            Suite::Cca => cca_trial(seed),
        }
    };

    let results: Vec<CliResult<Vec<BenchRow>>> = if args.jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| crate::CliError::usage(e.to_string()))?;
        pool.install(|| work.par_iter().map(run_one).collect())
    } else {
        work.iter().map(run_one).collect()
    };

    let mut rows = vec![];
    for r in results {
        rows.extend(r?);
    }
    rows.sort_by(|a, b| {
        let ka = (a.sigma.unwrap_or(-1.0), a.s, a.n, a.m, a.seed, a.solver, a.metric);
        let kb = (b.sigma.unwrap_or(-1.0), b.s, b.n, b.m, b.seed, b.solver, b.metric);
        ka.partial_cmp(&kb).unwrap()
    });
    Ok(rows)
}
