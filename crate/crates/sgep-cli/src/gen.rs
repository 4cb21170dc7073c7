use serde::{Deserialize, Serialize};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sgep::datagen::{
    block_toeplitz_cov, cca_pair, fda_pair, gaussian_cov, random_sparse_unit, spike_model,
    BlockCovSpec, SpikeModelSpec,
};
use sgep::io::save_matrix;

use crate::args::GenArgs;
use crate::{CliError, CliResult};

fn default_lambda1() -> f64 {
    15.0
}
fn default_blocks() -> usize {
    5
}
fn default_rho() -> f64 {
    0.8
}
fn default_cca_lambda1() -> f64 {
    0.9
}

/// What to generate. Serialized back out verbatim (defaults applied) as the
/// sidecar next to the CSVs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GenSpec {
    Gaussian {
        n: usize,
        m: usize,
        #[serde(default)]
        seed: u64,
    },
    Spike {
        n: usize,
        m: usize,
        s_true: usize,
        sigma: f64,
        #[serde(default = "default_lambda1")]
        lambda1: f64,
        #[serde(default)]
        seed: u64,
    },
    Block {
        n: usize,
        #[serde(default = "default_blocks")]
        blocks: usize,
        #[serde(default = "default_rho")]
        rho: f64,
    },
    Fda {
        n: usize,
        #[serde(default = "default_blocks")]
        blocks: usize,
        #[serde(default = "default_rho")]
        rho: f64,
    },
    Cca {
        p: usize,
        sparsity: usize,
        #[serde(default = "default_cca_lambda1")]
        lambda1: f64,
        #[serde(default)]
        seed: u64,
    },
}

/// Generates the files for one spec; returns the written file names.
pub fn run_gen(args: &GenArgs) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(&args.spec).map_err(sgep::SgepError::from)?;
    let spec: GenSpec =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("bad spec: {e}")))?;
    std::fs::create_dir_all(&args.out_dir).map_err(sgep::SgepError::from)?;
    let dir = &args.out_dir;

    let mut written = vec![];
    let mut emit = |name: &str, m: &sgep::Mat64| -> CliResult<()> {
        save_matrix(dir.join(name), m)?;
        written.push(name.to_string());
        Ok(())
    };

    match &spec {
        GenSpec::Gaussian { n, m, seed } => {
            let pair = gaussian_cov(*n, *m, *seed)?;
            emit("a.csv", pair.a())?;
        }
        GenSpec::Spike { n, m, s_true, sigma, lambda1, seed } => {
            let model = spike_model(&SpikeModelSpec {
                n: *n,
                m: *m,
                s_true: *s_true,
                sigma: *sigma,
                lambda1: *lambda1,
                seed: *seed,
            })?;
            emit("a.csv", model.pair.a())?;
            emit("population.csv", &model.population)?;
            let truth = sgep::Mat64::from_rows(vec![model.truth.clone()])?;
            emit("truth.csv", &truth)?;
        }
        GenSpec::Block { n, blocks, rho } => {
            let cov = block_toeplitz_cov(&BlockCovSpec { n: *n, blocks: *blocks, rho: *rho })?;
            emit("cov.csv", &cov)?;
        }
        GenSpec::Fda { n, blocks, rho } => {
            let cov = block_toeplitz_cov(&BlockCovSpec { n: *n, blocks: *blocks, rho: *rho })?;
            let mu1 = vec![0.0; *n];
            let mut mu2 = vec![0.0; *n];
            for j in (1..*n).step_by(2) {
                mu2[j] = 0.5;
            }
            let pair = fda_pair(&mu1, &mu2, &cov, &cov)?;
            emit("a.csv", pair.a())?;
            emit("b.csv", pair.b())?;
        }
        GenSpec::Cca { p, sparsity, lambda1, seed } => {
            let cov = block_toeplitz_cov(&BlockCovSpec::new(*p))?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let vx = random_sparse_unit(*p, *sparsity, &mut rng);
            let vy = random_sparse_unit(*p, *sparsity, &mut rng);
            let pair = cca_pair(&cov, &cov, &vx, &vy, *lambda1)?;
            emit("a.csv", pair.a())?;
            emit("b.csv", pair.b())?;
        }
    }

    let sidecar = serde_json::to_string_pretty(&spec)
        .map_err(|e| CliError::usage(e.to_string()))?;
    std::fs::write(dir.join("spec.json"), sidecar + "\n").map_err(sgep::SgepError::from)?;
    written.push("spec.json".to_string());
    Ok(written)
}
