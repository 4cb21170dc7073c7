use serde::{Deserialize, Serialize};

/// JSON report of one solve. `support` is 1-based and sorted.
#[derive(Debug, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: u32,
    pub solver: String,
    pub n: usize,
    pub s: usize,
    pub objective: f64,
    pub support: Vec<usize>,
    pub vector: Vec<f64>,
    pub outer_iterations: usize,
    pub gba_iterations_total: usize,
    pub ss_trials: usize,
    pub best_alpha_calls: usize,
    pub wall_time_ms: f64,
    pub seed: u64,
    pub config: ConfigEcho,
}

/// Echo of the tunables a run was started with.
#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub init: String,
    pub zero_tol: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub line_search_a: f64,
    pub eta: f64,
    pub rifle_alpha: f64,
    pub sa_variant: String,
    pub budget: u64,
}
