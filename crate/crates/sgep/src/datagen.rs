//! Seeded generators for the synthetic experiment families, the Pitprops
//! fixture, and the evaluation metrics. All generators are pure functions of
//! their spec (seed included) and use ChaCha8 so streams reproduce across
//! platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::core::{support, MatrixPair};
use crate::error::{Result, SgepError};
use crate::io::parse_matrix;
use crate::linalg::{dot, jacobi_eigh, norm2, Mat};

/// Spiked covariance model: Σ has one large eigenvalue `lambda1` whose
/// eigenvector is flat on a random size-`s_true` support, all other
/// eigenvalues 1.
#[derive(Debug, Clone)]
pub struct SpikeModelSpec {
    pub n: usize,
    /// Sample count.
    pub m: usize,
    pub s_true: usize,
    /// Std dev of the additive entrywise noise.
    pub sigma: f64,
    pub lambda1: f64,
    pub seed: u64,
}

impl SpikeModelSpec {
    pub fn new(n: usize, m: usize, s_true: usize, sigma: f64, seed: u64) -> Self {
        SpikeModelSpec { n, m, s_true, sigma, lambda1: 15.0, seed }
    }

    fn validate(&self) -> Result<()> {
        if self.s_true < 1 || self.s_true > self.n {
            return Err(SgepError::InvalidSparsity { s: self.s_true, n: self.n });
        }
        if self.m < 2 {
            return Err(SgepError::InvalidSpec(format!("need m >= 2 samples, got {}", self.m)));
        }
        if self.sigma < 0.0 {
            return Err(SgepError::InvalidSpec(format!("negative sigma {}", self.sigma)));
        }
        if self.lambda1 <= 1.0 {
            return Err(SgepError::InvalidSpec(format!(
                "spike eigenvalue must exceed 1, got {}",
                self.lambda1
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BlockCovSpec {
    pub n: usize,
    pub blocks: usize,
    pub rho: f64,
}

impl BlockCovSpec {
    pub fn new(n: usize) -> Self {
        BlockCovSpec { n, blocks: 5, rho: 0.8 }
    }

    fn validate(&self) -> Result<()> {
        if self.blocks == 0 || !self.n.is_multiple_of(self.blocks) {
            return Err(SgepError::InvalidSpec(format!(
                "n = {} not divisible by {} blocks",
                self.n, self.blocks
            )));
        }
        if self.rho <= 0.0 || self.rho >= 1.0 {
            return Err(SgepError::InvalidSpec(format!("rho {} outside (0, 1)", self.rho)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SpikeModel {
    /// Sample covariance of the noisy data, paired with B = I.
    pub pair: MatrixPair<f64>,
    /// Population covariance Σ = VΛVᵀ.
    pub population: Mat<f64>,
    /// The planted sparse leading eigenvector v₁.
    pub truth: Vec<f64>,
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Centered sample covariance with divisor m − 1 of row-major m×n data.
pub fn sample_cov(data: &Mat<f64>) -> Mat<f64> {
    let (m, n) = (data.nrows(), data.ncols());
    let mut mean = vec![0.0; n];
    for i in 0..m {
        for j in 0..n {
            mean[j] += data[(i, j)];
        }
    }
    for mj in &mut mean {
        *mj /= m as f64;
    }
    let mut cov = Mat::zeros(n, n);
    for i in 0..m {
        for j in 0..n {
            let dj = data[(i, j)] - mean[j];
            for k in j..n {
                cov[(j, k)] += dj * (data[(i, k)] - mean[k]);
            }
        }
    }
    for j in 0..n {
        for k in j..n {
            let v = cov[(j, k)] / (m - 1) as f64;
            cov[(j, k)] = v;
            cov[(k, j)] = v;
        }
    }
    cov
}

/// Sample covariance of m×n standard normal data, paired with B = I.
pub fn gaussian_cov(n: usize, m: usize, seed: u64) -> Result<MatrixPair<f64>> {
    if n == 0 {
        return Err(SgepError::InvalidSpec("n must be positive".into()));
    }
    if m < 2 {
        return Err(SgepError::InvalidSpec(format!("need m >= 2 samples, got {m}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Mat::zeros(m, n);
    for i in 0..m {
        for j in 0..n {
            data[(i, j)] = standard_normal(&mut rng);
        }
    }
    MatrixPair::with_identity_b(sample_cov(&data))
}

/// Modified Gram–Schmidt completion of v₁ (assumed unit norm) to an
/// orthonormal basis, seeded random directions for the remaining columns.
fn orthonormal_completion(v1: &[f64], rng: &mut ChaCha8Rng) -> Mat<f64> {
    let n = v1.len();
    let mut cols: Vec<Vec<f64>> = vec![v1.to_vec()];
    while cols.len() < n {
        let mut cand: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
        for prev in &cols {
            let proj = dot(&cand, prev);
            for (c, p) in cand.iter_mut().zip(prev) {
                *c -= proj * p;
            }
        }
        let nrm = norm2(&cand);
        if nrm > 1e-8 {
            for c in &mut cand {
                *c /= nrm;
            }
            cols.push(cand);
        }
    }
    let mut v = Mat::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            v[(i, j)] = col[i];
        }
    }
    v
}

pub fn spike_model(spec: &SpikeModelSpec) -> Result<SpikeModel> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    // v₁: entries 1/√s on a uniformly random size-s support
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut v1 = vec![0.0; n];
    for &i in perm.iter().take(spec.s_true) {
        v1[i] = 1.0 / (spec.s_true as f64).sqrt();
    }

    let v = orthonormal_completion(&v1, &mut rng);
    // Σ = VΛVᵀ, Λ = diag(λ₁, 1, …, 1)
    let mut population = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..n {
                let lam = if k == 0 { spec.lambda1 } else { 1.0 };
                acc += v[(i, k)] * lam * v[(j, k)];
            }
            population[(i, j)] = acc;
            population[(j, i)] = acc;
        }
    }

    // rows x = VΛ^{1/2}z, z ~ N(0, I), plus entrywise N(0, σ²) noise
    let sqrt_lam: Vec<f64> =
        (0..n).map(|k| if k == 0 { spec.lambda1.sqrt() } else { 1.0 }).collect();
    let mut data = Mat::zeros(spec.m, n);
    for row in 0..spec.m {
        let z: Vec<f64> = (0..n).map(|k| sqrt_lam[k] * standard_normal(&mut rng)).collect();
        for i in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += v[(i, k)] * z[k];
            }
            data[(row, i)] = acc + spec.sigma * standard_normal(&mut rng);
        }
    }

    Ok(SpikeModel {
        pair: MatrixPair::with_identity_b(sample_cov(&data))?,
        population,
        truth: v1,
    })
}

/// Block-diagonal covariance; within each block entry (j, j') is rho^|j−j'|.
pub fn block_toeplitz_cov(spec: &BlockCovSpec) -> Result<Mat<f64>> {
    spec.validate()?;
    let bs = spec.n / spec.blocks;
    let mut m = Mat::zeros(spec.n, spec.n);
    for b in 0..spec.blocks {
        let base = b * bs;
        for j in 0..bs {
            for jp in 0..bs {
                m[(base + j, base + jp)] = spec.rho.powi((j as i64 - jp as i64).unsigned_abs() as i32);
            }
        }
    }
    Ok(m)
}

/// Discriminant-analysis pair: A = (μ₁−μ₂)(μ₁−μ₂)ᵀ, B = Σ₁+Σ₂.
/// μ₁ = μ₂ yields A = 0, a degenerate but valid pair.
pub fn fda_pair(
    mu1: &[f64],
    mu2: &[f64],
    sigma1: &Mat<f64>,
    sigma2: &Mat<f64>,
) -> Result<MatrixPair<f64>> {
    let n = mu1.len();
    if mu2.len() != n {
        return Err(SgepError::DimensionMismatch { expected: n, got: mu2.len() });
    }
    if sigma1.nrows() != n || sigma2.nrows() != n {
        return Err(SgepError::DimensionMismatch { expected: n, got: sigma1.nrows() });
    }
    let d: Vec<f64> = mu1.iter().zip(mu2).map(|(a, b)| a - b).collect();
    let mut a = Mat::zeros(n, n);
    let mut b = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = d[i] * d[j];
            b[(i, j)] = sigma1[(i, j)] + sigma2[(i, j)];
        }
    }
    MatrixPair::new(a, b)
}

/// Canonical-correlation pair on stacked coordinates:
/// A = [[Σx, Σxy], [Σxyᵀ, Σy]], B = blockdiag(Σx, Σy), with the low-rank
/// cross covariance Σxy = λ₁ Σx vx vyᵀ Σy. vx, vy are rescaled so that
/// vᵀΣv = 1 before use.
pub fn cca_pair(
    sigma_x: &Mat<f64>,
    sigma_y: &Mat<f64>,
    v_x: &[f64],
    v_y: &[f64],
    lambda1: f64,
) -> Result<MatrixPair<f64>> {
    let (p, q) = (sigma_x.nrows(), sigma_y.nrows());
    if v_x.len() != p {
        return Err(SgepError::DimensionMismatch { expected: p, got: v_x.len() });
    }
    if v_y.len() != q {
        return Err(SgepError::DimensionMismatch { expected: q, got: v_y.len() });
    }
    if !(0.0..1.0).contains(&lambda1) {
        return Err(SgepError::InvalidSpec(format!(
            "canonical correlation {lambda1} outside [0, 1)"
        )));
    }
    let qx = sigma_x.quad(v_x);
    let qy = sigma_y.quad(v_y);
    if qx <= 0.0 || qy <= 0.0 {
        return Err(SgepError::InvalidSpec("v'Σv must be positive for rescaling".into()));
    }
    let vx: Vec<f64> = v_x.iter().map(|v| v / qx.sqrt()).collect();
    let vy: Vec<f64> = v_y.iter().map(|v| v / qy.sqrt()).collect();
    let sx_vx = sigma_x.matvec(&vx);
    let sy_vy = sigma_y.matvec(&vy);

    let n = p + q;
    let mut a = Mat::zeros(n, n);
    let mut b = Mat::zeros(n, n);
    for i in 0..p {
        for j in 0..p {
            a[(i, j)] = sigma_x[(i, j)];
            b[(i, j)] = sigma_x[(i, j)];
        }
        for j in 0..q {
            let c = lambda1 * sx_vx[i] * sy_vy[j];
            a[(i, p + j)] = c;
            a[(p + j, i)] = c;
        }
    }
    for i in 0..q {
        for j in 0..q {
            a[(p + i, p + j)] = sigma_y[(i, j)];
            b[(p + i, p + j)] = sigma_y[(i, j)];
        }
    }
    MatrixPair::new(a, b)
}

/// (xᵀAx/xᵀx)/λmax(A), clamped to [0, 1].
pub fn explained_variance_proportion(a: &Mat<f64>, x: &[f64]) -> Result<f64> {
    if x.len() != a.nrows() {
        return Err(SgepError::DimensionMismatch { expected: a.nrows(), got: x.len() });
    }
    let nrm2 = dot(x, x);
    if nrm2 == 0.0 {
        return Err(SgepError::ZeroVector);
    }
    let (vals, _) = jacobi_eigh(a);
    let lmax = vals[0];
    if lmax <= 0.0 {
        return Err(SgepError::InvalidSpec("matrix has no positive eigenvalue".into()));
    }
    Ok((a.quad(x) / nrm2 / lmax).clamp(0.0, 1.0))
}

/// |S(estimate) ∩ S(truth)| / s.
pub fn recovery_rate(estimate: &[f64], truth: &[f64], s: usize) -> Result<f64> {
    if estimate.len() != truth.len() {
        return Err(SgepError::DimensionMismatch { expected: truth.len(), got: estimate.len() });
    }
    if s == 0 {
        return Err(SgepError::InvalidSparsity { s: 0, n: truth.len() });
    }
    let se = support(estimate);
    let st = support(truth);
    let hit = se.iter().filter(|i| st.contains(i)).count();
    Ok(hit as f64 / s as f64)
}

/// Random dense PSD matrix GGᵀ/n with G standard normal.
pub fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let mut g = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g[(i, j)] = standard_normal(rng);
        }
    }
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut acc = 0.0;
            for k in 0..n {
                acc += g[(i, k)] * g[(j, k)];
            }
            acc /= n as f64;
            m[(i, j)] = acc;
            m[(j, i)] = acc;
        }
    }
    m
}

/// Random SPD matrix: a random PSD plus a ridge.
pub fn random_spd(n: usize, ridge: f64, rng: &mut ChaCha8Rng) -> Mat<f64> {
    let mut m = random_psd(n, rng);
    for i in 0..n {
        m[(i, i)] += ridge;
    }
    m
}

/// Random validated pair: PSD A, SPD B.
pub fn random_pair(n: usize, rng: &mut ChaCha8Rng) -> MatrixPair<f64> {
    let a = random_psd(n, rng);
    let b = random_spd(n, 0.5, rng);
    MatrixPair::new(a, b).expect("construction is valid by design")
}

/// Random unit vector with exactly s nonzeros on a random support.
pub fn random_sparse_unit(n: usize, s: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    assert!(s >= 1 && s <= n);
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    let mut x = vec![0.0; n];
    loop {
        let mut nrm2 = 0.0;
        for &i in perm.iter().take(s) {
            let v = standard_normal(rng);
            x[i] = v;
            nrm2 += v * v;
        }
        // resample the (measure-zero) degenerate draws
        if nrm2 > 0.0 {
            let nrm = nrm2.sqrt();
            for v in &mut x {
                *v /= nrm;
            }
            if crate::core::l0_norm(&x) == s {
                return x;
            }
        }
    }
}

/// The Pitprops correlation matrix (Jeffers 1967); see data/README.md.
pub fn pitprops() -> Mat<f64> {
    parse_matrix(include_str!("../data/pitprops.csv")).expect("embedded fixture parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{l0_norm, truncate};
    use crate::oracle::dense_gev;

    #[test]
    fn gaussian_cov_deterministic() {
        let p1 = gaussian_cov(4, 50, 7).unwrap();
        let p2 = gaussian_cov(4, 50, 7).unwrap();
        assert_eq!(p1.a().as_slice(), p2.a().as_slice());
        assert!(gaussian_cov(4, 1, 7).is_err());
    }

    #[test]
    fn gaussian_cov_offdiag_shrinks() {
        let p = gaussian_cov(4, 100_000, 1).unwrap();
        let mut max_off: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    max_off = max_off.max(p.a()[(i, j)].abs());
                }
            }
        }
        assert!(max_off < 0.05, "max off-diagonal {max_off}");
    }

    #[test]
    fn gaussian_cov_scalar_variance() {
        let p = gaussian_cov(1, 10, 3).unwrap();
        assert!(p.a()[(0, 0)] >= 0.0);
    }

    #[test]
    fn spike_truth_structure() {
        let spec = SpikeModelSpec::new(12, 30, 4, 0.5, 11);
        let model = spike_model(&spec).unwrap();
        let flat = 1.0 / 4.0f64.sqrt();
        assert_eq!(model.truth.iter().filter(|&&v| v == flat).count(), 4);
        assert_eq!(l0_norm(&model.truth), 4);
        // population top eigenpair is (λ₁, ±v₁)
        let (val, vec) = dense_gev(&model.population, &Mat::identity(12)).unwrap();
        assert!((val - 15.0).abs() < 1e-8);
        let cos = dot(&vec, &model.truth).abs() / norm2(&vec) / norm2(&model.truth);
        assert!((cos - 1.0).abs() < 1e-8);
    }

    #[test]
    fn spike_recovery_smoke() {
        // noiseless, large m: truncated top sample eigenvector finds the support
        for seed in 0..20 {
            let spec = SpikeModelSpec::new(30, 10_000, 5, 0.0, seed);
            let model = spike_model(&spec).unwrap();
            let (_, vec) = dense_gev(model.pair.a(), &Mat::identity(30)).unwrap();
            let trunc = truncate(&vec, 5).unwrap();
            assert!(recovery_rate(&trunc, &model.truth, 5).unwrap() >= 0.99);
        }
    }

    #[test]
    fn block_cov_entries() {
        let m = block_toeplitz_cov(&BlockCovSpec::new(20)).unwrap();
        assert_eq!(m[(0, 1)], 0.8);
        assert!((m[(0, 2)] - 0.64).abs() < 1e-15);
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m[(3, 4)], 0.0); // cross-block
        assert_eq!(m[(4, 5)], 0.8);
        assert!(block_toeplitz_cov(&BlockCovSpec { n: 21, ..BlockCovSpec::new(20) }).is_err());
    }

    #[test]
    fn fda_pair_structure() {
        let n = 40;
        let cov = block_toeplitz_cov(&BlockCovSpec::new(n)).unwrap();
        let mu1 = vec![0.0; n];
        let mut mu2 = vec![0.0; n];
        for j in (1..n).step_by(2) {
            mu2[j] = 0.5;
        }
        let pair = fda_pair(&mu1, &mu2, &cov, &cov).unwrap();
        assert_eq!(pair.b()[(0, 0)], 2.0);
        assert_eq!(pair.a()[(1, 1)], 0.25);
        assert_eq!(pair.a()[(0, 0)], 0.0);
        // equal means: A = 0, still a valid pair
        let degen = fda_pair(&mu1, &mu1, &cov, &cov).unwrap();
        assert_eq!(degen.a().max_abs(), 0.0);
    }

    #[test]
    fn cca_pair_normalization_and_uncoupled_case() {
        let sx = block_toeplitz_cov(&BlockCovSpec { n: 4, blocks: 2, rho: 0.8 }).unwrap();
        let sy = Mat::identity(3);
        let vx = vec![2.0, 0.0, 1.0, 0.0];
        let vy = vec![0.0, 3.0, 0.0];
        let pair = cca_pair(&sx, &sy, &vx, &vy, 0.9).unwrap();
        assert_eq!(pair.dim(), 7);
        // uncoupled: leading generalized eigenvalue is 1
        let uncoupled = cca_pair(&sx, &sy, &vx, &vy, 0.0).unwrap();
        let (val, _) = dense_gev(uncoupled.a(), uncoupled.b()).unwrap();
        assert!((val - 1.0).abs() < 1e-10);
    }

    #[test]
    fn explained_variance_cases() {
        let mut a = Mat::zeros(2, 2);
        a[(0, 0)] = 4.0;
        a[(1, 1)] = 1.0;
        assert!((explained_variance_proportion(&a, &[0.0, 1.0]).unwrap() - 0.25).abs() < 1e-12);
        assert!((explained_variance_proportion(&a, &[1.0, 0.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recovery_rate_cases() {
        assert_eq!(recovery_rate(&[1.0, 1.0, 0.0], &[1.0, 1.0, 0.0], 2).unwrap(), 1.0);
        assert_eq!(recovery_rate(&[1.0, 0.0], &[0.0, 1.0], 1).unwrap(), 0.0);
        let est = [1.0, 1.0, 0.0, 0.0];
        let tru = [1.0, 0.0, 1.0, 0.0];
        assert_eq!(recovery_rate(&est, &tru, 2).unwrap(), 0.5);
    }

    #[test]
    fn pitprops_fixture() {
        let m = pitprops();
        assert_eq!(m.nrows(), 13);
        for i in 0..13 {
            assert_eq!(m[(i, i)], 1.0);
        }
        assert_eq!(m.max_asymmetry(), 0.0);
        assert_eq!(m[(0, 1)], 0.954);
        // positive definite: usable with B = I
        assert!(MatrixPair::with_identity_b(m).is_ok());
    }
}
