//! Dirichlet measures on standard simplices: the multivariate beta
//! normalization, densities with a distinguished marker for boundary
//! singularities, gamma-based sampling with degenerate zero-parameter
//! coordinates, the face/degeneracy action on parameter vectors, and
//! Monte Carlo verification of the pushforward law by moment matching.
//!
//! Every stochastic operation takes an explicit random stream; there is
//! no global RNG. Samplers are single-threaded per stream; a harness
//! that fans out across workers should give each worker its own stream
//! seeded via [`derive_stream_seed`].

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::realizer::{self, BarycentricPoint};

/// A Dirichlet parameter vector: `n + 1` nonnegative entries attached
/// to the `n`-simplex, with at least one entry strictly positive.
/// Entries equal to zero pin the matching coordinate to zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletParams {
    alpha: Vec<f64>,
}

impl DirichletParams {
    pub fn new(alpha: Vec<f64>) -> Result<Self> {
        if alpha.is_empty() {
            return Err(Error::InvalidParams("empty parameter vector".into()));
        }
        for (idx, &a) in alpha.iter().enumerate() {
            if !a.is_finite() || a < 0.0 {
                return Err(Error::InvalidParams(format!(
                    "alpha[{idx}] = {a} must be finite and nonnegative"
                )));
            }
        }
        if !alpha.iter().any(|&a| a > 0.0) {
            return Err(Error::InvalidParams(
                "at least one entry must be strictly positive".into(),
            ));
        }
        Ok(DirichletParams { alpha })
    }

    /// Simplex dimension `n`; the vector has `n + 1` entries.
    pub fn dimension(&self) -> usize {
        self.alpha.len() - 1
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn sum(&self) -> f64 {
        self.alpha.iter().sum()
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.alpha.iter().all(|&a| a > 0.0)
    }
}

/// `log Bₙ(α) = Σ log Γ(αᵢ) − log Γ(Σ αᵢ)`. All entries must be
/// strictly positive.
pub fn log_multivariate_beta(params: &DirichletParams) -> Result<f64> {
    if !params.is_strictly_positive() {
        return Err(Error::InvalidParams(
            "multivariate beta needs strictly positive entries".into(),
        ));
    }
    let log_gammas: f64 = params
        .alpha()
        .iter()
        .map(|&a| statrs::function::gamma::ln_gamma(a))
        .sum();
    Ok(log_gammas - statrs::function::gamma::ln_gamma(params.sum()))
}

/// A density value, with boundary singularities (`xᵢ = 0` while
/// `αᵢ < 1`) reported as a distinguished marker instead of a floating
/// overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Density {
    Finite(f64),
    Infinite,
}

impl Density {
    pub fn finite(self) -> Option<f64> {
        match self {
            Density::Finite(v) => Some(v),
            Density::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Density::Infinite)
    }
}

impl Serialize for Density {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Density::Finite(v) => serializer.serialize_f64(*v),
            Density::Infinite => serializer.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Density {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let value = Option::<f64>::deserialize(deserializer)?;
        Ok(match value {
            Some(v) => Density::Finite(v),
            None => Density::Infinite,
        })
    }
}

/// The density `bₙ(x, α) / Bₙ(α)` with `bₙ(x, α) = Π xᵢ^{αᵢ−1}`,
/// evaluated at a point of the simplex. Requires strictly positive
/// parameters.
pub fn density(params: &DirichletParams, x: &BarycentricPoint) -> Result<Density> {
    if x.dimension() != params.dimension() {
        return Err(Error::DimensionMismatch(format!(
            "point on a {}-simplex, parameters for a {}-simplex",
            x.dimension(),
            params.dimension()
        )));
    }
    let log_norm = log_multivariate_beta(params)?;
    let mut log_b = 0.0;
    for (&w, &a) in x.weights().iter().zip(params.alpha()) {
        if w == 0.0 {
            if a < 1.0 {
                return Ok(Density::Infinite);
            }
            if a > 1.0 {
                return Ok(Density::Finite(0.0));
            }
            // a == 1: factor w^0 = 1
        } else {
            log_b += (a - 1.0) * w.ln();
        }
    }
    Ok(Density::Finite((log_b - log_norm).exp()))
}

/// One draw from Gamma(shape, 1). Marsaglia–Tsang for `shape ≥ 1`, the
/// `U^{1/shape}` boost below 1, and the point mass at zero for
/// `shape = 0`.
fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape == 0.0 {
        return 0.0;
    }
    if shape < 1.0 {
        let boost = loop {
            let u: f64 = rng.gen();
            if u > 0.0 {
                break u.powf(1.0 / shape);
            }
        };
        return sample_gamma(shape + 1.0, rng) * boost;
    }
    let d = shape - 1.0 / 3.0;
    let c = (9.0 * d).sqrt().recip();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.gen();
        if u < 1.0 - 0.0331 * x.powi(4) {
            return d * v;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// One draw from the Dirichlet: independent Gamma(αⱼ, 1) variates
/// normalized by their sum. Zero-parameter coordinates are exactly 0
/// in every sample.
pub fn sample<R: Rng + ?Sized>(params: &DirichletParams, rng: &mut R) -> BarycentricPoint {
    loop {
        let draws: Vec<f64> = params
            .alpha()
            .iter()
            .map(|&a| sample_gamma(a, rng))
            .collect();
        let total: f64 = draws.iter().sum();
        if total > 0.0 {
            let weights = draws.into_iter().map(|g| g / total).collect();
            return BarycentricPoint::new(weights).expect("normalized draws lie in the simplex");
        }
        // All positive-shape draws underflowed; redraw.
    }
}

/// Face action on parameters: merges the pair selected by `i` exactly
/// as the realizer face map does on weights.
pub fn params_face(params: &DirichletParams, i: usize) -> Result<DirichletParams> {
    let merged = realizer::face_map(params.dimension(), i, params.alpha())?;
    DirichletParams::new(merged)
}

/// Degeneracy action on parameters: inserts a zero entry at `j`,
/// pinning the new coordinate to zero.
pub fn params_degeneracy(params: &DirichletParams, j: usize) -> Result<DirichletParams> {
    let extended = realizer::degeneracy_map(params.dimension(), j, params.alpha())?;
    DirichletParams::new(extended)
}

/// Per-coordinate mean and variance of the induced measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// The analytic moment oracle: coordinate `i` has mean `αᵢ/S` and
/// variance `αᵢ(S−αᵢ)/(S²(S+1))` with `S = Σα`; zero-parameter
/// coordinates are degenerate at zero with mean and variance 0.
pub fn induced_measure_moments(params: &DirichletParams) -> Moments {
    let s = params.sum();
    let mut mean = Vec::with_capacity(params.alpha().len());
    let mut variance = Vec::with_capacity(params.alpha().len());
    for &a in params.alpha() {
        if a == 0.0 {
            mean.push(0.0);
            variance.push(0.0);
        } else {
            mean.push(a / s);
            variance.push(a * (s - a) / (s * s * (s + 1.0)));
        }
    }
    Moments { mean, variance }
}

/// A lattice sampling of the density over the simplex, for export.
#[derive(Debug, Clone, Serialize)]
pub struct DensityGrid {
    pub resolution: usize,
    pub points: Vec<GridPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridPoint {
    pub weights: Vec<f64>,
    pub density: Density,
}

/// Evaluates the density on the lattice `{k/R}` of the simplex: all
/// compositions of `resolution` into `n + 1` nonnegative parts.
pub fn density_grid(params: &DirichletParams, resolution: usize) -> Result<DensityGrid> {
    if resolution == 0 {
        return Err(Error::InvalidArgument("resolution must be positive".into()));
    }
    if !params.is_strictly_positive() {
        return Err(Error::InvalidParams(
            "density grid needs strictly positive entries".into(),
        ));
    }
    let parts = params.dimension() + 1;
    let mut points = Vec::new();
    let mut composition = vec![0usize; parts];
    fill_compositions(
        params,
        resolution,
        0,
        resolution,
        &mut composition,
        &mut points,
    )?;
    Ok(DensityGrid { resolution, points })
}

fn fill_compositions(
    params: &DirichletParams,
    resolution: usize,
    slot: usize,
    remaining: usize,
    composition: &mut Vec<usize>,
    points: &mut Vec<GridPoint>,
) -> Result<()> {
    if slot + 1 == composition.len() {
        composition[slot] = remaining;
        let weights: Vec<f64> = composition
            .iter()
            .map(|&k| k as f64 / resolution as f64)
            .collect();
        let point = BarycentricPoint::new(weights.clone())?;
        points.push(GridPoint {
            weights,
            density: density(params, &point)?,
        });
        return Ok(());
    }
    for k in 0..=remaining {
        composition[slot] = k;
        fill_compositions(
            params,
            resolution,
            slot + 1,
            remaining - k,
            composition,
            points,
        )?;
    }
    Ok(())
}

/// Pass threshold for moment-matching checks, in standard-error units.
pub const PUSHFORWARD_SE_THRESHOLD: f64 = 5.0;

/// Tolerance for coordinates whose theoretical variance is zero
/// (degenerate at 0 or constant at 1), where standard errors vanish.
pub const DEGENERATE_TOLERANCE: f64 = 1e-12;

/// Moment comparison for one pushed coordinate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoordinateReport {
    pub index: usize,
    pub expected_mean: f64,
    pub empirical_mean: f64,
    pub se_mean: f64,
    pub z_mean: f64,
    pub expected_variance: f64,
    pub empirical_variance: f64,
    pub se_variance: f64,
    pub z_variance: f64,
    pub degenerate: bool,
}

/// Statistical report for one pushforward check: samples of `Dir(α)`
/// pushed through a face map, compared coordinate-wise against the
/// merged-parameter Dirichlet's analytic moments.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PushforwardReport {
    pub alpha: Vec<f64>,
    pub face: usize,
    pub n_samples: usize,
    pub seed: Option<u64>,
    pub pushed_alpha: Vec<f64>,
    pub threshold: f64,
    pub coordinates: Vec<CoordinateReport>,
    pub max_abs_z: f64,
    pub pass: bool,
}

/// Welford accumulator for a single coordinate stream.
#[derive(Debug, Clone, Default)]
struct RunningMoments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    fn variance(&self) -> f64 {
        self.m2 / (self.n as f64 - 1.0)
    }
}

/// Fourth central moment of Beta(a, b), used for the exact standard
/// error of the sample variance.
fn beta_fourth_central_moment(a: f64, b: f64) -> f64 {
    let s = a + b;
    let var = a * b / (s * s * (s + 1.0));
    let excess =
        6.0 * ((a - b).powi(2) * (s + 1.0) - a * b * (s + 2.0)) / (a * b * (s + 2.0) * (s + 3.0));
    (excess + 3.0) * var * var
}

/// Samples `Dir(α)`, pushes each draw through the face map `i`, and
/// compares empirical per-coordinate means and variances against the
/// analytic moments of `Dir(dⁿᵢ(α))`. Passes iff every coordinate's
/// deviation stays within [`PUSHFORWARD_SE_THRESHOLD`] standard errors.
pub fn verify_pushforward_face<R: Rng + ?Sized>(
    params: &DirichletParams,
    face: usize,
    n_samples: usize,
    rng: &mut R,
) -> Result<PushforwardReport> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(
            "need at least two samples to estimate a variance".into(),
        ));
    }
    let pushed = params_face(params, face)?;
    let expected = induced_measure_moments(&pushed);
    let n = params.dimension();

    let mut acc = vec![RunningMoments::default(); pushed.alpha().len()];
    for _ in 0..n_samples {
        let draw = sample(params, rng);
        let out = realizer::face_map(n, face, draw.weights())?;
        for (welford, &value) in acc.iter_mut().zip(&out) {
            welford.push(value);
        }
    }

    let total: f64 = pushed.sum();
    let count = n_samples as f64;
    let mut coordinates = Vec::with_capacity(acc.len());
    let mut max_abs_z = 0.0f64;
    for (idx, welford) in acc.iter().enumerate() {
        let a = pushed.alpha()[idx];
        let b = total - a;
        let degenerate = a == 0.0 || b == 0.0;
        let expected_mean = expected.mean[idx];
        let expected_variance = expected.variance[idx];
        let empirical_mean = welford.mean();
        let empirical_variance = welford.variance();

        let (se_mean, se_variance, z_mean, z_variance);
        if degenerate {
            se_mean = 0.0;
            se_variance = 0.0;
            z_mean = degenerate_z(empirical_mean - expected_mean);
            z_variance = degenerate_z(empirical_variance - expected_variance);
        } else {
            se_mean = (expected_variance / count).sqrt();
            let mu4 = beta_fourth_central_moment(a, b);
            let var_of_s2 = mu4 / count
                - expected_variance * expected_variance * (count - 3.0) / (count * (count - 1.0));
            se_variance = var_of_s2.max(0.0).sqrt();
            z_mean = (empirical_mean - expected_mean) / se_mean;
            z_variance = (empirical_variance - expected_variance) / se_variance;
        }
        max_abs_z = max_abs_z.max(z_mean.abs()).max(z_variance.abs());
        coordinates.push(CoordinateReport {
            index: idx,
            expected_mean,
            empirical_mean,
            se_mean,
            z_mean,
            expected_variance,
            empirical_variance,
            se_variance,
            z_variance,
            degenerate,
        });
    }

    Ok(PushforwardReport {
        alpha: params.alpha().to_vec(),
        face,
        n_samples,
        seed: None,
        pushed_alpha: pushed.alpha().to_vec(),
        threshold: PUSHFORWARD_SE_THRESHOLD,
        max_abs_z,
        pass: max_abs_z <= PUSHFORWARD_SE_THRESHOLD,
        coordinates,
    })
}

/// Deviation score for zero-variance coordinates: zero when the
/// deviation is inside [`DEGENERATE_TOLERANCE`], otherwise far beyond
/// any pass threshold.
fn degenerate_z(deviation: f64) -> f64 {
    if deviation.abs() <= DEGENERATE_TOLERANCE {
        0.0
    } else {
        f64::MAX
    }
}

/// Deterministic per-worker stream seed derived from a root seed
/// (SplitMix64 step), for harnesses that run one stream per worker.
pub fn derive_stream_seed(root: u64, worker: u64) -> u64 {
    let mut z = root.wrapping_add(worker.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
