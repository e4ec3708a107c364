//! Closed-form abstraction probabilities and their Monte Carlo checks.
//!
//! Two actions are compared through Gaussian layer distributions. With known
//! ("oracle") standard deviations the mean interval of a layer is
//! `X̄ ± z*·σ_X/√n`, and the two intervals overlap iff
//! `|X̄ − Ȳ| ≤ T = z*·(σ_X + σ_Y)/√n`. Since `X̄ − Ȳ` is Gaussian with mean
//! `μ_X − μ_Y` and standard deviation `√(σ_X² + σ_Y²)/√n`, the overlap
//! probability has a closed form in terms of Φ.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::env::LayeredGaussianSpec;
use crate::error::{Error, Result};
use crate::rng::{substream, SimRng};
use crate::special::{normal_cdf, z_critical};

/// Gaussian reward layer of the left and right action.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayerPair {
    pub mu_left: f64,
    pub mu_right: f64,
    pub sigma_left: f64,
    pub sigma_right: f64,
}

impl LayerPair {
    pub fn new(mu_left: f64, mu_right: f64, sigma_left: f64, sigma_right: f64) -> Result<Self> {
        if !(sigma_left > 0.0 && sigma_right > 0.0) {
            return Err(Error::invalid("layer standard deviations must be positive"));
        }
        Ok(Self {
            mu_left,
            mu_right,
            sigma_left,
            sigma_right,
        })
    }

    /// Equal standard deviations `sigma`, means `gap` apart.
    pub fn with_gap(gap: f64, sigma: f64) -> Result<Self> {
        Self::new(gap, 0.0, sigma, sigma)
    }

    fn gap(&self) -> f64 {
        (self.mu_left - self.mu_right).abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundParams {
    pub layers: Vec<LayerPair>,
    /// Samples per action.
    pub n: usize,
    pub q: f64,
    pub epsilon: f64,
}

fn open_level(q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::invalid(format!("confidence level {q} must lie in (0, 1)")));
    }
    Ok(z_critical(q))
}

/// P(|Z| ≤ t) for Z ~ N(m, s²), evaluated on the lower tail for accuracy.
fn prob_abs_within(m: f64, s: f64, t: f64) -> f64 {
    let m = m.abs();
    (normal_cdf((t - m) / s) - normal_cdf((-t - m) / s)).max(0.0)
}

/// Exact probability that the oracle-std mean intervals of one layer overlap
/// when each action has `n` samples.
pub fn overlap_probability_exact(pair: &LayerPair, n: usize, q: f64) -> Result<f64> {
    let z = open_level(q)?;
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    let sqrt_n = (n as f64).sqrt();
    let threshold = z * (pair.sigma_left + pair.sigma_right) / sqrt_n;
    let spread = pair.sigma_left.hypot(pair.sigma_right) / sqrt_n;
    Ok(prob_abs_within(pair.gap(), spread, threshold))
}

/// Overlap probability under the approximation that `X̄ − Ȳ` has standard
/// deviation `(σ_X + σ_Y)/√n`. It equals `q` for equal means, while the true
/// probability for equal means is `2Φ(z*·(σ_X+σ_Y)/√(σ_X²+σ_Y²)) − 1 > q`.
pub fn overlap_probability_sum_scaled(pair: &LayerPair, n: usize, q: f64) -> Result<f64> {
    let z = open_level(q)?;
    if n == 0 {
        return Err(Error::EmptySamples);
    }
    let scale = (pair.sigma_left + pair.sigma_right) / (n as f64).sqrt();
    Ok(prob_abs_within(pair.gap(), scale, z * scale))
}

/// How layer sample means are drawn in simulations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Sampling {
    /// Draw `n` rewards and average them.
    Raw,
    /// Draw the sample mean from its exact law `N(μ, σ²/n)`.
    #[default]
    MeanOnly,
}

fn sample_mean(mu: f64, sigma: f64, n: usize, sampling: Sampling, rng: &mut SimRng) -> f64 {
    match sampling {
        Sampling::MeanOnly => {
            let z: f64 = rng.sample(StandardNormal);
            mu + sigma / (n as f64).sqrt() * z
        }
        Sampling::Raw => {
            let mut total = 0.0;
            for _ in 0..n {
                let z: f64 = rng.sample(StandardNormal);
                total += mu + sigma * z;
            }
            total / n as f64
        }
    }
}

fn oracle_overlap(x_bar: f64, y_bar: f64, half_x: f64, half_y: f64) -> bool {
    (x_bar - half_x).max(y_bar - half_y) <= (x_bar + half_x).min(y_bar + half_y)
}

/// Fraction of `trials` in which the oracle-std mean intervals of one layer
/// overlap.
pub fn overlap_probability_mc(
    pair: &LayerPair,
    n: usize,
    q: f64,
    trials: usize,
    sampling: Sampling,
    rng: &mut SimRng,
) -> Result<f64> {
    let z = open_level(q)?;
    if n == 0 || trials == 0 {
        return Err(Error::invalid("need n >= 1 and trials >= 1"));
    }
    let sqrt_n = (n as f64).sqrt();
    let (hx, hy) = (z * pair.sigma_left / sqrt_n, z * pair.sigma_right / sqrt_n);
    let mut hits = 0usize;
    for _ in 0..trials {
        let x = sample_mean(pair.mu_left, pair.sigma_left, n, sampling, rng);
        let y = sample_mean(pair.mu_right, pair.sigma_right, n, sampling, rng);
        if oracle_overlap(x, y, hx, hy) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Probability that every layer's intervals overlap (independent layers,
/// mean intervals only).
pub fn abstraction_probability_exact(params: &BoundParams) -> Result<f64> {
    params.layers.iter().try_fold(1.0, |acc, layer| {
        Ok(acc * overlap_probability_exact(layer, params.n, params.q)?)
    })
}

/// Per-layer decay weight: `Δμ² / (2(σ_l + σ_r)²)` once the gap exceeds
/// `z*·(σ_l + σ_r)/√n`, otherwise 1.
pub fn decay_weight(layer: &LayerPair, n: usize, z: f64) -> f64 {
    let sigma_sum = layer.sigma_left + layer.sigma_right;
    if layer.gap() >= z / (n as f64).sqrt() * sigma_sum {
        layer.gap().powi(2) / (2.0 * sigma_sum * sigma_sum)
    } else {
        1.0
    }
}

/// `exp(−n·(ε + Σ w_i))`.
pub fn grouping_probability_bound(params: &BoundParams) -> Result<f64> {
    let z = open_level(params.q)?;
    if params.epsilon.is_nan() || params.epsilon <= 0.0 {
        return Err(Error::invalid("epsilon must be positive"));
    }
    let w: f64 = params.layers.iter().map(|l| decay_weight(l, params.n, z)).sum();
    Ok((-(params.n as f64) * (params.epsilon + w)).exp())
}

/// Options for [`simulate_aupo_abstraction`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SimulationOptions {
    /// Also require the return (sum over layers) intervals to overlap.
    pub return_filter: bool,
    pub sampling: Sampling,
}

/// Monte Carlo frequency with which two actions of a two-column layered
/// spec, each sampled `n` times, are grouped by oracle-std mean intervals at
/// every layer.
pub fn simulate_aupo_abstraction(
    spec: &LayeredGaussianSpec,
    n: usize,
    q: f64,
    trials: usize,
    options: SimulationOptions,
    rng: &mut SimRng,
) -> Result<f64> {
    let z = open_level(q)?;
    if spec.actions() != 2 {
        return Err(Error::invalid("abstraction simulation compares exactly two actions"));
    }
    if n == 0 || trials == 0 {
        return Err(Error::invalid("need n >= 1 and trials >= 1"));
    }
    let sqrt_n = (n as f64).sqrt();
    let depth = spec.depth();
    let ret_sigma: Vec<f64> = (0..2)
        .map(|a| spec.stds.iter().map(|row| row[a] * row[a]).sum::<f64>().sqrt())
        .collect();
    let mut hits = 0usize;
    'trial: for _ in 0..trials {
        let mut sums = [0.0; 2];
        let mut grouped = true;
        for d in 0..depth {
            let (sl, sr) = (spec.stds[d][0], spec.stds[d][1]);
            let x = sample_mean(spec.means[d][0], sl, n, options.sampling, rng);
            let y = sample_mean(spec.means[d][1], sr, n, options.sampling, rng);
            sums[0] += x;
            sums[1] += y;
            if !oracle_overlap(x, y, z * sl / sqrt_n, z * sr / sqrt_n) {
                grouped = false;
                if !options.return_filter {
                    continue 'trial;
                }
            }
        }
        if grouped && options.return_filter {
            grouped = oracle_overlap(sums[0], sums[1], z * ret_sigma[0] / sqrt_n, z * ret_sigma[1] / sqrt_n);
        }
        if grouped {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// `(1 − cdf_at_c^k, Σ variances / k²)`: chance that the maximum of `k`
/// independent estimates reaches `c`, and the variance of their mean.
pub fn selection_bias_stats(k: usize, cdf_at_c: f64, variances: &[f64]) -> Result<(f64, f64)> {
    if k == 0 || variances.len() != k {
        return Err(Error::invalid("need k >= 1 variances"));
    }
    if !(0.0..=1.0).contains(&cdf_at_c) {
        return Err(Error::invalid("cdf value outside [0, 1]"));
    }
    let kf = k as f64;
    Ok((1.0 - cdf_at_c.powi(k as i32), variances.iter().sum::<f64>() / (kf * kf)))
}

/// Empirical counterpart of [`selection_bias_stats`] for `k` i.i.d.
/// standard normal estimates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelectionBiasSample {
    pub p_max_geq_c: f64,
    pub mean_of_max: f64,
    pub var_of_mean: f64,
}

pub fn simulate_selection_bias(k: usize, c: f64, trials: usize, rng: &mut SimRng) -> Result<SelectionBiasSample> {
    if k == 0 || trials < 2 {
        return Err(Error::invalid("need k >= 1 and trials >= 2"));
    }
    let (mut hits, mut max_sum) = (0usize, 0.0);
    let means: Vec<f64> = (0..trials)
        .map(|_| {
            let draws: Vec<f64> = (0..k).map(|_| rng.sample(StandardNormal)).collect();
            let max = draws.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if max >= c {
                hits += 1;
            }
            max_sum += max;
            draws.iter().sum::<f64>() / k as f64
        })
        .collect();
    let t = trials as f64;
    let grand = means.iter().sum::<f64>() / t;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / (t - 1.0);
    Ok(SelectionBiasSample {
        p_max_geq_c: hits as f64 / t,
        mean_of_max: max_sum / t,
        var_of_mean: var,
    })
}

/// One line of the `theory` report: identical layers at every depth.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoryRow {
    pub mu_gap: f64,
    pub sigma_left: f64,
    pub sigma_right: f64,
    pub depth: usize,
    pub n: usize,
    pub q: f64,
    pub exact: f64,
    pub mc_estimate: f64,
    pub bound: f64,
}

/// Exact probability, Monte Carlo estimate and bound over a fixed grid.
pub fn theory_table(trials: usize, epsilon: f64, seed: u64) -> Result<Vec<TheoryRow>> {
    let mut rows = Vec::new();
    let mut stream = 0;
    for &(gap, sl, sr) in &[(0.0, 1.0, 1.0), (0.5, 1.0, 1.0), (1.0, 1.0, 2.0)] {
        for &depth in &[1usize, 2, 3] {
            for &q in &[0.8, 0.95] {
                for &n in &[16usize, 64, 256] {
                    let layer = LayerPair::new(gap, 0.0, sl, sr)?;
                    let params = BoundParams {
                        layers: vec![layer; depth],
                        n,
                        q,
                        epsilon,
                    };
                    let spec = LayeredGaussianSpec {
                        means: vec![vec![gap, 0.0]; depth],
                        stds: vec![vec![sl, sr]; depth],
                    };
                    let mut rng = substream(seed, stream);
                    stream += 1;
                    rows.push(TheoryRow {
                        mu_gap: gap,
                        sigma_left: sl,
                        sigma_right: sr,
                        depth,
                        n,
                        q,
                        exact: abstraction_probability_exact(&params)?,
                        mc_estimate: simulate_aupo_abstraction(
                            &spec,
                            n,
                            q,
                            trials,
                            SimulationOptions::default(),
                            &mut rng,
                        )?,
                        bound: grouping_probability_bound(&params)?,
                    });
                }
            }
        }
    }
    Ok(rows)
}
