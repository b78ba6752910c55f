//! Least-squares and consensus-based robust fitting on subsets of a dataset.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{dot, Dataset};
use crate::error::{check_dim, Error, Result};

/// Parameters of [`robust_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct RobustConfig {
    pub trials: usize,
    /// Points per trial fit; `None` means `d + 1`.
    pub min_sample: Option<usize>,
    /// Multiplier on the median absolute residual that defines an inlier.
    pub inlier_scale: f64,
    pub seed: u64,
}

impl Default for RobustConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            min_sample: None,
            inlier_scale: 1.5,
            seed: 0,
        }
    }
}

impl RobustConfig {
    pub fn min_sample_for(&self, d: usize) -> usize {
        self.min_sample.unwrap_or(d + 1)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidInput("robust fit needs trials >= 1".into()));
        }
        if self.min_sample == Some(0) {
            return Err(Error::InvalidInput("robust fit needs min_sample >= 1".into()));
        }
        if !(self.inlier_scale > 0.0 && self.inlier_scale.is_finite()) {
            return Err(Error::InvalidInput("inlier_scale must be positive".into()));
        }
        Ok(())
    }
}

/// Minimum-norm least-squares fit over the rows in `points`.
///
/// Solved through a singular value decomposition of the design matrix, so
/// rank-deficient designs (fewer points than dimensions, repeated points)
/// still get the minimizer of smallest norm.
pub fn least_squares(data: &Dataset, points: &[usize]) -> Result<Vec<f64>> {
    if points.is_empty() {
        return Err(Error::EmptyPart);
    }
    let d = data.d();
    let design = DMatrix::from_fn(points.len(), d, |r, c| data.x(points[r])[c]);
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|&i| data.y(i)));
    Ok(solve_min_norm(design, rhs))
}

fn solve_min_norm(design: DMatrix<f64>, rhs: DVector<f64>) -> Vec<f64> {
    let (m, d) = design.shape();
    let svd = design.svd(true, true);
    let sigma_max = svd.singular_values.max();
    if sigma_max == 0.0 {
        return vec![0.0; d];
    }
    let eps = sigma_max * f64::EPSILON * m.max(d) as f64;
    svd.solve(&rhs, eps)
        .expect("both singular vector sets were computed")
        .iter()
        .copied()
        .collect()
}

/// Sum (not mean) of squared residuals of `theta` over `points`.
pub fn sq_error(data: &Dataset, points: &[usize], theta: &[f64]) -> Result<f64> {
    check_dim(data.d(), theta.len())?;
    Ok(points
        .iter()
        .map(|&i| {
            let r = data.y(i) - dot(data.x(i), theta);
            r * r
        })
        .sum())
}

const INLIER_FLOOR: f64 = 1e-12;

/// Consensus fit that tolerates points belonging to other lines.
///
/// Every trial fits a random `min_sample`-subset, then counts as inliers the
/// points whose absolute residual is within `inlier_scale` times the trial's
/// median absolute residual. The trial with the lowest median absolute
/// residual wins (ties: more inliers, then smaller inlier squared error) and
/// the result is the least-squares refit on its inliers.
pub fn robust_fit(data: &Dataset, points: &[usize], cfg: &RobustConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let min_sample = cfg.min_sample_for(data.d());
    if points.len() < min_sample {
        return Err(Error::InsufficientData {
            needed: min_sample,
            got: points.len(),
        });
    }
    if points.len() == min_sample {
        return least_squares(data, points);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sample = Vec::with_capacity(min_sample);
    let mut abs_res = vec![0.0; points.len()];
    let mut sorted = vec![0.0; points.len()];
    let mut best: Option<Trial> = None;

    for _ in 0..cfg.trials {
        sample.clear();
        sample.extend(
            index::sample(&mut rng, points.len(), min_sample)
                .into_iter()
                .map(|s| points[s]),
        );
        let theta = least_squares(data, &sample)?;
        for (r, &i) in abs_res.iter_mut().zip(points) {
            *r = (data.y(i) - dot(data.x(i), &theta)).abs();
        }
        sorted.copy_from_slice(&abs_res);
        let median = median_in_place(&mut sorted);
        let threshold = (cfg.inlier_scale * median).max(INLIER_FLOOR);
        let (count, sse) = abs_res
            .iter()
            .filter(|&&r| r <= threshold)
            .fold((0usize, 0.0), |(c, s), r| (c + 1, s + r * r));
        let trial = Trial {
            median,
            inliers: count,
            sse,
            threshold,
            theta,
        };
        if best.as_ref().is_none_or(|b| trial.beats(b)) {
            best = Some(trial);
        }
    }

    let best = best.expect("at least one trial");
    let inliers: Vec<usize> = points
        .iter()
        .copied()
        .filter(|&i| (data.y(i) - dot(data.x(i), &best.theta)).abs() <= best.threshold)
        .collect();
    least_squares(data, &inliers)
}

struct Trial {
    median: f64,
    inliers: usize,
    sse: f64,
    threshold: f64,
    theta: Vec<f64>,
}

impl Trial {
    fn beats(&self, other: &Trial) -> bool {
        if self.median != other.median {
            return self.median < other.median;
        }
        if self.inliers != other.inliers {
            return self.inliers > other.inliers;
        }
        self.sse < other.sse
    }
}

fn median_in_place(v: &mut [f64]) -> f64 {
    let n = v.len();
    let mid = n / 2;
    let (_, upper, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}
