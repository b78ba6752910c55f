//! Monte-Carlo estimates of empirical Rademacher complexities: the norm
//! ball of linear predictors, and the k-mixture class under min-loss.
//!
//! The mixture supremum has no closed form, so it is approximated by the
//! best of a fixed set of random candidates. That makes the mixture
//! estimate a lower bound, which is the conservative side when checking
//! the upper bound `R(mixture) <= k * mu * R(linear)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{dot, norm, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityConfig {
    pub sigma_draws: usize,
    /// Random model sets searched per sign draw in the mixture estimate.
    pub candidate_models: usize,
    /// Lipschitz constant of the base loss. `None` uses `2 (b + w R)`, the
    /// constant of the squared loss on the data's bounded domain.
    pub lipschitz_mu: Option<f64>,
    pub seed: u64,
}

impl Default for ComplexityConfig {
    fn default() -> Self {
        Self {
            sigma_draws: 2000,
            candidate_models: 5000,
            lipschitz_mu: None,
            seed: 0,
        }
    }
}

impl ComplexityConfig {
    fn validate(&self) -> Result<()> {
        if self.sigma_draws == 0 || self.candidate_models == 0 {
            return Err(Error::InvalidInput(
                "sigma_draws and candidate_models must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let std_error = if samples.len() > 1 {
            let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Self { mean, std_error }
    }
}

const SIGMA_TAG: u64 = 0x0053_4947_4d41;
const CANDIDATE_TAG: u64 = 0x4341_4e44;

/// Rademacher signs of draw `t`; each draw has its own stream so results
/// do not depend on evaluation order.
fn signs(seed: u64, t: usize, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ SIGMA_TAG);
    rng.set_stream(t as u64);
    (0..n)
        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
        .collect()
}

/// Estimate of `(1/n) E sup_{|theta| <= w} sum_i sigma_i <theta, x_i>`,
/// using the closed form `w |sum_i sigma_i x_i|` for the supremum.
pub fn linear_rademacher(data: &Dataset, w: f64, cfg: &ComplexityConfig) -> Result<Estimate> {
    cfg.validate()?;
    check_w(w)?;
    let n = data.n();
    let d = data.d();
    let samples: Vec<f64> = (0..cfg.sigma_draws)
        .into_par_iter()
        .map(|t| {
            let sigma = signs(cfg.seed, t, n);
            let mut v = vec![0.0; d];
            for (i, s) in sigma.iter().enumerate() {
                for (acc, x) in v.iter_mut().zip(data.x(i)) {
                    *acc += s * x;
                }
            }
            w * norm(&v) / n as f64
        })
        .collect();
    Ok(Estimate::from_samples(&samples))
}

fn check_w(w: f64) -> Result<()> {
    if !(w >= 0.0 && w.is_finite()) {
        return Err(Error::InvalidInput(format!("norm bound must be nonnegative, got {w}")));
    }
    Ok(())
}

/// Per-point min-losses of `count` random model sets, each component drawn
/// uniformly from the radius-`w` ball. Row `c` holds candidate `c`; the
/// first `m` rows do not depend on `count`.
pub fn candidate_losses(data: &Dataset, k: usize, w: f64, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let d = data.d();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ CANDIDATE_TAG);
    (0..count)
        .map(|_| {
            let thetas: Vec<Vec<f64>> = (0..k).map(|_| uniform_in_ball(&mut rng, d, w)).collect();
            data.rows()
                .map(|(x, y)| {
                    thetas
                        .iter()
                        .map(|t| (y - dot(x, t)).powi(2))
                        .fold(f64::INFINITY, f64::min)
                })
                .collect()
        })
        .collect()
}

pub(crate) fn uniform_in_ball(rng: &mut impl Rng, d: usize, radius: f64) -> Vec<f64> {
    let dir: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
    let len = norm(&dir);
    let r: f64 = rng.random::<f64>().powf(1.0 / d as f64) * radius;
    if len == 0.0 {
        return vec![0.0; d];
    }
    dir.into_iter().map(|v| v * r / len).collect()
}

/// Lower-bound estimate of
/// `(1/n) E sup_{h in H_k} sum_i sigma_i min_j (y_i - h_j(x_i))^2`
/// over the `k`-mixture of radius-`w` linear predictors.
pub fn mixture_rademacher_lower(
    data: &Dataset,
    k: usize,
    w: f64,
    cfg: &ComplexityConfig,
) -> Result<Estimate> {
    cfg.validate()?;
    check_w(w)?;
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let losses = candidate_losses(data, k, w, cfg.candidate_models, cfg.seed);
    let n = data.n();
    let samples: Vec<f64> = (0..cfg.sigma_draws)
        .into_par_iter()
        .map(|t| {
            let sigma = signs(cfg.seed, t, n);
            losses
                .iter()
                .map(|row| dot(&sigma, row))
                .fold(f64::NEG_INFINITY, f64::max)
                / n as f64
        })
        .collect();
    Ok(Estimate::from_samples(&samples))
}

/// Statistical comparison of both sides of the mixture complexity bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    /// Mixture complexity estimate (a lower bound).
    pub lhs: Estimate,
    /// `k * mu * linear complexity estimate`.
    pub rhs: Estimate,
    pub mu: f64,
    /// `lhs.mean <= rhs.mean + 3 * sqrt(lhs.se^2 + rhs.se^2)`.
    pub holds: bool,
}

/// Checks `R(mixture_k) <= k * mu * R(linear)` on `data` with norm bound `w`.
pub fn check_theorem1(data: &Dataset, k: usize, w: f64, cfg: &ComplexityConfig) -> Result<BoundCheck> {
    let mu = match cfg.lipschitz_mu {
        Some(mu) => mu,
        None => {
            let b = data.bounds(w);
            2.0 * (b.y_abs_max + w * b.x_norm_max)
        }
    };
    let lhs = mixture_rademacher_lower(data, k, w, cfg)?;
    let lin = linear_rademacher(data, w, cfg)?;
    let factor = k as f64 * mu;
    let rhs = Estimate {
        mean: factor * lin.mean,
        std_error: factor * lin.std_error,
    };
    let combined = lhs.std_error.hypot(rhs.std_error);
    Ok(BoundCheck {
        lhs,
        rhs,
        mu,
        holds: lhs.mean <= rhs.mean + 3.0 * combined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(draws: usize, cands: usize, seed: u64) -> ComplexityConfig {
        ComplexityConfig {
            sigma_draws: draws,
            candidate_models: cands,
            lipschitz_mu: None,
            seed,
        }
    }

    fn random_data(seed: u64, n: usize, d: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..n).map(|_| uniform_in_ball(&mut rng, d, 1.0)).collect();
        let ys = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        Dataset::new(rows, ys).unwrap()
    }

    /// Exact `E_sigma f(sigma)` over all `2^n` sign vectors.
    fn enumerate_signs(n: usize, f: impl Fn(&[f64]) -> f64) -> f64 {
        let total = 1usize << n;
        let mut acc = 0.0;
        for mask in 0..total {
            let sigma: Vec<f64> = (0..n)
                .map(|i| if mask >> i & 1 == 1 { 1.0 } else { -1.0 })
                .collect();
            acc += f(&sigma);
        }
        acc / total as f64
    }

    #[test]
    fn single_point_is_exact() {
        let data = Dataset::new(vec![vec![1.0, 0.0]], vec![0.0]).unwrap();
        let e = linear_rademacher(&data, 1.0, &cfg(200, 1, 3)).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_error, 0.0);
    }

    #[test]
    fn linear_in_w() {
        let data = random_data(1, 6, 2);
        let a = linear_rademacher(&data, 1.0, &cfg(300, 1, 5)).unwrap();
        let b = linear_rademacher(&data, 2.0, &cfg(300, 1, 5)).unwrap();
        assert!((b.mean - 2.0 * a.mean).abs() < 1e-14);
    }

    #[test]
    fn two_equal_points_average_half() {
        // E|s1 + s2| / 2 over four sign patterns = (2 + 0 + 0 + 2) / 4 / 2
        let data = Dataset::new(vec![vec![1.0, 0.0], vec![1.0, 0.0]], vec![0.0, 0.0]).unwrap();
        let exact = enumerate_signs(2, |s| (s[0] + s[1]).abs() / 2.0);
        assert_eq!(exact, 0.5);
        let e = linear_rademacher(&data, 1.0, &cfg(4000, 1, 8)).unwrap();
        assert!((e.mean - exact).abs() <= 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn linear_matches_sign_enumeration() {
        for (seed, n) in [(2u64, 5usize), (3, 9), (4, 12)] {
            let data = random_data(seed, n, 3);
            let exact = enumerate_signs(n, |s| {
                let mut v = [0.0; 3];
                for (i, si) in s.iter().enumerate() {
                    for c in 0..3 {
                        v[c] += si * data.x(i)[c];
                    }
                }
                1.5 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() / n as f64
            });
            let e = linear_rademacher(&data, 1.5, &cfg(2000, 1, seed)).unwrap();
            assert!((e.mean - exact).abs() <= 3.0 * e.std_error, "n={n}: {e:?} vs {exact}");
        }
    }

    #[test]
    fn zero_radius_mixture_matches_enumeration() {
        // w = 0 leaves only the zero model, so the supremum is the
        // sign-weighted sum of y^2 itself; its expectation is zero
        let data = random_data(5, 8, 2);
        let exact = enumerate_signs(8, |s| {
            s.iter().zip(data.targets()).map(|(a, y)| a * y * y).sum::<f64>() / 8.0
        });
        assert!(exact.abs() < 1e-15);
        let e = mixture_rademacher_lower(&data, 1, 0.0, &cfg(2000, 3, 6)).unwrap();
        assert!((e.mean - exact).abs() <= 3.0 * e.std_error, "{e:?}");
    }

    #[test]
    fn mixture_matches_enumeration_for_fixed_candidates() {
        let data = random_data(7, 10, 2);
        let c = cfg(3000, 50, 9);
        let losses = candidate_losses(&data, 2, 1.0, c.candidate_models, c.seed);
        let exact = enumerate_signs(10, |s| {
            losses
                .iter()
                .map(|row| s.iter().zip(row).map(|(a, b)| a * b).sum::<f64>())
                .fold(f64::NEG_INFINITY, f64::max)
                / 10.0
        });
        let e = mixture_rademacher_lower(&data, 2, 1.0, &c).unwrap();
        assert!((e.mean - exact).abs() <= 3.0 * e.std_error, "{e:?} vs {exact}");
        assert!(e.mean > 0.0);
    }

    #[test]
    fn more_candidates_never_lower_the_estimate() {
        let data = random_data(11, 12, 3);
        let mut last = f64::NEG_INFINITY;
        for cands in [1, 10, 100, 1000] {
            let e = mixture_rademacher_lower(&data, 2, 1.0, &cfg(200, cands, 4)).unwrap();
            assert!(e.mean >= last);
            last = e.mean;
        }
    }

    #[test]
    fn candidate_prefix_is_stable() {
        let data = random_data(1, 5, 2);
        let a = candidate_losses(&data, 3, 1.0, 10, 2);
        let b = candidate_losses(&data, 3, 1.0, 40, 2);
        assert_eq!(a[..], b[..10]);
    }

    #[test]
    fn bound_holds_for_one_component() {
        let data = random_data(13, 10, 2);
        let r = check_theorem1(&data, 1, 1.0, &cfg(1000, 1000, 1)).unwrap();
        assert!(r.holds, "{r:?}");
        let b = data.bounds(1.0);
        assert_eq!(r.mu, 2.0 * (b.y_abs_max + b.x_norm_max));
    }

    #[test]
    fn bound_holds_for_three_components() {
        let data = random_data(17, 10, 3);
        let r = check_theorem1(&data, 3, 1.0, &cfg(1000, 1000, 2)).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn bound_degenerate_radius() {
        let data = random_data(19, 8, 2);
        let r = check_theorem1(&data, 2, 0.0, &cfg(2000, 20, 3)).unwrap();
        assert_eq!(r.rhs.mean, 0.0);
        assert_eq!(r.rhs.std_error, 0.0);
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn rejects_bad_config() {
        let data = random_data(1, 3, 1);
        assert!(linear_rademacher(&data, 1.0, &cfg(0, 1, 0)).is_err());
        assert!(mixture_rademacher_lower(&data, 1, -1.0, &cfg(1, 1, 0)).is_err());
        assert!(mixture_rademacher_lower(&data, 0, 1.0, &cfg(1, 1, 0)).is_err());
    }

    #[test]
    fn estimates_are_order_independent() {
        let data = random_data(23, 9, 2);
        let c = cfg(500, 200, 12);
        assert_eq!(
            mixture_rademacher_lower(&data, 2, 1.0, &c).unwrap(),
            mixture_rademacher_lower(&data, 2, 1.0, &c).unwrap()
        );
    }
}
