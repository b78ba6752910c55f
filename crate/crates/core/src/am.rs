//! Gradient alternating minimization: partition the data by best-fitting
//! component, then take one gradient step per component on its part.
//!
//! Also computes the data-dependent quantities (separation, within-part
//! residual and gradient bounds, component fractions) that govern local
//! convergence, and per-iteration contraction ratios against a reference.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use crate::data::{dot, norm, Dataset, ModelSet, Partition};
use crate::error::{check_dim, Error, Result};
use crate::objective::assign;
use crate::subsample::{subsample_fit, SubsampleConfig};

/// Step size and stopping rule.
#[derive(Debug, Clone, PartialEq)]
pub struct AmConfig {
    pub gamma: f64,
    pub max_iters: usize,
    /// Stop once `max_j |theta_j^{t+1} - theta_j^t| <= tol`.
    pub tol: f64,
}

impl Default for AmConfig {
    fn default() -> Self {
        Self {
            gamma: 0.1,
            max_iters: 200,
            tol: 1e-10,
        }
    }
}

impl AmConfig {
    fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "step size must be positive, got {}",
                self.gamma
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidInput("max_iters must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidInput("tol must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Where the first iterate comes from.
#[derive(Debug, Clone)]
pub enum Initialization {
    Given(ModelSet),
    /// Every entry i.i.d. normal with mean 0 and the given standard deviation.
    Gaussian { std: f64, seed: u64 },
    /// The best candidate of the sub-sample search (before its final refit).
    FromSubsample(SubsampleConfig),
}

impl Initialization {
    pub fn resolve(&self, data: &Dataset, k: usize) -> Result<ModelSet> {
        match self {
            Initialization::Given(m) => {
                check_dim(data.d(), m.d())?;
                if m.k() != k {
                    return Err(Error::InvalidInput(format!(
                        "initial model set has k = {}, expected {k}",
                        m.k()
                    )));
                }
                Ok(m.clone())
            }
            Initialization::Gaussian { std, seed } => gaussian_models(k, data.d(), *std, *seed),
            Initialization::FromSubsample(cfg) => Ok(subsample_fit(data, k, cfg)?.models),
        }
    }
}

/// `k` vectors with i.i.d. `N(0, std^2)` entries.
pub fn gaussian_models(k: usize, d: usize, std: f64, seed: u64) -> Result<ModelSet> {
    if std.is_nan() || std < 0.0 {
        return Err(Error::InvalidInput(format!("gaussian std must be nonnegative, got {std}")));
    }
    let normal = Normal::new(0.0, std)
        .map_err(|e| Error::InvalidInput(format!("bad gaussian std {std}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ModelSet::new(
        (0..k)
            .map(|_| (0..d).map(|_| normal.sample(&mut rng)).collect())
            .collect(),
    )
}

/// Output of [`am_run`].
#[derive(Debug, Clone, PartialEq)]
pub struct AmResult {
    pub models: ModelSet,
    /// Every iterate, starting with the initial one.
    pub trajectory: Vec<ModelSet>,
    pub converged: bool,
    /// Set when an update produced non-finite parameters; the run stops at
    /// the last finite iterate.
    pub diverged: bool,
    pub iterations_run: usize,
}

/// `(1/n) * sum_{i in S_j} grad F_i(theta_j)` for every component, with
/// `F_i(theta) = (y_i - <x_i, theta>)^2`.
pub fn partition_gradients(
    data: &Dataset,
    partition: &Partition,
    models: &ModelSet,
) -> Result<Vec<Vec<f64>>> {
    check_dim(models.d(), data.d())?;
    check_dim(data.n(), partition.len())?;
    check_dim(models.k(), partition.k())?;
    let d = data.d();
    let mut grads = vec![vec![0.0; d]; models.k()];
    for (i, &j) in partition.labels().iter().enumerate() {
        let x = data.x(i);
        let scale = 2.0 * (dot(x, models.theta(j)) - data.y(i));
        for (g, xv) in grads[j].iter_mut().zip(x) {
            *g += scale * xv;
        }
    }
    let inv_n = 1.0 / data.n() as f64;
    for g in &mut grads {
        for v in g.iter_mut() {
            *v *= inv_n;
        }
    }
    Ok(grads)
}

fn step_unchecked(data: &Dataset, models: &ModelSet, gamma: f64) -> Result<Vec<Vec<f64>>> {
    let partition = assign(data, models)?;
    let grads = partition_gradients(data, &partition, models)?;
    Ok(models
        .thetas()
        .iter()
        .zip(&grads)
        .map(|(t, g)| t.iter().zip(g).map(|(a, b)| a - gamma * b).collect())
        .collect())
}

/// One iteration: assign, then a gradient step of size `gamma` per part.
///
/// The gradient sum is divided by the full `n`. Components with an empty
/// part keep their parameters.
pub fn am_step(data: &Dataset, models: &ModelSet, gamma: f64) -> Result<ModelSet> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "step size must be positive, got {gamma}"
        )));
    }
    ModelSet::new(step_unchecked(data, models, gamma)?)
}

/// Iterates [`am_step`] until the parameter change drops to `tol` or
/// `max_iters` steps have run.
pub fn am_run(data: &Dataset, cfg: &AmConfig, init: &ModelSet) -> Result<AmResult> {
    cfg.validate()?;
    check_dim(data.d(), init.d())?;
    let mut trajectory = vec![init.clone()];
    let mut current = init.clone();
    let mut converged = false;
    let mut diverged = false;
    for _ in 0..cfg.max_iters {
        let next = step_unchecked(data, &current, cfg.gamma)?;
        if next.iter().flatten().any(|v| !v.is_finite()) {
            diverged = true;
            break;
        }
        let next = ModelSet::new(next)?;
        let change = next.max_distance(&current);
        trajectory.push(next.clone());
        current = next;
        if change <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(AmResult {
        models: current,
        iterations_run: trajectory.len() - 1,
        trajectory,
        converged,
        diverged,
    })
}

/// Data-dependent quantities of a reference model set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Separation: smallest residual of any point against a component it is
    /// not assigned to. `None` when `k = 1` (no competitor).
    pub delta: Option<f64>,
    /// Largest absolute residual of a point against its own component.
    pub lambda: f64,
    /// Largest per-point gradient norm against its own component.
    pub mu: f64,
    /// `|S_j| / n`.
    pub fractions: Vec<f64>,
    /// `(max_j |theta_j|)^2`.
    pub rho: f64,
}

impl Diagnostics {
    /// `1 / (4 min_j p_j)`, the step size used by the local contraction
    /// analysis. `None` if some component owns no points.
    pub fn theorem_step_size(&self) -> Option<f64> {
        let min = self.fractions.iter().copied().fold(f64::INFINITY, f64::min);
        (min > 0.0).then(|| 1.0 / (4.0 * min))
    }
}

pub fn diagnostics(data: &Dataset, reference: &ModelSet) -> Result<Diagnostics> {
    let partition = assign(data, reference)?;
    let k = reference.k();
    let n = data.n();
    let mut delta = f64::INFINITY;
    let mut lambda = 0.0f64;
    let mut mu = 0.0f64;
    for (i, &own) in partition.labels().iter().enumerate() {
        let x = data.x(i);
        for j in 0..k {
            let r = data.y(i) - dot(x, reference.theta(j));
            if j == own {
                lambda = lambda.max(r.abs());
                // |grad F_i| = 2 |r| |x|
                mu = mu.max(2.0 * r.abs() * norm(x));
            } else {
                delta = delta.min(r.abs());
            }
        }
    }
    let fractions = partition
        .sizes()
        .into_iter()
        .map(|s| s as f64 / n as f64)
        .collect();
    let rho = reference
        .thetas()
        .iter()
        .map(|t| norm(t))
        .fold(0.0, f64::max)
        .powi(2);
    Ok(Diagnostics {
        delta: (k > 1).then_some(delta),
        lambda,
        mu,
        fractions,
        rho,
    })
}

/// Largest `k` for which [`best_permutation`] enumerates all matchings.
pub const MAX_MATCHING_K: usize = 6;

/// Permutation `perm` minimizing `sum_j |models[j] - reference[perm[j]]|`.
pub fn best_permutation(models: &ModelSet, reference: &ModelSet) -> Result<Vec<usize>> {
    check_dim(reference.d(), models.d())?;
    check_dim(reference.k(), models.k())?;
    let k = models.k();
    if k > MAX_MATCHING_K {
        return Err(Error::UnsupportedSize(format!(
            "permutation matching supports k <= {MAX_MATCHING_K}, got {k}; supply aligned references"
        )));
    }
    let cost = |perm: &[usize]| -> f64 {
        perm.iter()
            .enumerate()
            .map(|(j, &p)| crate::data::distance(models.theta(j), reference.theta(p)))
            .sum()
    };
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..k).permutations(k) {
        let c = cost(&perm);
        if best.as_ref().is_none_or(|(bc, _)| c < *bc) {
            best = Some((c, perm));
        }
    }
    Ok(best.expect("k >= 1").1)
}

/// Per-iteration ratios of the worst-component distance to `reference`,
/// after matching components at the initial iterate.
pub fn contraction_trace(result: &AmResult, reference: &ModelSet) -> Result<Vec<f64>> {
    let perm = best_permutation(&result.trajectory[0], reference)?;
    contraction_trace_aligned(result, &reference.permuted(&perm))
}

/// Like [`contraction_trace`] but with `reference[j]` already matched to component `j`.
pub fn contraction_trace_aligned(result: &AmResult, reference: &ModelSet) -> Result<Vec<f64>> {
    check_dim(reference.d(), result.models.d())?;
    check_dim(reference.k(), result.models.k())?;
    let errors: Vec<f64> = result
        .trajectory
        .iter()
        .map(|m| m.max_distance(reference))
        .collect();
    Ok(errors
        .windows(2)
        .map(|w| if w[0] == 0.0 && w[1] == 0.0 { 0.0 } else { w[1] / w[0] })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::min_loss;
    use proptest::prelude::*;
    use rand::Rng;

    fn two_points() -> Dataset {
        Dataset::new(vec![vec![1.0], vec![1.0]], vec![1.0, -1.0]).unwrap()
    }

    fn ms(thetas: &[&[f64]]) -> ModelSet {
        ModelSet::new(thetas.iter().map(|t| t.to_vec()).collect()).unwrap()
    }

    /// Noiseless points on two lines through the origin in 1-D.
    fn two_lines(n: usize, slopes: [f64; 2], x_range: (f64, f64), seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n {
            let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let x = sign * rng.random_range(x_range.0..x_range.1);
            let t = [slopes[i % 2]];
            ys.push(dot(&[x], &t));
            rows.push(vec![x]);
        }
        Dataset::new(rows, ys).unwrap()
    }

    #[test]
    fn step_hand_example() {
        let out = am_step(&two_points(), &ms(&[&[0.9], &[-0.9]]), 0.5).unwrap();
        assert!((out.theta(0)[0] - 0.95).abs() < 1e-15);
        assert!((out.theta(1)[0] + 0.95).abs() < 1e-15);
    }

    #[test]
    fn step_fixed_point_on_noiseless_data() {
        let truth = ms(&[&[2.0], &[-0.5]]);
        let data = two_lines(40, [2.0, -0.5], (0.1, 1.0), 3);
        for gamma in [0.01, 0.1, 1.0, 7.0] {
            assert_eq!(am_step(&data, &truth, gamma).unwrap(), truth);
        }
    }

    #[test]
    fn step_with_one_component_is_gradient_descent() {
        let data = Dataset::new(vec![vec![1.0, 0.5], vec![-1.0, 2.0], vec![0.3, 0.3]], vec![1.0, 2.0, -1.0])
            .unwrap();
        let theta = [0.2, -0.4];
        let out = am_step(&data, &ms(&[&theta]), 0.1).unwrap();
        let mut expected = theta.to_vec();
        for (x, y) in data.rows() {
            let r = dot(x, &theta) - y;
            for (e, xv) in expected.iter_mut().zip(x) {
                *e -= 0.1 / 3.0 * 2.0 * r * xv;
            }
        }
        for (a, b) in out.theta(0).iter().zip(&expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn empty_part_keeps_its_parameters() {
        let far = [1000.0];
        let out = am_step(&two_points(), &ms(&[&[0.9], &far]), 0.5).unwrap();
        assert_eq!(out.theta(1), &far);
        assert!(am_step(&two_points(), &ms(&[&[0.9]]), 0.0).is_err());
        assert!(am_step(&two_points(), &ms(&[&[0.9, 1.0]]), 0.1).is_err());
    }

    #[test]
    fn run_recovers_two_lines_from_nearby_start() {
        let data = two_lines(200, [2.0, -1.0], (0.2, 1.0), 11);
        let truth = ms(&[&[2.0], &[-1.0]]);
        let cfg = AmConfig {
            gamma: 0.5,
            max_iters: 5000,
            tol: 1e-12,
        };
        let res = am_run(&data, &cfg, &ms(&[&[1.9], &[-1.08]])).unwrap();
        assert!(res.converged);
        assert!(res.models.max_distance(&truth) < 1e-6);
        assert_eq!(res.trajectory.len(), res.iterations_run + 1);
    }

    #[test]
    fn run_loop_accounting() {
        let data = two_points();
        let init = ms(&[&[0.9], &[-0.9]]);
        let bad = AmConfig {
            max_iters: 0,
            ..Default::default()
        };
        assert!(am_run(&data, &bad, &init).is_err());
        let one = AmConfig {
            max_iters: 1,
            ..Default::default()
        };
        let res = am_run(&data, &one, &init).unwrap();
        assert_eq!(res.trajectory.len(), 2);
        assert_eq!(res.iterations_run, 1);
        assert!(!res.converged);
    }

    #[test]
    fn run_from_truth_converges_immediately() {
        let truth = ms(&[&[1.0], &[-1.0]]);
        let res = am_run(&two_points(), &AmConfig::default(), &truth).unwrap();
        assert!(res.converged);
        assert_eq!(res.iterations_run, 1);
        assert_eq!(res.models, truth);
    }

    #[test]
    fn run_stops_on_divergence() {
        let data = Dataset::new(vec![vec![100.0], vec![-80.0]], vec![1.0, 2.0]).unwrap();
        let cfg = AmConfig {
            gamma: 10.0,
            max_iters: 10_000,
            tol: 0.0,
        };
        let res = am_run(&data, &cfg, &ms(&[&[0.3]])).unwrap();
        assert!(res.diverged && !res.converged);
        assert!(res.models.theta(0)[0].is_finite());
    }

    #[test]
    fn diagnostics_hand_example() {
        let dg = diagnostics(&two_points(), &ms(&[&[1.0], &[-1.0]])).unwrap();
        assert_eq!(dg.delta, Some(2.0));
        assert_eq!(dg.lambda, 0.0);
        assert_eq!(dg.mu, 0.0);
        assert_eq!(dg.fractions, vec![0.5, 0.5]);
        assert_eq!(dg.rho, 1.0);
        assert_eq!(dg.theorem_step_size(), Some(0.5));
    }

    #[test]
    fn diagnostics_noiseless_and_single_component() {
        let data = two_lines(30, [1.5, -2.0], (0.1, 1.0), 5);
        let dg = diagnostics(&data, &ms(&[&[1.5], &[-2.0]])).unwrap();
        assert_eq!((dg.lambda, dg.mu), (0.0, 0.0));
        assert!(dg.delta.unwrap() > 0.0);
        let dg = diagnostics(&data, &ms(&[&[0.0]])).unwrap();
        assert_eq!(dg.delta, None);
        assert_eq!(dg.fractions, vec![1.0]);
        let s = serde_json::to_string(&dg).unwrap();
        assert!(s.contains("\"delta\":null"));
    }

    #[test]
    fn diagnostics_residual_bounds() {
        let data = Dataset::new(vec![vec![1.0], vec![2.0], vec![1.0]], vec![1.5, 2.0, -1.0]).unwrap();
        let dg = diagnostics(&data, &ms(&[&[1.0], &[-1.0]])).unwrap();
        // point 0: residuals 0.5 (own) and 2.5; point 1: 0 and 4; point 2: 0 and 2
        assert_eq!(dg.delta, Some(2.0));
        assert_eq!(dg.lambda, 0.5);
        assert_eq!(dg.mu, 1.0);
        let sum: f64 = dg.fractions.iter().sum();
        assert!((sum - 1.0).abs() < 1e-15);
    }

    #[test]
    fn contraction_examples() {
        let truth = ms(&[&[1.0], &[-1.0]]);
        let res = am_run(&two_points(), &AmConfig::default(), &truth).unwrap();
        assert!(contraction_trace(&res, &truth).unwrap().iter().all(|&r| r == 0.0));

        let cfg = AmConfig {
            gamma: 0.5,
            max_iters: 1,
            tol: 0.0,
        };
        let res = am_run(&two_points(), &cfg, &ms(&[&[0.9], &[-0.9]])).unwrap();
        let trace = contraction_trace(&res, &truth).unwrap();
        assert_eq!(trace.len(), 1);
        assert!((trace[0] - 0.5).abs() < 1e-12);

        // swapped reference order is matched back
        let swapped = ms(&[&[-1.0], &[1.0]]);
        let trace = contraction_trace(&res, &swapped).unwrap();
        assert!((trace[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn contraction_within_three_quarters_at_theorem_step() {
        // |x| in [0.8, 1] keeps the per-part curvature high enough for the
        // 1/(4 p_min) step to contract by more than a quarter per iteration
        let data = two_lines(400, [1.0, -1.0], (0.8, 1.0), 21);
        let truth = ms(&[&[1.0], &[-1.0]]);
        let gamma = diagnostics(&data, &truth).unwrap().theorem_step_size().unwrap();
        let cfg = AmConfig {
            gamma,
            max_iters: 200,
            tol: 1e-14,
        };
        let init = ms(&[&[1.09], &[-0.92]]);
        let res = am_run(&data, &cfg, &init).unwrap();
        let trace = contraction_trace(&res, &truth).unwrap();
        assert!(!trace.is_empty());
        assert!(trace.iter().all(|&r| r <= 0.75), "{trace:?}");
    }

    #[test]
    fn best_permutation_limits() {
        let seven = ModelSet::new((0..7).map(|i| vec![i as f64]).collect()).unwrap();
        assert!(matches!(
            best_permutation(&seven, &seven),
            Err(Error::UnsupportedSize(_))
        ));
        let m = ms(&[&[0.0], &[5.0], &[10.0]]);
        let r = ms(&[&[9.0], &[0.5], &[4.0]]);
        assert_eq!(best_permutation(&m, &r).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn gaussian_init_is_seeded() {
        let a = gaussian_models(2, 3, 10.0, 4).unwrap();
        assert_eq!(a, gaussian_models(2, 3, 10.0, 4).unwrap());
        assert_ne!(a, gaussian_models(2, 3, 10.0, 5).unwrap());
        assert!(gaussian_models(2, 3, -1.0, 4).is_err());
    }

    proptest! {
        #[test]
        fn gradient_matches_central_differences(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(1..10);
            let d = rng.random_range(1..4);
            let k = rng.random_range(1..4);
            let rows = (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            let ys = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let data = Dataset::new(rows, ys).unwrap();
            let models = gaussian_models(k, d, 1.0, seed ^ 1).unwrap();
            let part = assign(&data, &models).unwrap();
            let grads = partition_gradients(&data, &part, &models).unwrap();
            let members = part.members();
            let objective = |j: usize, theta: &[f64]| -> f64 {
                members[j].iter().map(|&i| (data.y(i) - dot(data.x(i), theta)).powi(2)).sum::<f64>() / n as f64
            };
            let h = 1e-5;
            for j in 0..k {
                for c in 0..d {
                    let mut plus = models.theta(j).to_vec();
                    let mut minus = plus.clone();
                    plus[c] += h;
                    minus[c] -= h;
                    let fd = (objective(j, &plus) - objective(j, &minus)) / (2.0 * h);
                    let g = grads[j][c];
                    prop_assert!((fd - g).abs() <= 1e-6 * g.abs().max(1.0), "fd {fd} vs {g}");
                }
            }
        }

        #[test]
        fn converged_runs_have_stable_labels(seed in any::<u64>()) {
            let data = two_lines(60, [1.0, -1.5], (0.2, 1.0), seed);
            let init = gaussian_models(2, 1, 1.0, seed).unwrap();
            let cfg = AmConfig { gamma: 0.5, max_iters: 3000, tol: 1e-10 };
            let res = am_run(&data, &cfg, &init).unwrap();
            if res.converged {
                let t = res.iterations_run;
                prop_assert_eq!(
                    assign(&data, &res.trajectory[t - 1]).unwrap(),
                    assign(&data, &res.trajectory[t]).unwrap()
                );
            }
            prop_assert_eq!(&res, &am_run(&data, &cfg, &init).unwrap());
            prop_assert!(min_loss(&data, &res.models).unwrap().is_finite());
        }
    }
}
