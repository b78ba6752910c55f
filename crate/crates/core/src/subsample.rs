//! Sub-sample ERM: fit every (or `h` random) labeling of a small sample,
//! score each candidate by its full-data min-loss, keep the best and refit
//! it per induced part. Includes an exhaustive ERM oracle for tiny inputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::data::{Dataset, ModelSet};
use crate::error::{Error, Result};
use crate::objective::{assign, min_loss};
use crate::regression::{least_squares, robust_fit, RobustConfig};

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;

/// How each part is fitted.
#[derive(Debug, Clone, PartialEq)]
pub enum Regressor {
    LeastSquares,
    Robust(RobustConfig),
}

/// Which labelings of the sample get evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// All `k^|A|` labelings, in lexicographic order.
    Exhaustive,
    /// `h` labelings drawn uniformly at random.
    Random { h: usize },
}

/// Where the labeled sample comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSource {
    /// `size` indices drawn uniformly with replacement.
    Draw(usize),
    /// Every index of the dataset once, in order.
    WholeDataset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleConfig {
    pub sample: SampleSource,
    pub mode: SearchMode,
    pub regressor: Regressor,
    pub seed: u64,
    /// Parts smaller than this are fitted to the zero vector.
    pub min_part_size: usize,
    pub enumeration_cap: u128,
}

impl Default for SubsampleConfig {
    fn default() -> Self {
        Self {
            sample: SampleSource::Draw(150),
            mode: SearchMode::Random { h: 1000 },
            regressor: Regressor::LeastSquares,
            seed: 0,
            min_part_size: 1,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Output of [`subsample_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct SubsampleResult {
    /// Parameters fitted on the parts of the winning labeling.
    pub models: ModelSet,
    /// Full-data min-loss of `models`.
    pub score: f64,
    /// `models` refitted on the parts they induce on the full dataset.
    pub refit_models: ModelSet,
    pub sample: Vec<usize>,
    pub best_candidate: usize,
    pub candidates_evaluated: usize,
}

/// `size` indices drawn i.i.d. uniformly from `[0, n)`.
pub fn draw_subsample(data: &Dataset, size: usize, seed: u64) -> Result<Vec<usize>> {
    if size == 0 {
        return Err(Error::InvalidInput("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..size).map(|_| rng.random_range(0..data.n())).collect())
}

fn count_labelings(m: usize, k: usize) -> u128 {
    let mut count: u128 = 1;
    for _ in 0..m {
        count = count.saturating_mul(k as u128);
    }
    count
}

/// Every length-`m` vector over `[0, k)` in lexicographic order.
#[derive(Debug, Clone)]
pub struct Assignments {
    current: Vec<usize>,
    k: usize,
    done: bool,
}

impl Iterator for Assignments {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        // odometer increment, last position fastest
        self.done = true;
        for slot in self.current.iter_mut().rev() {
            *slot += 1;
            if *slot < self.k {
                self.done = false;
                break;
            }
            *slot = 0;
        }
        Some(out)
    }
}

/// Iterator over all `k^m` labelings, refused when it would exceed `cap`.
pub fn enumerate_assignments(m: usize, k: usize, cap: u128) -> Result<Assignments> {
    if m == 0 || k == 0 {
        return Err(Error::InvalidInput("enumeration needs m >= 1 and k >= 1".into()));
    }
    let count = count_labelings(m, k);
    if count > cap {
        return Err(Error::TooLarge { count, cap });
    }
    Ok(Assignments {
        current: vec![0; m],
        k,
        done: false,
    })
}

/// The `index`-th labeling in lexicographic order.
fn labeling_at(mut index: u128, m: usize, k: usize) -> Vec<usize> {
    let mut labels = vec![0; m];
    for slot in labels.iter_mut().rev() {
        *slot = (index % k as u128) as usize;
        index /= k as u128;
    }
    labels
}

fn mix(seed: u64, a: u64, b: u64) -> u64 {
    // splitmix64 finalizer over a simple combination
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const LABEL_STREAM: u64 = 0x6c61_6265_6c73;
const REFIT_TAG: u64 = u64::MAX;

fn fit_part(
    data: &Dataset,
    points: &[usize],
    regressor: &Regressor,
    min_part_size: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if points.is_empty() || points.len() < min_part_size {
        return Ok(vec![0.0; data.d()]);
    }
    match regressor {
        Regressor::LeastSquares => least_squares(data, points),
        Regressor::Robust(cfg) => {
            if points.len() < cfg.min_sample_for(data.d()) {
                least_squares(data, points)
            } else {
                robust_fit(data, points, &cfg.with_seed(seed))
            }
        }
    }
}

fn fit_parts(
    data: &Dataset,
    parts: &[Vec<usize>],
    regressor: &Regressor,
    min_part_size: usize,
    seed: u64,
) -> Result<ModelSet> {
    let thetas = parts
        .iter()
        .enumerate()
        .map(|(j, p)| fit_part(data, p, regressor, min_part_size, mix(seed, j as u64, 0)))
        .collect::<Result<Vec<_>>>()?;
    ModelSet::new(thetas)
}

/// Fits one model per labeled part of the sample and scores them on the
/// full dataset.
///
/// `sample[t]` carries label `labels[t]`. Empty parts, and parts smaller
/// than `min_part_size`, get the zero vector. A robust part with fewer
/// points than its consensus sample falls back to least squares. `seed`
/// drives the robust fits only.
pub fn evaluate_candidate(
    data: &Dataset,
    sample: &[usize],
    labels: &[usize],
    k: usize,
    regressor: &Regressor,
    min_part_size: usize,
    seed: u64,
) -> Result<(ModelSet, f64)> {
    if labels.len() != sample.len() {
        return Err(Error::DimensionMismatch {
            expected: sample.len(),
            found: labels.len(),
        });
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let mut parts = vec![Vec::new(); k];
    for (&i, &l) in sample.iter().zip(labels) {
        if l >= k {
            return Err(Error::InvalidInput(format!("label {l} out of range for k = {k}")));
        }
        parts[l].push(i);
    }
    let models = fit_parts(data, &parts, regressor, min_part_size, seed)?;
    let score = min_loss(data, &models)?;
    Ok((models, score))
}

/// Refits every component on the points it wins over the full dataset.
pub fn refit(
    data: &Dataset,
    models: &ModelSet,
    regressor: &Regressor,
    min_part_size: usize,
    seed: u64,
) -> Result<ModelSet> {
    let parts = assign(data, models)?.members();
    fit_parts(data, &parts, regressor, min_part_size, seed)
}

type Scored = Option<(usize, f64, ModelSet)>;

fn better(a: Scored, b: Scored) -> Scored {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// Sub-sample search for `k` lines.
///
/// Candidates are evaluated in parallel; the winner is the lowest score,
/// with ties going to the earliest candidate, so the result matches a
/// sequential scan.
pub fn subsample_fit(data: &Dataset, k: usize, cfg: &SubsampleConfig) -> Result<SubsampleResult> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let sample = match cfg.sample {
        SampleSource::Draw(size) => draw_subsample(data, size, cfg.seed)?,
        SampleSource::WholeDataset => (0..data.n()).collect(),
    };
    let m = sample.len();

    let (count, label_of): (usize, Box<dyn Fn(usize) -> Vec<usize> + Sync>) = match cfg.mode {
        SearchMode::Exhaustive => {
            let total = count_labelings(m, k);
            if total > cfg.enumeration_cap {
                return Err(Error::TooLarge {
                    count: total,
                    cap: cfg.enumeration_cap,
                });
            }
            (total as usize, Box::new(move |c| labeling_at(c as u128, m, k)))
        }
        SearchMode::Random { h } => {
            if h == 0 {
                return Err(Error::InvalidInput("random mode needs h >= 1".into()));
            }
            let seed = mix(cfg.seed, LABEL_STREAM, 0);
            (
                h,
                Box::new(move |c| {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(c as u64);
                    (0..m).map(|_| rng.random_range(0..k)).collect()
                }),
            )
        }
    };

    let best = (0..count)
        .into_par_iter()
        .map(|c| {
            let labels = label_of(c);
            evaluate_candidate(
                data,
                &sample,
                &labels,
                k,
                &cfg.regressor,
                cfg.min_part_size,
                mix(cfg.seed, c as u64, 1),
            )
            .map(|(models, score)| Some((c, score, models)))
        })
        .try_reduce(|| None, |a, b| Ok(better(a, b)))?;
    let (best_candidate, score, models) = best.expect("at least one candidate");

    let refit_models = refit(
        data,
        &models,
        &cfg.regressor,
        cfg.min_part_size,
        mix(cfg.seed, REFIT_TAG, 1),
    )?;
    Ok(SubsampleResult {
        models,
        score,
        refit_models,
        sample,
        best_candidate,
        candidates_evaluated: count,
    })
}

/// Exact minimizer of the min-loss for tiny inputs: least-squares fits of
/// every labeling of the full dataset, keeping the lowest min-loss.
///
/// Returns the fitted models and their min-loss.
pub fn brute_force_erm(data: &Dataset, k: usize) -> Result<(ModelSet, f64)> {
    let mut best: Option<(ModelSet, f64)> = None;
    for labels in enumerate_assignments(data.n(), k, DEFAULT_ENUMERATION_CAP)? {
        let mut parts = vec![Vec::new(); k];
        for (i, &l) in labels.iter().enumerate() {
            parts[l].push(i);
        }
        let thetas = parts
            .iter()
            .map(|p| {
                if p.is_empty() {
                    Ok(vec![0.0; data.d()])
                } else {
                    least_squares(data, p)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let models = ModelSet::new(thetas)?;
        let loss = min_loss(data, &models)?;
        if best.as_ref().is_none_or(|(_, b)| loss < *b) {
            best = Some((models, loss));
        }
    }
    Ok(best.expect("at least one labeling"))
}

/// Sample size for an `epsilon`-additive approximation with probability
/// `1 - 2 delta`:
/// `ceil(multiplier * k^2 * (alpha / lambda_min) * (d + ln(k / delta)) / epsilon^2)`.
///
/// `multiplier` stands in for the unspecified universal constant; use 1.
pub fn recommended_sample_size(
    k: usize,
    d: usize,
    alpha: f64,
    lambda_min: f64,
    delta: f64,
    epsilon: f64,
    multiplier: f64,
) -> Result<usize> {
    if k == 0 || d == 0 {
        return Err(Error::InvalidInput("k and d must be positive".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("alpha must be in (0, 1], got {alpha}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidInput(format!("delta must be in (0, 1), got {delta}")));
    }
    if !(lambda_min > 0.0 && epsilon > 0.0 && multiplier > 0.0) {
        return Err(Error::InvalidInput(
            "lambda_min, epsilon and multiplier must be positive".into(),
        ));
    }
    let k = k as f64;
    let size = multiplier * k * k * (alpha / lambda_min) * (d as f64 + (k / delta).ln())
        / (epsilon * epsilon);
    Ok(size.ceil() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::dot;
    use proptest::prelude::*;
    use rand::Rng;
    use std::collections::HashSet;

    fn two_points() -> Dataset {
        Dataset::new(vec![vec![1.0], vec![1.0]], vec![1.0, -1.0]).unwrap()
    }

    fn random_instance(seed: u64, n: usize, d: usize) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = (0..n)
            .map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let ys = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        Dataset::new(rows, ys).unwrap()
    }

    /// Noiseless 2-D points, alternating between two lines.
    fn noiseless_two_lines(n: usize, seed: u64) -> (Dataset, ModelSet) {
        let truth = ModelSet::new(vec![vec![1.0, 2.0], vec![-1.5, 0.5]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut ys = Vec::new();
        for i in 0..n {
            let x = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            ys.push(dot(&x, truth.theta(i % 2)));
            rows.push(x);
        }
        (Dataset::new(rows, ys).unwrap(), truth)
    }

    #[test]
    fn draw_examples() {
        let data = two_points();
        assert!(draw_subsample(&data, 0, 1).is_err());
        let one = Dataset::new(vec![vec![1.0]], vec![0.0]).unwrap();
        assert_eq!(draw_subsample(&one, 5, 9).unwrap(), vec![0; 5]);
        let big = random_instance(0, 50, 1);
        assert_eq!(
            draw_subsample(&big, 20, 42).unwrap(),
            draw_subsample(&big, 20, 42).unwrap()
        );
        assert!(draw_subsample(&big, 200, 1).unwrap().iter().all(|&i| i < 50));
    }

    #[test]
    fn enumeration_examples() {
        let all: Vec<_> = enumerate_assignments(2, 2, 100).unwrap().collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(enumerate_assignments(1, 3, 100).unwrap().count(), 3);
        let eight: Vec<_> = enumerate_assignments(3, 2, 100).unwrap().collect();
        assert_eq!(eight.len(), 8);
        assert_eq!(eight.iter().collect::<HashSet<_>>().len(), 8);
        assert!(matches!(
            enumerate_assignments(30, 2, DEFAULT_ENUMERATION_CAP),
            Err(Error::TooLarge { .. })
        ));
        assert!(enumerate_assignments(0, 2, 100).is_err());
    }

    #[test]
    fn labeling_at_agrees_with_enumeration() {
        for (c, labels) in enumerate_assignments(4, 3, 1000).unwrap().enumerate() {
            assert_eq!(labeling_at(c as u128, 4, 3), labels);
        }
    }

    #[test]
    fn perfect_split_scores_zero() {
        let (data, _) = noiseless_two_lines(8, 1);
        let sample: Vec<usize> = (0..8).collect();
        let labels: Vec<usize> = (0..8).map(|i| i % 2).collect();
        let (_, score) =
            evaluate_candidate(&data, &sample, &labels, 2, &Regressor::LeastSquares, 1, 0).unwrap();
        assert!(score < 1e-24);
    }

    #[test]
    fn identical_labels_give_global_line() {
        let data = random_instance(3, 10, 2);
        let sample: Vec<usize> = (0..10).collect();
        let (models, score) =
            evaluate_candidate(&data, &sample, &[1; 10], 2, &Regressor::LeastSquares, 1, 0).unwrap();
        assert_eq!(models.theta(0), &[0.0, 0.0]);
        let global = least_squares(&data, &sample).unwrap();
        let replicated = ModelSet::new(vec![global.clone(), global]).unwrap();
        let zero_plus_global = ModelSet::new(vec![vec![0.0, 0.0], models.theta(1).to_vec()]).unwrap();
        assert_eq!(score, min_loss(&data, &zero_plus_global).unwrap());
        assert!(min_loss(&data, &replicated).unwrap() >= score - 1e-12);
        assert!(evaluate_candidate(&data, &sample, &[0; 3], 2, &Regressor::LeastSquares, 1, 0).is_err());
    }

    #[test]
    fn conforming_labels_beat_every_other_labeling() {
        let (data, _) = noiseless_two_lines(8, 5);
        let sample: Vec<usize> = (0..8).collect();
        let conforming: Vec<usize> = (0..8).map(|i| i % 2).collect();
        let (_, best) =
            evaluate_candidate(&data, &sample, &conforming, 2, &Regressor::LeastSquares, 1, 0).unwrap();
        for labels in enumerate_assignments(8, 2, 1000).unwrap() {
            let (_, s) =
                evaluate_candidate(&data, &sample, &labels, 2, &Regressor::LeastSquares, 1, 0).unwrap();
            assert!(best <= s + 1e-15);
        }
    }

    #[test]
    fn min_part_size_zeroes_small_parts() {
        let data = random_instance(4, 6, 1);
        let sample: Vec<usize> = (0..6).collect();
        let (models, _) = evaluate_candidate(
            &data,
            &sample,
            &[0, 0, 0, 0, 0, 1],
            2,
            &Regressor::LeastSquares,
            2,
            0,
        )
        .unwrap();
        assert_eq!(models.theta(1), &[0.0]);
    }

    #[test]
    fn whole_set_exhaustive_matches_brute_force() {
        let data = random_instance(8, 6, 2);
        let cfg = SubsampleConfig {
            sample: SampleSource::WholeDataset,
            mode: SearchMode::Exhaustive,
            ..Default::default()
        };
        let res = subsample_fit(&data, 2, &cfg).unwrap();
        let (_, opt) = brute_force_erm(&data, 2).unwrap();
        assert!((min_loss(&data, &res.refit_models).unwrap() - opt).abs() < 1e-9);
        assert_eq!(res.candidates_evaluated, 64);
    }

    #[test]
    fn single_random_candidate_is_evaluate_then_refit() {
        let data = random_instance(12, 30, 2);
        let cfg = SubsampleConfig {
            sample: SampleSource::Draw(10),
            mode: SearchMode::Random { h: 1 },
            seed: 77,
            ..Default::default()
        };
        let res = subsample_fit(&data, 2, &cfg).unwrap();
        let sample = draw_subsample(&data, 10, 77).unwrap();
        assert_eq!(res.sample, sample);
        let mut rng = ChaCha8Rng::seed_from_u64(mix(77, LABEL_STREAM, 0));
        rng.set_stream(0);
        let labels: Vec<usize> = (0..10).map(|_| rng.random_range(0..2)).collect();
        let (models, score) =
            evaluate_candidate(&data, &sample, &labels, 2, &Regressor::LeastSquares, 1, 0).unwrap();
        assert_eq!(res.models, models);
        assert_eq!(res.score, score);
        assert_eq!(
            res.refit_models,
            refit(&data, &models, &Regressor::LeastSquares, 1, 0).unwrap()
        );
    }

    #[test]
    fn exhaustive_recovers_noiseless_lines() {
        let (data, truth) = noiseless_two_lines(60, 9);
        // first 8 points hold 4 of each line, enough for d = 2
        let mut cfg = SubsampleConfig {
            sample: SampleSource::WholeDataset,
            mode: SearchMode::Exhaustive,
            ..Default::default()
        };
        let head = data.select(&(0..8).collect::<Vec<_>>()).unwrap();
        let res = subsample_fit(&head, 2, &cfg).unwrap();
        let full_loss = min_loss(&data, &res.refit_models).unwrap();
        assert!(full_loss < 1e-20, "{full_loss}");
        let perm = crate::am::best_permutation(&res.refit_models, &truth).unwrap();
        assert!(res.refit_models.max_distance(&truth.permuted(&perm)) < 1e-9);

        cfg.sample = SampleSource::Draw(12);
        cfg.seed = 3;
        let res = subsample_fit(&data, 2, &cfg).unwrap();
        let counts = res.sample.iter().fold([0; 2], |mut c, &i| {
            c[i % 2] += 1;
            c
        });
        assert!(counts.iter().all(|&c| c >= 3), "{counts:?}");
        assert!(min_loss(&data, &res.refit_models).unwrap() < 1e-20);
    }

    #[test]
    fn exhaustive_respects_cap() {
        let data = random_instance(1, 40, 1);
        let cfg = SubsampleConfig {
            sample: SampleSource::Draw(30),
            mode: SearchMode::Exhaustive,
            ..Default::default()
        };
        assert!(matches!(subsample_fit(&data, 2, &cfg), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn brute_force_examples() {
        let (models, opt) = brute_force_erm(&two_points(), 2).unwrap();
        assert_eq!(opt, 0.0);
        let mut got: Vec<f64> = models.thetas().iter().map(|t| t[0]).collect();
        got.sort_by(f64::total_cmp);
        assert_eq!(got, vec![-1.0, 1.0]);

        let data = random_instance(2, 7, 2);
        let (models, opt) = brute_force_erm(&data, 1).unwrap();
        let all: Vec<usize> = (0..7).collect();
        let ls = least_squares(&data, &all).unwrap();
        assert!(models.max_distance(&ModelSet::new(vec![ls.clone()]).unwrap()) < 1e-12);
        let mse = crate::regression::sq_error(&data, &all, &ls).unwrap() / 7.0;
        assert!((opt - mse).abs() < 1e-12);

        let data = random_instance(6, 5, 1);
        let (_, opt) = brute_force_erm(&data, 5).unwrap();
        assert!(opt < 1e-24);
    }

    #[test]
    fn sample_size_examples() {
        assert_eq!(recommended_sample_size(1, 1, 1.0, 1.0, 0.5, 1.0, 1.0).unwrap(), 2);
        let base = 1.0 * 4.0 * 0.5 / 0.2 * (10.0 + (2.0f64 / 0.1).ln());
        let a = recommended_sample_size(2, 10, 0.5, 0.2, 0.1, 1.0, 1.0).unwrap();
        let b = recommended_sample_size(2, 10, 0.5, 0.2, 0.1, 0.5, 1.0).unwrap();
        assert_eq!(a, base.ceil() as usize);
        assert_eq!(b, (4.0 * base).ceil() as usize);
        let d20 = recommended_sample_size(2, 20, 0.5, 0.2, 0.1, 1.0, 1.0).unwrap();
        assert_eq!(d20 - a, 100);
        assert!(recommended_sample_size(2, 10, 0.5, 0.2, 1.5, 1.0, 1.0).is_err());
        assert!(recommended_sample_size(2, 10, 0.0, 0.2, 0.5, 1.0, 1.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn refit_never_increases_loss(seed in any::<u64>()) {
            let data = random_instance(seed, 40, 2);
            let cfg = SubsampleConfig {
                sample: SampleSource::Draw(12),
                mode: SearchMode::Random { h: 40 },
                seed,
                ..Default::default()
            };
            let res = subsample_fit(&data, 2, &cfg).unwrap();
            prop_assert!(min_loss(&data, &res.refit_models).unwrap() <= res.score + 1e-9);
            prop_assert_eq!(&res, &subsample_fit(&data, 2, &cfg).unwrap());
        }

        #[test]
        fn random_score_nonincreasing_in_h(seed in any::<u64>()) {
            let data = random_instance(seed, 30, 1);
            let mut last = f64::INFINITY;
            for h in [1, 5, 20, 60] {
                let cfg = SubsampleConfig {
                    sample: SampleSource::Draw(10),
                    mode: SearchMode::Random { h },
                    seed,
                    regressor: Regressor::Robust(RobustConfig { trials: 10, ..Default::default() }),
                    ..Default::default()
                };
                let res = subsample_fit(&data, 2, &cfg).unwrap();
                prop_assert!(res.score <= last);
                last = res.score;
            }
        }
    }
}
