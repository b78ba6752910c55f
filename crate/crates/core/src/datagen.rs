//! Synthetic datasets, seeded train/test splits and CSV files.
//!
//! CSV layout: a mandatory header row, the target in the first column
//! (`y`), then one column per feature (`f0`, `f1`, ...).

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::complexity::uniform_in_ball;
use crate::data::{dot, Dataset, ModelSet, Partition};
use crate::error::{Error, Result};

/// Parameters of a mixture-of-lines dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    pub k: usize,
    pub d: usize,
    pub n: usize,
    pub noise_std: f64,
    /// Per-component intercepts. Any nonzero entry appends a constant-1
    /// feature, so the generated data has `d + 1` columns.
    pub biases: Vec<f64>,
    pub component_weights: Vec<f64>,
    pub theta_scale: f64,
    pub seed: u64,
}

impl MixtureSpec {
    /// Equal weights, no intercepts, no noise, unit scale.
    pub fn new(k: usize, d: usize, n: usize) -> Self {
        Self {
            k,
            d,
            n,
            noise_std: 0.0,
            biases: vec![0.0; k],
            component_weights: vec![1.0 / k.max(1) as f64; k],
            theta_scale: 1.0,
            seed: 0,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 || self.d == 0 || self.n == 0 {
            return Err(Error::InvalidInput("mixture needs k, d, n >= 1".into()));
        }
        if self.biases.len() != self.k || self.component_weights.len() != self.k {
            return Err(Error::InvalidInput(
                "biases and component_weights need one entry per component".into(),
            ));
        }
        if self.component_weights.iter().any(|w| w.is_nan() || *w < 0.0) {
            return Err(Error::InvalidInput("component weights must be nonnegative".into()));
        }
        let total: f64 = self.component_weights.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!(
                "component weights sum to {total}, expected 1"
            )));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return Err(Error::InvalidInput("noise_std must be nonnegative".into()));
        }
        if !(self.theta_scale > 0.0 && self.theta_scale.is_finite()) {
            return Err(Error::InvalidInput("theta_scale must be positive".into()));
        }
        if self.biases.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidInput("biases must be finite".into()));
        }
        Ok(())
    }
}

/// Points drawn from `k` noisy linear models.
///
/// Returns the dataset, the generating models (intercept as the last
/// coordinate when present) and the generating component of every point.
pub fn gen_mixture_linear(spec: &MixtureSpec) -> Result<(Dataset, ModelSet, Partition)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let with_bias = spec.biases.iter().any(|&b| b != 0.0);
    let thetas: Vec<Vec<f64>> = (0..spec.k)
        .map(|j| {
            let mut t: Vec<f64> = (0..spec.d)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z * spec.theta_scale
                })
                .collect();
            if with_bias {
                t.push(spec.biases[j]);
            }
            t
        })
        .collect();
    let picker = WeightedIndex::new(&spec.component_weights)
        .map_err(|e| Error::InvalidInput(format!("component weights: {e}")))?;

    let width = spec.d + usize::from(with_bias);
    let mut cov = Vec::with_capacity(spec.n * width);
    let mut targets = Vec::with_capacity(spec.n);
    let mut labels = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let j = picker.sample(&mut rng);
        let mut x = uniform_in_ball(&mut rng, spec.d, 1.0);
        if with_bias {
            x.push(1.0);
        }
        let mut y = dot(&x, &thetas[j]);
        if spec.noise_std > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            y += spec.noise_std * z;
        }
        cov.extend_from_slice(&x);
        targets.push(y);
        labels.push(j);
    }
    Ok((
        Dataset::from_flat(cov, targets, width)?,
        ModelSet::new(thetas)?,
        Partition::new(labels, spec.k)?,
    ))
}

/// Friedman regression benchmarks.
///
/// * variant 1: `x ~ U[0,1]^5`,
///   `y = 10 sin(pi x0 x1) + 20 (x2 - 0.5)^2 + 10 x3 + 5 x4`
/// * variant 2: `y = sqrt(x0^2 + (x1 x2 - 1/(x1 x3))^2)`
/// * variant 3: `y = atan((x1 x2 - 1/(x1 x3)) / x0)`
///
/// Variants 2 and 3 draw `x0 ~ U[0,100]`, `x1 ~ U[40 pi, 560 pi]`,
/// `x2 ~ U[0,1]`, `x3 ~ U[1,11]`. Gaussian noise of std `noise_std` is added.
pub fn gen_friedman(variant: u8, n: usize, noise_std: f64, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if !(noise_std >= 0.0 && noise_std.is_finite()) {
        return Err(Error::InvalidInput("noise_std must be nonnegative".into()));
    }
    let d = match variant {
        1 => 5,
        2 | 3 => 4,
        v => return Err(Error::InvalidInput(format!("unknown Friedman variant {v}"))),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cov = Vec::with_capacity(n * d);
    let mut targets = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = if variant == 1 {
            (0..5).map(|_| rng.random::<f64>()).collect()
        } else {
            vec![
                rng.random_range(0.0..100.0),
                rng.random_range(40.0 * PI..560.0 * PI),
                rng.random_range(0.0..1.0),
                rng.random_range(1.0..11.0),
            ]
        };
        let mut y = friedman_target(variant, &x);
        if noise_std > 0.0 {
            let z: f64 = StandardNormal.sample(&mut rng);
            y += noise_std * z;
        }
        cov.extend_from_slice(&x);
        targets.push(y);
    }
    Dataset::from_flat(cov, targets, d)
}

/// Noise-free Friedman response.
pub fn friedman_target(variant: u8, x: &[f64]) -> f64 {
    match variant {
        1 => {
            10.0 * (PI * x[0] * x[1]).sin() + 20.0 * (x[2] - 0.5).powi(2) + 10.0 * x[3] + 5.0 * x[4]
        }
        2 => (x[0] * x[0] + (x[1] * x[2] - 1.0 / (x[1] * x[3])).powi(2)).sqrt(),
        3 => ((x[1] * x[2] - 1.0 / (x[1] * x[3])) / x[0]).atan(),
        _ => f64::NAN,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 0,
        }
    }
}

/// Shuffled train and test index lists for `n` points.
pub fn split_indices(n: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    let f = spec.train_fraction;
    let invalid = Error::InvalidFraction { fraction: f, n };
    if !(f > 0.0 && f < 1.0) {
        return Err(invalid);
    }
    let n_train = (n as f64 * f).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(invalid);
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(spec.seed));
    let test = idx.split_off(n_train);
    Ok((idx, test))
}

/// Seeded shuffle, then the first `round(n * train_fraction)` points train.
pub fn train_test_split(data: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let (train, test) = split_indices(data.n(), spec)?;
    Ok((data.select(&train)?, data.select(&test)?))
}

pub fn save_csv(data: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_csv(data, &mut out)?;
    out.flush()?;
    Ok(())
}

/// Writes the CSV form of `data`. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn write_csv(data: &Dataset, out: &mut impl Write) -> Result<()> {
    let header: Vec<String> = std::iter::once("y".to_string())
        .chain((0..data.d()).map(|c| format!("f{c}")))
        .collect();
    writeln!(out, "{}", header.join(","))?;
    for (x, y) in data.rows() {
        write!(out, "{y:?}")?;
        for v in x {
            write!(out, ",{v:?}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let file = File::open(path)?;
    read_csv(file)
}

pub fn read_csv(input: impl std::io::Read) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let header = reader.headers().map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    if header.len() < 2 || header.get(0) != Some("y") {
        return Err(Error::Parse {
            line: 1,
            msg: "header must start with `y` followed by at least one feature column".into(),
        });
    }
    let width = header.len();
    let d = width - 1;
    let mut cov = Vec::new();
    let mut targets = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map(|p| p.line()).unwrap_or(0),
            msg: e.to_string(),
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if record.len() != width {
            return Err(Error::Parse {
                line,
                msg: format!("expected {width} fields, found {}", record.len()),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("non-numeric cell {cell:?} in column {}", c + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!("non-finite cell {cell:?} in column {}", c + 1),
                });
            }
            if c == 0 {
                targets.push(v);
            } else {
                cov.push(v);
            }
        }
    }
    if targets.is_empty() {
        return Err(Error::Parse {
            line: 2,
            msg: "no data rows".into(),
        });
    }
    Dataset::from_flat(cov, targets, d)
}
