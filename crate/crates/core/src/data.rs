//! Domain types shared by every solver: datasets, model sets, partitions
//! and loss reports.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// `n` covariate rows of dimension `d` with one scalar target each.
///
/// Covariates are stored row-major so that per-point dot products walk
/// contiguous memory.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    covariates: Vec<f64>,
    targets: Vec<f64>,
    d: usize,
}

impl Dataset {
    /// Builds a dataset from row vectors and targets.
    pub fn new(rows: Vec<Vec<f64>>, targets: Vec<f64>) -> Result<Self> {
        let d = rows.first().map(Vec::len).unwrap_or(0);
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Self::from_flat(rows.concat(), targets, d)
    }

    /// Builds a dataset from a row-major covariate buffer of `targets.len() * d` entries.
    pub fn from_flat(covariates: Vec<f64>, targets: Vec<f64>, d: usize) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::InvalidInput("dataset needs n >= 1".into()));
        }
        if d == 0 {
            return Err(Error::InvalidInput("dataset needs d >= 1".into()));
        }
        if covariates.len() != targets.len() * d {
            return Err(Error::InvalidInput(format!(
                "covariate buffer has {} entries, expected {} x {}",
                covariates.len(),
                targets.len(),
                d
            )));
        }
        if covariates.iter().chain(&targets).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("dataset contains non-finite values".into()));
        }
        Ok(Self {
            covariates,
            targets,
            d,
        })
    }

    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.covariates[i * self.d..(i + 1) * self.d]
    }

    pub fn y(&self, i: usize) -> f64 {
        self.targets[i]
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn covariates(&self) -> &[f64] {
        &self.covariates
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[f64], f64)> {
        self.covariates
            .chunks_exact(self.d)
            .zip(self.targets.iter().copied())
    }

    /// New dataset holding the given rows, in order. Indices may repeat.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut cov = Vec::with_capacity(indices.len() * self.d);
        let mut tgt = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.n() {
                return Err(Error::InvalidInput(format!(
                    "index {i} out of range for n = {}",
                    self.n()
                )));
            }
            cov.extend_from_slice(self.x(i));
            tgt.push(self.y(i));
        }
        Self::from_flat(cov, tgt, self.d)
    }

    pub fn bounds(&self, theta_norm_bound: f64) -> DataBounds {
        DataBounds {
            x_norm_max: self.rows().map(|(x, _)| norm(x)).fold(0.0, f64::max),
            y_abs_max: self.targets.iter().map(|y| y.abs()).fold(0.0, f64::max),
            theta_norm_bound,
        }
    }
}

/// `k` parameter vectors of a common dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelSetRepr", into = "ModelSetRepr")]
pub struct ModelSet {
    thetas: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ModelSetRepr {
    k: usize,
    d: usize,
    thetas: Vec<Vec<f64>>,
}

impl TryFrom<ModelSetRepr> for ModelSet {
    type Error = Error;

    fn try_from(r: ModelSetRepr) -> Result<Self> {
        let m = ModelSet::new(r.thetas)?;
        if m.k() != r.k || m.d() != r.d {
            return Err(Error::InvalidInput(format!(
                "declared k={} d={} disagree with thetas (k={} d={})",
                r.k,
                r.d,
                m.k(),
                m.d()
            )));
        }
        Ok(m)
    }
}

impl From<ModelSet> for ModelSetRepr {
    fn from(m: ModelSet) -> Self {
        ModelSetRepr {
            k: m.k(),
            d: m.d(),
            thetas: m.thetas,
        }
    }
}

impl ModelSet {
    pub fn new(thetas: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = thetas.first() else {
            return Err(Error::InvalidInput("model set needs k >= 1".into()));
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::InvalidInput("model vectors need d >= 1".into()));
        }
        for t in &thetas {
            check_dim(d, t.len())?;
            if t.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("model contains non-finite values".into()));
            }
        }
        Ok(Self { thetas })
    }

    /// `k` zero vectors of dimension `d`.
    pub fn zeros(k: usize, d: usize) -> Result<Self> {
        Self::new(vec![vec![0.0; d]; k])
    }

    pub fn k(&self) -> usize {
        self.thetas.len()
    }

    pub fn d(&self) -> usize {
        self.thetas[0].len()
    }

    pub fn theta(&self, j: usize) -> &[f64] {
        &self.thetas[j]
    }

    pub fn thetas(&self) -> &[Vec<f64>] {
        &self.thetas
    }

    pub fn into_thetas(self) -> Vec<Vec<f64>> {
        self.thetas
    }

    /// Appends a component.
    pub fn push(&mut self, theta: Vec<f64>) -> Result<()> {
        check_dim(self.d(), theta.len())?;
        if theta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("model contains non-finite values".into()));
        }
        self.thetas.push(theta);
        Ok(())
    }

    /// Reorders components so that component `j` of the result is `self[perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            thetas: perm.iter().map(|&p| self.thetas[p].clone()).collect(),
        }
    }

    /// Multiplies every entry by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            thetas: self
                .thetas
                .iter()
                .map(|t| t.iter().map(|v| v * factor).collect())
                .collect(),
        }
    }

    /// Largest per-component Euclidean distance to `other`, index by index.
    pub fn max_distance(&self, other: &ModelSet) -> f64 {
        self.thetas
            .iter()
            .zip(&other.thetas)
            .map(|(a, b)| distance(a, b))
            .fold(0.0, f64::max)
    }
}

/// Hard assignment of every data index to one of `k` components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    labels: Vec<usize>,
    k: usize,
}

impl Partition {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("partition needs k >= 1".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidInput(format!(
                "label {bad} out of range for k = {k}"
            )));
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Member indices of each component, in increasing order.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut parts = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            parts[l].push(i);
        }
        parts
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Per-point min-losses, the winning component of each point, and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct LossReport {
    pub per_point_loss: Vec<f64>,
    pub per_point_argmin: Vec<usize>,
    pub total: f64,
}

/// Norm bounds of a dataset together with a declared cap on model norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DataBounds {
    /// Largest covariate norm.
    pub x_norm_max: f64,
    /// Largest absolute target.
    pub y_abs_max: f64,
    pub theta_norm_bound: f64,
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
