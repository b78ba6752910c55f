//! The min-loss objective with squared base loss, list prediction and
//! hard assignment of points to components.
//!
//! Ties between components are always resolved toward the smallest index,
//! so every function here is deterministic.

use crate::data::{dot, Dataset, LossReport, ModelSet, Partition};
use crate::error::{check_dim, Error, Result};

/// Smallest squared error among `predictions` and the index attaining it.
pub fn min_loss_point(y: f64, predictions: &[f64]) -> Result<(f64, usize)> {
    if predictions.is_empty() {
        return Err(Error::InvalidInput("need at least one prediction".into()));
    }
    if !y.is_finite() || predictions.iter().any(|p| !p.is_finite()) {
        return Err(Error::InvalidInput("non-finite input to min-loss".into()));
    }
    Ok(argmin_sq(y, predictions.iter().copied()))
}

#[inline]
fn argmin_sq(y: f64, predictions: impl Iterator<Item = f64>) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (j, p) in predictions.enumerate() {
        let r = y - p;
        let loss = r * r;
        if loss < best.0 {
            best = (loss, j);
        }
    }
    best
}

/// One prediction per component: `<theta_j, x>`.
pub fn predict_list(models: &ModelSet, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(models.d(), x.len())?;
    Ok(models.thetas().iter().map(|t| dot(x, t)).collect())
}

/// Min-loss of every point, its winning component, and the mean.
pub fn min_loss_dataset(data: &Dataset, models: &ModelSet) -> Result<LossReport> {
    check_dim(models.d(), data.d())?;
    let n = data.n();
    let mut per_point_loss = Vec::with_capacity(n);
    let mut per_point_argmin = Vec::with_capacity(n);
    for (x, y) in data.rows() {
        let (loss, j) = argmin_sq(y, models.thetas().iter().map(|t| dot(x, t)));
        per_point_loss.push(loss);
        per_point_argmin.push(j);
    }
    let total = per_point_loss.iter().sum::<f64>() / n as f64;
    Ok(LossReport {
        per_point_loss,
        per_point_argmin,
        total,
    })
}

/// Mean min-loss only.
pub fn min_loss(data: &Dataset, models: &ModelSet) -> Result<f64> {
    check_dim(models.d(), data.d())?;
    let sum: f64 = data
        .rows()
        .map(|(x, y)| argmin_sq(y, models.thetas().iter().map(|t| dot(x, t))).0)
        .sum();
    Ok(sum / data.n() as f64)
}

/// Labels every point with its best-fitting component.
pub fn assign(data: &Dataset, models: &ModelSet) -> Result<Partition> {
    check_dim(models.d(), data.d())?;
    let labels = data
        .rows()
        .map(|(x, y)| argmin_sq(y, models.thetas().iter().map(|t| dot(x, t))).1)
        .collect();
    Partition::new(labels, models.k())
}

/// Divisors applied by [`normalize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaling {
    pub x_scale: f64,
    pub y_scale: f64,
}

impl Scaling {
    /// Maps models fitted on the original data to the normalized data.
    pub fn models_to_normalized(&self, models: &ModelSet) -> ModelSet {
        models.scaled(self.x_scale / self.y_scale)
    }

    /// Maps models fitted on normalized data back to original units.
    pub fn models_from_normalized(&self, models: &ModelSet) -> ModelSet {
        models.scaled(self.y_scale / self.x_scale)
    }

    /// Converts a squared-error loss on normalized data to original units.
    pub fn loss_from_normalized(&self, loss: f64) -> f64 {
        loss * self.y_scale * self.y_scale
    }
}

/// Scales the data so that every `|x_i| <= 1` and `|y_i| <= 1`.
///
/// Data already within bounds is left alone; the divisors are never below 1.
pub fn normalize(data: &Dataset) -> (Dataset, Scaling) {
    let b = data.bounds(1.0);
    let scaling = Scaling {
        x_scale: b.x_norm_max.max(1.0),
        y_scale: b.y_abs_max.max(1.0),
    };
    if scaling.x_scale == 1.0 && scaling.y_scale == 1.0 {
        return (data.clone(), scaling);
    }
    let cov = data
        .covariates()
        .iter()
        .map(|v| v / scaling.x_scale)
        .collect();
    let tgt = data.targets().iter().map(|v| v / scaling.y_scale).collect();
    let scaled = Dataset::from_flat(cov, tgt, data.d()).expect("scaling preserves finiteness");
    (scaled, scaling)
}
