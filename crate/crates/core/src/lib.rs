//! List-decodable mixed linear regression.
//!
//! Fits `k` linear predictors to data that need not come from any mixture
//! model, judging each point by its best-fitting predictor (the min-loss).
//!
//! * [`objective`]: min-loss, list prediction, assignment, normalization
//! * [`regression`]: minimum-norm least squares and a consensus robust fit
//! * [`am`]: gradient alternating minimization and convergence diagnostics
//! * [`subsample`]: exhaustive and randomized sub-sample ERM, brute-force ERM
//! * [`complexity`]: Monte-Carlo Rademacher complexity estimates
//! * [`datagen`]: synthetic generators, splits and CSV files
//! * [`cli`]: the `mixlr` command line
//!
//! Runnable walkthroughs of each capability live under `examples/`.

pub mod am;
pub mod cli;
pub mod complexity;
pub mod data;
pub mod datagen;
pub mod error;
pub mod objective;
pub mod regression;
pub mod subsample;

pub use data::{DataBounds, Dataset, LossReport, ModelSet, Partition};
pub use error::{Error, Result};
