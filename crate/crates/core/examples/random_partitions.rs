//! Random-partition search (least squares and robust) on a noisy two-line
//! mixture with intercepts 100 and 0, against a single regression line.

use std::time::Instant;

use mixlr::datagen::{gen_mixture_linear, train_test_split, MixtureSpec, SplitSpec};
use mixlr::objective::min_loss;
use mixlr::regression::{least_squares, RobustConfig};
use mixlr::subsample::{subsample_fit, Regressor, SampleSource, SearchMode, SubsampleConfig};
use mixlr::ModelSet;

fn main() -> mixlr::Result<()> {
    let mut spec = MixtureSpec::new(2, 4, 4000);
    spec.noise_std = 4.0;
    spec.biases = vec![100.0, 0.0];
    spec.seed = 1;
    let (data, _, _) = gen_mixture_linear(&spec)?;
    let (train, test) = train_test_split(&data, &SplitSpec { train_fraction: 0.8, seed: 1 })?;

    let all: Vec<usize> = (0..train.n()).collect();
    let lr = ModelSet::new(vec![least_squares(&train, &all)?])?;
    println!("linear regression     test min-loss {:10.3}", min_loss(&test, &lr)?);

    for (name, regressor) in [
        ("least squares", Regressor::LeastSquares),
        ("robust", Regressor::Robust(RobustConfig::default())),
    ] {
        let cfg = SubsampleConfig {
            sample: SampleSource::Draw(150),
            mode: SearchMode::Random { h: 1000 },
            regressor,
            seed: 1,
            ..SubsampleConfig::default()
        };
        let started = Instant::now();
        let fit = subsample_fit(&train, 2, &cfg)?;
        println!(
            "partitions, {name:13} test min-loss {:10.3}  ({} ms)",
            min_loss(&test, &fit.refit_models)?,
            started.elapsed().as_millis()
        );
    }
    Ok(())
}
