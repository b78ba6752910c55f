//! Exhaustive sub-sample ERM on a tiny dataset, checked against the
//! brute-force ERM optimum.

use mixlr::objective::min_loss;
use mixlr::subsample::{brute_force_erm, subsample_fit, SampleSource, SearchMode, SubsampleConfig};
use mixlr::Dataset;

fn main() -> mixlr::Result<()> {
    let data = Dataset::new(
        vec![vec![1.0], vec![2.0], vec![3.0], vec![1.5], vec![2.5], vec![0.5], vec![3.5]],
        vec![2.1, 3.9, 6.0, -1.4, -2.6, 1.0, -3.4],
    )?;

    let cfg = SubsampleConfig {
        sample: SampleSource::WholeDataset,
        mode: SearchMode::Exhaustive,
        ..SubsampleConfig::default()
    };
    let fit = subsample_fit(&data, 2, &cfg)?;
    println!("labelings evaluated: {}", fit.candidates_evaluated);
    println!("best candidate #{} scores {:.6}", fit.best_candidate, fit.score);
    println!("refit models: {:?}", fit.refit_models.thetas());
    println!("refit min-loss: {:.6}", min_loss(&data, &fit.refit_models)?);

    let (_, optimum) = brute_force_erm(&data, 2)?;
    println!("brute-force optimum: {optimum:.6}");

    let sampled = SubsampleConfig {
        sample: SampleSource::Draw(5),
        seed: 3,
        ..cfg
    };
    let fit = subsample_fit(&data, 2, &sampled)?;
    println!(
        "from a 5-point sample {:?}: refit min-loss {:.6}",
        fit.sample,
        min_loss(&data, &fit.refit_models)?
    );
    Ok(())
}
