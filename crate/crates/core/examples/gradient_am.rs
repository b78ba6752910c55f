//! Gradient alternating minimization on noiseless two-line data, started
//! near the truth, printing the per-iteration contraction toward it.

use mixlr::am::{am_run, contraction_trace, AmConfig};
use mixlr::datagen::{gen_mixture_linear, MixtureSpec};
use mixlr::objective::min_loss;
use mixlr::ModelSet;

fn main() -> mixlr::Result<()> {
    let mut spec = MixtureSpec::new(2, 3, 1000);
    spec.seed = 5;
    let (data, truth, _) = gen_mixture_linear(&spec)?;

    let start = ModelSet::new(
        truth
            .thetas()
            .iter()
            .map(|t| t.iter().map(|v| v * 1.08 + 0.02).collect())
            .collect(),
    )?;
    let cfg = AmConfig {
        gamma: 0.5,
        max_iters: 5000,
        tol: 1e-12,
    };
    let res = am_run(&data, &cfg, &start)?;
    let ratios = contraction_trace(&res, &truth)?;

    println!("iterations: {} (converged: {})", res.iterations_run, res.converged);
    for (t, r) in ratios.iter().enumerate().step_by(ratios.len().div_ceil(8).max(1)) {
        println!("  step {t:4}: error ratio {r:.5}");
    }
    println!("largest ratio: {:.5}", ratios.iter().copied().fold(0.0, f64::max));
    println!("distance to truth: {:.3e}", res.models.max_distance(&truth));
    println!("min-loss: {:.3e}", min_loss(&data, &res.models)?);
    Ok(())
}
