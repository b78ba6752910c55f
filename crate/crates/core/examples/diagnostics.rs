//! Separation, bias bounds and component fractions of the generating models
//! on clean and noisy data, plus the step size they suggest.

use mixlr::am::diagnostics;
use mixlr::datagen::{gen_mixture_linear, MixtureSpec};

fn main() -> mixlr::Result<()> {
    for noise in [0.0, 0.05, 0.5] {
        let mut spec = MixtureSpec::new(3, 2, 600);
        spec.noise_std = noise;
        spec.theta_scale = 4.0;
        spec.seed = 11;
        let (data, truth, _) = gen_mixture_linear(&spec)?;
        let dg = diagnostics(&data, &truth)?;
        println!("noise {noise}:");
        println!("  delta  {:.4e}", dg.delta.unwrap_or(f64::NAN));
        println!("  lambda {:.4e}", dg.lambda);
        println!("  mu     {:.4e}", dg.mu);
        println!("  rho    {:.4}", dg.rho);
        println!("  fractions {:?}", dg.fractions);
        println!("  step 1/(4 min p) = {:?}", dg.theorem_step_size());
    }
    Ok(())
}
