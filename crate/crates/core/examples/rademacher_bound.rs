//! Monte-Carlo check of the Rademacher bound relating the min-loss mixture
//! class to the linear class, for k = 1, 2, 3.

use mixlr::complexity::{check_theorem1, linear_rademacher, ComplexityConfig};
use mixlr::datagen::{gen_mixture_linear, MixtureSpec};

fn main() -> mixlr::Result<()> {
    let mut spec = MixtureSpec::new(2, 2, 15);
    spec.noise_std = 0.1;
    spec.seed = 2;
    let (data, _, _) = gen_mixture_linear(&spec)?;
    let w = 1.0;
    let cfg = ComplexityConfig {
        sigma_draws: 500,
        candidate_models: 1000,
        ..ComplexityConfig::default()
    };

    let lin = linear_rademacher(&data, w, &cfg)?;
    println!("linear class: {:.4} +- {:.4}", lin.mean, lin.std_error);
    for k in 1..=3 {
        let check = check_theorem1(&data, k, w, &cfg)?;
        println!(
            "k = {k}: mixture >= {:.4} +- {:.4}, bound {:.4} (mu {:.3}), holds: {}",
            check.lhs.mean, check.lhs.std_error, check.rhs.mean, check.mu, check.holds
        );
    }
    Ok(())
}
