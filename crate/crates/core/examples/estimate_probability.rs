//! Monte Carlo satisfaction probabilities under both semantics, with Wilson
//! confidence intervals.
//!
//! ```bash
//! cargo run -p mtl-smc --example estimate_probability
//! ```

use mtl_smc::harness::{estimate_continuous_pl, estimate_discrete, wilson_ci, McConfig};
use mtl_smc::stochastic::Sampler;
use mtl_smc::{AtomMap, Formula, IntervalSet};

fn main() {
    let formula = Formula::parse("!F(0,1) p").unwrap();
    let atoms = AtomMap::from_pairs([("p", IntervalSet::parse("(0,inf)").unwrap())]);
    let sampler = Sampler::parse("bm", 0.0).unwrap();
    let cfg = McConfig {
        trials: 20_000,
        seed: 42,
        confidence: 0.95,
        workers: 0,
    };

    println!("P(path, 0 |= !F(0,1) p) for Brownian motion from 0:\n");
    for n in [2u32, 4, 8, 16] {
        let est = estimate_discrete(&formula, &sampler, &atoms, 0.0, n, 1.0, &cfg).unwrap();
        println!("  {est}");
    }
    // the continuous probability is 0: the path crosses its start level
    // immediately, so some s in (0,1) always satisfies p
    let cont = estimate_continuous_pl(&formula, &sampler, &atoms, 0.0, 1024, 1.0, &cfg).unwrap();
    println!("  {cont}");
    println!("\nthe discrete values shrink with n while the continuous value is 0");

    // Wilson intervals stay informative at the boundary
    let (lo, hi) = wilson_ci(0, 1000, 0.95);
    println!("\nwilson_ci(0 successes / 1000): [{lo:.6}, {hi:.6}]");
    let (lo, hi) = wilson_ci(1000, 1000, 0.95);
    println!("wilson_ci(1000 successes / 1000): [{lo:.6}, {hi:.6}]");
}
