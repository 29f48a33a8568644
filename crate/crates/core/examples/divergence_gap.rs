//! The discretization gap: a nested formula whose grid probability is 0 at
//! every resolution while its continuous probability is strictly positive.
//!
//! On any path that first reaches level 1 at time tau >= 6, the inner
//! formula `G(1,2)(F(1,4) p & !F(1,3) p)` holds exactly at the single
//! instant tau - 5. The outer layers then pin that instant into a unit
//! window, which no grid N/n can do: on the grid the inner formula holds at
//! two adjacent grid points, and the outer layers demand exactly one.
//!
//! ```bash
//! cargo run -p mtl-smc --example divergence_gap
//! ```

use mtl_smc::harness::experiments::{
    counterexample_atoms, counterexample_formula, counterexample_oracle, COUNTEREXAMPLE_HORIZON,
};
use mtl_smc::harness::{estimate_continuous_pl, estimate_discrete, McConfig};
use mtl_smc::stochastic::Sampler;

fn main() {
    let formula = counterexample_formula();
    let atoms = counterexample_atoms();
    let sampler = Sampler::parse("bm", 0.0).unwrap();
    println!("formula: {formula}\n");

    let cfg = McConfig {
        trials: 4_000,
        seed: 42,
        confidence: 0.95,
        workers: 0,
    };
    println!("discrete estimates (every resolution):");
    for n in [2u32, 4, 8, 16] {
        let est = estimate_discrete(
            &formula,
            &sampler,
            &atoms,
            0.0,
            n,
            COUNTEREXAMPLE_HORIZON,
            &cfg,
        )
        .unwrap();
        println!("  {est}");
    }

    let cont = estimate_continuous_pl(
        &formula,
        &sampler,
        &atoms,
        0.0,
        2048,
        COUNTEREXAMPLE_HORIZON,
        &cfg,
    )
    .unwrap();
    println!("\ncontinuous estimate on PL-interpolated paths:");
    println!("  {cont}");
    println!(
        "  analytic target P(first passage of 1 in (8,9)) = {:.6}",
        counterexample_oracle()
    );
    println!("\nrefining n cannot close this gap; run `mtl-smc repro counterexample` for the full report");
}
