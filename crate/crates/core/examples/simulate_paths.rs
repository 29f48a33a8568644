//! Seeded path sampling: Brownian motion, Euler-Maruyama SDE paths, the
//! diffusion-assumption spot check, and the first-passage oracle.
//!
//! ```bash
//! cargo run -p mtl-smc --example simulate_paths
//! ```

use mtl_smc::stochastic::{
    brownian_hitting_prob, sample_brownian, sample_sde_euler, validate_sde_assumptions, SdeSpec,
    SeedSpec,
};
use mtl_smc::timeset::Interval;

fn main() {
    // reproducible: the path is a pure function of (master seed, path index)
    let a = sample_brownian(8, 2.0, 0.0, SeedSpec::new(42, 0));
    let b = sample_brownian(8, 2.0, 0.0, SeedSpec::new(42, 0));
    assert_eq!(a, b);
    println!(
        "brownian path, first samples: {:?}",
        &a.values()[..5.min(a.values().len())]
    );

    let ou = SdeSpec::ornstein_uhlenbeck(1.0, 2.0);
    let path = sample_sde_euler(&ou, 8, 2.0, SeedSpec::new(42, 1)).unwrap();
    println!(
        "ou path pulls toward 0: starts {:.3}, ends {:.3}",
        path.value_at(0),
        path.value_at(path.max_index())
    );

    // numeric spot-check of the diffusion assumptions (advisory, not proof)
    println!("\nbm assumptions:");
    println!("{}", validate_sde_assumptions(&SdeSpec::brownian(0.0), Interval::closed(-10.0, 10.0), 201));
    let vanishing = SdeSpec::new("lin-sigma", |_| 0.0, |x| x, 0.5);
    println!("\nsigma(x) = x assumptions:");
    println!("{}", validate_sde_assumptions(&vanishing, Interval::closed(-1.0, 1.0), 201));

    // closed-form first-passage probabilities for Brownian motion
    let windows = ["(0,1)", "(1,4)", "(8,9)", "(0,inf)"];
    println!("\nP(first passage of level 1 from 0 in window):");
    for w in windows {
        let window = Interval::parse(w).unwrap();
        let p = brownian_hitting_prob(1.0, 0.0, window).unwrap();
        println!("  {w}: {p:.6}");
    }

    // quick MC cross-check of the (8,9) window
    let trials = 20_000u64;
    let m = 512u32;
    let hits = (0..trials)
        .filter(|&i| {
            let path = sample_brownian(m, 9.0, 0.0, SeedSpec::new(7, i));
            let tau = path.values().iter().position(|&x| x >= 1.0);
            match tau {
                Some(k) => {
                    let t = k as f64 / m as f64;
                    8.0 < t && t < 9.0
                }
                None => false,
            }
        })
        .count();
    println!(
        "\nMC check of the (8,9) window at m={m}, N={trials}: {:.5}",
        hits as f64 / trials as f64
    );
}
