//! Continuous semantics on a piecewise-linear trace: exact satisfaction
//! time sets, including the isolated-point phenomenon that defeats grid
//! sampling.
//!
//! ```bash
//! cargo run -p mtl-smc --example check_trace
//! ```

use mtl_smc::harness::experiments::isolated_point_formula;
use mtl_smc::{continuous, AtomMap, Formula, IntervalSet, PlTrace};

fn main() {
    // a path that stays at 0, then climbs through level 1 at t = 9
    let trace = PlTrace::new(vec![
        (0.0, 0.0),
        (8.5, 0.0),
        (9.0, 1.0),
        (9.5, 1.5),
        (12.0, 1.5),
    ])
    .unwrap();
    let atoms = AtomMap::from_pairs([("p", IntervalSet::parse("[1,inf)").unwrap())]);

    let p = Formula::parse("p").unwrap();
    println!(
        "p holds on:        {}",
        continuous::eval_timeset(&p, &trace, &atoms, 12.0).unwrap()
    );

    let soon = Formula::parse("F(1,4) p").unwrap();
    println!(
        "F(1,4) p holds on: {}   (horizon 8)",
        continuous::eval_timeset(&soon, &trace, &atoms, 8.0).unwrap()
    );

    // nesting a box over the window difference collapses satisfaction to a
    // single instant: the crossing time minus 5
    let nested = isolated_point_formula();
    let ts = continuous::eval_timeset(&nested, &trace, &atoms, 6.0).unwrap();
    println!("{nested} holds on: {ts}   (an isolated point)");

    for t in [3.5, 4.0, 4.5] {
        println!(
            "  holds at t = {t}? {}",
            continuous::holds_at(&nested, &trace, &atoms, t).unwrap()
        );
    }

    // until, evaluated through the run-length characterization
    let until = Formula::parse("(!p) U[0,4] p").unwrap();
    println!(
        "(!p) U[0,4] p on:  {}   (horizon 8)",
        continuous::eval_timeset(&until, &trace, &atoms, 8.0).unwrap()
    );
}
