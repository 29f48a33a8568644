//! Discrete semantics on the grid N/n: projecting a PL trace, whole-grid
//! truth sequences, and how refinement changes what the grid can see.
//!
//! ```bash
//! cargo run -p mtl-smc --example grid_semantics
//! ```

use mtl_smc::{discrete, trace, AtomMap, Formula, IntervalSet, PlTrace};

fn main() {
    let trace_pl = PlTrace::new(vec![(0.0, 0.0), (2.0, 2.0), (4.0, 0.0), (6.0, 0.0)]).unwrap();
    let atoms = AtomMap::from_pairs([("p", IntervalSet::parse("[1,inf)").unwrap())]);
    let formula = Formula::parse("F(0,1) p").unwrap();

    for n in [1u32, 2, 4] {
        let grid = trace_pl.grid_project(n);
        let truth = discrete::eval_all(&formula, &grid, &atoms).unwrap();
        let rendered: Vec<String> = truth
            .iter()
            .map(|v| match v {
                Some(true) => "T".into(),
                Some(false) => "F".into(),
                None => "-".to_string(),
            })
            .collect();
        println!("n = {n}: {}", rendered.join(" "));
    }
    println!("(the tail positions marked '-' would need samples past the horizon)");

    // the grid projection floor-maps arbitrary times onto N/n
    for t in [0.74, 1.0, 1.99] {
        println!("lambda_4({t}) = {}", trace::lambda_n(t, 4));
    }

    // windows intersect the grid exactly: (0,1) on N/2 contains only 1/2
    let grid = trace_pl.grid_project(2);
    let at0 = discrete::eval_holds(&formula, &grid, &atoms, 0.0).unwrap();
    println!("F(0,1) p at t=0 on N/2: {at0}   (only s = 1/2 is inspected)");
}
