//! Parsing the concrete formula syntax, desugaring to the until-only core,
//! and classifying the flat (nesting-free) fragment.
//!
//! ```bash
//! cargo run -p mtl-smc --example parse_formulas
//! ```

use mtl_smc::formula::propositional_region;
use mtl_smc::{AtomMap, Formula, IntervalSet};

fn main() {
    let samples = [
        "F(1,4) p & !F(1,3) p",
        "G(1,2)(F(1,4) p & !F(1,3) p)",
        "p U[0.5,2] (q | !r)",
        "!F(0,1) p",
    ];
    for text in samples {
        let formula = Formula::parse(text).unwrap();
        println!("input:   {text}");
        println!("printed: {formula}");
        println!("core:    {}", formula.to_core());
        match formula.check_flat() {
            Ok(()) => println!("flat:    yes"),
            Err(v) => println!("flat:    no ({v})"),
        }
        println!("window reach: {}\n", formula.window_sum());
    }

    // parse errors carry byte offsets and expected tokens
    let err = Formula::parse("p & ").unwrap_err();
    println!("error demo: {err}");

    // propositional formulas collapse to state regions
    let atoms = AtomMap::from_pairs([
        ("a", IntervalSet::parse("(-inf,1)").unwrap()),
        ("b", IntervalSet::parse("(1,inf)").unwrap()),
    ]);
    let p = Formula::parse("!(a & b)").unwrap();
    println!(
        "region of !(a & b) with a -> (-inf,1), b -> (1,inf): {}",
        propositional_region(&p, &atoms).unwrap()
    );
}
