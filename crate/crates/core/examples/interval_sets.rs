//! Tour of the exact interval-set algebra: canonical unions, Boolean
//! operations, the diamond preimage, debuts and topology.
//!
//! ```bash
//! cargo run -p mtl-smc --example interval_sets
//! ```

use mtl_smc::timeset::{Interval, IntervalSet};

fn main() {
    // canonicalization merges touching intervals only across a closed endpoint
    let merged = IntervalSet::canonicalize(vec![
        Interval::new(1.0, true, 2.0, false).unwrap(),
        Interval::new(2.0, true, 3.0, true).unwrap(),
    ]);
    let kept = IntervalSet::canonicalize(vec![Interval::open(1.0, 2.0), Interval::open(2.0, 3.0)]);
    println!("[1,2) u [2,3]   = {merged}");
    println!("(1,2) u (2,3)   = {kept}   (2 stays excluded)");

    let a = IntervalSet::parse("[0,5]").unwrap();
    let b = IntervalSet::parse("[3,8]").unwrap();
    println!("[0,5] n [3,8]   = {}", a.intersect(&b));
    println!("compl (2,3) in [0,10] = {}", IntervalSet::parse("(2,3)").unwrap().complement(10.0));

    // the diamond preimage answers: from which t does the window t+[1,2]
    // meet the set?
    let target = IntervalSet::parse("[3,5]").unwrap();
    let window = Interval::closed(1.0, 2.0);
    println!(
        "diamond preimage of [3,5] under [1,2] = {}",
        target.diamond_preimage(window, 10.0).unwrap()
    );

    // debuts: first entry strictly after t; the infimum need not be attained
    let set = IntervalSet::parse("(2,3), [5,6]").unwrap();
    for t in [0.0, 2.0, 4.0, 6.0] {
        println!("debut of {set} after t={t}: {}", set.debut(t));
    }

    // relative topology of [0, horizon]
    let mixed = IntervalSet::parse("[0,1), {4}, (6,10]").unwrap();
    let topo = mixed.topology(10.0);
    println!("set      = {mixed}");
    println!("interior = {}", topo.interior);
    println!("closure  = {}", topo.closure);
    println!("boundary = {:?}", topo.boundary);
}
