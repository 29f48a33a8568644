//! The file formats: PL trace CSV, grid trace CSV, and the atom-map config,
//! round-tripped through a temp directory.
//!
//! ```bash
//! cargo run -p mtl-smc --example trace_files
//! ```

use mtl_smc::{AtomMap, GridTrace, IntervalSet, PlTrace};

fn main() {
    let dir = std::env::temp_dir().join("mtl-smc-demo");
    std::fs::create_dir_all(&dir).unwrap();

    let trace = PlTrace::new(vec![(0.0, 0.0), (1.5, 2.0), (3.0, -1.0)]).unwrap();
    let pl_path = dir.join("ramp.csv");
    trace.save(&pl_path).unwrap();
    println!("wrote {}:", pl_path.display());
    print!("{}", std::fs::read_to_string(&pl_path).unwrap());
    assert_eq!(PlTrace::load(&pl_path).unwrap(), trace);

    let grid = trace.grid_project(2);
    let grid_path = dir.join("ramp-grid.csv");
    grid.save(&grid_path).unwrap();
    println!("\nwrote {}:", grid_path.display());
    print!("{}", std::fs::read_to_string(&grid_path).unwrap());
    assert_eq!(GridTrace::load(&grid_path).unwrap(), grid);

    let atoms = AtomMap::from_pairs([
        ("p", IntervalSet::parse("[1, inf)").unwrap()),
        ("q", IntervalSet::parse("[0,1], (2,3), {5}").unwrap()),
    ]);
    let atoms_path = dir.join("atoms.cfg");
    std::fs::write(&atoms_path, atoms.to_string()).unwrap();
    println!("\nwrote {}:", atoms_path.display());
    print!("{}", std::fs::read_to_string(&atoms_path).unwrap());
    assert_eq!(AtomMap::from_file(&atoms_path).unwrap(), atoms);

    println!("\nall three formats round-trip exactly");
}
