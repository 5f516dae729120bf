//! Parses a forest from `.prox` text and prints its exceptional lattice.
//!
//!     cargo run --example lattice_report [path.prox]

use blowup_lattice::{ExceptionalLattice, ProximityForest};

const SATELLITE: &str = "\
# the third point lies where e1 meets e2
points 3
prox 2: 1
prox 3: 1 2
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => SATELLITE.to_string(),
    };
    let forest = ProximityForest::parse(&text)?;
    let lattice = ExceptionalLattice::new(&forest)?;

    println!("{} blow-ups", lattice.rank());
    println!("intersection matrix of the strict transforms:");
    for row in lattice.gram() {
        println!("  {row:?}");
    }
    for (i, total) in lattice.total_transforms().iter().enumerate() {
        println!("E{} = ({total})", i + 1);
    }
    println!("K.e_i = {:?}", lattice.k_degrees());
    let cert = lattice.certificate();
    println!(
        "leading minors {:?}, negative definite: {}",
        cert.leading_minors, cert.negative_definite
    );
    Ok(())
}
