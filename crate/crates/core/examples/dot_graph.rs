//! Writes the dual graph of all exceptional components in Graphviz format.
//!
//!     cargo run --example dot_graph | dot -Tsvg > dual.svg

use blowup_lattice::lattice::Divisor;
use blowup_lattice::{dynkin, ExceptionalLattice, ProximityForest};

fn main() -> blowup_lattice::Result<()> {
    let forest: ProximityForest = "points 5\nprox 2: 1\nprox 3: 1 2\nprox 4: 3\nprox 5: 4\n".parse()?;
    let lattice = ExceptionalLattice::new(&forest)?;
    let everything = Divisor::reduced_on(lattice.rank(), 1..=lattice.rank());
    print!("{}", dynkin::dual_graph(&lattice, &everything)?.to_dot());
    Ok(())
}
