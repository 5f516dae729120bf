//! Recognises Dynkin diagrams from Gram matrices and lists the A-D-E
//! configurations inside a few lattices.

use blowup_lattice::dynkin::{self, DynkinType};
use blowup_lattice::{fixtures, ExceptionalLattice};

fn main() -> blowup_lattice::Result<()> {
    for name in ["A5", "D4", "D7", "E6", "E7", "E8"] {
        let t: DynkinType = name.parse()?;
        let gram = dynkin::abstract_lattice(t);
        let found = dynkin::classify_gram(&gram).expect("abstract diagrams classify");
        println!("{name}: recognised as {found}");
    }

    // affine D4 (a star with four arms) is not negative definite
    let star: Vec<Vec<i64>> = (0..5)
        .map(|i| {
            (0..5)
                .map(|j| match (i, j) {
                    _ if i == j => -2,
                    (0, _) | (_, 0) => 1,
                    _ => 0,
                })
                .collect()
        })
        .collect();
    println!("four-armed star: {:?}", dynkin::classify_gram(&star));

    for (name, forest) in [("chain3", fixtures::chain3()), ("pair4", fixtures::pair4())] {
        let lattice = ExceptionalLattice::new(&forest)?;
        println!("{name}:");
        for (d, t) in dynkin::ade_configurations(&lattice) {
            println!("  ({d}) {t}");
        }
    }
    Ok(())
}
