//! For each contracted A-type configuration, the total transform it meets
//! and the component through which it meets it, followed by the disjoint
//! families and their budgets.

use blowup_lattice::{dynkin, fixtures, ExceptionalLattice, ProximityForest};

fn main() -> blowup_lattice::Result<()> {
    let longer = ProximityForest::new(vec![vec![], vec![1], vec![2], vec![3], vec![], vec![5]])?;
    for (name, forest) in [("pair4", fixtures::pair4()), ("chain4 + chain2", longer)] {
        let lattice = ExceptionalLattice::new(&forest)?;
        println!("{name}:");
        for (d, t) in dynkin::contracted_a_configurations(&lattice) {
            let th = dynkin::theta(&lattice, &d)?;
            println!("  {t} ({d}) meets E{} along e{}", th.j, th.theta);
        }
        for family in dynkin::disjoint_A_budget(&lattice)? {
            let types: Vec<String> = family.types.iter().map(|t| t.to_string()).collect();
            println!("  family {} uses {} of {}", types.join(" + "), family.budget, lattice.rank());
        }
    }
    Ok(())
}
