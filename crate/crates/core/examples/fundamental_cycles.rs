//! Artin's fundamental cycle for each A-D-E type up to rank 8.

use blowup_lattice::dynkin::{self, DynkinType};

fn main() -> blowup_lattice::Result<()> {
    let mut types = Vec::new();
    types.extend((1..=8).map(DynkinType::a));
    types.extend((4..=8).map(DynkinType::d));
    types.extend((6..=8).map(DynkinType::e));
    for t in types {
        let t = t?;
        let z = dynkin::fundamental_cycle(&dynkin::abstract_lattice(t))?;
        println!("{t:<3} Z = {:?}  Z^2 = {}", z.multiplicities, z.self_intersection);
    }
    Ok(())
}
