//! Lists the classes with prescribed `K.D` and `D^2` and checks how
//! connected they are.

use blowup_lattice::divisors::{self, ConnectednessOrder};
use blowup_lattice::{dynkin, fixtures, ExceptionalLattice};

fn main() -> blowup_lattice::Result<()> {
    let lattice = ExceptionalLattice::new(&fixtures::chain3())?;

    for (kdeg, selfint) in [(-1, -1), (0, -2)] {
        println!("K.D = {kdeg}, D^2 = {selfint}:");
        for d in divisors::enumerate_contracted(&lattice, kdeg, selfint)? {
            let report = divisors::is_m_connected(&lattice, &d, 1)?;
            let order = match report.connectedness_order {
                ConnectednessOrder::Irreducible => "irreducible".to_string(),
                ConnectednessOrder::Order { order } => format!("{order}-connected"),
                ConnectednessOrder::NotOneConnected { .. } => "not 1-connected".to_string(),
            };
            let kind = dynkin::classify_ADE(&lattice, &d)
                .map_or_else(|| "-".to_string(), |t| t.to_string());
            let genus = divisors::arithmetic_genus(&lattice, &d)?;
            println!("  ({d})  p_a = {genus}  {order}  type {kind}");
        }
    }

    // E_1 = e_1 + e_2 + e_3 splits as e_1 + (e_2 + e_3) with product 1
    let e1 = lattice.total_transform(1)?;
    let report = divisors::is_m_connected(&lattice, &e1, 2)?;
    if let Some((a, b)) = report.witness {
        println!("E1 is not 2-connected: ({a}) + ({b})");
    }
    Ok(())
}
