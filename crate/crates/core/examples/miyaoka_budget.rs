//! Exact budget arithmetic for surfaces with canonical singularities.

use blowup_lattice::budget::{self, SingularityBudget};
use blowup_lattice::dynkin::DynkinType;

fn show(label: &str, b: &SingularityBudget) {
    let v = budget::check_budget(b);
    println!("{label}");
    println!("  sum nu = {}, bound = {}, slack = {}", v.sum_nu, v.bound, v.slack);
    println!("  Miyaoka {}, weaker bound {}", v.bound_miyaoka, v.bound_megyesi_langer);
    println!("  holds: {}, forces K nef: {}", v.holds, v.equality_implies_nef);
}

fn main() -> blowup_lattice::Result<()> {
    let a1 = DynkinType::a(1)?;
    show(
        "Kummer surface: sixteen A1 points",
        &SingularityBudget { chi: 2, k2: 0, s: 0, sings: vec![a1; 16] },
    );
    show(
        "one A2 point, chi = 1, K^2 = 1, one blow-up",
        &SingularityBudget { chi: 1, k2: 1, s: 1, sings: vec![DynkinType::a(2)?] },
    );
    show(
        "an A1 point with chi = K^2 = 0",
        &SingularityBudget { chi: 0, k2: 0, s: 0, sings: vec![a1] },
    );

    println!("nu for the exceptional types:");
    for n in 6..=8 {
        let t = DynkinType::e(n)?;
        println!("  {t}: {} = {} - 1/{}", budget::nu(t), budget::euler_number(t), budget::group_order(t));
    }
    Ok(())
}
