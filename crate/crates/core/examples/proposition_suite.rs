//! Runs the structural checks over every forest with up to N points
//! (default 4), then over a batch of seeded random forests.
//!
//!     cargo run --release --example proposition_suite [N]

use blowup_lattice::propcheck::{self, CoordinateCap};

fn main() -> blowup_lattice::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(4);
    for s in 1..=n {
        println!("{s} points: {} forests", propcheck::enumerate_forests(s)?.len());
    }

    let exhaustive = propcheck::run_exhaustive(1, n, CoordinateCap::default())?;
    println!(
        "exhaustive: {} forests, {} violations",
        exhaustive.generator.forests,
        exhaustive.total_violations()
    );
    for check in &exhaustive.checks {
        println!("  {:<36} {:>9}", check.id, check.instances_checked);
    }
    if let Some(budget) = exhaustive.check("a_family.budget") {
        println!("families using every blow-up: {}", budget.equality_count);
    }

    let random = propcheck::run_random(7, 8, 25, 11, CoordinateCap::default())?;
    println!(
        "random: {} forests (seed 11), {} violations",
        random.generator.forests,
        random.total_violations()
    );
    Ok(())
}
