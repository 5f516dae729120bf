//! Acceptance run. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails. All comparisons are exact (integers or reduced
//! fractions), so there are no tolerances to tune.

mod common;

use std::time::Instant;

use blowup_lattice::budget::{self, Rational};
use blowup_lattice::divisors::{self, ConnectednessOrder};
use blowup_lattice::dynkin::{self, DynkinType};
use blowup_lattice::lattice::Divisor;
use blowup_lattice::propcheck::{self, CoordinateCap};
use blowup_lattice::{ExceptionalLattice, ProximityForest};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rat(r: Ratio<i64>) -> Rational {
    Rational::new(*r.numer(), *r.denom())
}

fn all_types() -> Vec<DynkinType> {
    let mut v: Vec<DynkinType> = (1..=10).map(|n| DynkinType::a(n).unwrap()).collect();
    v.extend((4..=10).map(|n| DynkinType::d(n).unwrap()));
    v.extend((6..=8).map(|n| DynkinType::e(n).unwrap()));
    v
}

// nu = e - 1/|G| with e = n + 1 and the group orders of the binary
// polyhedral groups, against the per-family closed forms
fn nu_table() -> Outcome {
    let mut checked = 0;
    for t in all_types() {
        let n = t.rank() as i64;
        let name = t.to_string();
        let order = match &name[..1] {
            "A" => n + 1,
            "D" => 4 * (n - 2),
            _ => [24, 48, 120][(n - 6) as usize],
        };
        let from_group = rat(Ratio::from_integer(n + 1) - Ratio::new(1, order));
        let closed = match &name[..1] {
            "A" => Rational::integer(n + 1) - Rational::new(1, n + 1),
            "D" => Rational::integer(n + 1) - Rational::new(1, 4 * (n - 2)),
            _ => match n {
                6 => Rational::integer(7) - Rational::new(1, 24),
                7 => Rational::integer(8) - Rational::new(1, 48),
                _ => Rational::integer(9) - Rational::new(1, 120),
            },
        };
        ensure(budget::nu(t) == closed, || format!("nu({t}) = {} != {closed}", budget::nu(t)))?;
        ensure(budget::nu_from_invariants(t) == from_group, || {
            format!("e - 1/|G| for {t} = {} != {from_group}", budget::nu_from_invariants(t))
        })?;
        ensure(closed == from_group, || format!("closed form disagrees for {t}"))?;
        checked += 1;
    }
    ensure(budget::nu(DynkinType::e(8).unwrap()).to_string() == "1079/120", || {
        "nu(E8) text".into()
    })?;
    Ok(format!("{checked} types, exact"))
}

fn exhaustive_suite() -> Outcome {
    let r = propcheck::run_exhaustive(1, 6, CoordinateCap::default()).map_err(|e| e.to_string())?;
    ensure(r.generator.forests == 1 + 2 + 7 + 37 + 266 + 2431, || {
        format!("visited {} forests", r.generator.forests)
    })?;
    if let Some(c) = r.checks.iter().find(|c| !c.violations.is_empty()) {
        return Err(format!("{}: {:?}", c.id, c.violations[0]));
    }
    if let Some(c) = r.checks.iter().find(|c| c.instances_checked == 0) {
        return Err(format!("{} never exercised", c.id));
    }
    Ok(format!(
        "{} forests, {} checks, 0 violations, coordinate cap up to {}",
        r.generator.forests,
        r.checks.len(),
        r.max_cap_used
    ))
}

fn random_suite() -> Outcome {
    let seed = 20_240_601;
    let r = propcheck::run_random(10, 10, 1000, seed, CoordinateCap::default())
        .map_err(|e| e.to_string())?;
    if let Some(c) = r.checks.iter().find(|c| !c.violations.is_empty()) {
        return Err(format!("{}: {:?}", c.id, c.violations[0]));
    }
    Ok(format!(
        "1000 forests on 10 points, seed {seed}, 0 violations, coordinate cap {}",
        r.max_cap_used
    ))
}

fn enumeration_oracle() -> Outcome {
    let mut lattices = 0;
    let mut classes = 0;
    for s in 1..=4 {
        for prox in common::brute_force_forests(s) {
            let g = common::gram(&prox);
            let k = common::k_degrees(&prox);
            let f = ProximityForest::new(prox.clone()).map_err(|e| e.to_string())?;
            let l = ExceptionalLattice::new(&f).map_err(|e| e.to_string())?;
            ensure(l.gram() == &g, || format!("gram differs on {prox:?}"))?;
            for (kdeg, selfint) in [(-1, -1), (0, -2)] {
                let mut expected: Vec<Vec<i64>> = common::box_vectors(s, 5)
                    .into_iter()
                    .filter(|v| v.iter().any(|&x| x > 0))
                    .filter(|v| {
                        let kd: i64 = v.iter().zip(&k).map(|(a, b)| a * b).sum();
                        kd == kdeg && common::form(&g, v, v) == selfint
                    })
                    .collect();
                expected.sort();
                let mut got: Vec<Vec<i64>> = divisors::enumerate_contracted(&l, kdeg, selfint)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(Divisor::into_coords)
                    .collect();
                got.sort();
                ensure(got == expected, || {
                    format!("({kdeg},{selfint}) on {prox:?}: {got:?} vs {expected:?}")
                })?;
                classes += got.len();
            }
            lattices += 1;
        }
    }
    Ok(format!("{lattices} lattices, {classes} classes, identical sets"))
}

fn connectedness_oracle() -> Outcome {
    let mut compared = 0;
    for s in 1..=4 {
        for prox in common::brute_force_forests(s) {
            let g = common::gram(&prox);
            let f = ProximityForest::new(prox.clone()).map_err(|e| e.to_string())?;
            let l = ExceptionalLattice::new(&f).map_err(|e| e.to_string())?;
            for d in common::box_vectors(s, 2) {
                if d.iter().all(|&x| x == 0) {
                    continue;
                }
                let min = common::box_vectors(s, 2)
                    .into_iter()
                    .filter(|a| a.iter().zip(&d).all(|(x, y)| x <= y))
                    .filter(|a| a.iter().any(|&x| x > 0) && *a != d)
                    .map(|a| {
                        let b: Vec<i64> = d.iter().zip(&a).map(|(x, y)| x - y).collect();
                        common::form(&g, &a, &b)
                    })
                    .min();
                let div = Divisor::new(d.clone());
                for m in -1..=3 {
                    let report = divisors::is_m_connected(&l, &div, m).map_err(|e| e.to_string())?;
                    let naive = min.is_none_or(|p| p >= m);
                    ensure(report.is_m_connected == naive, || {
                        format!("m = {m}, D = {d:?} on {prox:?}")
                    })?;
                    if let Some((a, b)) = &report.witness {
                        ensure(l.intersect(a, b).unwrap() < m, || "witness product".into())?;
                    }
                    let order_ok = match (report.connectedness_order, min) {
                        (ConnectednessOrder::Irreducible, None) => true,
                        (ConnectednessOrder::Order { order }, Some(p)) => order == p && p >= 1,
                        (ConnectednessOrder::NotOneConnected { min_product }, Some(p)) => {
                            min_product == p && p <= 0
                        }
                        _ => false,
                    };
                    ensure(order_ok, || format!("order for D = {d:?} on {prox:?}"))?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!("{compared} (divisor, m) pairs agree"))
}

// Gram matrices built from edge lists written out here, not by the library
fn diagram(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for &(a, b) in edges {
        g[a][b] = 1;
        g[b][a] = 1;
    }
    g
}

fn artin_cycles() -> Outcome {
    let mut cases: Vec<(String, Vec<Vec<i64>>, i64)> = Vec::new();
    for n in 1..=10 {
        let path: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        cases.push((format!("A{n}"), diagram(n, &path), n as i64));
    }
    for n in 4..=10 {
        let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((n - 3, n - 1));
        cases.push((format!("D{n}"), diagram(n, &edges), 2 * n as i64 - 3));
    }
    for (n, h) in [(6usize, 12i64), (7, 18), (8, 30)] {
        let mut edges: Vec<(usize, usize)> = (1..n - 1).map(|i| (i - 1, i)).collect();
        edges.push((2, n - 1));
        cases.push((format!("E{n}"), diagram(n, &edges), h - 1));
    }

    for (name, g, height) in &cases {
        let t = dynkin::classify_gram(g);
        ensure(t.map(|t| t.to_string()).as_deref() == Some(name.as_str()), || {
            format!("{name} classified as {t:?}")
        })?;
        let z = dynkin::fundamental_cycle(g).map_err(|e| e.to_string())?.multiplicities;
        let n = g.len();
        let dots = |v: &[i64]| -> Vec<i64> {
            (0..n).map(|i| (0..n).map(|j| g[i][j] * v[j]).sum()).collect()
        };
        ensure(z.iter().all(|&x| x >= 1), || format!("{name}: Z = {z:?} not >= 1"))?;
        ensure(dots(&z).iter().all(|&x| x <= 0), || format!("{name}: Z.e_i > 0"))?;
        ensure(common::form(g, &z, &z) == -2, || format!("{name}: Z^2 != -2"))?;
        ensure(z.iter().sum::<i64>() == *height, || {
            format!("{name}: coefficient sum {} != {height}", z.iter().sum::<i64>())
        })?;
        for i in 0..n {
            if z[i] == 1 {
                continue;
            }
            let mut smaller = z.clone();
            smaller[i] -= 1;
            ensure(dots(&smaller).iter().any(|&x| x > 0), || {
                format!("{name}: Z - e_{} still satisfies Z.e <= 0", i + 1)
            })?;
        }
    }
    Ok(format!("{} diagrams: Z >= 1, Z.e_i <= 0, Z^2 = -2, minimal", cases.len()))
}

fn budget_calculator() -> Outcome {
    use budget::SingularityBudget;
    let a = |n| DynkinType::a(n).unwrap();

    let v = budget::check_budget(&SingularityBudget { chi: 2, k2: 0, s: 0, sings: vec![a(1); 16] });
    ensure(
        v.sum_nu == Rational::integer(24) && v.bound == Rational::integer(24) && v.holds && v.equality_implies_nef,
        || format!("sixteen A1: {v:?}"),
    )?;
    let v = budget::check_budget(&SingularityBudget { chi: 1, k2: 1, s: 1, sings: vec![a(2)] });
    ensure(
        v.sum_nu == Rational::new(8, 3) && v.bound == Rational::new(31, 3) && v.holds && !v.equality_implies_nef,
        || format!("one A2: {v:?}"),
    )?;
    let v = budget::check_budget(&SingularityBudget { chi: 0, k2: 0, s: 0, sings: vec![a(1)] });
    ensure(
        v.sum_nu == Rational::new(3, 2) && v.bound == Rational::zero() && !v.holds,
        || format!("A1 at chi = 0: {v:?}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let chi: i64 = rng.gen_range(-20..=50);
        let k2: i64 = rng.gen_range(-30..=90);
        let s: i64 = rng.gen_range(1..=60);
        let theorem = budget::bound_theorem(chi, k2, s).map_err(|e| e.to_string())?;
        let weaker = budget::bound_megyesi_langer(chi, k2, s).map_err(|e| e.to_string())?;
        let expected = rat(Ratio::from_integer(12 * chi) - Ratio::new(4 * k2, 3) - Ratio::new(s, 3));
        ensure(theorem == weaker - Rational::new(s, 4), || {
            format!("({chi}, {k2}, {s}): {theorem} vs {weaker} - s/4")
        })?;
        ensure(theorem == expected, || format!("({chi}, {k2}, {s}): {theorem} != {expected}"))?;
        ensure(theorem < weaker, || "not strictly stronger".into())?;
    }
    Ok("3 worked examples exact, 100 random triples satisfy theorem = weaker - s/4".into())
}

fn forest_counts() -> Outcome {
    const GOLDEN: [usize; 6] = [1, 2, 7, 37, 266, 2431];
    for s in 1..=6 {
        let oracle = common::brute_force_forests(s);
        let mut generated: Vec<Vec<Vec<usize>>> = propcheck::enumerate_forests(s)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|f| (1..=s).map(|i| f.prox(i).to_vec()).collect())
            .collect();
        let total = generated.len();
        generated.sort();
        generated.dedup();
        ensure(generated.len() == total, || format!("duplicates at s = {s}"))?;
        let mut expected = oracle.clone();
        expected.sort();
        ensure(generated == expected, || format!("generator and oracle differ at s = {s}"))?;
        ensure(total == GOLDEN[s - 1], || format!("s = {s}: {total} != {}", GOLDEN[s - 1]))?;
    }
    Ok(format!("counts {GOLDEN:?} match the brute-force filter"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("nu table", nu_table),
        ("exhaustive suite, s <= 6", exhaustive_suite),
        ("random suite, 1000 forests at s = 10", random_suite),
        ("contracted class enumeration vs brute force", enumeration_oracle),
        ("m-connectedness vs naive decompositions", connectedness_oracle),
        ("fundamental cycles", artin_cycles),
        ("budget calculator", budget_calculator),
        ("forest counts", forest_counts),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}. {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
