//! Forest generators and the structural checks run on each forest.
//!
//! Every check is a theorem about exceptional divisors, so on valid forests a
//! correct implementation reports no violations. Checks that quantify over
//! all effective divisors are truncated to a coordinate box; the box used is
//! recorded in the report.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::divisors::{self, BoxWalk};
use crate::dynkin::{self, Family};
use crate::error::{Error, Result};
use crate::forest::ProximityForest;
use crate::lattice::{Divisor, ExceptionalLattice};

/// Largest point count accepted by [`enumerate_forests`].
pub const DEFAULT_POINT_CAP: usize = 7;

/// Point count up to which `exhaust` runs by default.
pub const DEFAULT_EXHAUSTIVE_POINTS: usize = 6;

/// Largest number of divisors the default coordinate box may hold.
pub const DEFAULT_MAX_BOX: u64 = 1_000_000;

/// Equality witnesses kept per check in a report.
pub const MAX_EQUALITY_WITNESSES: usize = 16;

/// Every valid forest on exactly `s` points, in a fixed order.
pub fn enumerate_forests(s: usize) -> Result<Vec<ProximityForest>> {
    enumerate_forests_capped(s, DEFAULT_POINT_CAP)
}

pub fn enumerate_forests_capped(s: usize, cap: usize) -> Result<Vec<ProximityForest>> {
    if s == 0 || s > cap {
        return Err(Error::CapExceeded { s, cap });
    }
    let mut out = Vec::new();
    let mut current = ProximityForest::empty();
    extend(&mut current, s, &mut out);
    Ok(out)
}

fn extend(current: &mut ProximityForest, s: usize, out: &mut Vec<ProximityForest>) {
    if current.len() == s {
        out.push(current.clone());
        return;
    }
    for option in current.next_point_options() {
        current.push_unchecked(option);
        extend(current, s, out);
        current.pop();
    }
}

/// A valid forest on `s` points; each point picks its proximity set
/// uniformly among the options left by the earlier points.
pub fn random_forest(s: usize, seed: u64) -> ProximityForest {
    assert!(s >= 1, "a forest needs at least one point");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = ProximityForest::empty();
    while f.len() < s {
        let mut options = f.next_point_options();
        let pick = rng.gen_range(0..options.len());
        f.push_unchecked(options.swap_remove(pick));
    }
    f
}

/// Smallest relabelling of `f` (by proximity lists) among the orders that are
/// themselves valid blow-up orders. Isomorphic forests share it.
///
/// Brute force over permutations, so only for small forests.
pub fn canonical_form(f: &ProximityForest) -> Result<ProximityForest> {
    let s = f.len();
    if s > 9 {
        return Err(Error::CapExceeded { s, cap: 9 });
    }
    let mut perm: Vec<usize> = (0..s).collect();
    let mut best: Option<Vec<Vec<usize>>> = None;
    loop {
        // perm[old] = new, 0-based
        let mut relabelled = vec![Vec::new(); s];
        for (old, &new) in perm.iter().enumerate() {
            let mut p: Vec<usize> = f.prox(old + 1).iter().map(|&j| perm[j - 1] + 1).collect();
            p.sort_unstable();
            relabelled[new] = p;
        }
        if best.as_ref().is_none_or(|b| relabelled < *b) && ProximityForest::new(relabelled.clone()).is_ok() {
            best = Some(relabelled);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    ProximityForest::new(best.expect("identity is valid"))
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// How far the brute-force checks reach in each coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CoordinateCap {
    /// One more than the largest coefficient of any total transform,
    /// lowered if needed so the box holds at most `max_box` divisors.
    Auto { max_box: u64 },
    Fixed { cap: i64 },
}

impl Default for CoordinateCap {
    fn default() -> Self {
        CoordinateCap::Auto { max_box: DEFAULT_MAX_BOX }
    }
}

impl CoordinateCap {
    pub fn resolve(&self, lattice: &ExceptionalLattice) -> i64 {
        match *self {
            CoordinateCap::Fixed { cap } => cap,
            CoordinateCap::Auto { max_box } => {
                let mut cap = lattice.max_total_coefficient() + 1;
                let s = lattice.rank() as u32;
                while cap > 1 && (cap as u64 + 1).checked_pow(s).is_none_or(|n| n > max_box) {
                    cap -= 1;
                }
                cap
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// The forest in `.prox` format; enough to replay the check.
    pub forest: String,
    pub witnesses: Vec<Divisor>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: String,
    pub statement: String,
    pub instances_checked: u64,
    pub violations: Vec<Violation>,
    /// Instances where an inequality is attained (only some checks record these).
    pub equality_count: u64,
    pub equality_witnesses: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorInfo {
    pub mode: String,
    pub min_points: usize,
    pub max_points: usize,
    pub seed: Option<u64>,
    pub forests: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub generator: GeneratorInfo,
    pub coordinate_cap: CoordinateCap,
    /// Largest per-coordinate bound actually used over all forests.
    pub max_cap_used: i64,
    pub checks: Vec<CheckEntry>,
}

impl SuiteReport {
    pub fn total_violations(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn check(&self, id: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Pretty JSON; key order follows the struct layout.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.generator.forests += other.generator.forests;
        self.max_cap_used = self.max_cap_used.max(other.max_cap_used);
        for (mine, theirs) in self.checks.iter_mut().zip(other.checks) {
            debug_assert_eq!(mine.id, theirs.id);
            mine.instances_checked += theirs.instances_checked;
            mine.violations.extend(theirs.violations);
            mine.equality_count += theirs.equality_count;
            let room = MAX_EQUALITY_WITNESSES.saturating_sub(mine.equality_witnesses.len());
            mine.equality_witnesses
                .extend(theirs.equality_witnesses.into_iter().take(room));
        }
    }
}

/// Identifiers and statements of every check, in report order.
pub const CHECKS: &[(&str, &str)] = &[
    ("lattice.orthonormal", "E_i.E_j = -delta_ij and K.E_i = -1"),
    ("lattice.negative_definite", "the Gram matrix of e_1..e_s is negative definite"),
    ("lattice.adjunction", "K.e_i = -2 - e_i^2"),
    ("lattice.basis_round_trip", "the two basis changes are mutually inverse"),
    ("genus.additivity", "p_a(A+B) = p_a(A) + p_a(B) - 1 + A.B"),
    ("total.components_nonpositive", "every component G of E_i has G.E_i <= 0"),
    (
        "total.unique_negative_component",
        "E_i contains e_i once and e_i is its only component with G.E_i < 0, where e_i.E_i = -1",
    ),
    ("total.one_connected", "every E_i is 1-connected"),
    ("contracted.genus_nonpositive", "every effective contracted A in the box has p_a(A) <= 0"),
    ("total.nested_or_disjoint", "E_i, E_j sharing a component are comparable"),
    ("total.nested_orthogonal", "E_i < E_j implies G.E_j = 0 for every component G of E_i"),
    ("contracted.minus_one_classes", "K.D = -1, D^2 = -1 classes are exactly E_1..E_s"),
    (
        "contracted.connected_meets_once",
        "every 1-connected effective contracted D in the box has D.E_i <= 1",
    ),
    ("nodal_class.one_connected", "every class with K.D = 0, D^2 = -2 is 1-connected"),
    ("nodal_class.pairing_bounded", "distinct such classes pair to -1, 0 or 1"),
    (
        "nodal_class.endpoints",
        "D.E_j = 1, D.E_k = -1 for unique j, k, D.E_i = 0 otherwise, and E_k = E_j + D",
    ),
    ("nodal_class.orthogonal_transfer", "D.E_j = 1 and D'.D = 0 imply D'.E_j = 0"),
    (
        "steep_curve.chain",
        "e_i^2 = -m <= -3 has m - 1 indices J with e_i.E_j = 1 and e_i + sum_J E_j is some E_h containing e_i once",
    ),
    (
        "ade.self_intersection",
        "A-D-E configurations have D^2 = -2, K.G = 0 on components, and are listed among nodal classes",
    ),
    ("ade.fundamental_cycle", "Artin's cycle is >= 1, has Z.e_i <= 0 and Z^2 = -2"),
    ("ade.type_a_only", "no contracted configuration of -2-curves is of type D or E"),
    ("theta.disjoint_support", "for A-type D with D.E_j = 1, D and E_j share no component"),
    (
        "theta.unique_component",
        "one component of E_j meets D, with intersection 1, and it is the one with G.E_j = -1",
    ),
    (
        "theta.disjoint_or_contained",
        "for disjoint A-type D, D' with D.E_j = 1: D' misses E_j or D' < E_j",
    ),
    ("theta.distinct", "disjoint A-type configurations have distinct theta"),
    ("a_family.budget", "sum (m_i + 1) <= s over disjoint A_{m_i} configurations"),
];

fn empty_report(generator: GeneratorInfo, cap: CoordinateCap) -> SuiteReport {
    SuiteReport {
        generator,
        coordinate_cap: cap,
        max_cap_used: 0,
        checks: CHECKS
            .iter()
            .map(|(id, statement)| CheckEntry {
                id: id.to_string(),
                statement: statement.to_string(),
                instances_checked: 0,
                violations: Vec::new(),
                equality_count: 0,
                equality_witnesses: Vec::new(),
            })
            .collect(),
    }
}

/// Runs every check on one forest.
pub fn run_suite(forest: &ProximityForest, cap: CoordinateCap) -> SuiteReport {
    let generator = GeneratorInfo {
        mode: "single".into(),
        min_points: forest.len(),
        max_points: forest.len(),
        seed: None,
        forests: 1,
    };
    let mut report = empty_report(generator, cap);
    Checker::new(forest, &mut report, cap).run();
    report
}

/// Every valid forest with `min_points..=max_points` points.
pub fn run_exhaustive(min_points: usize, max_points: usize, cap: CoordinateCap) -> Result<SuiteReport> {
    for s in [min_points, max_points] {
        if s == 0 || s > DEFAULT_POINT_CAP {
            return Err(Error::CapExceeded { s, cap: DEFAULT_POINT_CAP });
        }
    }
    let generator = GeneratorInfo {
        mode: "exhaustive".into(),
        min_points,
        max_points,
        seed: None,
        forests: 0,
    };
    let mut report = empty_report(generator, cap);
    for s in min_points..=max_points {
        for f in enumerate_forests(s)? {
            report.absorb(run_suite(&f, cap));
        }
    }
    Ok(report)
}

/// `count` random forests with point counts drawn from `min_points..=max_points`.
pub fn run_random(
    min_points: usize,
    max_points: usize,
    count: u64,
    seed: u64,
    cap: CoordinateCap,
) -> Result<SuiteReport> {
    if min_points == 0 || min_points > max_points {
        return Err(Error::InvalidConfiguration(format!(
            "bad point range {min_points}..={max_points}"
        )));
    }
    let generator = GeneratorInfo {
        mode: "random".into(),
        min_points,
        max_points,
        seed: Some(seed),
        forests: 0,
    };
    let mut report = empty_report(generator, cap);
    for (s, instance_seed) in random_instances(min_points, max_points, count, seed) {
        report.absorb(run_suite(&random_forest(s, instance_seed), cap));
    }
    Ok(report)
}

/// The `(points, seed)` pairs behind [`run_random`].
pub fn random_instances(min_points: usize, max_points: usize, count: u64, seed: u64) -> Vec<(usize, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(min_points..=max_points), rng.gen()))
        .collect()
}

struct Checker<'a> {
    forest: &'a ProximityForest,
    text: String,
    report: &'a mut SuiteReport,
    cap: CoordinateCap,
}

impl<'a> Checker<'a> {
    fn new(forest: &'a ProximityForest, report: &'a mut SuiteReport, cap: CoordinateCap) -> Self {
        Checker {
            forest,
            text: forest.to_string(),
            report,
            cap,
        }
    }

    fn entry(&mut self, id: &str) -> &mut CheckEntry {
        self.report
            .checks
            .iter_mut()
            .find(|c| c.id == id)
            .unwrap_or_else(|| panic!("unknown check {id}"))
    }

    fn count(&mut self, id: &str, n: u64) {
        self.entry(id).instances_checked += n;
    }

    fn expect(&mut self, id: &str, ok: bool, witnesses: &[&Divisor], detail: impl FnOnce() -> String) {
        self.count(id, 1);
        if !ok {
            self.violate(id, witnesses, detail());
        }
    }

    fn violate(&mut self, id: &str, witnesses: &[&Divisor], detail: String) {
        let v = Violation {
            forest: self.text.clone(),
            witnesses: witnesses.iter().map(|&d| d.clone()).collect(),
            detail,
        };
        self.entry(id).violations.push(v);
    }

    fn equality(&mut self, id: &str, witnesses: &[&Divisor], detail: String) {
        let v = Violation {
            forest: self.text.clone(),
            witnesses: witnesses.iter().map(|&d| d.clone()).collect(),
            detail,
        };
        let e = self.entry(id);
        e.equality_count += 1;
        if e.equality_witnesses.len() < MAX_EQUALITY_WITNESSES {
            e.equality_witnesses.push(v);
        }
    }

    fn run(mut self) {
        let lattice = match ExceptionalLattice::new(self.forest) {
            Ok(l) => l,
            Err(e) => {
                self.expect("lattice.negative_definite", false, &[], || e.to_string());
                return;
            }
        };
        self.check_lattice(&lattice);
        self.check_total_transforms(&lattice);
        self.check_box(&lattice);
        let nodal = divisors::enumerate_contracted(&lattice, 0, -2).expect("negative");
        self.check_nodal_classes(&lattice, &nodal);
        self.check_steep_curves(&lattice);
        self.check_ade(&lattice, &nodal);
        self.check_theta(&lattice);
    }

    fn check_lattice(&mut self, l: &ExceptionalLattice) {
        let s = l.rank();
        let totals = l.total_transforms();
        for i in 0..s {
            let row_ok = (0..s).all(|j| l.dot(&totals[i], &totals[j]) == if i == j { -1 } else { 0 });
            let k_ok = l.k_dot(&totals[i]) == -1;
            self.expect("lattice.orthonormal", row_ok && k_ok, &[&totals[i]], || {
                format!("E_{} fails orthonormality or K.E = -1", i + 1)
            });
        }
        let cert = l.certificate().negative_definite;
        self.expect("lattice.negative_definite", cert, &[], || "Sylvester test failed".into());
        for i in 1..=s {
            let ok = l.k_degrees()[i - 1] == -2 - l.gram_entry(i, i);
            let e = Divisor::component(s, i);
            self.expect("lattice.adjunction", ok, &[&e], || format!("adjunction fails on e_{i}"));
        }
        for i in 1..=s {
            let e = Divisor::component(s, i);
            let ok = l.to_e_basis(&l.to_E_basis(&e).unwrap()).unwrap() == e
                && l.to_E_basis(&totals[i - 1]).unwrap() == Divisor::component(s, i).into_coords();
            self.expect("lattice.basis_round_trip", ok, &[&e], || {
                format!("basis change does not invert on e_{i}")
            });
        }
        // additivity on pairs of components and total transforms
        let mut pool: Vec<Divisor> = (1..=s).map(|i| Divisor::component(s, i)).collect();
        pool.extend(totals.iter().cloned());
        for a in &pool {
            for b in &pool {
                let sum = a + b;
                let pa = |d: &Divisor| divisors::arithmetic_genus(l, d).unwrap();
                let ok = pa(&sum) == pa(a) + pa(b) - 1 + l.dot(a, b);
                self.expect("genus.additivity", ok, &[a, b], || "genus not additive".into());
            }
        }
    }

    fn check_total_transforms(&mut self, l: &ExceptionalLattice) {
        let s = l.rank();
        let totals = l.total_transforms();
        for i in 1..=s {
            let big = &totals[i - 1];
            let products: Vec<(usize, i64)> = big
                .support()
                .into_iter()
                .map(|c| (c, l.dot(&Divisor::component(s, c), big)))
                .collect();
            let nonpositive = big.is_effective() && products.iter().all(|&(_, p)| p <= 0);
            self.expect("total.components_nonpositive", nonpositive, &[big], || {
                format!("E_{i} has a component G with G.E_{i} > 0: {products:?}")
            });
            let negative: Vec<&(usize, i64)> = products.iter().filter(|(_, p)| *p < 0).collect();
            let unique = matches!(negative.as_slice(), [(c, -1)] if *c == i)
                && big.coeff(i) == 1
                && products.iter().all(|&(c, p)| c == i || p == 0);
            self.expect("total.unique_negative_component", unique, &[big], || {
                format!("E_{i}: component products {products:?}")
            });
            let split = divisors::find_decomposition_below(l, big, 1);
            let ok = split.is_none();
            let w: Vec<Divisor> = split.map(|(a, b)| vec![a, b]).unwrap_or_default();
            let mut ws = vec![big];
            ws.extend(w.iter());
            self.expect("total.one_connected", ok, &ws, || format!("E_{i} is not 1-connected"));
        }

        for i in 1..=s {
            for j in 1..=s {
                if i == j {
                    continue;
                }
                let (a, b) = (&totals[i - 1], &totals[j - 1]);
                if i < j && a.shares_component_with(b) {
                    let ok = a.lt(b) || b.lt(a);
                    self.expect("total.nested_or_disjoint", ok, &[a, b], || {
                        format!("E_{i} and E_{j} overlap without nesting")
                    });
                }
                if a.lt(b) {
                    let ok = a
                        .support()
                        .into_iter()
                        .all(|c| l.dot(&Divisor::component(s, c), b) == 0);
                    self.expect("total.nested_orthogonal", ok, &[a, b], || {
                        format!("E_{i} < E_{j} but a component of E_{i} meets E_{j}")
                    });
                }
            }
        }

        let minus_one = divisors::enumerate_contracted(l, -1, -1).expect("negative");
        let mut sorted = minus_one.clone();
        sorted.sort();
        let mut expected = totals.clone();
        expected.sort();
        let ws: Vec<&Divisor> = minus_one.iter().collect();
        self.expect("contracted.minus_one_classes", sorted == expected, &ws, || {
            format!("found {} classes for {s} blow-ups", minus_one.len())
        });
    }

    // brute force over the coordinate box
    fn check_box(&mut self, l: &ExceptionalLattice) {
        let s = l.rank();
        let cap = self.cap.resolve(l);
        self.report.max_cap_used = self.report.max_cap_used.max(cap);
        let mut walk = BoxWalk::new(l, vec![cap; s]);
        let adjacency: Vec<u64> = (1..=s)
            .map(|i| {
                (1..=s)
                    .filter(|&j| j != i && l.gram_entry(i, j) > 0)
                    .fold(0, |m, j| m | 1 << (j - 1))
            })
            .collect();
        let mut visited = 0u64;
        while walk.advance().is_some() {
            visited += 1;
            // 2 p_a - 2 = K.D + D^2
            if walk.canonical_degree() + walk.self_intersection() > -2 {
                let d = Divisor::new(walk.a.clone());
                self.violate("contracted.genus_nonpositive", &[&d], "p_a > 0".into());
            }
            // D.E_j = -v_j
            if walk.v.iter().any(|&x| x <= -2) && !quick_split(l, &walk, &adjacency) {
                let d = Divisor::new(walk.a.clone());
                if divisors::find_decomposition_below(l, &d, 1).is_none() {
                    let detail = format!("1-connected with E-coordinates {:?}", walk.v);
                    self.violate("contracted.connected_meets_once", &[&d], detail);
                }
            }
        }
        self.count("contracted.genus_nonpositive", visited);
        self.count("contracted.connected_meets_once", visited);
    }

    fn check_nodal_classes(&mut self, l: &ExceptionalLattice, nodal: &[Divisor]) {
        let s = l.rank();
        let totals = l.total_transforms();
        let endpoints: Vec<Option<(usize, usize)>> = nodal
            .iter()
            .map(|d| {
                let p: Vec<i64> = totals.iter().map(|e| l.dot(d, e)).collect();
                let ones: Vec<usize> = (0..s).filter(|&i| p[i] == 1).collect();
                let minus: Vec<usize> = (0..s).filter(|&i| p[i] == -1).collect();
                let rest_zero = p.iter().all(|&x| (-1..=1).contains(&x));
                match (ones.as_slice(), minus.as_slice()) {
                    ([j], [k]) if rest_zero && totals[*k] == &totals[*j] + d => Some((j + 1, k + 1)),
                    _ => None,
                }
            })
            .collect();

        for (d, ends) in nodal.iter().zip(&endpoints) {
            let split = divisors::find_decomposition_below(l, d, 1);
            self.expect("nodal_class.one_connected", split.is_none(), &[d], || {
                "not 1-connected".into()
            });
            self.expect("nodal_class.endpoints", ends.is_some(), &[d], || {
                let p: Vec<i64> = totals.iter().map(|e| l.dot(d, e)).collect();
                format!("products with E_i: {p:?}")
            });
        }
        for (a, da) in nodal.iter().enumerate() {
            for (b, db) in nodal.iter().enumerate() {
                if a == b {
                    continue;
                }
                let p = l.dot(da, db);
                if a < b {
                    self.expect("nodal_class.pairing_bounded", (-1..=1).contains(&p), &[da, db], || {
                        format!("pairing {p}")
                    });
                }
                if let (0, Some((j, _))) = (p, endpoints[a]) {
                    let ok = l.dot(db, &totals[j - 1]) == 0;
                    self.expect("nodal_class.orthogonal_transfer", ok, &[da, db], || {
                        format!("D'.E_{j} != 0")
                    });
                }
            }
        }
    }

    fn check_steep_curves(&mut self, l: &ExceptionalLattice) {
        let s = l.rank();
        let totals = l.total_transforms();
        for i in 1..=s {
            let m = -l.gram_entry(i, i);
            if m < 3 {
                continue;
            }
            let n = Divisor::component(s, i);
            let j_set: Vec<usize> = (1..=s).filter(|&j| l.dot(&n, &totals[j - 1]) == 1).collect();
            let mut sum = n.clone();
            for &j in &j_set {
                sum = &sum + &totals[j - 1];
            }
            let ok = j_set.len() as i64 == m - 1
                && totals.iter().any(|e| *e == sum && e.coeff(i) == 1);
            self.expect("steep_curve.chain", ok, &[&n, &sum], || {
                format!("e_{i}^2 = -{m}, J = {j_set:?}")
            });
        }
    }

    fn check_ade(&mut self, l: &ExceptionalLattice, nodal: &[Divisor]) {
        let s = l.rank();
        let sets = dynkin::connected_minus_two_sets(l);
        for set in &sets {
            let d = Divisor::reduced_on(s, set.iter().copied());
            let gram = dynkin::restricted_gram(l, set);
            let t = dynkin::classify_gram(&gram);
            self.expect(
                "ade.type_a_only",
                !matches!(t, Some(t) if t.family() != Family::A),
                &[&d],
                || format!("configuration of type {}", t.unwrap()),
            );
            let Some(t) = t else { continue };

            let ok = l.dot(&d, &d) == -2
                && set.iter().all(|&c| l.k_degrees()[c - 1] == 0)
                && nodal.contains(&d);
            self.expect("ade.self_intersection", ok, &[&d], || format!("{t} configuration"));

            match dynkin::fundamental_cycle(&gram) {
                Ok(z) => {
                    let zs = &z.multiplicities;
                    let ok = zs.iter().all(|&x| x >= 1)
                        && (0..set.len()).all(|a| {
                            gram[a].iter().zip(zs).map(|(g, x)| g * x).sum::<i64>() <= 0
                        })
                        && z.self_intersection == -2;
                    self.expect("ade.fundamental_cycle", ok, &[&d], || format!("Z = {zs:?}"));
                }
                Err(e) => self.expect("ade.fundamental_cycle", false, &[&d], || e.to_string()),
            }
        }
        for d in nodal {
            let t = dynkin::classify_ADE(l, d);
            self.expect(
                "ade.type_a_only",
                !matches!(t, Some(t) if t.family() != Family::A),
                &[d],
                || format!("nodal class of type {}", t.unwrap()),
            );
        }
    }

    fn check_theta(&mut self, l: &ExceptionalLattice) {
        let s = l.rank();
        let totals = l.total_transforms();
        let configs = dynkin::contracted_a_configurations(l);

        // (j, theta) per configuration, computed here independently of dynkin::theta
        let mut located: Vec<Option<(usize, usize)>> = Vec::new();
        for (d, _) in &configs {
            let js: Vec<usize> = (1..=s).filter(|&j| l.dot(d, &totals[j - 1]) == 1).collect();
            let &[j] = js.as_slice() else {
                self.expect("theta.disjoint_support", false, &[d], || {
                    format!("indices with D.E_j = 1: {js:?}")
                });
                located.push(None);
                continue;
            };
            let big = &totals[j - 1];
            self.expect("theta.disjoint_support", !big.shares_component_with(d), &[d, big], || {
                format!("shares a component with E_{j}")
            });

            let meets: Vec<(usize, i64)> = big
                .support()
                .into_iter()
                .map(|c| (c, l.dot(&Divisor::component(s, c), d)))
                .filter(|&(_, p)| p != 0)
                .collect();
            let negative: Vec<usize> = big
                .support()
                .into_iter()
                .filter(|&c| l.dot(&Divisor::component(s, c), big) < 0)
                .collect();
            let theta = match (meets.as_slice(), negative.as_slice()) {
                ([(c, 1)], [n]) if c == n && l.dot(&Divisor::component(s, *c), big) == -1 => Some(*c),
                _ => None,
            };
            let agrees = dynkin::theta(l, d).ok() == theta.map(|t| dynkin::Theta { j, theta: t });
            self.expect("theta.unique_component", theta.is_some() && agrees, &[d, big], || {
                format!("components meeting D: {meets:?}; negative on E_{j}: {negative:?}")
            });
            located.push(theta.map(|t| (j, t)));
        }

        for (a, (da, _)) in configs.iter().enumerate() {
            for (b, (db, _)) in configs.iter().enumerate() {
                if a == b || !dynkin::configurations_disjoint(l, da, db) {
                    continue;
                }
                if let Some((j, _)) = located[a] {
                    let big = &totals[j - 1];
                    let ok = dynkin::configurations_disjoint(l, db, big) || db.lt(big);
                    self.expect("theta.disjoint_or_contained", ok, &[da, db, big], || {
                        format!("D' against E_{j}")
                    });
                }
                if a < b {
                    let ok = match (located[a], located[b]) {
                        (Some((_, ta)), Some((_, tb))) => ta != tb,
                        _ => false,
                    };
                    self.expect("theta.distinct", ok, &[da, db], || {
                        format!("theta {:?} vs {:?}", located[a], located[b])
                    });
                }
            }
        }

        for family in dynkin::disjoint_a_families(l) {
            let ws: Vec<&Divisor> = family.members.iter().collect();
            self.expect("a_family.budget", family.budget <= s, &ws, || {
                format!("budget {} exceeds {s}", family.budget)
            });
            if family.budget == s {
                let types: Vec<String> = family.types.iter().map(|t| t.to_string()).collect();
                self.equality(
                    "a_family.budget",
                    &ws,
                    format!("budget {s} = s for {}", types.join(" + ")),
                );
            }
        }
    }
}

/// Cheap certificates that the divisor under `walk` is not 1-connected: a
/// disconnected support, or a single component `e` with `e.(D - e) <= 0`.
fn quick_split(l: &ExceptionalLattice, walk: &BoxWalk, adjacency: &[u64]) -> bool {
    if walk.a.len() > 64 {
        return false;
    }
    let support = walk
        .a
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0u64, |m, (i, _)| m | 1 << i);
    let mut reached = support & support.wrapping_neg();
    loop {
        let mut next = reached;
        let mut bits = reached;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            next |= adjacency[i] & support;
            bits &= bits - 1;
        }
        if next == reached {
            break;
        }
        reached = next;
    }
    if reached != support {
        return true;
    }
    let single = support.count_ones() == 1 && walk.a.iter().sum::<i64>() == 1;
    !single
        && (0..walk.a.len()).any(|i| {
            // e_i.D = -<row_i, v>
            let e_dot_d: i64 = -walk.row(i).iter().map(|&(j, m)| m * walk.v[j]).sum::<i64>();
            walk.a[i] > 0 && e_dot_d - l.gram_entry(i + 1, i + 1) <= 0
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_forests(1).unwrap().len(), 1);
        let two = enumerate_forests(2).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two[0].prox(2).is_empty());
        assert_eq!(two[1].prox(2), &[1]);
        assert!(matches!(enumerate_forests(0), Err(Error::CapExceeded { .. })));
        assert!(matches!(enumerate_forests(8), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn random_is_deterministic_and_valid() {
        for seed in 0..50 {
            let f = random_forest(9, seed);
            assert_eq!(f.to_string(), random_forest(9, seed).to_string());
            assert_eq!(ProximityForest::parse(&f.to_string()).unwrap(), f);
        }
        assert_eq!(random_forest(1, 7), fixtures::chain1());
    }

    #[test]
    fn canonical_forms_merge_relabellings() {
        // chain 1 <- 2 plus a free point, in two orders
        let a = ProximityForest::new(vec![vec![], vec![1], vec![]]).unwrap();
        let b = ProximityForest::new(vec![vec![], vec![], vec![2]]).unwrap();
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
        assert_ne!(
            canonical_form(&fixtures::chain3()).unwrap(),
            canonical_form(&fixtures::sat3()).unwrap()
        );
    }

    #[test]
    fn fixtures_pass() {
        for f in [fixtures::chain1(), fixtures::chain3(), fixtures::sat3(), fixtures::pair4()] {
            let r = run_suite(&f, CoordinateCap::default());
            assert!(r.passed(), "{}", r.to_json());
        }
    }

    #[test]
    fn chain3_counts() {
        let r = run_suite(&fixtures::chain3(), CoordinateCap::default());
        assert_eq!(r.check("nodal_class.endpoints").unwrap().instances_checked, 3);
    }

    #[test]
    fn sat3_steep_curve() {
        let r = run_suite(&fixtures::sat3(), CoordinateCap::default());
        assert_eq!(r.check("steep_curve.chain").unwrap().instances_checked, 1);
    }

    #[test]
    fn pair4_budget_equality() {
        let r = run_suite(&fixtures::pair4(), CoordinateCap::default());
        let c = r.check("a_family.budget").unwrap();
        assert_eq!(c.equality_count, 1);
        assert_eq!(c.equality_witnesses[0].witnesses.len(), 2);
    }

    #[test]
    fn auto_cap_respects_box_limit() {
        let l = ExceptionalLattice::new(&fixtures::sat3()).unwrap();
        assert_eq!(CoordinateCap::Auto { max_box: u64::MAX }.resolve(&l), 3);
        assert_eq!(CoordinateCap::Auto { max_box: 27 }.resolve(&l), 2);
        assert_eq!(CoordinateCap::Fixed { cap: 5 }.resolve(&l), 5);
    }
}
