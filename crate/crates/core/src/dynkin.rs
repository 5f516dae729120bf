//! Dual graphs, A-D-E recognition and the combinatorics of contracted
//! A-type configurations.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::divisors;
use crate::error::{Error, Result};
use crate::lattice::{Divisor, ExceptionalLattice};
use crate::matrix::{self, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    D,
    E,
}

impl Family {
    fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        }
    }
}

/// A Dynkin diagram of type `A_n (n >= 1)`, `D_n (n >= 4)` or `E_6, E_7, E_8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinType {
    family: Family,
    n: usize,
}

impl DynkinType {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let ok = match family {
            Family::A => n >= 1,
            Family::D => n >= 4,
            Family::E => (6..=8).contains(&n),
        };
        if !ok {
            return Err(Error::InvalidRank {
                family: family.letter(),
                n,
            });
        }
        Ok(DynkinType { family, n })
    }

    pub fn a(n: usize) -> Result<Self> {
        Self::new(Family::A, n)
    }

    pub fn d(n: usize) -> Result<Self> {
        Self::new(Family::D, n)
    }

    pub fn e(n: usize) -> Result<Self> {
        Self::new(Family::E, n)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Number of vertices.
    pub fn rank(&self) -> usize {
        self.n
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.n)
    }
}

/// Accepts `A<n>`, `D<n>`, `E6`, `E7`, `E8` (also with `_`, e.g. `A_3`).
impl FromStr for DynkinType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(unknown()),
        };
        let rest = chars.as_str();
        let rest = rest.strip_prefix('_').unwrap_or(rest);
        if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let n = rest.parse().map_err(|_| unknown())?;
        DynkinType::new(family, n)
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Vertices are components; an edge carries the intersection number of its
/// two ends when that number is positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualGraph {
    /// 1-based component indices, ascending.
    pub vertices: Vec<usize>,
    pub self_intersections: Vec<i64>,
    /// `(a, b, multiplicity)` with `a < b`, sorted.
    pub edges: Vec<(usize, usize, i64)>,
}

impl DualGraph {
    /// Graph of a configuration given by its Gram matrix, labelled `1..=n`.
    pub fn from_gram(gram: &[Vec<i64>]) -> Self {
        let labels: Vec<usize> = (1..=gram.len()).collect();
        Self::with_labels(&labels, gram)
    }

    fn with_labels(labels: &[usize], gram: &[Vec<i64>]) -> Self {
        let mut edges = Vec::new();
        for a in 0..labels.len() {
            for b in a + 1..labels.len() {
                if gram[a][b] > 0 {
                    edges.push((labels[a], labels[b], gram[a][b]));
                }
            }
        }
        DualGraph {
            vertices: labels.to_vec(),
            self_intersections: (0..labels.len()).map(|i| gram[i][i]).collect(),
            edges,
        }
    }

    /// Graphviz text; vertices are `e<i>` labelled with their self-intersection.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for (v, si) in self.vertices.iter().zip(&self.self_intersections) {
            out.push_str(&format!("  e{v} [label=\"e{v} (self={si})\"];\n"));
        }
        for &(a, b, m) in &self.edges {
            if m == 1 {
                out.push_str(&format!("  e{a} -- e{b};\n"));
            } else {
                out.push_str(&format!("  e{a} -- e{b} [label=\"{m}\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Restriction of the Gram matrix to a set of 1-based components.
pub fn restricted_gram(lattice: &ExceptionalLattice, support: &[usize]) -> IntMatrix {
    support
        .iter()
        .map(|&a| support.iter().map(|&b| lattice.gram_entry(a, b)).collect())
        .collect()
}

pub fn dual_graph(lattice: &ExceptionalLattice, d: &Divisor) -> Result<DualGraph> {
    lattice.check_len(d)?;
    if d.coords().iter().any(|&c| c < 0) {
        return Err(Error::NotEffective);
    }
    if !d.is_reduced() {
        return Err(Error::NotReduced);
    }
    let support = d.support();
    Ok(DualGraph::with_labels(&support, &restricted_gram(lattice, &support)))
}

/// Recognizes an A-D-E configuration from its Gram matrix.
pub fn classify_gram(gram: &[Vec<i64>]) -> Option<DynkinType> {
    let n = gram.len();
    if n == 0 || !matrix::is_symmetric(gram) {
        return None;
    }
    if (0..n).any(|i| gram[i][i] != -2) {
        return None;
    }
    let mut adj = vec![Vec::new(); n];
    let mut edges = 0;
    for a in 0..n {
        for b in a + 1..n {
            match gram[a][b] {
                0 => {}
                1 => {
                    adj[a].push(b);
                    adj[b].push(a);
                    edges += 1;
                }
                _ => return None,
            }
        }
    }
    // connected with n - 1 edges is a tree
    if edges != n - 1 || !connected(&adj) {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    if adj.iter().any(|a| a.len() >= 4) || branch.len() > 1 {
        return None;
    }
    let Some(&center) = branch.first() else {
        return Some(DynkinType { family: Family::A, n });
    };
    let mut arms: Vec<usize> = adj[center]
        .iter()
        .map(|&start| arm_length(&adj, center, start))
        .collect();
    arms.sort_unstable();
    match arms[..] {
        [1, 1, _] => Some(DynkinType { family: Family::D, n }),
        [1, 2, 2] | [1, 2, 3] | [1, 2, 4] => Some(DynkinType { family: Family::E, n }),
        _ => None,
    }
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

// vertices on the path leaving `from` through `start`; the graph is a tree
// with a single branch vertex, so every arm is a path
fn arm_length(adj: &[Vec<usize>], from: usize, start: usize) -> usize {
    let (mut prev, mut cur, mut len) = (from, start, 1);
    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
        prev = cur;
        cur = next;
        len += 1;
    }
    len
}

/// The A-D-E type of `d`, if `d` is a reduced connected configuration of
/// `-2`-curves whose dual graph is a Dynkin diagram.
#[allow(non_snake_case)]
pub fn classify_ADE(lattice: &ExceptionalLattice, d: &Divisor) -> Option<DynkinType> {
    if d.len() != lattice.rank() || !d.is_effective() || !d.is_reduced() {
        return None;
    }
    classify_gram(&restricted_gram(lattice, &d.support()))
}

/// Gram matrix of the abstract configuration of type `t`.
///
/// Vertex order: `A_n` is the path `0..n`. For `D_n` and `E_n` vertex 0 is
/// the branch vertex; `D_n` has short arms `1`, `2` and the long arm
/// `3..n`; `E_n` has arms `1`, `2-3` and `4..n`.
pub fn abstract_lattice(t: DynkinType) -> IntMatrix {
    let n = t.n;
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    let mut link = |a: usize, b: usize| {
        g[a][b] = 1;
        g[b][a] = 1;
    };
    match t.family {
        Family::A => (1..n).for_each(|i| link(i - 1, i)),
        Family::D => {
            link(0, 1);
            link(0, 2);
            link(0, 3);
            (4..n).for_each(|i| link(i - 1, i));
        }
        Family::E => {
            link(0, 1);
            link(0, 2);
            link(2, 3);
            link(0, 4);
            (5..n).for_each(|i| link(i - 1, i));
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalCycle {
    pub multiplicities: Vec<i64>,
    pub self_intersection: i64,
}

/// Artin's algorithm for the fundamental cycle of a connected negative
/// definite configuration of `-2`-curves.
///
/// Starts from the reduced cycle and raises the lowest-index component with
/// `Z.e_i > 0` until `Z.e_i <= 0` everywhere.
pub fn fundamental_cycle(gram: &[Vec<i64>]) -> Result<FundamentalCycle> {
    let n = gram.len();
    if n == 0 || !matrix::is_symmetric(gram) {
        return Err(Error::InvalidConfiguration(
            "expected a non-empty symmetric matrix".into(),
        ));
    }
    if (0..n).any(|i| gram[i][i] != -2) {
        return Err(Error::InvalidConfiguration(
            "every component must have self-intersection -2".into(),
        ));
    }
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|a| (0..n).filter(|&b| b != a && gram[a][b] != 0).collect())
        .collect();
    if !connected(&adj) {
        return Err(Error::InvalidConfiguration("configuration is disconnected".into()));
    }
    if !matrix::is_negative_definite(gram) {
        return Err(Error::InvalidConfiguration(
            "intersection form is not negative definite".into(),
        ));
    }

    let mut z = vec![1i64; n];
    let mut gz: Vec<i64> = (0..n).map(|i| gram[i].iter().sum()).collect();
    while let Some(i) = (0..n).find(|&i| gz[i] > 0) {
        z[i] += 1;
        for (g, r) in gz.iter_mut().zip(&gram[i]) {
            *g += r;
        }
    }
    let self_intersection = matrix::bilinear(gram, &z, &z);
    if self_intersection != -2 {
        return Err(Error::Internal(format!(
            "fundamental cycle {z:?} has Z^2 = {self_intersection}"
        )));
    }
    Ok(FundamentalCycle {
        multiplicities: z,
        self_intersection,
    })
}

/// The index `j` with `D.E_j = 1` and the component `theta` of `E_j` meeting `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theta {
    pub j: usize,
    pub theta: usize,
}

/// Locates `theta` for a contracted A-type configuration, checking that it
/// is also the unique component with `theta.E_j = -1` and that `D` and `E_j`
/// share no component.
pub fn theta(lattice: &ExceptionalLattice, d: &Divisor) -> Result<Theta> {
    lattice.check_len(d)?;
    match classify_ADE(lattice, d) {
        Some(t) if t.family == Family::A => {}
        _ => {
            return Err(Error::InvalidConfiguration(format!(
                "({d}) is not an A-type configuration"
            )))
        }
    }
    let totals = lattice.total_transforms();
    let js: Vec<usize> = (1..=lattice.rank())
        .filter(|&i| lattice.dot(d, &totals[i - 1]) == 1)
        .collect();
    let &[j] = js.as_slice() else {
        return Err(Error::Internal(format!(
            "expected exactly one E_j with D.E_j = 1, found {js:?}"
        )));
    };
    let big_e = &totals[j - 1];
    if big_e.shares_component_with(d) {
        return Err(Error::Internal(format!("D shares a component with E_{j}")));
    }
    let meeting: Vec<usize> = big_e
        .support()
        .into_iter()
        .filter(|&c| lattice.dot(&Divisor::component(lattice.rank(), c), d) != 0)
        .collect();
    let &[theta] = meeting.as_slice() else {
        return Err(Error::Internal(format!(
            "expected one component of E_{j} meeting D, found {meeting:?}"
        )));
    };
    let component = Divisor::component(lattice.rank(), theta);
    if lattice.dot(&component, d) != 1 || lattice.dot(&component, big_e) != -1 {
        return Err(Error::Internal(format!(
            "component e_{theta} does not satisfy e.D = 1, e.E_{j} = -1"
        )));
    }
    Ok(Theta { j, theta })
}

/// Every reduced connected configuration of `-2`-components that has an
/// A-D-E type, with that type. Sorted by support.
pub fn ade_configurations(lattice: &ExceptionalLattice) -> Vec<(Divisor, DynkinType)> {
    connected_minus_two_sets(lattice)
        .into_iter()
        .filter_map(|set| {
            let d = Divisor::reduced_on(lattice.rank(), set.iter().copied());
            classify_gram(&restricted_gram(lattice, &set)).map(|t| (d, t))
        })
        .collect()
}

/// Every connected (non-empty) set of `-2`-components, each once.
pub(crate) fn connected_minus_two_sets(lattice: &ExceptionalLattice) -> Vec<Vec<usize>> {
    let s = lattice.rank();
    let nodal: Vec<usize> = (1..=s).filter(|&i| lattice.gram_entry(i, i) == -2).collect();
    let neighbours = |v: usize| -> Vec<usize> {
        nodal
            .iter()
            .copied()
            .filter(|&w| w != v && lattice.gram_entry(v, w) > 0)
            .collect()
    };

    fn grow(
        set: &mut Vec<usize>,
        mut ext: Vec<usize>,
        excluded: &mut Vec<usize>,
        root: usize,
        neighbours: &dyn Fn(usize) -> Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let mut sorted = set.clone();
        sorted.sort_unstable();
        out.push(sorted);
        let mark = excluded.len();
        while let Some(w) = ext.pop() {
            let mut next_ext = ext.clone();
            for u in neighbours(w) {
                if u > root && !set.contains(&u) && !excluded.contains(&u) && !next_ext.contains(&u) {
                    next_ext.push(u);
                }
            }
            set.push(w);
            grow(set, next_ext, excluded, root, neighbours, out);
            set.pop();
            excluded.push(w);
        }
        excluded.truncate(mark);
    }

    let mut out = Vec::new();
    for &v in &nodal {
        let ext: Vec<usize> = neighbours(v).into_iter().filter(|&u| u > v).collect();
        grow(&mut vec![v], ext, &mut Vec::new(), v, &neighbours, &mut out);
    }
    out.sort();
    out
}

/// A maximal family of pairwise disjoint contracted A-type configurations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetFamily {
    pub members: Vec<Divisor>,
    pub types: Vec<DynkinType>,
    /// `sum (m_i + 1)` over members of type `A_{m_i}`.
    pub budget: usize,
}

/// Two configurations are disjoint when they share no component and no
/// component of one meets a component of the other.
pub fn configurations_disjoint(lattice: &ExceptionalLattice, a: &Divisor, b: &Divisor) -> bool {
    !a.shares_component_with(b)
        && a.support()
            .iter()
            .all(|&i| b.support().iter().all(|&j| lattice.gram_entry(i, j) == 0))
}

/// Contracted A-type configurations: classes with `K.D = 0`, `D^2 = -2` of type `A_m`.
pub fn contracted_a_configurations(lattice: &ExceptionalLattice) -> Vec<(Divisor, DynkinType)> {
    divisors::enumerate_contracted(lattice, 0, -2)
        .expect("self-intersection is negative")
        .into_iter()
        .filter_map(|d| match classify_ADE(lattice, &d) {
            Some(t) if t.family == Family::A => Some((d, t)),
            _ => None,
        })
        .collect()
}

/// All maximal disjoint families, without checking the bound.
pub fn disjoint_a_families(lattice: &ExceptionalLattice) -> Vec<BudgetFamily> {
    let configs = contracted_a_configurations(lattice);
    let n = configs.len();
    let compatible: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| a != b && configurations_disjoint(lattice, &configs[a].0, &configs[b].0))
                .collect()
        })
        .collect();

    let mut cliques = Vec::new();
    bron_kerbosch(
        &compatible,
        &mut Vec::new(),
        (0..n).collect(),
        Vec::new(),
        &mut cliques,
    );
    let mut families: Vec<BudgetFamily> = cliques
        .into_iter()
        .map(|mut members| {
            members.sort_unstable();
            BudgetFamily {
                budget: members.iter().map(|&m| configs[m].1.rank() + 1).sum(),
                types: members.iter().map(|&m| configs[m].1).collect(),
                members: members.iter().map(|&m| configs[m].0.clone()).collect(),
            }
        })
        .collect();
    families.sort_by(|a, b| a.members.cmp(&b.members));
    families
}

// maximal cliques with pivoting
fn bron_kerbosch(
    adj: &[Vec<bool>],
    current: &mut Vec<usize>,
    mut candidates: Vec<usize>,
    mut excluded: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if candidates.is_empty() {
        if excluded.is_empty() && !current.is_empty() {
            out.push(current.clone());
        }
        return;
    }
    let pivot = *candidates
        .iter()
        .chain(&excluded)
        .max_by_key(|&&u| candidates.iter().filter(|&&v| adj[u][v]).count())
        .unwrap();
    let branch: Vec<usize> = candidates
        .iter()
        .copied()
        .filter(|&v| !adj[pivot][v])
        .collect();
    for v in branch {
        current.push(v);
        bron_kerbosch(
            adj,
            current,
            candidates.iter().copied().filter(|&u| adj[v][u]).collect(),
            excluded.iter().copied().filter(|&u| adj[v][u]).collect(),
            out,
        );
        current.pop();
        candidates.retain(|&u| u != v);
        excluded.push(v);
    }
}

/// Maximal disjoint families with their budgets `sum (m_i + 1)`; every
/// budget is checked against the number of blow-ups.
#[allow(non_snake_case)]
pub fn disjoint_A_budget(lattice: &ExceptionalLattice) -> Result<Vec<BudgetFamily>> {
    let families = disjoint_a_families(lattice);
    if let Some(f) = families.iter().find(|f| f.budget > lattice.rank()) {
        return Err(Error::Internal(format!(
            "family budget {} exceeds {} blow-ups",
            f.budget,
            lattice.rank()
        )));
    }
    Ok(families)
}
