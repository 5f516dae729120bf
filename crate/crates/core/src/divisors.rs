//! Arithmetic genus, numerical connectedness and enumeration of contracted
//! classes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Divisor, ExceptionalLattice};

/// `p_a(D) = 1 + (K.D + D^2) / 2`.
pub fn arithmetic_genus(lattice: &ExceptionalLattice, d: &Divisor) -> Result<i64> {
    lattice.check_len(d)?;
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    let twice = lattice.k_dot(d) + lattice.dot(d, d);
    if twice % 2 != 0 {
        return Err(Error::Internal(format!(
            "K.D + D^2 = {twice} is odd for D = ({d})"
        )));
    }
    Ok(1 + twice / 2)
}

/// Walks every integer vector `0 <= a <= bound` in colexicographic order
/// (first coordinate fastest).
///
/// Alongside the strict-transform coordinates `a` it keeps the
/// total-transform coordinates `v`, their squared length and their sum. The
/// form is `-I` in that basis, so `D^2 = -norm` and `K.D = -sum`. Rows of the
/// basis change are sparse, so a step costs a handful of updates.
pub(crate) struct BoxWalk {
    rows: Vec<Vec<(usize, i64)>>,
    bound: Vec<i64>,
    pub a: Vec<i64>,
    pub v: Vec<i64>,
    pub norm: i64,
    pub sum: i64,
}

impl BoxWalk {
    pub fn new(lattice: &ExceptionalLattice, bound: Vec<i64>) -> Self {
        let s = bound.len();
        let rows = lattice
            .inverse_basis_change()
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .map(|(j, &x)| (j, x))
                    .collect()
            })
            .collect();
        BoxWalk {
            rows,
            bound,
            a: vec![0; s],
            v: vec![0; s],
            norm: 0,
            sum: 0,
        }
    }

    pub fn self_intersection(&self) -> i64 {
        -self.norm
    }

    pub fn canonical_degree(&self) -> i64 {
        -self.sum
    }

    /// Row `i` of the basis change as sparse `(j, coefficient)` pairs.
    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.rows[i]
    }

    /// Steps to the next vector and returns the index that was raised;
    /// `None` once the walk wraps back to zero.
    pub fn advance(&mut self) -> Option<usize> {
        for i in 0..self.a.len() {
            if self.a[i] < self.bound[i] {
                for &(j, m) in &self.rows[i] {
                    self.norm += 2 * self.v[j] * m + m * m;
                    self.v[j] += m;
                    self.sum += m;
                }
                self.a[i] += 1;
                return Some(i);
            }
            let c = self.a[i];
            if c != 0 {
                for &(j, m) in &self.rows[i] {
                    self.norm += -2 * c * self.v[j] * m + c * c * m * m;
                    self.v[j] -= c * m;
                    self.sum -= c * m;
                }
                self.a[i] = 0;
            }
        }
        None
    }
}

/// Ordered decompositions `D = A + B` into non-zero effective parts.
///
/// `A` runs over `0 < A < D` with the first coefficient varying fastest, so
/// the stream has `prod(d_i + 1) - 2` items.
pub fn decompositions(d: &Divisor) -> Decompositions {
    Decompositions {
        bound: d.coords().to_vec(),
        a: vec![0; d.len()],
        done: !d.coords().iter().all(|&c| c >= 0),
    }
}

pub struct Decompositions {
    bound: Vec<i64>,
    a: Vec<i64>,
    done: bool,
}

impl Iterator for Decompositions {
    type Item = (Divisor, Divisor);

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut advanced = false;
        for i in 0..self.a.len() {
            if self.a[i] < self.bound[i] {
                self.a[i] += 1;
                advanced = true;
                break;
            }
            self.a[i] = 0;
        }
        if !advanced || self.a == self.bound {
            self.done = true;
            return None;
        }
        let b = self.bound.iter().zip(&self.a).map(|(d, a)| d - a).collect();
        Some((Divisor::new(self.a.clone()), Divisor::new(b)))
    }
}

/// Largest `m` for which a divisor is `m`-connected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConnectednessOrder {
    /// A single reduced component: no decompositions, so `m`-connected for all `m`.
    Irreducible,
    /// `m`-connected exactly for `m <= order`, with `order >= 1`.
    Order { order: i64 },
    /// Some decomposition has `A.B <= 0`; `min_product` is the smallest `A.B`.
    NotOneConnected { min_product: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub m: i64,
    pub is_m_connected: bool,
    /// First decomposition (in stream order) with `A.B < m`.
    pub witness: Option<(Divisor, Divisor)>,
    pub witness_product: Option<i64>,
    pub connectedness_order: ConnectednessOrder,
}

/// Exhaustive `m`-connectedness check.
pub fn is_m_connected(
    lattice: &ExceptionalLattice,
    d: &Divisor,
    m: i64,
) -> Result<DecompositionReport> {
    lattice.check_len(d)?;
    if !d.is_effective() {
        return Err(Error::NotEffective);
    }
    let mut scan = ProductScan::new(lattice, d);
    let mut min_product: Option<i64> = None;
    let mut witness = None;
    while let Some(product) = scan.next_product() {
        if product < m && witness.is_none() {
            let a = Divisor::new(scan.walk.a.clone());
            let b = d - &a;
            witness = Some((a, b, product));
        }
        min_product = Some(min_product.map_or(product, |p| p.min(product)));
    }

    let connectedness_order = match min_product {
        None => ConnectednessOrder::Irreducible,
        Some(p) if p >= 1 => ConnectednessOrder::Order { order: p },
        Some(p) => ConnectednessOrder::NotOneConnected { min_product: p },
    };
    let (witness, witness_product) = match witness {
        Some((a, b, p)) => (Some((a, b)), Some(p)),
        None => (None, None),
    };
    Ok(DecompositionReport {
        m,
        is_m_connected: witness.is_none(),
        witness,
        witness_product,
        connectedness_order,
    })
}

/// First decomposition with `A.B < m`, stopping early. `None` means `D` is
/// `m`-connected. Skips the length and effectivity checks.
pub(crate) fn find_decomposition_below(
    lattice: &ExceptionalLattice,
    d: &Divisor,
    m: i64,
) -> Option<(Divisor, Divisor)> {
    // disconnected support gives A.B = 0 straight away
    if m >= 1 {
        let comps = connected_components_unchecked(lattice, d);
        if comps.len() > 1 {
            let a = comps.into_iter().next().unwrap();
            let b = d - &a;
            return Some((a, b));
        }
    }
    // single components and their complements are cheap to try first
    let s = d.len();
    for i in d.support() {
        let e = Divisor::component(s, i);
        let rest = d - &e;
        if !rest.is_zero() && lattice.dot(&e, &rest) < m {
            return Some((e, rest));
        }
    }
    let mut scan = ProductScan::new(lattice, d);
    while let Some(product) = scan.next_product() {
        if product < m {
            let a = Divisor::new(scan.walk.a.clone());
            let b = d - &a;
            return Some((a, b));
        }
    }
    None
}

/// Runs over `0 < A < D` yielding `A.(D - A)`.
struct ProductScan {
    walk: BoxWalk,
    // (M v_D)_i: change of A.v_D when a_i is raised by one
    step: Vec<i64>,
    // sum over k < i of d_k * step_k, removed when the walk carries into i
    carry: Vec<i64>,
    a_dot_d: i64,
    remaining: u64,
}

impl ProductScan {
    fn new(lattice: &ExceptionalLattice, d: &Divisor) -> Self {
        let walk = BoxWalk::new(lattice, d.coords().to_vec());
        let vd = lattice.to_E_basis(d).expect("length checked by caller");
        let step: Vec<i64> = (0..d.len())
            .map(|i| walk.row(i).iter().map(|&(j, m)| m * vd[j]).sum())
            .collect();
        let mut carry = Vec::with_capacity(d.len());
        let mut acc = 0;
        for (c, t) in d.coords().iter().zip(&step) {
            carry.push(acc);
            acc += c * t;
        }
        let total: u64 = d.coords().iter().map(|&c| c as u64 + 1).product();
        ProductScan {
            walk,
            step,
            carry,
            a_dot_d: 0,
            remaining: total.saturating_sub(2),
        }
    }

    fn next_product(&mut self) -> Option<i64> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let i = self.walk.advance()?;
        self.a_dot_d += self.step[i] - self.carry[i];
        // A.(D - A) = A.D - A^2 = -<v_A, v_D> + |v_A|^2
        Some(self.walk.norm - self.a_dot_d)
    }
}

/// Every effective `D` with `K.D = k_deg` and `D^2 = self_int`.
///
/// Since the form is `-I` on total transforms, this is the set of integer
/// vectors of squared length `-self_int` and coordinate sum `-k_deg`, kept
/// when effective in strict-transform coordinates. Output is in descending
/// lexicographic order of `E`-coordinates.
pub fn enumerate_contracted(
    lattice: &ExceptionalLattice,
    k_deg: i64,
    self_int: i64,
) -> Result<Vec<Divisor>> {
    if self_int >= 0 {
        return Err(Error::NonNegativeSelfIntersection(self_int));
    }
    let s = lattice.rank();
    let mut out = Vec::new();
    let mut v = vec![0i64; s];
    norm_vectors(0, -self_int, -k_deg, &mut v, &mut |v| {
        let d = lattice
            .to_e_basis(v)
            .expect("length matches by construction");
        if d.is_effective() {
            out.push(d);
        }
    });
    Ok(out)
}

// Integer vectors with sum of squares `norm` and coordinate sum `sum`.
fn norm_vectors(pos: usize, norm: i64, sum: i64, v: &mut [i64], emit: &mut dyn FnMut(&[i64])) {
    let left = (v.len() - pos) as i64;
    if left == 0 {
        if norm == 0 && sum == 0 {
            emit(v);
        }
        return;
    }
    // Cauchy-Schwarz and x^2 = x (mod 2)
    if sum * sum > left * norm || (norm - sum).rem_euclid(2) != 0 {
        return;
    }
    let r = isqrt(norm);
    for x in (-r..=r).rev() {
        v[pos] = x;
        norm_vectors(pos + 1, norm - x * x, sum - x, v, emit);
    }
    v[pos] = 0;
}

fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Splits `D` along connected components of its support; two components
/// are adjacent when their intersection number is positive.
pub fn connected_components(lattice: &ExceptionalLattice, d: &Divisor) -> Result<Vec<Divisor>> {
    lattice.check_len(d)?;
    if d.coords().iter().any(|&c| c < 0) {
        return Err(Error::NotEffective);
    }
    Ok(connected_components_unchecked(lattice, d))
}

pub(crate) fn connected_components_unchecked(
    lattice: &ExceptionalLattice,
    d: &Divisor,
) -> Vec<Divisor> {
    let support = d.support();
    let mut seen = vec![false; d.len()];
    let mut out = Vec::new();
    for &start in &support {
        if seen[start - 1] {
            continue;
        }
        let mut comp = vec![0i64; d.len()];
        let mut stack = vec![start];
        seen[start - 1] = true;
        while let Some(i) = stack.pop() {
            comp[i - 1] = d.coeff(i);
            for &j in &support {
                if !seen[j - 1] && lattice.gram_entry(i, j) > 0 {
                    seen[j - 1] = true;
                    stack.push(j);
                }
            }
        }
        out.push(Divisor::new(comp));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn lat(f: crate::forest::ProximityForest) -> ExceptionalLattice {
        ExceptionalLattice::new(&f).unwrap()
    }

    fn d(v: &[i64]) -> Divisor {
        Divisor::new(v.to_vec())
    }

    #[test]
    fn genus_examples() {
        let l = lat(fixtures::chain3());
        assert_eq!(arithmetic_genus(&l, &d(&[1, 1, 1])).unwrap(), 0);
        assert_eq!(arithmetic_genus(&l, &d(&[1, 0, 0])).unwrap(), 0);
        assert_eq!(arithmetic_genus(&l, &d(&[1, 1, 0])).unwrap(), 0);
        assert_eq!(arithmetic_genus(&l, &d(&[0, 0, 0])), Err(Error::NotEffective));
        assert_eq!(arithmetic_genus(&l, &d(&[1, -1, 0])), Err(Error::NotEffective));
    }

    #[test]
    fn decomposition_counts() {
        assert_eq!(decompositions(&d(&[1, 0, 0])).count(), 0);
        let pairs: Vec<_> = decompositions(&d(&[1, 1, 0])).collect();
        assert_eq!(
            pairs,
            vec![(d(&[1, 0, 0]), d(&[0, 1, 0])), (d(&[0, 1, 0]), d(&[1, 0, 0]))]
        );
        assert_eq!(
            decompositions(&d(&[2])).collect::<Vec<_>>(),
            vec![(d(&[1]), d(&[1]))]
        );
        assert_eq!(decompositions(&d(&[2, 1, 3])).count(), 3 * 2 * 4 - 2);
    }

    #[test]
    fn connectedness_examples() {
        let l = lat(fixtures::chain3());
        let big_e1 = d(&[1, 1, 1]);
        assert!(is_m_connected(&l, &big_e1, 1).unwrap().is_m_connected);
        let r = is_m_connected(&l, &big_e1, 2).unwrap();
        assert!(!r.is_m_connected);
        assert_eq!(r.witness, Some((d(&[1, 0, 0]), d(&[0, 1, 1]))));
        assert_eq!(r.witness_product, Some(1));
        assert_eq!(r.connectedness_order, ConnectednessOrder::Order { order: 1 });

        assert!(is_m_connected(&l, &d(&[1, 1, 0]), 1).unwrap().is_m_connected);

        let l4 = lat(fixtures::pair4());
        let r = is_m_connected(&l4, &d(&[1, 0, 1, 0]), 1).unwrap();
        assert!(!r.is_m_connected);
        assert_eq!(
            r.connectedness_order,
            ConnectednessOrder::NotOneConnected { min_product: 0 }
        );
    }

    #[test]
    fn irreducible_is_always_connected() {
        let l = lat(fixtures::chain3());
        let r = is_m_connected(&l, &d(&[0, 1, 0]), 100).unwrap();
        assert!(r.is_m_connected);
        assert_eq!(r.connectedness_order, ConnectednessOrder::Irreducible);
        // 2e_1 splits as e_1 + e_1 with e_1^2 = -2
        let r = is_m_connected(&l, &d(&[2, 0, 0]), 1).unwrap();
        assert_eq!(
            r.connectedness_order,
            ConnectednessOrder::NotOneConnected { min_product: -2 }
        );
    }

    #[test]
    fn contracted_minus_one_classes() {
        let l = lat(fixtures::chain3());
        let got = enumerate_contracted(&l, -1, -1).unwrap();
        assert_eq!(got, l.total_transforms());
    }

    #[test]
    fn contracted_minus_two_classes() {
        let l = lat(fixtures::chain3());
        let got = enumerate_contracted(&l, 0, -2).unwrap();
        // E1-E3, E1-E2, E2-E3 in descending E-lex order
        assert_eq!(got, vec![d(&[1, 1, 0]), d(&[1, 0, 0]), d(&[0, 1, 0])]);
        assert!(enumerate_contracted(&lat(fixtures::chain1()), 0, -2)
            .unwrap()
            .is_empty());
        assert_eq!(
            enumerate_contracted(&l, 0, 0),
            Err(Error::NonNegativeSelfIntersection(0))
        );
    }

    #[test]
    fn components() {
        let l4 = lat(fixtures::pair4());
        assert_eq!(
            connected_components(&l4, &d(&[1, 0, 1, 0])).unwrap(),
            vec![d(&[1, 0, 0, 0]), d(&[0, 0, 1, 0])]
        );
        let l = lat(fixtures::chain3());
        assert_eq!(
            connected_components(&l, &d(&[1, 1, 0])).unwrap(),
            vec![d(&[1, 1, 0])]
        );
        assert!(!d(&[2, 0, 0]).is_reduced());
    }

    #[test]
    fn early_exit_agrees_with_full_check() {
        let l = lat(fixtures::sat3());
        let mut walk = BoxWalk::new(&l, vec![2, 2, 2]);
        while walk.advance().is_some() {
            let dv = d(&walk.a);
            let full = is_m_connected(&l, &dv, 1).unwrap().is_m_connected;
            assert_eq!(find_decomposition_below(&l, &dv, 1).is_none(), full, "{dv}");
            assert_eq!(walk.self_intersection(), l.dot(&dv, &dv));
            assert_eq!(walk.canonical_degree(), l.k_dot(&dv));
        }
    }
}
