//! The exceptional lattice of a composition of blow-ups.
//!
//! The lattice has two integral bases. The total transforms `E_1..E_s` are
//! orthonormal for the negated form, `E_i . E_j = -delta_ij`. The strict
//! transforms `e_1..e_s` are the irreducible exceptional curves, with
//!
//! ```text
//! e_i = E_i - sum { E_m : i in prox(m) }
//! ```
//!
//! Divisors are stored in `e`-coordinates, so effectiveness is a sign check.
//! The canonical class only enters through its degree, `K . E_i = -1`.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::ProximityForest;
use crate::matrix::{self, IntMatrix};

/// Integer coefficients on the strict transforms `e_1..e_s`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Divisor(Vec<i64>);

impl Divisor {
    pub fn new(coords: Vec<i64>) -> Self {
        Divisor(coords)
    }

    pub fn zero(s: usize) -> Self {
        Divisor(vec![0; s])
    }

    /// The component `e_i` (1-based).
    pub fn component(s: usize, i: usize) -> Self {
        let mut v = vec![0; s];
        v[i - 1] = 1;
        Divisor(v)
    }

    /// Reduced divisor on the given 1-based components.
    pub fn reduced_on(s: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = vec![0; s];
        for i in indices {
            v[i - 1] = 1;
        }
        Divisor(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Coefficient of `e_i` (1-based).
    pub fn coeff(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Non-zero with every coefficient non-negative.
    pub fn is_effective(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && !self.is_zero()
    }

    pub fn is_reduced(&self) -> bool {
        self.0.iter().all(|&c| c == 0 || c == 1)
    }

    /// 1-based indices of components with non-zero coefficient.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn shares_component_with(&self, other: &Divisor) -> bool {
        self.0.iter().zip(&other.0).any(|(&a, &b)| a != 0 && b != 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Divisor) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Componentwise `self <= other` and `self != other`.
    pub fn lt(&self, other: &Divisor) -> bool {
        self.le(other) && self != other
    }

    pub fn scaled(&self, k: i64) -> Divisor {
        Divisor(self.0.iter().map(|c| c * k).collect())
    }
}

impl Add for &Divisor {
    type Output = Divisor;

    fn add(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Divisor {
    type Output = Divisor;

    fn sub(self, rhs: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// Comma-separated `e`-coefficients, e.g. `1,1,0`.
impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Divisor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut coords = Vec::new();
        let mut column = 1;
        for part in s.split(',') {
            let t = part.trim();
            let c = t.parse::<i64>().map_err(|_| Error::Syntax {
                line: 1,
                column,
                message: format!("expected an integer coefficient, got `{t}`"),
            })?;
            coords.push(c);
            column += part.chars().count() + 1;
        }
        Ok(Divisor(coords))
    }
}

/// Sylvester certificate of negative definiteness for the Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitenessCertificate {
    /// Leading principal minors of `gram_e`, in order.
    pub leading_minors: Vec<i128>,
    pub negative_definite: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalLattice {
    forest: ProximityForest,
    gram_e: IntMatrix,
    // row i: e_{i+1} in E-coordinates
    strict_in_total: IntMatrix,
    // row i: E_{i+1} in e-coordinates
    total_in_strict: IntMatrix,
    k_degrees: Vec<i64>,
    certificate: DefinitenessCertificate,
}

impl ExceptionalLattice {
    pub fn new(forest: &ProximityForest) -> Result<Self> {
        let s = forest.len();

        let mut strict_in_total = vec![vec![0i64; s]; s];
        for i in 1..=s {
            strict_in_total[i - 1][i - 1] = 1;
            for m in forest.proximate_to(i) {
                strict_in_total[i - 1][m - 1] = -1;
            }
        }

        // E_i = e_i + sum_{m proximate to i} E_m, resolved from the last point down
        let mut total_in_strict = vec![vec![0i64; s]; s];
        for i in (1..=s).rev() {
            let mut row = vec![0i64; s];
            row[i - 1] = 1;
            for m in forest.proximate_to(i) {
                for (r, x) in row.iter_mut().zip(&total_in_strict[m - 1]) {
                    *r += x;
                }
            }
            total_in_strict[i - 1] = row;
        }

        // E-basis form is -I, so e_a . e_b = -<row a, row b>
        let gram_e: IntMatrix = (0..s)
            .map(|a| {
                (0..s)
                    .map(|b| {
                        -strict_in_total[a]
                            .iter()
                            .zip(&strict_in_total[b])
                            .map(|(x, y)| x * y)
                            .sum::<i64>()
                    })
                    .collect()
            })
            .collect();

        let k_degrees = strict_in_total
            .iter()
            .map(|row| -row.iter().sum::<i64>())
            .collect();

        let leading_minors = matrix::leading_minors(&gram_e);
        let negative_definite = matrix::is_negative_definite(&gram_e);
        if !negative_definite {
            return Err(Error::Internal(format!(
                "Gram matrix is not negative definite (minors {leading_minors:?})"
            )));
        }

        Ok(ExceptionalLattice {
            forest: forest.clone(),
            gram_e,
            strict_in_total,
            total_in_strict,
            k_degrees,
            certificate: DefinitenessCertificate {
                leading_minors,
                negative_definite,
            },
        })
    }

    pub fn forest(&self) -> &ProximityForest {
        &self.forest
    }

    /// Rank, i.e. the number of blow-ups.
    pub fn rank(&self) -> usize {
        self.gram_e.len()
    }

    /// `gram_e[a][b] = e_{a+1} . e_{b+1}`.
    pub fn gram(&self) -> &IntMatrix {
        &self.gram_e
    }

    /// `e_a . e_b` for 1-based indices.
    pub fn gram_entry(&self, a: usize, b: usize) -> i64 {
        self.gram_e[a - 1][b - 1]
    }

    /// Row `i` expresses `E_{i+1}` in `e`-coordinates.
    pub fn basis_change(&self) -> &IntMatrix {
        &self.total_in_strict
    }

    /// Row `i` expresses `e_{i+1}` in `E`-coordinates.
    pub fn inverse_basis_change(&self) -> &IntMatrix {
        &self.strict_in_total
    }

    /// `K . e_i` for each component.
    pub fn k_degrees(&self) -> &[i64] {
        &self.k_degrees
    }

    pub fn certificate(&self) -> &DefinitenessCertificate {
        &self.certificate
    }

    pub fn check_len(&self, d: &Divisor) -> Result<()> {
        if d.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                actual: d.len(),
            });
        }
        Ok(())
    }

    pub fn intersect(&self, a: &Divisor, b: &Divisor) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(self.dot(a, b))
    }

    /// Intersection without the length check, for hot loops on known-good input.
    pub(crate) fn dot(&self, a: &Divisor, b: &Divisor) -> i64 {
        matrix::bilinear(&self.gram_e, a.coords(), b.coords())
    }

    pub fn self_intersection(&self, d: &Divisor) -> Result<i64> {
        self.intersect(d, d)
    }

    pub fn canonical_degree(&self, d: &Divisor) -> Result<i64> {
        self.check_len(d)?;
        Ok(self.k_dot(d))
    }

    pub(crate) fn k_dot(&self, d: &Divisor) -> i64 {
        d.coords().iter().zip(&self.k_degrees).map(|(a, b)| a * b).sum()
    }

    /// `E_i` in `e`-coordinates (1-based).
    pub fn total_transform(&self, i: usize) -> Result<Divisor> {
        if i == 0 || i > self.rank() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.rank(),
            });
        }
        Ok(Divisor(self.total_in_strict[i - 1].clone()))
    }

    /// All of `E_1..E_s`.
    pub fn total_transforms(&self) -> Vec<Divisor> {
        self.total_in_strict.iter().cloned().map(Divisor).collect()
    }

    /// `E`-coordinates `v` of `d`, so that `d = sum v_i E_i`.
    #[allow(non_snake_case)]
    pub fn to_E_basis(&self, d: &Divisor) -> Result<Vec<i64>> {
        self.check_len(d)?;
        Ok(transpose_apply(&self.strict_in_total, d.coords()))
    }

    /// Inverse of [`Self::to_E_basis`].
    pub fn to_e_basis(&self, v: &[i64]) -> Result<Divisor> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                actual: v.len(),
            });
        }
        Ok(Divisor(transpose_apply(&self.total_in_strict, v)))
    }

    /// Maximum coefficient appearing in any `E_i`.
    pub fn max_total_coefficient(&self) -> i64 {
        self.total_in_strict
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0)
    }
}

// out_j = sum_i x_i rows[i][j]
fn transpose_apply(rows: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    let mut out = vec![0; rows.len()];
    for (row, &xi) in rows.iter().zip(x) {
        if xi == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row) {
            *o += xi * r;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn d(v: &[i64]) -> Divisor {
        Divisor::new(v.to_vec())
    }

    #[test]
    fn chain1() {
        let l = ExceptionalLattice::new(&fixtures::chain1()).unwrap();
        assert_eq!(l.gram(), &vec![vec![-1]]);
        assert_eq!(l.total_transform(1).unwrap(), d(&[1]));
        assert_eq!(l.k_degrees(), &[-1]);
        assert_eq!(l.to_E_basis(&d(&[1])).unwrap(), vec![1]);
    }

    #[test]
    fn chain3() {
        let l = ExceptionalLattice::new(&fixtures::chain3()).unwrap();
        assert_eq!(
            l.gram(),
            &vec![vec![-2, 1, 0], vec![1, -2, 1], vec![0, 1, -1]]
        );
        assert_eq!(
            l.basis_change(),
            &vec![vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]
        );
        assert_eq!(l.k_degrees(), &[0, 0, -1]);
        assert_eq!(l.total_transform(1).unwrap(), d(&[1, 1, 1]));

        let e1 = Divisor::component(3, 1);
        let e2 = Divisor::component(3, 2);
        assert_eq!(l.intersect(&e1, &e2).unwrap(), 1);
        let big_e2 = l.total_transform(2).unwrap();
        let big_e3 = l.total_transform(3).unwrap();
        assert_eq!(l.intersect(&big_e2, &big_e3).unwrap(), 0);
        assert_eq!(l.intersect(&e1, &e1).unwrap(), l.gram_entry(1, 1));

        assert_eq!(l.canonical_degree(&l.total_transform(1).unwrap()).unwrap(), -1);
        assert_eq!(l.canonical_degree(&e1).unwrap(), 0);
        assert_eq!(l.to_E_basis(&d(&[1, 1, 0])).unwrap(), vec![1, 0, -1]);
    }

    #[test]
    fn sat3() {
        let l = ExceptionalLattice::new(&fixtures::sat3()).unwrap();
        let e1 = Divisor::component(3, 1);
        assert_eq!(l.to_E_basis(&e1).unwrap(), vec![1, -1, -1]);
        assert_eq!(l.self_intersection(&e1).unwrap(), -3);
        assert_eq!(l.canonical_degree(&e1).unwrap(), 1);
        assert_eq!(l.to_E_basis(&Divisor::component(3, 2)).unwrap(), vec![0, 1, -1]);
        assert_eq!(l.total_transform(1).unwrap(), d(&[1, 1, 2]));
        assert_eq!(l.max_total_coefficient(), 2);
    }

    #[test]
    fn errors() {
        let l = ExceptionalLattice::new(&fixtures::chain3()).unwrap();
        assert_eq!(
            l.intersect(&d(&[1, 0]), &d(&[1, 0, 0])),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        );
        assert!(matches!(l.total_transform(0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(l.total_transform(4), Err(Error::IndexOutOfRange { .. })));
        assert!(l.to_e_basis(&[1]).is_err());
    }

    #[test]
    fn divisor_literals() {
        assert_eq!("1, 1,0".parse::<Divisor>().unwrap(), d(&[1, 1, 0]));
        assert_eq!(d(&[2, 0, -1]).to_string(), "2,0,-1");
        assert!(matches!(
            "1,x".parse::<Divisor>(),
            Err(Error::Syntax { column: 3, .. })
        ));
        assert!(!d(&[2, 0]).is_reduced());
        assert!(!d(&[0, 0]).is_effective());
        assert_eq!(d(&[0, 3, 1]).support(), vec![2, 3]);
    }

    #[test]
    fn certificate_minors_alternate() {
        let l = ExceptionalLattice::new(&fixtures::chain3()).unwrap();
        let c = l.certificate();
        assert!(c.negative_definite);
        assert_eq!(c.leading_minors, vec![-2, 3, -1]);
    }
}
