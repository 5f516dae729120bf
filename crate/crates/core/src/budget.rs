//! Singularity budgets: the invariant `nu` of a canonical singularity and the
//! Miyaoka-type upper bounds on `sum nu`.
//!
//! The hypotheses behind the bounds (non-negative Kodaira dimension,
//! canonical singularities, `s` the number of blow-ups down to the minimal
//! model) are the caller's responsibility; this module only does the
//! arithmetic, exactly.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dynkin::{DynkinType, Family};
use crate::error::{Error, Result};

/// Exact reduced fraction with positive denominator. Displays as `p/q`,
/// including integers (`24/1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn integer(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected a fraction `p/q`, got `{s}`"),
        };
        let (p, q) = s.split_once('/').unwrap_or((s, "1"));
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Ok(Rational::new(p, q))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Euler number `n + 1` of an A-D-E configuration with `n` components.
pub fn euler_number(t: DynkinType) -> i64 {
    t.rank() as i64 + 1
}

/// Order of the local fundamental group `G` of the singularity of type `t`.
pub fn group_order(t: DynkinType) -> i64 {
    let n = t.rank() as i64;
    match (t.family(), n) {
        (Family::A, _) => n + 1,
        (Family::D, _) => 4 * (n - 2),
        (Family::E, 6) => 24,
        (Family::E, 7) => 48,
        (Family::E, _) => 120,
    }
}

/// `nu(q)` from the closed forms per type.
pub fn nu(t: DynkinType) -> Rational {
    let n = t.rank() as i64;
    let whole = Rational::integer;
    match (t.family(), n) {
        (Family::A, _) => whole(n + 1) - Rational::new(1, n + 1),
        (Family::D, _) => whole(n + 1) - Rational::new(1, 4 * (n - 2)),
        (Family::E, 6) => whole(7) - Rational::new(1, 24),
        (Family::E, 7) => whole(8) - Rational::new(1, 48),
        (Family::E, _) => whole(9) - Rational::new(1, 120),
    }
}

/// `nu(q) = e(D_q) - 1/|G|`, assembled from the two ingredients.
pub fn nu_from_invariants(t: DynkinType) -> Rational {
    Rational::integer(euler_number(t)) - Rational::integer(group_order(t)).recip()
}

/// `12 chi - 4/3 K^2`.
pub fn bound_miyaoka(chi: i64, k2: i64) -> Rational {
    Rational::integer(12 * chi) - Rational::new(4 * k2, 3)
}

fn check_blowups(s: i64) -> Result<()> {
    if s < 0 {
        return Err(Error::NegativeBlowups(s));
    }
    Ok(())
}

/// `12 chi - 4/3 K^2 - s/3`.
pub fn bound_theorem(chi: i64, k2: i64, s: i64) -> Result<Rational> {
    check_blowups(s)?;
    Ok(bound_miyaoka(chi, k2) - Rational::new(s, 3))
}

/// `12 chi - 4/3 K^2 - s/12`, the Megyesi-Langer form.
pub fn bound_megyesi_langer(chi: i64, k2: i64, s: i64) -> Result<Rational> {
    check_blowups(s)?;
    Ok(bound_miyaoka(chi, k2) - Rational::new(s, 12))
}

/// Invariants of a surface with canonical singularities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularityBudget {
    /// `chi(O_X)`.
    pub chi: i64,
    /// `K_X^2`.
    pub k2: i64,
    /// Blow-ups from the minimal resolution down to the minimal model.
    pub s: u32,
    pub sings: Vec<DynkinType>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetVerdict {
    pub sum_nu: Rational,
    /// The bound `12 chi - 4/3 K^2 - s/3` the verdict is taken against.
    pub bound: Rational,
    pub bound_miyaoka: Rational,
    pub bound_megyesi_langer: Rational,
    pub holds: bool,
    /// `bound - sum_nu`.
    pub slack: Rational,
    /// `sum_nu` equals `12 chi - 4/3 K^2`, which forces `K_X` nef.
    pub equality_implies_nef: bool,
}

pub fn check_budget(b: &SingularityBudget) -> BudgetVerdict {
    let s = i64::from(b.s);
    let sum_nu: Rational = b.sings.iter().map(|&t| nu(t)).sum();
    let bound = bound_theorem(b.chi, b.k2, s).expect("s is unsigned");
    let miyaoka = bound_miyaoka(b.chi, b.k2);
    let holds = sum_nu <= bound;
    BudgetVerdict {
        sum_nu,
        bound,
        bound_miyaoka: miyaoka,
        bound_megyesi_langer: bound_megyesi_langer(b.chi, b.k2, s).expect("s is unsigned"),
        holds,
        slack: bound - sum_nu,
        equality_implies_nef: holds && sum_nu == miyaoka,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> DynkinType {
        s.parse().unwrap()
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu(t("A1")), Rational::new(3, 2));
        assert_eq!(nu(t("E8")), Rational::new(1079, 120));
        assert_eq!(nu(t("D4")), Rational::new(39, 8));
    }

    #[test]
    fn bounds() {
        assert_eq!(bound_miyaoka(2, 0), Rational::integer(24));
        assert_eq!(bound_miyaoka(0, 0), Rational::zero());
        assert_eq!(bound_miyaoka(1, 3), Rational::integer(8));

        assert_eq!(bound_theorem(1, 1, 1).unwrap(), Rational::new(31, 3));
        assert_eq!(bound_theorem(5, -2, 0).unwrap(), bound_miyaoka(5, -2));
        assert_eq!(bound_theorem(2, 0, 6).unwrap(), Rational::integer(22));
        assert_eq!(bound_theorem(2, 0, -1), Err(Error::NegativeBlowups(-1)));

        assert_eq!(bound_megyesi_langer(1, 1, 12).unwrap(), Rational::new(29, 3));
        assert_eq!(bound_theorem(1, 1, 12).unwrap(), Rational::new(20, 3));
        assert_eq!(bound_megyesi_langer(2, 0, 4).unwrap(), Rational::new(71, 3));
        assert_eq!(bound_megyesi_langer(0, 0, -3), Err(Error::NegativeBlowups(-3)));
    }

    #[test]
    fn verdicts() {
        let kummer = SingularityBudget {
            chi: 2,
            k2: 0,
            s: 0,
            sings: vec![t("A1"); 16],
        };
        let v = check_budget(&kummer);
        assert_eq!(v.sum_nu, Rational::integer(24));
        assert!(v.holds && v.equality_implies_nef);
        assert_eq!(v.slack.to_string(), "0/1");

        let v = check_budget(&SingularityBudget {
            chi: 1,
            k2: 1,
            s: 1,
            sings: vec![t("A2")],
        });
        assert_eq!(v.sum_nu, Rational::new(8, 3));
        assert_eq!(v.slack, Rational::new(23, 3));
        assert!(v.holds && !v.equality_implies_nef);

        let v = check_budget(&SingularityBudget {
            chi: 0,
            k2: 0,
            s: 0,
            sings: vec![t("A1")],
        });
        assert!(!v.holds && !v.equality_implies_nef);
    }

    #[test]
    fn rational_text() {
        assert_eq!("6/4".parse::<Rational>().unwrap(), Rational::new(3, 2));
        assert_eq!("-7".parse::<Rational>().unwrap().to_string(), "-7/1");
        assert!("1/0".parse::<Rational>().is_err());
        let json = serde_json::to_string(&Rational::new(-1, 3)).unwrap();
        assert_eq!(json, "\"-1/3\"");
    }
}
