//! Small named configurations used throughout the docs, tests and examples.

use crate::forest::ProximityForest;

/// One blow-up.
pub fn chain1() -> ProximityForest {
    ProximityForest::new(vec![vec![]]).unwrap()
}

/// Three blow-ups, each at a free point of the previous exceptional curve.
pub fn chain3() -> ProximityForest {
    ProximityForest::new(vec![vec![], vec![1], vec![2]]).unwrap()
}

/// The third point is the satellite point where `e_1` meets `e_2`.
pub fn sat3() -> ProximityForest {
    ProximityForest::new(vec![vec![], vec![1], vec![1, 2]]).unwrap()
}

/// Two independent two-step chains.
pub fn pair4() -> ProximityForest {
    ProximityForest::new(vec![vec![], vec![1], vec![], vec![3]]).unwrap()
}

/// Names accepted by [`by_name`], lowercase.
pub const NAMES: &[&str] = &["chain1", "chain3", "sat3", "pair4"];

/// Looks a fixture up by name, ignoring case.
pub fn by_name(name: &str) -> Option<ProximityForest> {
    match name.to_ascii_lowercase().as_str() {
        "chain1" => Some(chain1()),
        "chain3" => Some(chain3()),
        "sat3" => Some(sat3()),
        "pair4" => Some(pair4()),
        _ => None,
    }
}
