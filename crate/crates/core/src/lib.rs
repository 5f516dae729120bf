//! Exact computations on the exceptional divisors of a composition of point
//! blow-ups of smooth surfaces.
//!
//! A [`ProximityForest`] describes which earlier exceptional curves each
//! blown-up point lies on. From it, [`ExceptionalLattice`] builds the
//! intersection lattice spanned by the exceptional curves, in both the
//! strict-transform and total-transform bases. On top of that:
//!
//! * [`divisors`] computes arithmetic genera, numerical connectedness and the
//!   complete list of effective classes with given `K.D` and `D^2`;
//! * [`dynkin`] recognizes A-D-E configurations, runs Artin's algorithm for
//!   fundamental cycles and locates the components `theta` attached to
//!   contracted A-type configurations;
//! * [`budget`] evaluates the Miyaoka-type bounds on `sum nu(q)` exactly;
//! * [`propcheck`] generates forests (exhaustively or from a seed) and checks
//!   the structural statements about contracted divisors on each of them.
//!
//! ```
//! use blowup_lattice::{fixtures, divisors, ExceptionalLattice};
//!
//! let lattice = ExceptionalLattice::new(&fixtures::chain3()).unwrap();
//! let nodal = divisors::enumerate_contracted(&lattice, 0, -2).unwrap();
//! assert_eq!(nodal.len(), 3);
//! ```

pub mod budget;
pub mod cli;
pub mod divisors;
pub mod dynkin;
pub mod error;
pub mod fixtures;
pub mod forest;
pub mod lattice;
pub mod matrix;
pub mod propcheck;

pub use error::{Error, Result, Rule};
pub use forest::ProximityForest;
pub use lattice::{Divisor, ExceptionalLattice};
