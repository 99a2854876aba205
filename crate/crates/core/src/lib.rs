//! Finite configurations of points and lines, their coverings, and the
//! weighted orbit spaces (orbiconfigurations) produced by group actions.
//!
//! The crate is organised bottom-up:
//!
//! * [`incidence`]: incidence structures, configuration axioms, cyclic
//!   (`mod`) families, duals and isomorphism search.
//! * [`graph`]: Levi and Menger graphs with DOT output.
//! * [`perm`]: permutations, materialised groups, automorphism groups,
//!   orbits, subgroup enumeration and the semiregularity checks.
//! * [`covering`]: covering maps, covering translations, projecting and
//!   lifting automorphisms, common covers.
//! * [`orbi`]: weighted orbi-incidence structures, exact parameters,
//!   quotients by groups, duality and Levi-graph scans.
//! * [`primality`]: does a configuration cover a smaller one?
//! * [`goodbad`]: is an orbiconfiguration the quotient of a configuration?
//! * [`io`]: the text formats used by the command line tool.
//!
//! Point and line indices are 0-based in the API and 1-based in every text
//! format, matching the usual `{1,2,4} mod 7` notation.

pub mod covering;
pub mod goodbad;
pub mod graph;
pub mod incidence;
pub mod io;
pub mod library;
pub mod orbi;
pub mod perm;
pub mod primality;
pub mod rational;
pub mod scan;
mod search;

pub use covering::CoveringMap;
pub use incidence::{Configuration, ConfigurationParams, IncidenceStructure};
pub use orbi::{OrbiIncidenceStructure, OrbiLine, Orbiconfiguration};
pub use perm::{Permutation, PermutationGroup};
pub use rational::Rational;

/// Default cap on backtracking nodes for every search in the crate.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// Default cap on materialised group elements.
pub const DEFAULT_GROUP_BUDGET: usize = 1_000_000;

/// Returned by searches that hit their node or size budget before finishing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("search budget exceeded after {explored} nodes")]
pub struct BudgetExceeded {
    pub explored: u64,
}
