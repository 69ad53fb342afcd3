//! Exact verification lab for intersecting-family bounds on four kinds of
//! combinatorial objects over `[n]`: k-sets, k-permutations, k-multisets,
//! and k-words, under standard and Hamming intersection.
//!
//! The library provides full-universe enumeration, closed-form bounds and
//! trivial-family sizes, anchored family construction, a brute-force
//! maximum-family oracle (branch-and-bound maximum clique over the
//! intersection graph), the cyclic-permutation counting lemmas, and a
//! sweep harness with machine-readable reports.

mod bitset;
pub mod bounds;
pub mod error;
pub mod families;
pub mod intersection;
pub mod lemmas;
pub mod objects;
pub mod report;
pub mod solver;

pub use error::{EkrError, Result};
pub use families::{Anchor, Family};
pub use intersection::{IntersectionSpec, Mode, Verdict};
pub use objects::{CombObject, Kind, Params};
pub use solver::{Caps, SearchResult, Structure};
