//! Sorting tree partial orders through a comparison oracle.
//!
//! An unknown tree order `(T, ≻)` is only reachable through queries that
//! answer `i ≻ j`, `j ≻ i` or "incomparable". The algorithms in
//! [`algorithms`] recover the `n − 1` edges of the tree while the
//! [`oracle::CountingOracle`] counts every query, and
//! [`representation::OrderIndex`] turns recovered edges into an O(1)
//! comparison structure.
//!
//! ```
//! use treesort::algorithms::{get_edges_optimized, Algorithm};
//! use treesort::generators::{generate, FamilyKind, FamilySpec};
//! use treesort::oracle::CountingOracle;
//!
//! let tree = generate(&FamilySpec::new(FamilyKind::CompleteDary, 127, 2, 0)).unwrap();
//! let mut oracle = CountingOracle::new(&tree);
//! let all: Vec<_> = tree.elements().collect();
//! let edges = get_edges_optimized(&all, &mut oracle, 42).unwrap();
//! assert_eq!(edges, tree.ground_truth_edges());
//! ```

pub mod algorithms;
pub mod bench;
pub mod generators;
pub mod oracle;
pub mod poset;
pub mod representation;

pub use algorithms::{Algorithm, AlgorithmReport, SortError};
pub use oracle::{CountingOracle, Oracle, QueryOutcome};
pub use poset::{Edge, EdgeSet, ElementId, TreePoset, TreeStats};
pub use representation::OrderIndex;
