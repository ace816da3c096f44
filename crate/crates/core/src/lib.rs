//! Hyper-arc consistency for the soft alldifferent constraint.
//!
//! The violation of an assignment is the number of pairs of variables that
//! share a value. Consistency is decided by one minimum-cost flow in the
//! value graph (`O(nm)`), and all domains are then filtered in `O(m)` using
//! the strongly connected components of the residual graph.
//!
//! ```
//! use softalldiff::{propagate, Instance};
//!
//! let inst = Instance::build(
//!     [
//!         ("x1", vec!["a", "b"]),
//!         ("x2", vec!["a", "b"]),
//!         ("x3", vec!["a", "b"]),
//!         ("x4", vec!["b", "c"]),
//!     ],
//!     (1, 1),
//! )
//! .unwrap();
//! let out = propagate(&inst);
//! let filtered = out.apply(&inst).unwrap();
//! assert_eq!(filtered.domain(3), [inst.value_id("c").unwrap()]);
//! ```

pub mod model;
pub mod network;
pub mod oracle;
pub mod propagator;
pub mod scc;
pub mod solver;

pub use model::{max_violation, violation, Assignment, Instance, InstanceError, ValueId};
pub use network::{flow_cost, AugmentingPath, Counters, Flow, FlowNetwork, Node, Reassignment};
pub use oracle::{
    enumerate, enumerate_with_cap, explicit_shortest_path, OracleError, OracleReport,
};
pub use propagator::{
    check_consistency, check_consistency_counted, naive_propagate, path_cost, propagate,
    propagate_counted, ComponentMinima, Consistency, FilterOutcome, ResidualView, Verdict,
};
pub use scc::SccLabeling;
pub use solver::{solve, solve_with, SearchOptions, SearchResult};
