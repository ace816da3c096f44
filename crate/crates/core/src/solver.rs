//! Depth-first branch and bound minimizing the violation, with the
//! propagator run at every node.

use crate::model::{violation, Assignment, Instance};
use crate::propagator::propagate;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Run `propagate` at every node. Without it the search only checks
    /// complete assignments against the bound.
    pub propagate: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { propagate: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub best_assignment: Option<Assignment>,
    pub best_z: Option<i64>,
    pub nodes_explored: u64,
}

pub fn solve(instance: &Instance) -> SearchResult {
    solve_with(instance, SearchOptions::default())
}

/// Branches on the first unfixed variable, values ascending. Each new
/// incumbent of violation `v` tightens the bound on `z` to `v - 1`.
///
/// The lower bound of `z` plays no part: it never prunes decision values.
pub fn solve_with(instance: &Instance, options: SearchOptions) -> SearchResult {
    let mut search = Search {
        options,
        bound: instance.z_max(),
        best: None,
        nodes: 0,
    };
    search.explore(&instance.with_z_bounds(0, instance.z_max()));
    let (best_assignment, best_z) = match search.best {
        Some((a, z)) => (Some(a), Some(z)),
        None => (None, None),
    };
    SearchResult {
        best_assignment,
        best_z,
        nodes_explored: search.nodes,
    }
}

struct Search {
    options: SearchOptions,
    /// Largest violation still worth finding.
    bound: i64,
    best: Option<(Assignment, i64)>,
    nodes: u64,
}

impl Search {
    fn explore(&mut self, node: &Instance) {
        self.nodes += 1;
        if self.bound < 0 {
            return;
        }
        let mut node = node.with_z_bounds(0, self.bound);
        if self.options.propagate {
            match propagate(&node).apply(&node) {
                Some(filtered) => node = filtered,
                None => return,
            }
        }

        match (0..node.n()).find(|&var| node.domain(var).len() > 1) {
            Some(var) => {
                for &d in node.domain(var) {
                    if self.bound < 0 {
                        break;
                    }
                    self.explore(&node.fix(var, d));
                }
            }
            None => {
                let values = node.domains().iter().map(|d| d[0]).collect();
                let assignment = Assignment::new(&node, values).expect("singleton domains");
                let v = violation(&node, &assignment);
                if v <= self.bound {
                    self.bound = v - 1;
                    self.best = Some((assignment, v));
                }
            }
        }
    }
}
