//! The value graph `s -> X -> D_X -> t` for soft alldifferent and its
//! minimum-cost flow.
//!
//! Every arc has capacity one. Arcs out of `s` and arcs `(x_i, d)` cost
//! nothing; value `d` owns `k = |{i : d in D_i}|` parallel arcs to `t`
//! costing `0, 1, .., k-1`. Sending `u` units through `d` therefore costs
//! `u(u-1)/2`, the number of equal pairs among the variables taking `d`.
//!
//! The parallel arcs are never materialized. A minimum-cost flow always
//! saturates a prefix `(d,t)_0 .. (d,t)_{u-1}`, so a per-value usage
//! counter carries all the information: the cheapest unused arc costs
//! `usage[d]` and the most expensive saturated one costs `usage[d] - 1`.

use std::collections::VecDeque;

use crate::model::{pairs, Assignment, Instance, ValueId};

/// Operation counters, reported by the CLI with `--stats`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Augmenting paths applied while building the flow.
    pub augmentations: u64,
    /// Residual arcs inspected by augmenting path searches.
    pub flow_arcs_scanned: u64,
    /// Node and arc visits spent filtering once the flow is known.
    pub filter_work: u64,
}

/// A node of the full network, used by the explicit residual graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Source,
    Var(usize),
    Value(ValueId),
    Sink,
}

#[derive(Debug)]
pub struct FlowNetwork<'a> {
    instance: &'a Instance,
    /// For each value, the variables whose domain contains it, ascending.
    value_vars: Vec<Vec<usize>>,
}

/// An integer flow of the network, stored as the partial assignment it
/// induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flow {
    assigned: Vec<Option<ValueId>>,
    usage: Vec<usize>,
    cost: i64,
}

/// One variable moving to a new value along an augmenting path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reassignment {
    pub var: usize,
    pub from: Option<ValueId>,
    pub to: ValueId,
}

/// A shortest `s-t` path in the residual graph, expressed by its effect on
/// the assignment. It leaves `s` through `start_var`, alternates between
/// forward and backward variable-value arcs, and enters `t` at `end_value`
/// through the cheapest unused parallel arc.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugmentingPath {
    pub start_var: usize,
    pub end_value: ValueId,
    /// Ordered from `start_var` to the variable that takes `end_value`.
    pub reassignments: Vec<Reassignment>,
    pub entry_cost: i64,
}

impl<'a> FlowNetwork<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        let mut value_vars = vec![Vec::new(); instance.universe_size()];
        for (var, domain) in instance.domains().iter().enumerate() {
            for &d in domain {
                value_vars[d.index()].push(var);
            }
        }
        FlowNetwork {
            instance,
            value_vars,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn num_vars(&self) -> usize {
        self.instance.n()
    }

    pub fn num_values(&self) -> usize {
        self.value_vars.len()
    }

    /// Number of variable-value arcs, `m`.
    pub fn num_var_arcs(&self) -> usize {
        self.instance.m()
    }

    /// Number of parallel arcs from `value` to the sink.
    pub fn value_degree(&self, value: ValueId) -> usize {
        self.value_vars[value.index()].len()
    }

    pub fn value_vars(&self, value: ValueId) -> &[usize] {
        &self.value_vars[value.index()]
    }

    pub fn var_arcs(&self, var: usize) -> &[ValueId] {
        self.instance.domain(var)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_vars() + self.num_values() + 2
    }

    /// Dense node numbering: variables, then values, then `s`, then `t`.
    pub fn node_index(&self, node: Node) -> usize {
        let n = self.num_vars();
        let k = self.num_values();
        match node {
            Node::Var(i) => i,
            Node::Value(d) => n + d.index(),
            Node::Source => n + k,
            Node::Sink => n + k + 1,
        }
    }

    pub fn empty_flow(&self) -> Flow {
        Flow {
            assigned: vec![None; self.num_vars()],
            usage: vec![0; self.num_values()],
            cost: 0,
        }
    }

    /// Cost of the cheapest unused parallel arc `(d, t)`, or `None` when
    /// all of them carry flow.
    pub fn cheapest_entry_cost(&self, flow: &Flow, value: ValueId) -> Option<i64> {
        let used = flow.usage[value.index()];
        (used < self.value_degree(value)).then_some(used as i64)
    }

    pub fn find_augmenting_path(&self, flow: &Flow, start_var: usize) -> Option<AugmentingPath> {
        self.find_augmenting_path_counted(flow, start_var, &mut Counters::default())
    }

    /// Cheapest path from `s` to `t` that leaves `s` through `start_var`,
    /// which must be unassigned.
    pub fn find_augmenting_path_counted(
        &self,
        flow: &Flow,
        start_var: usize,
        counters: &mut Counters,
    ) -> Option<AugmentingPath> {
        assert!(
            flow.assigned[start_var].is_none(),
            "augmenting path must start at an unassigned variable"
        );
        self.search(flow, std::iter::once(start_var), counters)
    }

    /// Cheapest `s-t` path over all unassigned variables.
    pub fn shortest_augmenting_path(
        &self,
        flow: &Flow,
        counters: &mut Counters,
    ) -> Option<AugmentingPath> {
        let roots = (0..self.num_vars()).filter(|&var| flow.assigned[var].is_none());
        self.search(flow, roots, counters)
    }

    /// All residual arcs among variables and values cost zero, so a plain
    /// breadth-first search from the roots finds every value a path could
    /// enter `t` through; the path cost is the entry cost of the chosen
    /// value. Ties go to the smallest value id.
    fn search(
        &self,
        flow: &Flow,
        roots: impl Iterator<Item = usize>,
        counters: &mut Counters,
    ) -> Option<AugmentingPath> {
        let n = self.num_vars();
        let k = self.num_values();
        // Parent pointers: value -> variable that reached it through a
        // forward arc; variable -> value that reached it through a backward
        // arc (roots have none).
        let mut value_parent: Vec<Option<usize>> = vec![None; k];
        let mut var_seen = vec![false; n];
        let mut var_parent: Vec<Option<ValueId>> = vec![None; n];
        let mut best: Option<(i64, ValueId)> = None;

        let mut queue = VecDeque::new();
        for root in roots {
            var_seen[root] = true;
            queue.push_back(root);
        }

        while let Some(x) = queue.pop_front() {
            for &d in self.var_arcs(x) {
                counters.flow_arcs_scanned += 1;
                if flow.assigned[x] == Some(d) || value_parent[d.index()].is_some() {
                    continue;
                }
                value_parent[d.index()] = Some(x);
                if let Some(cost) = self.cheapest_entry_cost(flow, d) {
                    if best.is_none_or(|b| (cost, d) < b) {
                        best = Some((cost, d));
                    }
                }
                for &y in self.value_vars(d) {
                    counters.flow_arcs_scanned += 1;
                    if flow.assigned[y] == Some(d) && !var_seen[y] {
                        var_seen[y] = true;
                        var_parent[y] = Some(d);
                        queue.push_back(y);
                    }
                }
            }
        }

        let (entry_cost, end_value) = best?;
        let mut reassignments = Vec::new();
        let mut to = end_value;
        let start_var = loop {
            let var = value_parent[to.index()].expect("reached value has a parent");
            reassignments.push(Reassignment {
                var,
                from: flow.assigned[var],
                to,
            });
            match var_parent[var] {
                Some(prev) => to = prev,
                None => break var,
            }
        };
        reassignments.reverse();
        debug_assert!(flow.assigned[start_var].is_none());
        Some(AugmentingPath {
            start_var,
            end_value,
            reassignments,
            entry_cost,
        })
    }

    /// Pushes one unit along `path`. The path must have been computed
    /// against `flow`.
    pub fn augment(&self, mut flow: Flow, path: &AugmentingPath) -> Flow {
        for step in &path.reassignments {
            debug_assert_eq!(flow.assigned[step.var], step.from);
            flow.assigned[step.var] = Some(step.to);
        }
        debug_assert_eq!(
            self.cheapest_entry_cost(&flow, path.end_value),
            Some(path.entry_cost)
        );
        flow.usage[path.end_value.index()] += 1;
        flow.cost += path.entry_cost;
        debug_assert_eq!(flow.cost, flow_cost(&flow));
        flow
    }

    pub fn min_cost_flow(&self) -> Flow {
        self.min_cost_flow_observed(&mut Counters::default(), |_, _| {})
    }

    pub fn min_cost_flow_counted(&self, counters: &mut Counters) -> Flow {
        self.min_cost_flow_observed(counters, |_, _| {})
    }

    /// Successive shortest paths from `s`: exactly one augmentation per
    /// variable, and every intermediate flow is extreme. `observe` sees each
    /// path and the flow it produced.
    ///
    /// Panics if some domain is empty.
    pub fn min_cost_flow_observed(
        &self,
        counters: &mut Counters,
        mut observe: impl FnMut(&AugmentingPath, &Flow),
    ) -> Flow {
        let mut flow = self.empty_flow();
        for step in 0..self.num_vars() {
            // Each variable owns one parallel arc of every value in its
            // domain, so a path exists while some variable is unassigned.
            let path = self
                .shortest_augmenting_path(&flow, counters)
                .unwrap_or_else(|| panic!("no augmenting path at step {step}"));
            flow = self.augment(flow, &path);
            counters.augmentations += 1;
            observe(&path, &flow);
        }
        debug_assert_eq!(flow.value(), self.num_vars());
        flow
    }
}

impl Flow {
    pub fn assigned(&self, var: usize) -> Option<ValueId> {
        self.assigned[var]
    }

    pub fn usage(&self, value: ValueId) -> usize {
        self.usage[value.index()]
    }

    pub fn usages(&self) -> &[usize] {
        &self.usage
    }

    /// Running cost, kept up to date by `augment`.
    pub fn cost(&self) -> i64 {
        self.cost
    }

    /// Units leaving the source: the number of assigned variables.
    pub fn value(&self) -> usize {
        self.assigned.iter().filter(|a| a.is_some()).count()
    }

    /// Whether `(var, value)` carries flow.
    pub fn carries(&self, var: usize, value: ValueId) -> bool {
        self.assigned[var] == Some(value)
    }

    /// The complete assignment read off a flow of maximum value.
    pub fn to_assignment(&self, instance: &Instance) -> Option<Assignment> {
        let values = self.assigned.iter().copied().collect::<Option<Vec<_>>>()?;
        Assignment::new(instance, values).ok()
    }
}

/// Recomputes the cost of `flow` from its usage counters.
pub fn flow_cost(flow: &Flow) -> i64 {
    flow.usage.iter().copied().map(pairs).sum()
}
