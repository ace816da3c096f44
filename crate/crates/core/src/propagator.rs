//! Consistency checking and hyper-arc consistency filtering.
//!
//! Filtering starts from one minimum-cost flow `f` of maximum value. Fixing
//! `x_i = d` costs `cost(f) + cost(P)` where `P` is a cheapest `d -> x_i`
//! path in the residual graph. Among variables and values every residual
//! arc is free, so `P` either stays inside the reduced residual graph
//! (cost 0, `d` and `x_i` share a strongly connected component) or crosses
//! the sink exactly once: it enters `t` through an unused arc `(d', t)` and
//! leaves through the reverse of a used arc `(d'', t)`. The cheapest choice
//! of `d'` ranges over values reachable from `d`, and of `d''` over values
//! that reach `x_i`; both are one dynamic program over the condensation,
//! so the whole pass is linear in `m`.

use crate::model::{Instance, ValueId};
use crate::network::{Counters, Flow, FlowNetwork};
use crate::scc::{tarjan, Digraph, SccLabeling};

/// The residual graph with `s` and `t` removed. Nodes `0..n` are the
/// variables, `n..n+|D_X|` the values. Each variable-value arc appears once:
/// `x -> d` when unused, `d -> x` when it carries flow.
#[derive(Clone, Debug)]
pub struct ResidualView {
    num_vars: usize,
    graph: Digraph,
}

impl ResidualView {
    pub fn new(net: &FlowNetwork<'_>, flow: &Flow) -> Self {
        let n = net.num_vars();
        let mut adjacency = vec![Vec::new(); n + net.num_values()];
        for (var, succ) in adjacency.iter_mut().enumerate().take(n) {
            for &d in net.var_arcs(var) {
                if !flow.carries(var, d) {
                    succ.push(n + d.index());
                }
            }
        }
        for var in 0..n {
            if let Some(d) = flow.assigned(var) {
                adjacency[n + d.index()].push(var);
            }
        }
        ResidualView {
            num_vars: n,
            graph: Digraph::from_adjacency(&adjacency),
        }
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn num_arcs(&self) -> usize {
        self.graph.num_arcs()
    }

    pub fn var_node(&self, var: usize) -> usize {
        var
    }

    pub fn value_node(&self, value: ValueId) -> usize {
        self.num_vars + value.index()
    }

    /// Arcs as `(from, to)` in node numbering.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.graph.arcs()
    }
}

pub fn scc(view: &ResidualView) -> SccLabeling {
    tarjan(view.graph(), &mut 0)
}

/// Per-component access costs to and from the sink.
///
/// `entry` is the cheapest unused `(d', t)` arc for `d'` in the component,
/// `exit` the largest cost of a used `(d'', t)` arc (its reverse costs the
/// negation). The `reach_*` fields extend these over the condensation:
/// `reach_entry` to all components reachable from the component,
/// `reach_exit` to all components that reach it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentMinima {
    pub entry: Vec<Option<i64>>,
    pub exit: Vec<Option<i64>>,
    pub reach_entry: Vec<Option<i64>>,
    pub reach_exit: Vec<Option<i64>>,
}

impl ComponentMinima {
    pub fn new(
        net: &FlowNetwork<'_>,
        flow: &Flow,
        view: &ResidualView,
        labeling: &SccLabeling,
        work: &mut u64,
    ) -> Self {
        let count = labeling.count();
        let mut entry: Vec<Option<i64>> = vec![None; count];
        let mut exit: Vec<Option<i64>> = vec![None; count];
        for d in (0..net.num_values()).map(|d| ValueId(d as u32)) {
            *work += 1;
            let c = labeling.component(view.value_node(d));
            if let Some(cost) = net.cheapest_entry_cost(flow, d) {
                entry[c] = min_opt(entry[c], Some(cost));
            }
            let used = flow.usage(d);
            if used > 0 {
                exit[c] = max_opt(exit[c], Some(used as i64 - 1));
            }
        }

        // Component ids are reverse topological: arcs go from higher to
        // lower ids, so ascending order finalizes successors first and
        // descending order finalizes predecessors first.
        let groups = labeling.groups();
        let graph = view.graph();
        let mut reach_entry = entry.clone();
        for (c, members) in groups.iter().enumerate() {
            for &u in members {
                for &v in graph.successors(u) {
                    *work += 1;
                    let cv = labeling.component(v);
                    if cv != c {
                        reach_entry[c] = min_opt(reach_entry[c], reach_entry[cv]);
                    }
                }
            }
        }
        let mut reach_exit = exit.clone();
        for (c, members) in groups.iter().enumerate().rev() {
            for &u in members {
                for &v in graph.successors(u) {
                    *work += 1;
                    let cv = labeling.component(v);
                    if cv != c {
                        reach_exit[cv] = max_opt(reach_exit[cv], reach_exit[c]);
                    }
                }
            }
        }

        ComponentMinima {
            entry,
            exit,
            reach_entry,
            reach_exit,
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Cost of a cheapest `value -> var` path in the full residual graph, or
/// `None` when no such path exists.
pub fn path_cost(
    flow: &Flow,
    view: &ResidualView,
    labeling: &SccLabeling,
    minima: &ComponentMinima,
    value: ValueId,
    var: usize,
) -> Option<i64> {
    if flow.carries(var, value) {
        return Some(0);
    }
    let from = labeling.component(view.value_node(value));
    let to = labeling.component(view.var_node(var));
    if from == to {
        return Some(0);
    }
    let entry = minima.reach_entry[from]?;
    let exit = minima.reach_exit[to]?;
    Some(entry - exit)
}

/// Outcome of a consistency check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Consistency {
    Consistent {
        min_violation: i64,
    },
    /// `min_violation` is `None` when some domain is empty.
    Inconsistent {
        min_violation: Option<i64>,
    },
}

impl Consistency {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Consistency::Consistent { .. })
    }

    pub fn min_violation(&self) -> Option<i64> {
        match *self {
            Consistency::Consistent { min_violation } => Some(min_violation),
            Consistency::Inconsistent { min_violation } => min_violation,
        }
    }
}

pub fn check_consistency(instance: &Instance) -> Consistency {
    check_counted(instance, &mut Counters::default()).0
}

pub fn check_consistency_counted(instance: &Instance, counters: &mut Counters) -> Consistency {
    check_counted(instance, counters).0
}

fn check_counted<'a>(
    instance: &'a Instance,
    counters: &mut Counters,
) -> (Consistency, Option<(FlowNetwork<'a>, Flow)>) {
    if instance.has_empty_domain() {
        return (
            Consistency::Inconsistent {
                min_violation: None,
            },
            None,
        );
    }
    let net = FlowNetwork::new(instance);
    let flow = net.min_cost_flow_counted(counters);
    let cost = flow.cost();
    let verdict = if cost <= instance.z_max() {
        Consistency::Consistent {
            min_violation: cost,
        }
    } else {
        Consistency::Inconsistent {
            min_violation: Some(cost),
        }
    };
    (verdict, Some((net, flow)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Inconsistent,
}

/// Result of one filtering pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterOutcome {
    pub verdict: Verdict,
    /// Cost of the minimum-cost flow; `None` only if a domain was empty.
    pub min_violation: Option<i64>,
    /// Removed `(variable, value)` pairs, ascending.
    pub removals: Vec<(usize, ValueId)>,
    pub new_z_min: i64,
}

impl FilterOutcome {
    fn inconsistent(instance: &Instance, min_violation: Option<i64>) -> Self {
        FilterOutcome {
            verdict: Verdict::Inconsistent,
            min_violation,
            removals: Vec::new(),
            new_z_min: instance.z_min(),
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.verdict == Verdict::Consistent
    }

    /// The filtered instance, or `None` if the constraint failed.
    pub fn apply(&self, instance: &Instance) -> Option<Instance> {
        if !self.is_consistent() {
            return None;
        }
        let mut domains = instance.domains().to_vec();
        for &(var, value) in &self.removals {
            domains[var].retain(|&d| d != value);
        }
        Some(instance.derive(domains, (self.new_z_min, instance.z_max())))
    }
}

/// Achieves hyper-arc consistency in one pass over the arcs.
pub fn propagate(instance: &Instance) -> FilterOutcome {
    propagate_counted(instance, &mut Counters::default())
}

pub fn propagate_counted(instance: &Instance, counters: &mut Counters) -> FilterOutcome {
    let (verdict, network) = check_counted(instance, counters);
    let Consistency::Consistent {
        min_violation: cost,
    } = verdict
    else {
        return FilterOutcome::inconsistent(instance, verdict.min_violation());
    };
    let (net, flow) = network.expect("consistent check builds a flow");

    let mut work = 0u64;
    let view = ResidualView::new(&net, &flow);
    work += (view.num_arcs() + net.num_vars() + net.num_values()) as u64;
    let labeling = tarjan(view.graph(), &mut work);
    let minima = ComponentMinima::new(&net, &flow, &view, &labeling, &mut work);

    let slack = instance.z_max() - cost;
    let mut removals = Vec::new();
    for var in 0..net.num_vars() {
        for &d in net.var_arcs(var) {
            work += 1;
            if flow.carries(var, d) {
                continue;
            }
            // `d` keeps an unused arc to `t`: `var` is counted in its degree
            // but does not take it.
            let extra = path_cost(&flow, &view, &labeling, &minima, d, var);
            debug_assert!(
                extra.is_some_and(|c| c >= 0),
                "path cost {extra:?} at ({var}, {d})"
            );
            if extra.is_none_or(|c| c > slack) {
                removals.push((var, d));
            }
        }
    }
    counters.filter_work += work;

    debug_assert!((0..net.num_vars()).all(|var| {
        let removed = removals.iter().filter(|&&(v, _)| v == var).count();
        removed < net.var_arcs(var).len()
    }));

    FilterOutcome {
        verdict: Verdict::Consistent,
        min_violation: Some(cost),
        removals,
        new_z_min: instance.z_min().max(cost),
    }
}

/// Reference filter: re-solves the flow problem once per arc with the
/// variable fixed to the value. Quadratic in `m`.
pub fn naive_propagate(instance: &Instance) -> FilterOutcome {
    let verdict = check_consistency(instance);
    let Consistency::Consistent {
        min_violation: cost,
    } = verdict
    else {
        return FilterOutcome::inconsistent(instance, verdict.min_violation());
    };
    let mut removals = Vec::new();
    for var in 0..instance.n() {
        for &d in instance.domain(var) {
            let forced = instance.fix(var, d);
            let forced_cost = FlowNetwork::new(&forced).min_cost_flow().cost();
            if forced_cost > instance.z_max() {
                removals.push((var, d));
            }
        }
    }
    FilterOutcome {
        verdict: Verdict::Consistent,
        min_violation: Some(cost),
        removals,
        new_z_min: instance.z_min().max(cost),
    }
}
