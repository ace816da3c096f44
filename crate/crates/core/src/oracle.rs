//! Brute-force ground truth for testing and for `--oracle` cross-checks.
//!
//! Nothing here is efficient. `enumerate` walks the full Cartesian product
//! of the domains; `ExplicitResidual` materializes every parallel sink arc
//! and runs Bellman-Ford over signed costs.

use thiserror::Error;

use crate::model::{pairs, Instance, ValueId};
use crate::network::{Flow, FlowNetwork, Node};

pub const DEFAULT_ENUMERATION_CAP: u128 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("search space of {size} assignments exceeds the enumeration cap of {cap}")]
    TooLarge { size: u128, cap: u128 },
    #[error("instance has an empty domain")]
    EmptyDomain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub min_violation: i64,
    /// `support_min[i][k]` is the least violation over all assignments with
    /// variable `i` set to the `k`-th value of its domain.
    pub support_min: Vec<Vec<i64>>,
    /// Values whose best support stays within `z_max`.
    pub consistent_domains: Vec<Vec<ValueId>>,
    pub z_max: i64,
}

impl OracleReport {
    /// Least admissible `z` after filtering, if the constraint is consistent.
    pub fn consistent_z_min(&self, instance: &Instance) -> Option<i64> {
        (self.min_violation <= self.z_max).then(|| instance.z_min().max(self.min_violation))
    }

    pub fn is_consistent(&self) -> bool {
        self.min_violation <= self.z_max
    }
}

pub fn enumerate(instance: &Instance) -> Result<OracleReport, OracleError> {
    enumerate_with_cap(instance, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_with_cap(instance: &Instance, cap: u128) -> Result<OracleReport, OracleError> {
    if instance.has_empty_domain() {
        return Err(OracleError::EmptyDomain);
    }
    let size = instance.search_space();
    if size > cap {
        return Err(OracleError::TooLarge { size, cap });
    }

    let n = instance.n();
    let domains = instance.domains();
    let mut support_min: Vec<Vec<i64>> = domains.iter().map(|d| vec![i64::MAX; d.len()]).collect();
    let mut counts = vec![0usize; instance.universe_size()];
    let mut digits = vec![0usize; n];
    for dom in domains {
        counts[dom[0].index()] += 1;
    }

    loop {
        let v: i64 = counts.iter().copied().map(pairs).sum();
        for (var, &k) in digits.iter().enumerate() {
            let slot = &mut support_min[var][k];
            *slot = (*slot).min(v);
        }

        // Odometer step.
        let mut var = 0;
        loop {
            if var == n {
                let min_violation = support_min[0]
                    .iter()
                    .copied()
                    .min()
                    .expect("non-empty domain");
                let z_max = instance.z_max();
                let consistent_domains = domains
                    .iter()
                    .zip(&support_min)
                    .map(|(dom, sup)| {
                        dom.iter()
                            .zip(sup)
                            .filter(|&(_, &s)| s <= z_max)
                            .map(|(&d, _)| d)
                            .collect()
                    })
                    .collect();
                return Ok(OracleReport {
                    min_violation,
                    support_min,
                    consistent_domains,
                    z_max,
                });
            }
            counts[domains[var][digits[var]].index()] -= 1;
            digits[var] += 1;
            if digits[var] < domains[var].len() {
                counts[domains[var][digits[var]].index()] += 1;
                break;
            }
            digits[var] = 0;
            counts[domains[var][0].index()] += 1;
            var += 1;
        }
    }
}

/// Every residual arc of a flow, with capacities of one and signed costs.
#[derive(Clone, Debug)]
pub struct ExplicitResidual {
    num_nodes: usize,
    arcs: Vec<(usize, usize, i64)>,
}

impl ExplicitResidual {
    /// Materializes the residual graph of `flow`, reading which parallel
    /// sink arcs are saturated from `saturated(d, j)`.
    pub fn with_saturation(
        net: &FlowNetwork<'_>,
        flow: &Flow,
        mut saturated: impl FnMut(ValueId, usize) -> bool,
    ) -> Self {
        let mut arcs = Vec::new();
        let s = net.node_index(Node::Source);
        let t = net.node_index(Node::Sink);
        for var in 0..net.num_vars() {
            let x = net.node_index(Node::Var(var));
            if flow.assigned(var).is_some() {
                arcs.push((x, s, 0));
            } else {
                arcs.push((s, x, 0));
            }
            for &d in net.var_arcs(var) {
                let v = net.node_index(Node::Value(d));
                if flow.carries(var, d) {
                    arcs.push((v, x, 0));
                } else {
                    arcs.push((x, v, 0));
                }
            }
        }
        for d in (0..net.num_values()).map(|d| ValueId(d as u32)) {
            let v = net.node_index(Node::Value(d));
            for j in 0..net.value_degree(d) {
                if saturated(d, j) {
                    arcs.push((t, v, -(j as i64)));
                } else {
                    arcs.push((v, t, j as i64));
                }
            }
        }
        ExplicitResidual {
            num_nodes: net.num_nodes(),
            arcs,
        }
    }

    /// Residual graph under the prefix saturation rule: the first
    /// `usage[d]` parallel arcs of `d` carry flow.
    pub fn new(net: &FlowNetwork<'_>, flow: &Flow) -> Self {
        Self::with_saturation(net, flow, |d, j| j < flow.usage(d))
    }

    pub fn arcs(&self) -> &[(usize, usize, i64)] {
        &self.arcs
    }

    /// Bellman-Ford distances from `from`; `None` marks unreachable nodes.
    /// Panics on a negative circuit reachable from `from`.
    pub fn distances(&self, from: usize) -> Vec<Option<i64>> {
        let mut dist = vec![None; self.num_nodes];
        dist[from] = Some(0);
        for round in 0..=self.num_nodes {
            let mut changed = false;
            for &(u, v, w) in &self.arcs {
                if let Some(du) = dist[u] {
                    if dist[v].is_none_or(|dv| du + w < dv) {
                        dist[v] = Some(du + w);
                        changed = true;
                    }
                }
            }
            if !changed {
                return dist;
            }
            assert!(
                round < self.num_nodes,
                "negative circuit reachable from node {from}"
            );
        }
        unreachable!()
    }

    /// Whether any directed circuit has negative total cost.
    pub fn has_negative_circuit(&self) -> bool {
        // Start every node at distance 0, as if from a virtual root.
        let mut dist = vec![0i64; self.num_nodes];
        for _ in 0..self.num_nodes {
            let mut changed = false;
            for &(u, v, w) in &self.arcs {
                if dist[u] + w < dist[v] {
                    dist[v] = dist[u] + w;
                    changed = true;
                }
            }
            if !changed {
                return false;
            }
        }
        self.arcs.iter().any(|&(u, v, w)| dist[u] + w < dist[v])
    }
}

/// Cheapest residual path cost between two nodes, or `None` if unreachable.
pub fn explicit_shortest_path(
    net: &FlowNetwork<'_>,
    flow: &Flow,
    from: Node,
    to: Node,
) -> Option<i64> {
    let graph = ExplicitResidual::new(net, flow);
    graph.distances(net.node_index(from))[net.node_index(to)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example1(z: (i64, i64)) -> Instance {
        Instance::build(
            [
                ("x1", vec!["a", "b"]),
                ("x2", vec!["a", "b"]),
                ("x3", vec!["a", "b"]),
                ("x4", vec!["b", "c"]),
            ],
            z,
        )
        .unwrap()
    }

    #[test]
    fn example1_report() {
        let report = enumerate(&example1((0, 6))).unwrap();
        assert_eq!(report.min_violation, 1);
        assert_eq!(report.consistent_domains, example1((0, 6)).domains());

        let report = enumerate(&example1((0, 1))).unwrap();
        let mut expected = example1((0, 1)).domains().to_vec();
        expected[3].retain(|&d| d != ValueId(1));
        assert_eq!(report.consistent_domains, expected);
        // x4 = b forces two violated pairs at best.
        assert_eq!(report.support_min[3], [2, 1]);
    }

    #[test]
    fn disjoint_singletons() {
        let inst = Instance::build([("x", vec!["a"]), ("y", vec!["b"])], (0, 0)).unwrap();
        let report = enumerate(&inst).unwrap();
        assert_eq!(report.min_violation, 0);
        assert_eq!(report.consistent_domains, inst.domains());
    }

    #[test]
    fn cap_is_enforced() {
        let toks: Vec<String> = (0..10).map(|v| v.to_string()).collect();
        let inst =
            Instance::build((0..7).map(|i| (format!("x{i}"), toks.clone())), (0, 0)).unwrap();
        assert_eq!(
            enumerate(&inst),
            Err(OracleError::TooLarge {
                size: 10_000_000,
                cap: DEFAULT_ENUMERATION_CAP
            })
        );
        assert!(enumerate_with_cap(&inst, 5).is_err());
    }

    #[test]
    fn shortest_paths_on_figure_flow() {
        let inst = example1((0, 6));
        let net = FlowNetwork::new(&inst);
        let mut flow = net.empty_flow();
        // x1=a, x2=a, x3=b, x4=c
        for (var, d) in [(0, 0), (1, 0), (2, 1), (3, 2)] {
            let d = ValueId(d);
            let path = crate::network::AugmentingPath {
                start_var: var,
                end_value: d,
                reassignments: vec![crate::network::Reassignment {
                    var,
                    from: None,
                    to: d,
                }],
                entry_cost: flow.usage(d) as i64,
            };
            flow = net.augment(flow, &path);
        }
        let b = Node::Value(ValueId(1));
        assert_eq!(
            explicit_shortest_path(&net, &flow, b, Node::Var(3)),
            Some(1)
        );
        assert_eq!(
            explicit_shortest_path(&net, &flow, Node::Value(ValueId(0)), Node::Var(0)),
            Some(0)
        );
        assert_eq!(explicit_shortest_path(&net, &flow, b, b), Some(0));
        assert!(!ExplicitResidual::new(&net, &flow).has_negative_circuit());
    }

    #[test]
    fn detects_non_extreme_flow() {
        // x1:{a,b}, x2:{a}, both on a: moving x1 to b saves one.
        let inst = Instance::build([("x1", vec!["a", "b"]), ("x2", vec!["a"])], (0, 1)).unwrap();
        let net = FlowNetwork::new(&inst);
        let a = ValueId(0);
        let mut flow = net.empty_flow();
        for var in 0..2 {
            let path = crate::network::AugmentingPath {
                start_var: var,
                end_value: a,
                reassignments: vec![crate::network::Reassignment {
                    var,
                    from: None,
                    to: a,
                }],
                entry_cost: flow.usage(a) as i64,
            };
            flow = net.augment(flow, &path);
        }
        assert_eq!(flow.cost(), 1);
        assert!(ExplicitResidual::new(&net, &flow).has_negative_circuit());
    }
}
