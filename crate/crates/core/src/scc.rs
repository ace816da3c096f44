//! Iterative Tarjan strongly connected components.

/// Directed graph in compressed adjacency form.
#[derive(Clone, Debug, Default)]
pub struct Digraph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Digraph {
    /// Builds from per-node successor lists.
    pub fn from_adjacency(adjacency: &[Vec<usize>]) -> Self {
        let mut offsets = Vec::with_capacity(adjacency.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for succ in adjacency {
            targets.extend_from_slice(succ);
            offsets.push(targets.len());
        }
        Digraph { offsets, targets }
    }

    pub fn num_nodes(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_arcs(&self) -> usize {
        self.targets.len()
    }

    pub fn successors(&self, node: usize) -> &[usize] {
        &self.targets[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_nodes()).flat_map(move |u| self.successors(u).iter().map(move |&v| (u, v)))
    }
}

/// Component id per node.
///
/// Ids are assigned in the order Tarjan's algorithm completes components,
/// which is a reverse topological order of the condensation: for every arc
/// `u -> v` crossing components, `component(u) > component(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccLabeling {
    component: Vec<usize>,
    count: usize,
}

impl SccLabeling {
    pub fn component(&self, node: usize) -> usize {
        self.component[node]
    }

    pub fn components(&self) -> &[usize] {
        &self.component
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Nodes grouped by component, each group ascending.
    pub fn groups(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.count];
        for (node, &c) in self.component.iter().enumerate() {
            groups[c].push(node);
        }
        groups
    }
}

const UNVISITED: usize = usize::MAX;

/// Labels the strongly connected components of `graph`, starting DFS roots
/// in ascending node order. `work` is incremented once per node and arc
/// visit.
pub fn tarjan(graph: &Digraph, work: &mut u64) -> SccLabeling {
    let n = graph.num_nodes();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut component = vec![UNVISITED; n];
    let mut count = 0;
    let mut next_index = 0;
    // (node, position in its successor list)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call_stack.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        *work += 1;

        while let Some(&mut (v, ref mut pos)) = call_stack.last_mut() {
            let succ = graph.successors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                *work += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    *work += 1;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }

            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }

    SccLabeling { component, count }
}
