#![allow(dead_code)]

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use softalldiff::Instance;

pub const CORPUS_SEED: u64 = 0x5eed_a11d;
pub const CORPUS_SIZE: usize = 600;

/// Small random instances: n in [1,5], universe in [1,6], |D_i| in [1,4],
/// z_max in [0,3], z_min in [0,z_max].
pub fn corpus() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    (0..CORPUS_SIZE)
        .map(|_| random_instance(&mut rng, 5))
        .collect()
}

pub fn random_instance(rng: &mut impl Rng, max_n: usize) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let universe = rng.gen_range(1..=6usize);
    let vars: Vec<(String, Vec<String>)> = (0..n)
        .map(|i| {
            let size = rng.gen_range(1..=universe.min(4));
            let toks = sample(rng, universe, size)
                .into_iter()
                .map(|v| format!("v{v}"))
                .collect();
            (format!("x{i}"), toks)
        })
        .collect();
    let z_max = rng.gen_range(0..=3);
    let z_min = rng.gen_range(0..=z_max);
    Instance::build(vars, (z_min, z_max)).unwrap()
}

pub fn example1(z: (i64, i64)) -> Instance {
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

/// Domains after applying removals, for comparison with the oracle.
pub fn filtered_domains(
    inst: &Instance,
    removals: &[(usize, softalldiff::ValueId)],
) -> Vec<Vec<softalldiff::ValueId>> {
    let mut domains = inst.domains().to_vec();
    for &(var, d) in removals {
        domains[var].retain(|&v| v != d);
    }
    domains
}

/// Textbook successive shortest paths on the fully explicit network, with
/// every parallel sink arc stored and its flow tracked. Shares nothing with
/// the library's flow code.
pub struct ExplicitSsp {
    pub num_nodes: usize,
    pub s: usize,
    pub t: usize,
    /// (from, to, cost, flow) with capacity 1.
    pub arcs: Vec<(usize, usize, i64, bool)>,
    /// Arc indices of the parallel arcs of each value, in cost order.
    pub parallel: Vec<Vec<usize>>,
}

impl ExplicitSsp {
    pub fn new(inst: &Instance) -> Self {
        let n = inst.n();
        let k = inst.universe_size();
        let s = n + k;
        let t = s + 1;
        let mut arcs = Vec::new();
        for var in 0..n {
            arcs.push((s, var, 0, false));
            for d in inst.domain(var) {
                arcs.push((var, n + d.index(), 0, false));
            }
        }
        let mut parallel = vec![Vec::new(); k];
        for (d, arcs_of_d) in parallel.iter_mut().enumerate() {
            let degree = (0..n)
                .filter(|&v| inst.domain(v).iter().any(|x| x.index() == d))
                .count();
            for j in 0..degree {
                arcs_of_d.push(arcs.len());
                arcs.push((n + d, t, j as i64, false));
            }
        }
        ExplicitSsp {
            num_nodes: t + 1,
            s,
            t,
            arcs,
            parallel,
        }
    }

    /// Residual arcs as (from, to, cost, arc index, forward?).
    fn residual(&self) -> Vec<(usize, usize, i64, usize, bool)> {
        self.arcs
            .iter()
            .enumerate()
            .map(|(i, &(u, v, w, f))| {
                if f {
                    (v, u, -w, i, false)
                } else {
                    (u, v, w, i, true)
                }
            })
            .collect()
    }

    /// One Bellman-Ford shortest s-t augmentation. Returns its cost, or
    /// `None` when t is unreachable.
    pub fn augment_once(&mut self) -> Option<i64> {
        let res = self.residual();
        let mut dist: Vec<Option<i64>> = vec![None; self.num_nodes];
        let mut pred: Vec<Option<usize>> = vec![None; self.num_nodes];
        dist[self.s] = Some(0);
        for _ in 0..self.num_nodes {
            let mut changed = false;
            for (ri, &(u, v, w, _, _)) in res.iter().enumerate() {
                if let Some(du) = dist[u] {
                    if dist[v].is_none_or(|dv| du + w < dv) {
                        dist[v] = Some(du + w);
                        pred[v] = Some(ri);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let cost = dist[self.t]?;
        let mut node = self.t;
        while node != self.s {
            let (u, _, _, i, forward) = res[pred[node].unwrap()];
            self.arcs[i].3 = forward;
            node = u;
        }
        Some(cost)
    }

    pub fn saturation_is_prefix(&self) -> bool {
        self.parallel.iter().all(|arcs| {
            let used = arcs.iter().filter(|&&i| self.arcs[i].3).count();
            arcs.iter()
                .enumerate()
                .all(|(j, &i)| self.arcs[i].3 == (j < used))
        })
    }

    pub fn cost(&self) -> i64 {
        self.arcs.iter().filter(|a| a.3).map(|a| a.2).sum()
    }
}
