//! Instance generators shared by the benchmarks.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use softalldiff::Instance;

/// `n` variables, each with `domain_size` distinct values drawn from a
/// universe of `universe` values. `z` may take any value up to `z_max`.
pub fn random_instance(
    seed: u64,
    n: usize,
    domain_size: usize,
    universe: usize,
    z_max: i64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = (0..n).map(|i| {
        let size = domain_size.min(universe);
        let tokens: Vec<String> = sample(&mut rng, universe, size)
            .into_iter()
            .map(|v| format!("v{v}"))
            .collect();
        (format!("x{i}"), tokens)
    });

    Instance::build(vars, (0, z_max)).expect("generated instance is well-formed")
}

/// The scaling series used to compare the flow and filtering phases:
/// domains of ten values from a universe of `n / 2` values, `z` bounded by
/// the minimum violation so that filtering has work to do.
pub fn tight_instance(seed: u64, n: usize) -> Instance {
    let loose = random_instance(seed, n, 10, (n / 2).max(10), i64::MAX);
    let min = softalldiff::FlowNetwork::new(&loose).min_cost_flow().cost();
    loose.with_z_bounds(0, min)
}
