mod common;

use common::random_graph;
use percolab::percolation::{bfs_explore, components, BernoulliStream};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn exploration_agrees_with_union_find() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for instance in 0..1000u64 {
        let n = rng.gen_range(1..=64);
        let g = random_graph(n, rng.gen_range(0.0..0.3), instance);
        let p = rng.gen_range(0.0..=1.0);
        let mut order: Vec<u32> = (0..n as u32).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut stream = BernoulliStream::new(p, instance).unwrap();
        let (explored, trace) = bfs_explore(&g, Some(&order), &mut stream, 1).unwrap();
        let oracle = components(&g, &trace.final_s).unwrap();
        let mut a = explored.sizes.clone();
        let mut b = oracle.sizes.clone();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b, "instance {instance}");
        assert_eq!(trace.rounds, n);
    }
}
