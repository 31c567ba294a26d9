use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Graph, GraphError, Vertex};

const MAX_HYPERCUBE_DIMENSION: usize = 30;

/// The `d`-dimensional hypercube: vertices are the `d`-bit codewords and two
/// codewords are adjacent when they differ in exactly one bit.
pub fn gen_hypercube(d: usize) -> Result<Graph, GraphError> {
    if d == 0 || d > MAX_HYPERCUBE_DIMENSION {
        return Err(GraphError::DimensionTooLarge { d });
    }
    let n = 1usize << d;
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(n * d);
    offsets.push(0);
    let mut scratch = Vec::with_capacity(d);
    for v in 0..n {
        scratch.clear();
        scratch.extend((0..d).map(|bit| (v ^ (1 << bit)) as Vertex));
        scratch.sort_unstable();
        targets.extend_from_slice(&scratch);
        offsets.push(targets.len());
    }
    Ok(Graph::from_parts(n, offsets, targets))
}

pub fn gen_complete(n: usize) -> Graph {
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(n * n.saturating_sub(1));
    offsets.push(0);
    for v in 0..n {
        targets.extend((0..n).filter(|&u| u != v).map(|u| u as Vertex));
        offsets.push(targets.len());
    }
    Graph::from_parts(n, offsets, targets)
}

/// Cycle `0 - 1 - ... - (n-1) - 0`; requires `n >= 3`.
pub fn gen_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::ParameterConflict(format!("cycle needs at least 3 vertices, got {n}")));
    }
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    Graph::from_edges(n, &edges)
}

/// How collisions in the stub pairing are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PairingRule {
    /// Plain configuration model: any loop or multi-edge discards the whole
    /// pairing. Uniform over simple graphs but hopeless for large `d`.
    RestartOnCollision,
    /// Stub pairs that would create a loop or multi-edge are redrawn; the
    /// pairing restarts only when no admissible pair is left.
    RejectPair,
    /// `RestartOnCollision` while its expected number of restarts
    /// `exp((d^2 - 1) / 4)` stays small, `RejectPair` beyond that.
    #[default]
    Auto,
}

#[derive(Debug, Clone, Copy)]
pub struct RandomRegularOptions {
    pub rule: PairingRule,
    pub max_restarts: usize,
}

impl Default for RandomRegularOptions {
    fn default() -> Self {
        RandomRegularOptions { rule: PairingRule::Auto, max_restarts: 10_000 }
    }
}

/// Random simple `d`-regular graph on `n` vertices via the configuration
/// model. Deterministic for fixed `(n, d, seed, options)`.
pub fn gen_random_regular(
    n: usize,
    d: usize,
    seed: u64,
    options: RandomRegularOptions,
) -> Result<Graph, GraphError> {
    if (n * d) % 2 == 1 {
        return Err(GraphError::ParityViolation { n, d });
    }
    if d >= n {
        return Err(GraphError::DegreeTooLarge { n, d });
    }
    let rule = match options.rule {
        PairingRule::Auto if d <= 5 => PairingRule::RestartOnCollision,
        PairingRule::Auto => PairingRule::RejectPair,
        other => other,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
    let mut stubs: Vec<Vertex> = Vec::with_capacity(n * d);
    for _ in 0..=options.max_restarts {
        adjacency.iter_mut().for_each(Vec::clear);
        stubs.clear();
        for v in 0..n {
            stubs.extend(std::iter::repeat(v as Vertex).take(d));
        }
        let done = match rule {
            PairingRule::RestartOnCollision => pair_strict(&mut rng, &mut stubs, &mut adjacency),
            _ => pair_rejecting(&mut rng, &mut stubs, &mut adjacency, None),
        };
        if done {
            return Ok(assemble(adjacency));
        }
    }
    Err(GraphError::RestartBudgetExceeded { attempts: options.max_restarts })
}

/// Random `d`-regular graph with no edge inside any class of `class_of`,
/// sampled by pair rejection.
pub(crate) fn gen_random_regular_multipartite(
    class_of: &[u32],
    d: usize,
    seed: u64,
    max_restarts: usize,
) -> Result<Graph, GraphError> {
    let n = class_of.len();
    if (n * d) % 2 == 1 {
        return Err(GraphError::ParityViolation { n, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
    let mut stubs: Vec<Vertex> = Vec::with_capacity(n * d);
    for _ in 0..=max_restarts {
        adjacency.iter_mut().for_each(Vec::clear);
        stubs.clear();
        for v in 0..n {
            stubs.extend(std::iter::repeat(v as Vertex).take(d));
        }
        if pair_rejecting(&mut rng, &mut stubs, &mut adjacency, Some(class_of)) {
            return Ok(assemble(adjacency));
        }
    }
    Err(GraphError::RestartBudgetExceeded { attempts: max_restarts })
}

fn assemble(mut adjacency: Vec<Vec<Vertex>>) -> Graph {
    let n = adjacency.len();
    let mut offsets = Vec::with_capacity(n + 1);
    let mut targets = Vec::with_capacity(adjacency.iter().map(Vec::len).sum());
    offsets.push(0);
    for list in &mut adjacency {
        list.sort_unstable();
        targets.extend_from_slice(list);
        offsets.push(targets.len());
    }
    Graph::from_parts(n, offsets, targets)
}

fn pair_strict(rng: &mut ChaCha8Rng, stubs: &mut [Vertex], adjacency: &mut [Vec<Vertex>]) -> bool {
    stubs.shuffle(rng);
    for pair in stubs.chunks_exact(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v || adjacency[u as usize].contains(&v) {
            return false;
        }
        adjacency[u as usize].push(v);
        adjacency[v as usize].push(u);
    }
    true
}

fn pair_rejecting(
    rng: &mut ChaCha8Rng,
    stubs: &mut Vec<Vertex>,
    adjacency: &mut [Vec<Vertex>],
    class_of: Option<&[u32]>,
) -> bool {
    let admissible = |adjacency: &[Vec<Vertex>], u: Vertex, v: Vertex| {
        u != v
            && class_of.is_none_or(|c| c[u as usize] != c[v as usize])
            && !adjacency[u as usize].contains(&v)
    };
    let mut misses = 0usize;
    while stubs.len() >= 2 {
        let m = stubs.len();
        let i = rng.gen_range(0..m);
        let mut j = rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }
        let (u, v) = (stubs[i], stubs[j]);
        if admissible(adjacency, u, v) {
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
            let (hi, lo) = if i > j { (i, j) } else { (j, i) };
            stubs.swap_remove(hi);
            stubs.swap_remove(lo);
            misses = 0;
            continue;
        }
        misses += 1;
        if misses > 64 {
            // Rejections pile up near the end of a dense pairing: either no
            // admissible pair remains, or we pick one uniformly among them.
            let candidates: Vec<(usize, usize)> = (0..m)
                .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
                .filter(|&(a, b)| admissible(adjacency, stubs[a], stubs[b]))
                .collect();
            let Some(&(a, b)) = candidates.get(rng.gen_range(0..candidates.len().max(1))) else {
                return false;
            };
            let (u, v) = (stubs[a], stubs[b]);
            adjacency[u as usize].push(v);
            adjacency[v as usize].push(u);
            stubs.swap_remove(b);
            stubs.swap_remove(a);
            misses = 0;
        }
    }
    true
}
