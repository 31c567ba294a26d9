//! Queue-driven exploration of `G[V_p]` that reveals vertex membership one
//! query at a time.
//!
//! Four sets are maintained: `S` (explored and retained), `U` (retained,
//! waiting in a FIFO queue), `T` (never queried) and `J` (queried and
//! rejected). Each query draws one bit from a [`BitStream`].

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{ComponentStats, PercolationError, VertexSubset};
use crate::graph::Graph;

/// Source of query answers.
pub trait BitStream {
    /// Next answer, or `None` when the stream is exhausted.
    fn next_bit(&mut self) -> Option<bool>;
}

/// I.i.d. Bernoulli(`p`) answers from a seeded generator.
#[derive(Debug, Clone)]
pub struct BernoulliStream {
    rng: ChaCha8Rng,
    p: f64,
}

impl BernoulliStream {
    pub fn new(p: f64, seed: u64) -> Result<Self, PercolationError> {
        super::check_probability(p)?;
        Ok(BernoulliStream { rng: ChaCha8Rng::seed_from_u64(seed), p })
    }
}

impl BitStream for BernoulliStream {
    fn next_bit(&mut self) -> Option<bool> {
        Some(self.rng.gen_bool(self.p))
    }
}

/// Replays a fixed answer sequence.
#[derive(Debug, Clone)]
pub struct SliceStream<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> SliceStream<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        SliceStream { bits, pos: 0 }
    }
}

impl BitStream for SliceStream<'_> {
    fn next_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.pos).copied();
        self.pos += 1;
        bit
    }
}

/// Always answers the same bit.
#[derive(Debug, Clone, Copy)]
pub struct ConstantStream(pub bool);

impl BitStream for ConstantStream {
    fn next_bit(&mut self) -> Option<bool> {
        Some(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSample {
    pub round: usize,
    pub s: usize,
    pub u: usize,
    pub t: usize,
    pub j: usize,
}

#[derive(Debug, Clone)]
pub struct ExplorationTrace {
    /// Number of queries issued.
    pub rounds: usize,
    pub stride: usize,
    /// Set sizes after every `stride`-th query, plus the final state.
    pub samples: Vec<TraceSample>,
    pub final_s: VertexSubset,
    pub final_j: VertexSubset,
    /// Vertices moved to `S` in order; each component is a contiguous run.
    pub s_order: Vec<u32>,
}

/// Runs the exploration on `g`.
///
/// `order` ranks the vertices (identity when `None`): new components start
/// at the first untouched vertex in that order and the neighbours of the
/// queue head are queried in that order. Every vertex is queried exactly
/// once, so `rounds = n` at termination.
pub fn bfs_explore(
    g: &Graph,
    order: Option<&[u32]>,
    stream: &mut dyn BitStream,
    stride: usize,
) -> Result<(ComponentStats, ExplorationTrace), PercolationError> {
    let n = g.n();
    let identity: Vec<u32>;
    let order = match order {
        Some(o) => o,
        None => {
            identity = (0..n as u32).collect();
            &identity
        }
    };
    let mut rank = vec![u32::MAX; n];
    if order.len() != n {
        return Err(PercolationError::InvalidOrder { n });
    }
    for (i, &v) in order.iter().enumerate() {
        if v as usize >= n || rank[v as usize] != u32::MAX {
            return Err(PercolationError::InvalidOrder { n });
        }
        rank[v as usize] = i as u32;
    }
    let stride = stride.max(1);

    let mut untouched = VertexSubset::full(n);
    let mut s = VertexSubset::empty(n);
    let mut j = VertexSubset::empty(n);
    let mut queue: VecDeque<u32> = VecDeque::new();
    let mut s_order = Vec::new();
    let mut label = vec![0u32; n];
    let mut samples = Vec::new();
    let mut rounds = 0usize;
    let mut cursor = 0usize;
    let mut component = 0u32;
    let mut pending: Vec<u32> = Vec::new();

    let mut query = |v: u32,
                     untouched: &mut VertexSubset,
                     s: &VertexSubset,
                     j: &mut VertexSubset,
                     queue: &mut VecDeque<u32>,
                     rounds: &mut usize|
     -> Result<bool, PercolationError> {
        let bit = stream.next_bit().ok_or(PercolationError::StreamExhausted { rounds: *rounds })?;
        untouched.remove(v as usize);
        if bit {
            queue.push_back(v);
        } else {
            j.insert(v as usize);
        }
        *rounds += 1;
        if *rounds % stride == 0 {
            samples.push(TraceSample {
                round: *rounds,
                s: s.count(),
                u: queue.len(),
                t: untouched.count(),
                j: j.count(),
            });
        }
        Ok(bit)
    };

    loop {
        let Some(&head) = queue.front() else {
            while cursor < n && !untouched.contains(order[cursor] as usize) {
                cursor += 1;
            }
            if cursor == n {
                break;
            }
            let v = order[cursor];
            if query(v, &mut untouched, &s, &mut j, &mut queue, &mut rounds)? {
                component = v;
            }
            continue;
        };
        // the head keeps the front until its untouched neighbours are all
        // queried, and nothing else leaves T meanwhile, so they can be
        // collected up front
        pending.clear();
        pending.extend(g.neighbors(head as usize).iter().copied().filter(|&w| untouched.contains(w as usize)));
        pending.sort_unstable_by_key(|&w| rank[w as usize]);
        for &w in &pending {
            query(w, &mut untouched, &s, &mut j, &mut queue, &mut rounds)?;
        }
        queue.pop_front();
        s.insert(head as usize);
        s_order.push(head);
        label[head as usize] = component;
    }
    let last = TraceSample { round: rounds, s: s.count(), u: 0, t: 0, j: j.count() };
    if samples.last() != Some(&last) {
        samples.push(last);
    }
    let stats = ComponentStats::from_labels(s.clone(), &label);
    let trace = ExplorationTrace { rounds, stride, samples, final_s: s, final_j: j, s_order };
    Ok((stats, trace))
}
