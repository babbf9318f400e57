//! Chunk size selection: minimizes `t(k) * s(k) * k * delta(k)` where the
//! chunk counts are tracked by greedily merging the cheapest gaps.

use super::queue::{GapQueue, HeapQueue, MonotoneBucketQueue};
use crate::cost::CostModel;
use crate::error::{argument, Result};
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeTracePoint {
    pub k: u64,
    /// Current chunk count for `f`: live gaps + discarded gaps + 1.
    pub chunks_f: u64,
    pub chunks_g: u64,
    pub cost: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SizeTrace {
    pub points: Vec<SizeTracePoint>,
    pub chosen: u64,
}

/// Merge state for one operand. Chunks start as single terms; a gap is named
/// by the index of the chunk on its right.
struct Side<Q> {
    first: Vec<u64>,
    last: Vec<u64>,
    prev: Vec<usize>,
    next: Vec<usize>,
    key: Vec<u64>,
    live: u64,
    perm: u64,
    cap: u64,
    queue: Q,
}

const NONE: usize = usize::MAX;
const DEAD: u64 = u64::MAX;

impl<Q: GapQueue> Side<Q> {
    fn new(exps: Vec<u64>, cap: u64, queue: Q) -> Self {
        let n = exps.len();
        let mut s = Side {
            last: exps.clone(),
            first: exps,
            prev: (0..n).map(|i| i.wrapping_sub(1)).collect(),
            next: (1..=n).map(|i| if i == n { NONE } else { i }).collect(),
            key: vec![DEAD; n],
            live: 0,
            perm: 0,
            cap,
            queue,
        };
        for r in 1..n {
            s.live += 1;
            s.set_key(r);
        }
        s
    }

    fn chunks(&self) -> u64 {
        self.live + self.perm + 1
    }

    /// Recomputes the key of gap `r`; keys beyond the cap are retired.
    fn set_key(&mut self, r: usize) {
        let key = self.last[r] - self.first[self.prev[r]] + 1;
        if key > self.cap {
            self.key[r] = DEAD;
            self.live -= 1;
            self.perm += 1;
        } else {
            self.key[r] = key;
            self.queue.push(key, r);
        }
    }

    fn min_key(&mut self) -> Option<u64> {
        while let Some((key, r)) = self.queue.peek() {
            if self.key[r] == key {
                return Some(key);
            }
            self.queue.pop();
        }
        None
    }

    fn drain(&mut self, k: u64) {
        while self.min_key().is_some_and(|key| key <= k) {
            let (_, r) = self.queue.pop().unwrap();
            self.merge(r);
        }
    }

    fn merge(&mut self, r: usize) {
        let l = self.prev[r];
        self.key[r] = DEAD;
        self.live -= 1;
        self.last[l] = self.last[r];
        let after = self.next[r];
        self.next[l] = after;
        if after != NONE {
            self.prev[after] = l;
            if self.key[after] != DEAD {
                self.set_key(after);
            }
        }
        if self.prev[l] != NONE && self.key[l] != DEAD {
            self.set_key(l);
        }
    }
}

fn exponents(f: &Poly) -> Vec<u64> {
    f.terms().map(|(_, e)| e).collect()
}

/// Chunk size `k` to use for both operands. Ties keep the smaller `k`.
pub fn optimal_chunk_size(f: &Poly, g: &Poly, model: &CostModel) -> Result<u64> {
    Ok(optimal_chunk_size_traced(f, g, model)?.chosen)
}

/// As [`optimal_chunk_size`], also recording every evaluation point.
pub fn optimal_chunk_size_traced(f: &Poly, g: &Poly, model: &CostModel) -> Result<SizeTrace> {
    if f.is_zero() || g.is_zero() {
        return Err(argument("chunk size of a zero polynomial"));
    }
    match (f, g) {
        (Poly::Dense(_), Poly::Dense(_)) => run(dense_side(f, model), dense_side(g, model), model),
        (Poly::Dense(_), Poly::Sparse(_)) => run(dense_side(f, model), sparse_side(g, model), model),
        (Poly::Sparse(_), Poly::Dense(_)) => run(sparse_side(f, model), dense_side(g, model), model),
        (Poly::Sparse(_), Poly::Sparse(_)) => run(sparse_side(f, model), sparse_side(g, model), model),
    }
}

fn dense_side(f: &Poly, model: &CostModel) -> Side<MonotoneBucketQueue> {
    let max_key = f.degree().unwrap().saturating_add(1).min(model.cap);
    Side::new(exponents(f), model.cap, MonotoneBucketQueue::new(max_key))
}

fn sparse_side(f: &Poly, model: &CostModel) -> Side<HeapQueue> {
    Side::new(exponents(f), model.cap, HeapQueue::new())
}

fn run<A: GapQueue, B: GapQueue>(mut f: Side<A>, mut g: Side<B>, model: &CostModel) -> Result<SizeTrace> {
    let mut best_k = 1;
    let mut best = f.chunks() as f64 * g.chunks() as f64;
    let mut points = vec![SizeTracePoint {
        k: 1,
        chunks_f: f.chunks(),
        chunks_g: g.chunks(),
        cost: best,
    }];
    loop {
        let k = match (f.min_key(), g.min_key()) {
            (None, None) => break,
            (a, b) => a.unwrap_or(DEAD).min(b.unwrap_or(DEAD)),
        };
        f.drain(k);
        g.drain(k);
        let cost = f.chunks() as f64 * g.chunks() as f64 * k as f64 * model.delta(k);
        points.push(SizeTracePoint {
            k,
            chunks_f: f.chunks(),
            chunks_g: g.chunks(),
            cost,
        });
        if cost < best {
            best = cost;
            best_k = k;
        }
    }
    Ok(SizeTrace { points, chosen: best_k })
}
