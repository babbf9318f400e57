//! Optimal chunky conversion against one dense chunk of length `k`.
//!
//! Boundary candidates are the gaps of `f`. With `D_i` the start of block `i`
//! and `d_l` the end of block `l-1`, the chunk between chosen gaps `i` and `l`
//! has length `d_l - D_i` and costs `w(len) = k*delta(len)` when shorter than
//! `k`, `len*delta(k)` otherwise. A left-to-right pass computes
//! `c_l = min_{i<l} c_i + w(d_l - D_i)`.
//!
//! Short candidates (`len <= k`) obey the crossing property from concavity of
//! `delta`: once an earlier gap beats a later one it keeps winning while both
//! stay short. Each candidate is therefore a line-like function over the
//! boundary indices where it is short, kept in a Li Chao tree restricted to
//! that index range. Long candidates are linear in `d_l`, so a prefix minimum
//! suffices; it resets at any gap of width `>= 2k`, since splitting a chunk at
//! such a gap never costs more.

use super::{ChunkyPoly, GapProfile};
use crate::cost::CostModel;
use crate::error::{argument, Result};
use crate::poly::Poly;

/// Li Chao tree over boundary indices `1..=n`.
struct LiChao {
    n: usize,
    slot: Vec<Option<usize>>,
}

impl LiChao {
    fn new(n: usize) -> Self {
        LiChao {
            n,
            slot: vec![None; 4 * n.max(1)],
        }
    }

    fn insert(&mut self, cand: usize, lo: usize, hi: usize, eval: &impl Fn(usize, usize) -> f64) {
        self.insert_rec(1, 1, self.n, lo, hi, cand, eval);
    }

    #[allow(clippy::too_many_arguments)]
    fn insert_rec(
        &mut self,
        node: usize,
        lo: usize,
        hi: usize,
        ql: usize,
        qr: usize,
        cand: usize,
        eval: &impl Fn(usize, usize) -> f64,
    ) {
        if qr < lo || hi < ql {
            return;
        }
        if ql <= lo && hi <= qr {
            self.place(node, lo, hi, cand, eval);
            return;
        }
        let mid = (lo + hi) / 2;
        self.insert_rec(2 * node, lo, mid, ql, qr, cand, eval);
        self.insert_rec(2 * node + 1, mid + 1, hi, ql, qr, cand, eval);
    }

    fn place(&mut self, mut node: usize, mut lo: usize, mut hi: usize, mut cand: usize, eval: &impl Fn(usize, usize) -> f64) {
        let better = |a: usize, b: usize, at: usize| {
            let (va, vb) = (eval(a, at), eval(b, at));
            va < vb || (va == vb && a < b)
        };
        loop {
            let Some(cur) = self.slot[node] else {
                self.slot[node] = Some(cand);
                return;
            };
            let mid = (lo + hi) / 2;
            let keep = if better(cand, cur, mid) {
                self.slot[node] = Some(cand);
                cur
            } else {
                cand
            };
            if lo == hi {
                return;
            }
            let here = self.slot[node].unwrap();
            if better(keep, here, lo) {
                node *= 2;
                hi = mid;
            } else if better(keep, here, hi) {
                node = 2 * node + 1;
                lo = mid + 1;
            } else {
                return;
            }
            cand = keep;
        }
    }

    fn query(&self, at: usize, eval: &impl Fn(usize, usize) -> f64) -> Option<(f64, usize)> {
        let (mut node, mut lo, mut hi) = (1, 1, self.n);
        let mut best: Option<(f64, usize)> = None;
        loop {
            if let Some(c) = self.slot[node] {
                let v = eval(c, at);
                if best.is_none_or(|(bv, bi)| v < bv || (v == bv && c < bi)) {
                    best = Some((v, c));
                }
            }
            if lo == hi {
                return best;
            }
            let mid = (lo + hi) / 2;
            if at <= mid {
                node *= 2;
                hi = mid;
            } else {
                node = 2 * node + 1;
                lo = mid + 1;
            }
        }
    }
}

/// Gap indices (increasing, in `1..=m`) of the cheapest chunky representation
/// of a polynomial with this profile for multiplication by one length-`k`
/// chunk. Ties prefer earlier gaps.
pub fn optimal_boundaries(profile: &GapProfile, k: u64, model: &CostModel) -> Vec<usize> {
    assert!(k >= 1);
    let m = profile.gap_count();
    if m == 0 {
        return Vec::new();
    }
    let n = m + 1;
    let start = |i: usize| profile.block_start(i);
    let end = |l: usize| profile.starts[l];
    let kf = k as f64;
    let dk = model.delta(k);

    let mut cost = vec![0.0f64; n + 1];
    let mut parent = vec![0usize; n + 1];
    let mut tree = LiChao::new(n);

    let mut reach = 0usize;
    let mut pool_next = 0usize;
    let mut pool_base = start(0);
    let mut pool_best: Option<(f64, usize)> = None;

    for l in 1..=n {
        // candidate l-1 now has its final cost
        let i = l - 1;
        reach = reach.max(i);
        while reach < n && end(reach + 1) - start(i) <= k {
            reach += 1;
        }
        {
            let cost_ref = &cost;
            let short = |c: usize, at: usize| cost_ref[c] + kf * model.delta(end(at) - start(c));
            if reach > i {
                tree.insert(i, i + 1, reach, &short);
            }
        }

        if l >= 2 && profile.gaps[l - 1] >= 2 * k {
            pool_best = None;
            pool_next = pool_next.max(l - 1);
            pool_base = start(l - 1);
        }
        while pool_next < l && start(pool_next) + k <= end(l) {
            let key = cost[pool_next] - (start(pool_next) - pool_base) as f64 * dk;
            if pool_best.is_none_or(|(b, _)| key < b) {
                pool_best = Some((key, pool_next));
            }
            pool_next += 1;
        }

        let cost_ref = &cost;
        let short = |c: usize, at: usize| cost_ref[c] + kf * model.delta(end(at) - start(c));
        let mut best = tree.query(l, &short);
        if let Some((key, c)) = pool_best {
            if end(l) - start(c) <= model.cap {
                let v = key + (end(l) - pool_base) as f64 * dk;
                if best.is_none_or(|(bv, bi)| v < bv || (v == bv && c < bi)) {
                    best = Some((v, c));
                }
            }
        }
        let (v, c) = best.expect("the previous gap is always a short or long candidate");
        cost[l] = v;
        parent[l] = c;
    }

    let mut chosen = Vec::new();
    let mut l = n;
    while l > 0 {
        let i = parent[l];
        if i > 0 {
            chosen.push(i);
        }
        l = i;
    }
    chosen.reverse();
    chosen
}

/// Converts `f` to the chunky representation minimizing
/// [`chunk_cost`](super::chunk_cost) for multiplication by a length-`k` chunk.
pub fn chunky_convert(f: &Poly, k: u64, model: &CostModel) -> Result<ChunkyPoly> {
    if k == 0 {
        return Err(argument("chunk size must be positive"));
    }
    let profile = GapProfile::of(f)?;
    let chosen = optimal_boundaries(&profile, k, model);
    ChunkyPoly::from_boundaries(f, &profile, &chosen, model.cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunky::chunk_cost_of_lengths;
    use crate::cost::ModelKind;
    use crate::poly::{DensePoly, SparsePoly};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn subset_min(p: &GapProfile, k: u64, model: &CostModel) -> f64 {
        let m = p.gap_count();
        (0u32..1 << m)
            .map(|mask| {
                let chosen: Vec<usize> = (1..=m).filter(|&g| mask >> (g - 1) & 1 == 1).collect();
                chunk_cost_of_lengths(&p.chunk_lengths(&chosen), k, model)
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn no_gaps_single_chunk() {
        let f = Poly::Dense(DensePoly::new(vec![1, 2, 3, 4]));
        let c = chunky_convert(&f, 2, &CostModel::default()).unwrap();
        assert_eq!(c.chunks().len(), 1);
        assert_eq!(c.to_dense(100).unwrap().coeffs(), &[1, 2, 3, 4]);
    }

    #[test]
    fn far_apart_terms_split() {
        for kind in [ModelKind::Schoolbook, ModelKind::Karatsuba, ModelKind::FftLike] {
            let model = CostModel::new(kind);
            let f = Poly::Sparse(SparsePoly::new(vec![(1, 0), (1, 50)]).unwrap());
            let c = chunky_convert(&f, 4, &model).unwrap();
            assert_eq!(c.lengths(), vec![1, 1]);
            assert_eq!(c.chunks()[1].offset, 50);
            let split = chunk_cost_of_lengths(&[1, 1], 4, &model);
            let merged = chunk_cost_of_lengths(&[51], 4, &model);
            assert!(split < merged);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(chunky_convert(&Poly::Dense(DensePoly::zero()), 4, &CostModel::default()).is_err());
        assert!(chunky_convert(&Poly::Dense(DensePoly::one()), 0, &CostModel::default()).is_err());
    }

    #[test]
    fn matches_exhaustive_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let models = [
            CostModel::schoolbook(),
            CostModel::karatsuba().with_threshold(3).unwrap(),
            CostModel::fftlike(),
        ];
        for _ in 0..300 {
            let n = rng.gen_range(1..48);
            let density = rng.gen_range(0.2..0.8);
            let mut exps: Vec<u64> = (0..n).filter(|_| rng.gen_bool(density)).collect();
            exps.push(n);
            let p = GapProfile::from_exponents(exps).unwrap();
            if p.gap_count() > 12 {
                continue;
            }
            for model in &models {
                for k in [1, 2, 3, 4, 8, 16] {
                    let chosen = optimal_boundaries(&p, k, model);
                    let got = chunk_cost_of_lengths(&p.chunk_lengths(&chosen), k, model);
                    assert_eq!(got, subset_min(&p, k, model), "k={k} {:?} {:?}", model.kind, p);
                }
            }
        }
    }
}
