//! Chunks sharing one spacing parameter:
//! `f = sum_i (f_i o x^k) * x^{e_i} + f_S`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::chunky::{chunky_plan, pair_cost, ChunkyPlan, ChunkyPoly};
use crate::cost::CostModel;
use crate::error::{argument, capacity, Result};
use crate::poly::{sparse_mul, DenseKernel, DensePoly, Poly, SparsePoly};
use crate::ring::Ring;
use crate::spaced::{grid_into, grid_strides, interleave, k_bound, majority_residue, within_log2};

/// Default number of spacing candidates tried below the initial bound.
pub const DEFAULT_SCAN_BUDGET: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpacedChunk {
    pub offset: u64,
    /// Nonzero constant and leading coefficient.
    pub core: DensePoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkedSpacedPoly {
    pub chunks: Vec<SpacedChunk>,
    pub spacing: u64,
    pub noise: SparsePoly,
}

impl SpacedChunk {
    /// One past the last exponent covered once composed with `x^k`.
    fn end(&self, k: u64) -> u64 {
        self.offset + k * (self.core.len() as u64 - 1) + 1
    }
}

impl ChunkedSpacedPoly {
    /// Spacing 1, no noise: the chunky representation itself.
    pub fn from_chunky(rep: &ChunkyPoly) -> Self {
        ChunkedSpacedPoly {
            chunks: rep
                .chunks()
                .iter()
                .map(|c| SpacedChunk {
                    offset: c.offset,
                    core: c.poly.clone(),
                })
                .collect(),
            spacing: 1,
            noise: SparsePoly::zero(),
        }
    }

    pub fn core_term_count(&self) -> usize {
        self.chunks.iter().map(|c| c.core.term_count()).sum()
    }

    pub fn term_count(&self) -> usize {
        self.core_term_count() + self.noise.len()
    }

    /// Core terms at their true exponents, in increasing order.
    pub fn core_sparse(&self) -> SparsePoly {
        let k = self.spacing;
        let terms = self
            .chunks
            .iter()
            .flat_map(|c| c.core.terms().map(move |(v, i)| (v, c.offset + k * i)))
            .collect();
        SparsePoly::from_sorted_unchecked(terms)
    }

    pub fn degree(&self) -> Option<u64> {
        let core = self.chunks.last().map(|c| c.end(self.spacing) - 1);
        core.max(self.noise.degree())
    }

    pub fn to_sparse(&self) -> SparsePoly {
        let mut terms = self.core_sparse().into_terms();
        terms.extend_from_slice(self.noise.terms());
        terms.sort_unstable_by_key(|t| t.1);
        SparsePoly::from_sorted_unchecked(terms)
    }

    pub fn to_dense(&self, cap: u64) -> Result<DensePoly> {
        self.to_sparse().to_dense(cap)
    }

    /// Interleaved sub-polynomial lengths of every chunk for grid stride `a`.
    fn sub_lengths(&self, stride: usize) -> Vec<u64> {
        self.chunks
            .iter()
            .flat_map(|c| interleave(c.core.coeffs(), stride).into_iter().map(|(_, p)| p.len() as u64))
            .collect()
    }
}

/// Finds the largest spacing shared by all chunks that leaves at most
/// `log2 t_f` terms off their chunk's residue class. At most `budget`
/// candidates are tried; spacing 1 otherwise.
pub fn detect_spacing(rep: &ChunkyPoly, budget: u64) -> ChunkedSpacedPoly {
    let exps: Vec<Vec<u64>> = rep.chunks().iter().map(|c| c.poly.terms().map(|t| t.1).collect()).collect();
    let total: usize = exps.iter().map(Vec::len).sum();
    let k_init = exps
        .iter()
        .filter(|e| e.len() >= 2)
        .map(|e| k_bound(e.len() as u64, e[e.len() - 1] - e[0]))
        .min();
    let Some(k_init) = k_init else {
        return ChunkedSpacedPoly::from_chunky(rep);
    };
    let lowest = k_init.saturating_sub(budget.max(1) - 1).max(2);
    let mut residues = Vec::with_capacity(exps.len());
    let mut k = k_init;
    while k >= lowest {
        residues.clear();
        let mut off = 0;
        for e in &exps {
            let (r, count) = majority_residue(e, k);
            off += e.len() - count;
            if !within_log2(off, total) {
                break;
            }
            residues.push(r);
        }
        if residues.len() == exps.len() {
            return build(rep, k, &residues);
        }
        k -= 1;
    }
    ChunkedSpacedPoly::from_chunky(rep)
}

fn build(rep: &ChunkyPoly, k: u64, residues: &[u64]) -> ChunkedSpacedPoly {
    let mut chunks = Vec::with_capacity(residues.len());
    let mut noise = Vec::new();
    for (c, &r) in rep.chunks().iter().zip(residues) {
        let terms: Vec<(u64, u64)> = c.poly.terms().collect();
        let d = terms.iter().find(|t| t.1 % k == r).unwrap().1;
        let top = terms.iter().rev().find(|t| t.1 % k == r).unwrap().1;
        let mut core = vec![0; ((top - d) / k) as usize + 1];
        for (v, e) in terms {
            if e % k == r {
                core[((e - d) / k) as usize] = v;
            } else {
                noise.push((v, c.offset + e));
            }
        }
        chunks.push(SpacedChunk {
            offset: c.offset + d,
            core: DensePoly::new(core),
        });
    }
    ChunkedSpacedPoly {
        chunks,
        spacing: k,
        noise: SparsePoly::from_sorted_unchecked(noise),
    }
}

/// Model cost of [`combined_mul`]: grid products over all chunk pairs plus
/// the sparse noise cross terms.
pub fn combined_cost(f: &ChunkedSpacedPoly, g: &ChunkedSpacedPoly, model: &CostModel) -> f64 {
    let Ok((a, b, _)) = grid_strides(f.spacing, g.spacing) else {
        return f64::INFINITY;
    };
    let grid = pair_cost(&f.sub_lengths(a), &g.sub_lengths(b), model);
    let (fd, fs) = (f.core_term_count() as f64, f.noise.len() as f64);
    let (gd, gs) = (g.core_term_count() as f64, g.noise.len() as f64);
    grid + fd * gs + gd * fs + fs * gs
}

#[derive(Clone, Debug)]
pub struct CombinedPlan {
    pub chunky: ChunkyPlan,
    pub f: ChunkedSpacedPoly,
    pub g: ChunkedSpacedPoly,
    pub cost: f64,
}

/// Chunky pipeline followed by spacing detection on each operand. Spacing is
/// dropped on either side when that lowers the model cost, so the result
/// never costs more than the chunky plan.
pub fn combined_plan(f: &Poly, g: &Poly, model: &CostModel, budget: u64) -> Result<CombinedPlan> {
    let chunky = chunky_plan(f, g, model)?;
    let (sf, sg) = (detect_spacing(&chunky.f, budget), detect_spacing(&chunky.g, budget));
    let (pf, pg) = (ChunkedSpacedPoly::from_chunky(&chunky.f), ChunkedSpacedPoly::from_chunky(&chunky.g));
    let mut best: Option<(f64, &ChunkedSpacedPoly, &ChunkedSpacedPoly)> = None;
    for (a, b) in [(&sf, &sg), (&sf, &pg), (&pf, &sg), (&pf, &pg)] {
        let cost = combined_cost(a, b, model);
        if best.is_none_or(|(c, _, _)| cost < c) {
            best = Some((cost, a, b));
        }
    }
    let (cost, a, b) = best.unwrap();
    let (a, b) = (a.clone(), b.clone());
    Ok(CombinedPlan { chunky, f: a, g: b, cost })
}

/// Converts `f` for multiplication by `co`.
pub fn combined_convert(f: &Poly, co: &Poly, model: &CostModel) -> Result<ChunkedSpacedPoly> {
    if f.is_zero() {
        return Err(argument("cannot convert the zero polynomial"));
    }
    Ok(combined_plan(f, co, model, DEFAULT_SCAN_BUDGET)?.f)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CombinedMulStats {
    pub pairs: usize,
    pub grid_products: usize,
    /// Positions written twice within one chunk pair's grid.
    pub collisions: u64,
}

/// Visits chunk pairs in nondecreasing order of `e_i + d_j`.
fn for_each_pair(
    f: &[SpacedChunk],
    g: &[SpacedChunk],
    mut visit: impl FnMut(usize, usize, u64) -> Result<()>,
) -> Result<()> {
    if f.is_empty() || g.is_empty() {
        return Ok(());
    }
    let swap = f.len() < g.len();
    let (many, few) = if swap { (g, f) } else { (f, g) };
    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> =
        few.iter().enumerate().map(|(j, c)| Reverse((many[0].offset + c.offset, j, 0))).collect();
    while let Some(Reverse((exp, j, i))) = heap.pop() {
        if swap {
            visit(j, i, exp)?;
        } else {
            visit(i, j, exp)?;
        }
        if i + 1 < many.len() {
            heap.push(Reverse((many[i + 1].offset + few[j].offset, j, i + 1)));
        }
    }
    Ok(())
}

fn check_len(f: &ChunkedSpacedPoly, g: &ChunkedSpacedPoly, cap: u64) -> Result<Option<u64>> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Ok(None);
    };
    let len = df as u128 + dg as u128 + 1;
    if len > u64::MAX as u128 {
        return Err(capacity("product exponent overflows u64"));
    }
    let len = len as u64;
    let widest = |p: &ChunkedSpacedPoly| p.chunks.iter().map(|c| c.end(p.spacing) - c.offset).max().unwrap_or(0);
    if widest(f) + widest(g) > cap {
        return Err(capacity(format!("chunk product exceeds cap {cap}")));
    }
    Ok(Some(len))
}

/// Runs every chunk pair product through the grid, handing each result and
/// its starting exponent to `sink` in nondecreasing exponent order.
fn core_products<R: Ring>(
    ring: &R,
    f: &ChunkedSpacedPoly,
    g: &ChunkedSpacedPoly,
    model: &CostModel,
    mut sink: impl FnMut(u64, &[u64]),
) -> Result<CombinedMulStats> {
    let kernel = DenseKernel::for_model(model);
    let (k, l) = (f.spacing, g.spacing);
    let mut stats = CombinedMulStats::default();
    let mut tmp = Vec::new();
    for_each_pair(&f.chunks, &g.chunks, |i, j, exp| {
        let (a, b) = (&f.chunks[i], &g.chunks[j]);
        let span = (a.end(k) - a.offset) + (b.end(l) - b.offset) - 1;
        tmp.clear();
        tmp.resize(span as usize, 0);
        let s = grid_into(ring, &kernel, a.core.coeffs(), k, b.core.coeffs(), l, &mut tmp)?;
        stats.pairs += 1;
        stats.grid_products += s.products;
        stats.collisions += s.collisions;
        sink(exp, &tmp);
        Ok(())
    })?;
    Ok(stats)
}

fn noise_products<R: Ring>(ring: &R, f: &ChunkedSpacedPoly, g: &ChunkedSpacedPoly) -> Result<[SparsePoly; 3]> {
    let (fd, gd) = (f.core_sparse(), g.core_sparse());
    Ok([
        sparse_mul(ring, &fd, &g.noise)?,
        sparse_mul(ring, &gd, &f.noise)?,
        sparse_mul(ring, &f.noise, &g.noise)?,
    ])
}

/// Product into a dense buffer covering the whole output.
pub fn combined_mul_dense<R: Ring>(
    ring: &R,
    f: &ChunkedSpacedPoly,
    g: &ChunkedSpacedPoly,
    model: &CostModel,
) -> Result<(DensePoly, CombinedMulStats)> {
    let Some(len) = check_len(f, g, model.cap)? else {
        return Ok((DensePoly::zero(), CombinedMulStats::default()));
    };
    if len > model.cap {
        return Err(capacity(format!("product length {len} exceeds cap {}", model.cap)));
    }
    let mut out = vec![0u64; len as usize];
    let stats = core_products(ring, f, g, model, |exp, prod| {
        for (slot, &c) in out[exp as usize..].iter_mut().zip(prod) {
            if c != 0 {
                *slot = ring.add(*slot, c);
            }
        }
    })?;
    for p in noise_products(ring, f, g)? {
        for &(c, e) in p.terms() {
            out[e as usize] = ring.add(out[e as usize], c);
        }
    }
    Ok((DensePoly::new(out), stats))
}

/// Product as sparse terms, buffering only the region still receiving
/// contributions.
pub fn combined_mul_sparse<R: Ring>(
    ring: &R,
    f: &ChunkedSpacedPoly,
    g: &ChunkedSpacedPoly,
    model: &CostModel,
) -> Result<(SparsePoly, CombinedMulStats)> {
    if check_len(f, g, model.cap)?.is_none() {
        return Ok((SparsePoly::zero(), CombinedMulStats::default()));
    }
    let mut terms: Vec<(u64, u64)> = Vec::new();
    let mut base = 0u64;
    let mut region: Vec<u64> = Vec::new();
    let flush = |terms: &mut Vec<(u64, u64)>, base: u64, region: &mut Vec<u64>| {
        terms.extend(region.iter().enumerate().filter(|t| *t.1 != 0).map(|(i, &c)| (c, base + i as u64)));
        region.clear();
    };
    let stats = core_products(ring, f, g, model, |exp, prod| {
        if !region.is_empty() && exp >= base + region.len() as u64 {
            flush(&mut terms, base, &mut region);
        }
        if region.is_empty() {
            base = exp;
        }
        let at = (exp - base) as usize;
        if region.len() < at + prod.len() {
            region.resize(at + prod.len(), 0);
        }
        for (slot, &c) in region[at..].iter_mut().zip(prod) {
            if c != 0 {
                *slot = ring.add(*slot, c);
            }
        }
    })?;
    flush(&mut terms, base, &mut region);
    let mut acc = SparsePoly::from_sorted_unchecked(terms);
    for p in noise_products(ring, f, g)? {
        acc = add_sparse(ring, &acc, &p);
    }
    Ok((acc, stats))
}

/// Product in the requested output representation.
pub fn combined_mul<R: Ring>(
    ring: &R,
    f: &ChunkedSpacedPoly,
    g: &ChunkedSpacedPoly,
    model: &CostModel,
    dense: bool,
) -> Result<(Poly, CombinedMulStats)> {
    if dense {
        combined_mul_dense(ring, f, g, model).map(|(p, s)| (Poly::Dense(p), s))
    } else {
        combined_mul_sparse(ring, f, g, model).map(|(p, s)| (Poly::Sparse(p), s))
    }
}

fn add_sparse<R: Ring>(ring: &R, a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    let (a, b) = (a.terms(), b.terms());
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].1 < b[j].1) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j].1 < a[i].1 {
            out.push(b[j]);
            j += 1;
        } else {
            let c = ring.add(a[i].0, b[j].0);
            if c != 0 {
                out.push((c, a[i].1));
            }
            i += 1;
            j += 1;
        }
    }
    SparsePoly::from_sorted_unchecked(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chunky::Chunk;
    use crate::oracle;
    use crate::ring::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn chunk(offset: u64, coeffs: &[u64]) -> Chunk {
        Chunk {
            offset,
            poly: DensePoly::new(coeffs.to_vec()),
        }
    }

    #[test]
    fn dense_block_keeps_spacing_one() {
        let rep = ChunkyPoly::new(vec![chunk(0, &[1; 16])]).unwrap();
        let s = detect_spacing(&rep, DEFAULT_SCAN_BUDGET);
        assert_eq!((s.spacing, s.chunks.len(), s.noise.len()), (1, 1, 0));
    }

    #[test]
    fn two_chunks_share_spacing_two() {
        let rep = ChunkyPoly::new(vec![chunk(0, &[1, 0, 1, 0, 1]), chunk(101, &[1, 0, 1])]).unwrap();
        let s = detect_spacing(&rep, DEFAULT_SCAN_BUDGET);
        assert_eq!(s.spacing, 2);
        assert_eq!(s.chunks[0].core.coeffs(), &[1, 1, 1]);
        assert_eq!((s.chunks[1].offset, s.chunks[1].core.coeffs()), (101, &[1u64, 1][..]));
        assert!(s.noise.is_zero());
    }

    #[test]
    fn off_pattern_term_becomes_noise() {
        let mut c = vec![0u64; 14];
        for e in [0, 2, 4, 6, 8, 10, 12, 13] {
            c[e] = 1;
        }
        let rep = ChunkyPoly::new(vec![chunk(0, &c)]).unwrap();
        let s = detect_spacing(&rep, DEFAULT_SCAN_BUDGET);
        assert_eq!(s.spacing, 2);
        assert_eq!(s.noise.terms(), &[(1, 13)]);
        assert_eq!(s.to_sparse(), rep.to_sparse());
    }

    #[test]
    fn product_matches_oracle() {
        let ring = PrimeField::new(97).unwrap();
        let model = CostModel::default();
        let rep = ChunkyPoly::new(vec![chunk(0, &[1, 0, 1, 0, 1]), chunk(101, &[1, 0, 1])]).unwrap();
        let f = detect_spacing(&rep, DEFAULT_SCAN_BUDGET);
        let g = ChunkedSpacedPoly {
            chunks: vec![SpacedChunk {
                offset: 0,
                core: DensePoly::new(vec![1, 1]),
            }],
            spacing: 2,
            noise: SparsePoly::zero(),
        };
        let want = oracle::expand(&ring, f.to_sparse().into_terms(), g.to_sparse().into_terms());
        let (d, stats) = combined_mul_dense(&ring, &f, &g, &model).unwrap();
        assert_eq!(d.to_sparse(), want);
        assert_eq!(stats.collisions, 0);
        let (s, _) = combined_mul_sparse(&ring, &f, &g, &model).unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn random_plans_match_oracle() {
        let ring = PrimeField::new(9973).unwrap();
        let model = CostModel::karatsuba().with_threshold(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let mut make = || {
                let k = rng.gen_range(1..6u64);
                let mut terms = Vec::new();
                let mut at = rng.gen_range(0..50u64);
                for _ in 0..rng.gen_range(1..5) {
                    for i in 0..rng.gen_range(1..12u64) {
                        terms.push((rng.gen_range(1..9973), at + k * i));
                    }
                    at += k * 12 + rng.gen_range(1..300);
                }
                for _ in 0..rng.gen_range(0..3) {
                    terms.push((rng.gen_range(1..9973), rng.gen_range(0..at)));
                }
                terms.sort_by_key(|t| t.1);
                terms.dedup_by_key(|t| t.1);
                Poly::Sparse(SparsePoly::new(terms).unwrap())
            };
            let (f, g) = (make(), make());
            let plan = combined_plan(&f, &g, &model, DEFAULT_SCAN_BUDGET).unwrap();
            assert!(plan.cost <= plan.chunky.cost);
            assert_eq!(plan.f.to_sparse(), f.to_sparse());
            let want = oracle::expand(&ring, f.terms(), g.terms());
            let (s, stats) = combined_mul_sparse(&ring, &plan.f, &plan.g, &model).unwrap();
            assert_eq!(s, want);
            assert_eq!(stats.collisions, 0);
            let (d, _) = combined_mul_dense(&ring, &plan.f, &plan.g, &model).unwrap();
            assert_eq!(d.to_sparse(), want);
        }
    }
}
