use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{Chunk, ChunkyPoly};
use crate::cost::CostModel;
use crate::error::{capacity, Result};
use crate::poly::{DenseKernel, DensePoly};
use crate::ring::Ring;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChunkyMulStats {
    /// Chunk pairs multiplied.
    pub pairs: usize,
    /// Largest heap size observed; never exceeds the smaller chunk count.
    pub max_heap: usize,
}

/// Visits every chunk pair `(i, j)` in nondecreasing order of `e_i + d_j`,
/// with one heap slot per chunk of the operand that has fewer chunks.
/// `visit` receives indices into the original `f` and `g`.
fn for_each_pair<F>(f: &ChunkyPoly, g: &ChunkyPoly, mut visit: F) -> Result<ChunkyMulStats>
where
    F: FnMut(&Chunk, &Chunk, u64) -> Result<()>,
{
    let mut stats = ChunkyMulStats::default();
    if f.is_zero() || g.is_zero() {
        return Ok(stats);
    }
    let (many, few) = if f.chunks().len() >= g.chunks().len() { (f, g) } else { (g, f) };
    let (many, few) = (many.chunks(), few.chunks());
    let top = many.last().unwrap().end() as u128 + few.last().unwrap().end() as u128;
    if top > u64::MAX as u128 {
        return Err(capacity("product exponent overflows u64"));
    }

    let mut heap: BinaryHeap<Reverse<(u64, usize, usize)>> =
        few.iter().enumerate().map(|(j, c)| Reverse((many[0].offset + c.offset, j, 0))).collect();
    stats.max_heap = heap.len();
    while let Some(Reverse((exp, j, i))) = heap.pop() {
        visit(&many[i], &few[j], exp)?;
        stats.pairs += 1;
        if i + 1 < many.len() {
            heap.push(Reverse((many[i + 1].offset + few[j].offset, j, i + 1)));
        }
        stats.max_heap = stats.max_heap.max(heap.len());
        assert!(heap.len() <= few.len());
    }
    Ok(stats)
}

/// Heap-ordered chunk products accumulated into a running chunk `alpha`
/// that is flushed whenever the next product starts past its reach.
pub fn chunky_mul<R: Ring>(
    ring: &R,
    f: &ChunkyPoly,
    g: &ChunkyPoly,
    model: &CostModel,
) -> Result<(ChunkyPoly, ChunkyMulStats)> {
    let kernel = DenseKernel::for_model(model);
    let mut out: Vec<Chunk> = Vec::new();
    let mut alpha: Vec<u64> = Vec::new();
    let mut base = 0u64;

    let stats = for_each_pair(f, g, |a, b, exp| {
        let len = a.len() + b.len() - 1;
        if len > model.cap {
            return Err(capacity(format!("chunk product length {len} exceeds cap {}", model.cap)));
        }
        if alpha.is_empty() || base + (alpha.len() as u64 - 1) < exp {
            flush(&mut out, &mut alpha, base);
            alpha = vec![0; len as usize];
            base = exp;
            kernel.mul_into(ring, a.poly.coeffs(), b.poly.coeffs(), &mut alpha);
        } else {
            let shift = (exp - base) as usize;
            let mut beta = vec![0; len as usize];
            kernel.mul_into(ring, a.poly.coeffs(), b.poly.coeffs(), &mut beta);
            if alpha.len() < shift + beta.len() {
                alpha.resize(shift + beta.len(), 0);
            }
            for (x, y) in alpha[shift..].iter_mut().zip(beta) {
                *x = ring.add(*x, y);
            }
        }
        Ok(())
    })?;
    flush(&mut out, &mut alpha, base);
    Ok((ChunkyPoly::from_chunks_unchecked(out), stats))
}

// Cancellation can zero out either end of the running chunk, or all of it.
fn flush(out: &mut Vec<Chunk>, alpha: &mut Vec<u64>, base: u64) {
    let buf = std::mem::take(alpha);
    let Some(first) = buf.iter().position(|&c| c != 0) else {
        return;
    };
    let poly = DensePoly::new(buf[first..].to_vec());
    out.push(Chunk {
        offset: base + first as u64,
        poly,
    });
}

/// Same pair order, writing each chunk product straight into a preallocated
/// dense output.
pub fn chunky_mul_dense<R: Ring>(
    ring: &R,
    f: &ChunkyPoly,
    g: &ChunkyPoly,
    model: &CostModel,
) -> Result<(DensePoly, ChunkyMulStats)> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Ok((DensePoly::zero(), ChunkyMulStats::default()));
    };
    let len = df as u128 + dg as u128 + 1;
    if len > model.cap as u128 {
        return Err(capacity(format!("product length {len} exceeds cap {}", model.cap)));
    }
    let kernel = DenseKernel::for_model(model);
    let mut out = vec![0; len as usize];
    let stats = for_each_pair(f, g, |a, b, exp| {
        kernel.mul_into(ring, a.poly.coeffs(), b.poly.coeffs(), &mut out[exp as usize..]);
        Ok(())
    })?;
    Ok((DensePoly::new(out), stats))
}
