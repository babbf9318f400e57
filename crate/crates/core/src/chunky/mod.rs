//! Chunky representation: a sparse outer polynomial whose coefficients are
//! dense chunks.

mod convert;
mod gaps;
mod mul;
mod plan;
mod queue;
mod size;

pub use convert::{chunky_convert, optimal_boundaries};
pub use gaps::GapProfile;
pub use mul::{chunky_mul, chunky_mul_dense, ChunkyMulStats};
pub use plan::{chunky_plan, ChunkyPlan, PlanChoice};
pub use queue::{GapQueue, HeapQueue, MonotoneBucketQueue};
pub use size::{optimal_chunk_size, optimal_chunk_size_traced, SizeTrace, SizeTracePoint};

use crate::cost::CostModel;
use crate::error::{argument, capacity, Result};
use crate::poly::{DensePoly, Poly, SparsePoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chunk {
    pub offset: u64,
    pub poly: DensePoly,
}

impl Chunk {
    pub fn len(&self) -> u64 {
        self.poly.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.poly.is_empty()
    }

    /// One past the last exponent covered.
    pub fn end(&self) -> u64 {
        self.offset + self.len()
    }
}

/// `f = f_1 x^{e_1} + ... + f_t x^{e_t}` with disjoint, ordered chunks, each
/// having nonzero constant and leading coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChunkyPoly {
    chunks: Vec<Chunk>,
}

impl ChunkyPoly {
    pub fn new(chunks: Vec<Chunk>) -> Result<Self> {
        for c in &chunks {
            let co = c.poly.coeffs();
            if co.is_empty() || co[0] == 0 {
                return Err(argument("chunk must have a nonzero constant coefficient"));
            }
            if c.offset.checked_add(c.len()).is_none() {
                return Err(capacity("chunk exponent overflows u64"));
            }
        }
        if chunks.windows(2).any(|w| w[1].offset < w[0].end()) {
            return Err(argument("chunks must be ordered and disjoint"));
        }
        Ok(ChunkyPoly { chunks })
    }

    pub(crate) fn from_chunks_unchecked(chunks: Vec<Chunk>) -> Self {
        debug_assert!(ChunkyPoly::new(chunks.clone()).is_ok());
        ChunkyPoly { chunks }
    }

    pub fn zero() -> Self {
        ChunkyPoly { chunks: Vec::new() }
    }

    pub fn chunks(&self) -> &[Chunk] {
        &self.chunks
    }

    pub fn is_zero(&self) -> bool {
        self.chunks.is_empty()
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.chunks.iter().map(Chunk::len).collect()
    }

    pub fn degree(&self) -> Option<u64> {
        self.chunks.last().map(|c| c.end() - 1)
    }

    /// Every chunk's maximal dense blocks, no merging across gaps.
    pub fn from_blocks(f: &Poly) -> Result<Self> {
        if f.is_zero() {
            return Ok(Self::zero());
        }
        let profile = GapProfile::of(f)?;
        let all: Vec<usize> = (1..=profile.gap_count()).collect();
        Self::from_boundaries(f, &profile, &all, u64::MAX)
    }

    /// One chunk spanning the first to the last nonzero term.
    pub fn single(f: &Poly, cap: u64) -> Result<Self> {
        if f.is_zero() {
            return Ok(Self::zero());
        }
        let profile = GapProfile::of(f)?;
        Self::from_boundaries(f, &profile, &[], cap)
    }

    /// Builds the chunks delimited by the chosen gap indices (each in
    /// `1..=m`, increasing).
    pub fn from_boundaries(f: &Poly, profile: &GapProfile, chosen: &[usize], cap: u64) -> Result<Self> {
        let ranges = profile.chunk_ranges(chosen);
        let mut chunks = Vec::with_capacity(ranges.len());
        match f {
            Poly::Dense(d) => {
                for (lo, hi) in ranges {
                    if hi - lo > cap {
                        return Err(capacity(format!("chunk length {} exceeds cap {cap}", hi - lo)));
                    }
                    chunks.push(Chunk {
                        offset: lo,
                        poly: DensePoly::new(d.coeffs()[lo as usize..hi as usize].to_vec()),
                    });
                }
            }
            Poly::Sparse(s) => {
                let terms = s.terms();
                let mut t = 0;
                for (lo, hi) in ranges {
                    if hi - lo > cap {
                        return Err(capacity(format!("chunk length {} exceeds cap {cap}", hi - lo)));
                    }
                    let mut buf = vec![0; (hi - lo) as usize];
                    while t < terms.len() && terms[t].1 < hi {
                        buf[(terms[t].1 - lo) as usize] = terms[t].0;
                        t += 1;
                    }
                    chunks.push(Chunk {
                        offset: lo,
                        poly: DensePoly::new(buf),
                    });
                }
            }
        }
        Ok(ChunkyPoly::from_chunks_unchecked(chunks))
    }

    pub fn to_sparse(&self) -> SparsePoly {
        let mut terms = Vec::new();
        for c in &self.chunks {
            terms.extend(c.poly.terms().map(|(v, e)| (v, e + c.offset)));
        }
        SparsePoly::from_sorted_unchecked(terms)
    }

    pub fn to_dense(&self, cap: u64) -> Result<DensePoly> {
        let Some(deg) = self.degree() else {
            return Ok(DensePoly::zero());
        };
        if deg >= cap {
            return Err(capacity(format!("dense length {} exceeds cap {cap}", deg as u128 + 1)));
        }
        let mut out = vec![0; deg as usize + 1];
        for c in &self.chunks {
            out[c.offset as usize..c.end() as usize].copy_from_slice(c.poly.coeffs());
        }
        Ok(DensePoly::new(out))
    }

    /// Flattens into the representation family of `like`.
    pub fn to_output(&self, dense: bool, cap: u64) -> Result<Poly> {
        Ok(if dense {
            Poly::Dense(self.to_dense(cap)?)
        } else {
            Poly::Sparse(self.to_sparse())
        })
    }
}

/// Cost of multiplying chunks of these lengths by one dense chunk of length
/// `k`: `delta(k) * sum(len >= k) + k * sum(delta(len) for len < k)`.
///
/// The short-chunk terms are summed over sorted lengths, so the value depends
/// only on the multiset of lengths.
pub fn chunk_cost_of_lengths(lengths: &[u64], k: u64, model: &CostModel) -> f64 {
    let long: u64 = lengths.iter().filter(|&&l| l >= k).sum();
    let mut short: Vec<u64> = lengths.iter().copied().filter(|&l| l < k).collect();
    short.sort_unstable();
    let short_sum: f64 = short.iter().map(|&l| model.delta(l)).sum();
    let long_part = if long == 0 { 0.0 } else { model.delta(k) * long as f64 };
    long_part + k as f64 * short_sum
}

pub fn chunk_cost(rep: &ChunkyPoly, k: u64, model: &CostModel) -> f64 {
    chunk_cost_of_lengths(&rep.lengths(), k, model)
}

/// Model cost of multiplying two chunk lists pairwise with the blocked dense
/// kernel. Lengths are grouped, so the value depends only on the two
/// multisets and costs `O(distinct_f * distinct_g)` evaluations.
pub fn pair_cost(f_lengths: &[u64], g_lengths: &[u64], model: &CostModel) -> f64 {
    let hist = |ls: &[u64]| {
        let mut h = std::collections::BTreeMap::<u64, u64>::new();
        for &l in ls {
            *h.entry(l).or_default() += 1;
        }
        h
    };
    let (hf, hg) = (hist(f_lengths), hist(g_lengths));
    let mut total = 0.0;
    for (&a, &ca) in &hf {
        for (&b, &cb) in &hg {
            total += (ca * cb) as f64 * model.mult_cost(a, b);
        }
    }
    total
}
