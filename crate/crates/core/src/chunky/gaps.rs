use crate::error::{argument, Result};
use crate::poly::Poly;

/// Run-length decomposition of the zero / nonzero coefficient pattern.
///
/// `gaps[i]` zero coefficients precede block `i` of `blocks[i]` nonzero ones;
/// `starts[i] = sum_{j<i} (gaps[j] + blocks[j])`, so `starts[m+1] = deg + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapProfile {
    pub gaps: Vec<u64>,
    pub blocks: Vec<u64>,
    pub starts: Vec<u64>,
}

impl GapProfile {
    pub fn of(f: &Poly) -> Result<Self> {
        Self::from_exponents(f.terms().map(|(_, e)| e))
    }

    /// One pass over increasing exponents of the nonzero terms.
    pub fn from_exponents(exps: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut gaps = Vec::new();
        let mut blocks: Vec<u64> = Vec::new();
        let mut end = 0u64;
        for e in exps {
            if !blocks.is_empty() && e == end {
                *blocks.last_mut().unwrap() += 1;
            } else {
                gaps.push(e - end);
                blocks.push(1);
            }
            end = e + 1;
        }
        if blocks.is_empty() {
            return Err(argument("gap profile of the zero polynomial"));
        }
        let mut starts = Vec::with_capacity(gaps.len() + 1);
        let mut acc = 0;
        starts.push(0);
        for (a, b) in gaps.iter().zip(&blocks) {
            acc += a + b;
            starts.push(acc);
        }
        Ok(GapProfile { gaps, blocks, starts })
    }

    /// `m`: number of interior gaps.
    pub fn gap_count(&self) -> usize {
        self.gaps.len() - 1
    }

    /// First exponent of block `i` (`d_i + a_i`).
    pub fn block_start(&self, i: usize) -> u64 {
        self.starts[i] + self.gaps[i]
    }

    /// `[lo, hi)` exponent ranges of the chunks obtained by cutting at the
    /// chosen gap indices (increasing, each in `1..=m`).
    pub fn chunk_ranges(&self, chosen: &[usize]) -> Vec<(u64, u64)> {
        let m = self.gap_count();
        let mut out = Vec::with_capacity(chosen.len() + 1);
        let mut from = 0;
        for &g in chosen.iter().chain(std::iter::once(&(m + 1))) {
            debug_assert!(g > from && g <= m + 1);
            out.push((self.block_start(from), self.starts[g]));
            from = g;
        }
        out
    }

    pub fn chunk_lengths(&self, chosen: &[usize]) -> Vec<u64> {
        self.chunk_ranges(chosen).into_iter().map(|(lo, hi)| hi - lo).collect()
    }
}
