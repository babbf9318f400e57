//! Direct `O(t_f * t_g)` expansion, independent of every multiplication
//! algorithm in this crate. Used as the reference in tests.

use std::collections::BTreeMap;

use crate::poly::SparsePoly;
use crate::ring::Ring;

/// Above this product degree the expansion accumulates in an ordered map
/// instead of a flat array.
const FLAT_LIMIT: u64 = 1 << 22;

/// Expands `f * g` term by term.
pub fn expand<R: Ring>(
    ring: &R,
    f: impl IntoIterator<Item = (u64, u64)>,
    g: impl IntoIterator<Item = (u64, u64)>,
) -> SparsePoly {
    let f: Vec<(u64, u64)> = f.into_iter().collect();
    let g: Vec<(u64, u64)> = g.into_iter().collect();
    let top = |p: &[(u64, u64)]| p.iter().map(|t| t.1 as u128).max();
    let (Some(tf), Some(tg)) = (top(&f), top(&g)) else {
        return SparsePoly::zero();
    };
    let terms: Vec<(u64, u64)> = if tf + tg < FLAT_LIMIT as u128 {
        let mut acc = vec![0u64; (tf + tg) as usize + 1];
        for &(a, e) in &f {
            for &(b, d) in &g {
                let slot = &mut acc[(e + d) as usize];
                *slot = ring.add(*slot, ring.mul(a, b));
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|&(_, c)| c != 0)
            .map(|(e, c)| (c, e as u64))
            .collect()
    } else {
        let mut acc: BTreeMap<u128, u64> = BTreeMap::new();
        for &(a, e) in &f {
            for &(b, d) in &g {
                let slot = acc.entry(e as u128 + d as u128).or_insert(0);
                *slot = ring.add(*slot, ring.mul(a, b));
            }
        }
        acc.into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(e, c)| (c, u64::try_from(e).expect("oracle exponent overflow")))
            .collect()
    };
    SparsePoly::new(terms).expect("expansion yields sorted terms")
}
