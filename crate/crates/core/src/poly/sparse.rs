use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::SparsePoly;
use crate::error::{capacity, Result};
use crate::ring::Ring;

/// Heap-merged sparse product.
///
/// The heap holds one cursor per term of the smaller operand, so auxiliary
/// space is `O(min(t_f, t_g))` plus the output. Output terms come out in
/// increasing exponent order and cancelled sums are dropped.
pub fn sparse_mul<R: Ring>(ring: &R, f: &SparsePoly, g: &SparsePoly) -> Result<SparsePoly> {
    if f.is_zero() || g.is_zero() {
        return Ok(SparsePoly::zero());
    }
    let (big, small) = if f.len() >= g.len() { (f.terms(), g.terms()) } else { (g.terms(), f.terms()) };
    let (top_big, top_small) = (big[big.len() - 1].1, small[small.len() - 1].1);
    if top_big.checked_add(top_small).is_none() {
        return Err(capacity("exponent sum overflows u64"));
    }

    let mut cursor = vec![0usize; small.len()];
    let mut heap: BinaryHeap<Reverse<(u64, usize)>> =
        small.iter().enumerate().map(|(j, &(_, e))| Reverse((big[0].1 + e, j))).collect();

    let mut out: Vec<(u64, u64)> = Vec::new();
    let mut current: Option<(u64, u64)> = None;
    while let Some(Reverse((exp, j))) = heap.pop() {
        let i = cursor[j];
        let c = ring.mul(big[i].0, small[j].0);
        current = match current {
            Some((acc, e)) if e == exp => Some((ring.add(acc, c), e)),
            Some((acc, e)) => {
                if acc != 0 {
                    out.push((acc, e));
                }
                Some((c, exp))
            }
            None => Some((c, exp)),
        };
        cursor[j] = i + 1;
        if i + 1 < big.len() {
            heap.push(Reverse((big[i + 1].1 + small[j].1, j)));
        }
    }
    if let Some((acc, e)) = current {
        if acc != 0 {
            out.push((acc, e));
        }
    }
    Ok(SparsePoly::from_sorted_unchecked(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::ring::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sp(terms: &[(u64, u64)]) -> SparsePoly {
        SparsePoly::new(terms.to_vec()).unwrap()
    }

    #[test]
    fn cancellation() {
        let r = PrimeField::new(97).unwrap();
        let f = sp(&[(1, 0), (1, 100)]);
        let g = sp(&[(96, 0), (1, 100)]);
        assert_eq!(sparse_mul(&r, &f, &g).unwrap(), sp(&[(96, 0), (1, 200)]));
    }

    #[test]
    fn monomials_and_identity() {
        let r = PrimeField::new(97).unwrap();
        assert_eq!(sparse_mul(&r, &sp(&[(1, 5)]), &sp(&[(1, 7)])).unwrap(), sp(&[(1, 12)]));
        let f = sp(&[(3, 1), (4, 9), (5, 1000)]);
        assert_eq!(sparse_mul(&r, &f, &sp(&[(1, 0)])).unwrap(), f);
        assert!(sparse_mul(&r, &f, &SparsePoly::zero()).unwrap().is_zero());
    }

    #[test]
    fn overflow_detected() {
        let r = PrimeField::new(97).unwrap();
        let f = sp(&[(1, u64::MAX - 1)]);
        assert!(sparse_mul(&r, &f, &sp(&[(1, 1)])).is_ok());
        assert!(sparse_mul(&r, &f, &sp(&[(1, 2)])).is_err());
    }

    #[test]
    fn counts_one_mul_per_pair() {
        let r = PrimeField::new(97).unwrap().counted();
        let f = sp(&[(1, 0), (2, 3), (3, 9)]);
        let g = sp(&[(1, 1), (5, 2)]);
        sparse_mul(&r, &f, &g).unwrap();
        assert_eq!(r.mul_count(), 6);
    }

    #[test]
    fn matches_oracle() {
        let r = PrimeField::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mk = |rng: &mut ChaCha8Rng| {
                let mut exps: Vec<u64> = (0..rng.gen_range(0..30)).map(|_| rng.gen_range(0..60)).collect();
                exps.sort_unstable();
                exps.dedup();
                sp(&exps.iter().map(|&e| (rng.gen_range(1..101), e)).collect::<Vec<_>>())
            };
            let f = mk(&mut rng);
            let g = mk(&mut rng);
            let want = oracle::expand(&r, f.terms().iter().copied(), g.terms().iter().copied());
            assert_eq!(sparse_mul(&r, &f, &g).unwrap(), want);
        }
    }
}
