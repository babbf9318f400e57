use std::collections::HashMap;

use super::DensePoly;
use crate::cost::{CostModel, ModelKind};
use crate::error::{capacity, Result};
use crate::ring::Ring;

/// Which dense kernel a model executes. The schoolbook model never recurses;
/// the others run Karatsuba above the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DenseKernel {
    /// Equal-length products of length `<= base` use schoolbook.
    pub base: usize,
}

impl DenseKernel {
    pub fn for_model(model: &CostModel) -> Self {
        match model.kind {
            ModelKind::Schoolbook => DenseKernel { base: usize::MAX },
            ModelKind::Karatsuba | ModelKind::FftLike => DenseKernel {
                base: usize::try_from(model.threshold).unwrap_or(usize::MAX).max(1),
            },
        }
    }

    pub fn schoolbook() -> Self {
        DenseKernel { base: usize::MAX }
    }

    /// Accumulates `a * b` into `out[0..a.len()+b.len()-1]`.
    pub fn mul_into<R: Ring>(&self, ring: &R, a: &[u64], b: &[u64], out: &mut [u64]) {
        if a.is_empty() || b.is_empty() {
            return;
        }
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        debug_assert!(out.len() >= long.len() + short.len() - 1);
        if long.len() == short.len() {
            self.square_into(ring, long, short, out);
            return;
        }
        // unequal lengths: cut the longer operand into blocks of the shorter length
        let m = short.len();
        for (i, block) in long.chunks(m).enumerate() {
            self.mul_into(ring, block, short, &mut out[i * m..]);
        }
    }

    fn square_into<R: Ring>(&self, ring: &R, a: &[u64], b: &[u64], out: &mut [u64]) {
        let n = a.len();
        if n <= self.base {
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = ring.mul_add(out[i + j], x, y);
                }
            }
            return;
        }
        let h = n.div_ceil(2);
        let (a0, a1) = a.split_at(h);
        let (b0, b1) = b.split_at(h);

        let mut z0 = vec![0; 2 * h - 1];
        self.square_into(ring, a0, b0, &mut z0);
        let mut z2 = vec![0; 2 * (n - h) - 1];
        self.square_into(ring, a1, b1, &mut z2);

        let fold = |lo: &[u64], hi: &[u64]| {
            let mut s = lo.to_vec();
            for (x, &y) in s.iter_mut().zip(hi) {
                *x = ring.add(*x, y);
            }
            s
        };
        let sa = fold(a0, a1);
        let sb = fold(b0, b1);
        let mut z1 = vec![0; 2 * h - 1];
        self.square_into(ring, &sa, &sb, &mut z1);
        for (x, &y) in z1.iter_mut().zip(&z0) {
            *x = ring.sub(*x, y);
        }
        for (x, &y) in z1.iter_mut().zip(&z2) {
            *x = ring.sub(*x, y);
        }

        for (o, &z) in out.iter_mut().zip(&z0) {
            *o = ring.add(*o, z);
        }
        for (o, &z) in out[h..].iter_mut().zip(&z1) {
            *o = ring.add(*o, z);
        }
        for (o, &z) in out[2 * h..].iter_mut().zip(&z2) {
            *o = ring.add(*o, z);
        }
    }

    /// Exact number of coefficient multiplications [`DenseKernel::mul_into`]
    /// performs for operand lengths `n` and `m`, without running it.
    pub fn mul_count(&self, n: u64, m: u64) -> u64 {
        let mut memo = HashMap::new();
        self.count_rec(n, m, &mut memo)
    }

    fn count_rec(&self, n: u64, m: u64, memo: &mut HashMap<u64, u64>) -> u64 {
        let (long, short) = if n >= m { (n, m) } else { (m, n) };
        if short == 0 {
            return 0;
        }
        if long == short {
            return self.square_count(long, memo);
        }
        let full = long / short;
        let rest = long % short;
        let mut total = full * self.square_count(short, memo);
        if rest > 0 {
            total += self.count_rec(rest, short, memo);
        }
        total
    }

    fn square_count(&self, n: u64, memo: &mut HashMap<u64, u64>) -> u64 {
        if n as u128 <= self.base as u128 {
            return n * n;
        }
        if let Some(&c) = memo.get(&n) {
            return c;
        }
        let h = n.div_ceil(2);
        let c = 2 * self.square_count(h, memo) + self.square_count(n - h, memo);
        memo.insert(n, c);
        c
    }
}

/// Exact product; schoolbook at or below the model threshold, Karatsuba above,
/// blocked when lengths differ.
pub fn dense_mul<R: Ring>(ring: &R, f: &DensePoly, g: &DensePoly, model: &CostModel) -> Result<DensePoly> {
    if f.is_zero() || g.is_zero() {
        return Ok(DensePoly::zero());
    }
    let len = f.len() as u64 + g.len() as u64 - 1;
    if len > model.cap {
        return Err(capacity(format!("product length {len} exceeds cap {}", model.cap)));
    }
    let mut out = vec![0; len as usize];
    DenseKernel::for_model(model).mul_into(ring, f.coeffs(), g.coeffs(), &mut out);
    Ok(DensePoly::new(out))
}

/// Multiplication count of [`dense_mul`] on lengths `n`, `m` under `model`.
pub fn dense_mul_count(n: u64, m: u64, model: &CostModel) -> u64 {
    DenseKernel::for_model(model).mul_count(n, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::ring::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f97() -> PrimeField {
        PrimeField::new(97).unwrap()
    }

    #[test]
    fn small_product() {
        let r = f97();
        let f = DensePoly::new(vec![1, 2]);
        let g = DensePoly::new(vec![3, 4]);
        let h = dense_mul(&r, &f, &g, &CostModel::default()).unwrap();
        assert_eq!(h.coeffs(), &[3, 10, 8]);
        assert_eq!(dense_mul(&r, &f, &DensePoly::one(), &CostModel::default()).unwrap(), f);
        assert!(dense_mul(&r, &f, &DensePoly::zero(), &CostModel::default()).unwrap().is_zero());
    }

    #[test]
    fn capacity_error() {
        let m = CostModel::default().with_cap(4).unwrap();
        let f = DensePoly::new(vec![1, 1, 1]);
        assert!(dense_mul(&f97(), &f, &f, &m).is_err());
    }

    #[test]
    fn karatsuba_matches_schoolbook() {
        let r = PrimeField::new(9973).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..300);
            let m = rng.gen_range(1..300);
            let f = DensePoly::new((0..n).map(|_| rng.gen_range(0..9973)).collect());
            let g = DensePoly::new((0..m).map(|_| rng.gen_range(0..9973)).collect());
            let t = rng.gen_range(1..40);
            let kar = CostModel::karatsuba().with_threshold(t).unwrap();
            let a = dense_mul(&r, &f, &g, &kar).unwrap();
            let b = dense_mul(&r, &f, &g, &CostModel::schoolbook()).unwrap();
            assert_eq!(a, b);
            let want = oracle::expand(&r, f.terms(), g.terms());
            assert_eq!(a.to_sparse(), want);
        }
    }

    #[test]
    fn schoolbook_count_is_n_squared() {
        let r = f97().counted();
        for n in [1usize, 2, 7, 64] {
            r.reset();
            let f = DensePoly::new(vec![1; n]);
            dense_mul(&r, &f, &f, &CostModel::schoolbook()).unwrap();
            assert_eq!(r.mul_count(), (n * n) as u64);
        }
        r.reset();
        dense_mul(&r, &DensePoly::new(vec![1, 1]), &DensePoly::new(vec![2, 3]), &CostModel::default()).unwrap();
        assert_eq!(r.mul_count(), 4);
    }

    #[test]
    fn predicted_count_matches_execution() {
        let r = f97().counted();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..400u64);
            let m = rng.gen_range(1..400u64);
            let model = CostModel::karatsuba().with_threshold(rng.gen_range(1..40)).unwrap();
            r.reset();
            let f = DensePoly::new(vec![1; n as usize]);
            let g = DensePoly::new(vec![1; m as usize]);
            dense_mul(&r, &f, &g, &model).unwrap();
            assert_eq!(r.mul_count(), dense_mul_count(n, m, &model), "n={n} m={m}");
        }
    }

    #[test]
    fn karatsuba_model_fidelity() {
        let model = CostModel::karatsuba();
        for n in [32u64, 64, 128, 256] {
            let measured = dense_mul_count(n, n, &model) as f64 / n as f64;
            let ratio = measured / model.delta(n);
            assert!((0.5..=2.0).contains(&ratio), "n={n} ratio={ratio}");
        }
    }
}
