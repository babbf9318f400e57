//! Equal-spaced representation `f = (f_D o x^k) * x^d + f_S`.

use crate::cost::CostModel;
use crate::error::{argument, capacity, Result};
use crate::poly::{sparse_mul, DenseKernel, DensePoly, SparsePoly};
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualSpacedPoly {
    pub core: DensePoly,
    pub spacing: u64,
    pub shift: u64,
    pub noise: SparsePoly,
}

impl EqualSpacedPoly {
    pub fn new(core: DensePoly, spacing: u64, shift: u64, noise: SparsePoly) -> Result<Self> {
        if spacing == 0 {
            return Err(argument("spacing must be positive"));
        }
        if !core.is_zero() && core.coeffs()[0] == 0 {
            return Err(argument("core must have a nonzero constant term"));
        }
        if !core.is_zero() && noise.terms().iter().any(|&(_, e)| e >= shift && (e - shift).is_multiple_of(spacing)) {
            return Err(argument("noise term lies on the spaced class"));
        }
        Ok(EqualSpacedPoly { core, spacing, shift, noise })
    }

    pub fn term_count(&self) -> usize {
        self.core.term_count() + self.noise.len()
    }

    /// Core terms at their true exponents `d + k*i`.
    pub fn core_sparse(&self) -> SparsePoly {
        let terms = self.core.terms().map(|(c, i)| (c, self.shift + self.spacing * i)).collect();
        SparsePoly::from_sorted_unchecked(terms)
    }

    pub fn degree(&self) -> Option<u64> {
        let core = self.core.degree().map(|n| self.shift + self.spacing * n as u64);
        core.max(self.noise.degree())
    }
}

/// Largest spacing worth testing for `t` terms up to exponent `n`: above it
/// no residue class can hold `t - log2 t` of the exponents.
pub fn k_bound(t: u64, n: u64) -> u64 {
    if t < 32 {
        return n;
    }
    // rounding log2 t up keeps this an upper limit
    let denom = t - 1 - 2 * t.next_power_of_two().ilog2() as u64;
    n / denom
}

/// `2^s <= t`, i.e. `s <= log2 t` without floating point.
pub(crate) fn within_log2(s: usize, t: usize) -> bool {
    s < usize::BITS as usize && (1usize << s) <= t
}

/// Boyer-Moore vote over residues mod `k`, then a verification count.
/// Returns the winning residue and its multiplicity.
pub(crate) fn majority_residue(exps: &[u64], k: u64) -> (u64, usize) {
    let (mut cand, mut votes) = (0, 0usize);
    for &e in exps {
        let r = e % k;
        if votes == 0 {
            cand = r;
            votes = 1;
        } else if r == cand {
            votes += 1;
        } else {
            votes -= 1;
        }
    }
    let count = exps.iter().filter(|&&e| e % k == cand).count();
    (cand, count)
}

/// Largest `k >= 2` leaving at most `log2 t` exponents off one residue class,
/// or `(1, e_1)` when none does. Trivial spacing `e_t - e_1` for `t <= 4`.
pub(crate) fn detect_spacing(exps: &[u64], n: u64) -> (u64, u64) {
    let t = exps.len();
    if t <= 4 {
        let k = (exps[t - 1] - exps[0]).max(1);
        return (k, exps[0] % k);
    }
    let mut k = k_bound(t as u64, n);
    while k >= 2 {
        let (r, count) = majority_residue(exps, k);
        if within_log2(t - count, t) {
            return (k, r);
        }
        k -= 1;
    }
    (1, 0)
}

/// Splits terms into the spaced class `d + k*i` and the rest.
fn build(terms: &[(u64, u64)], k: u64, residue: u64) -> EqualSpacedPoly {
    let d = terms.iter().find(|t| t.1 % k == residue).map(|t| t.1).unwrap();
    let top = terms.iter().rev().find(|t| t.1 % k == residue).unwrap().1;
    let mut core = vec![0; ((top - d) / k) as usize + 1];
    let mut noise = Vec::new();
    for &(c, e) in terms {
        if e % k == residue {
            core[((e - d) / k) as usize] = c;
        } else {
            noise.push((c, e));
        }
    }
    EqualSpacedPoly {
        core: DensePoly::new(core),
        spacing: k,
        shift: d,
        noise: SparsePoly::from_sorted_unchecked(noise),
    }
}

/// Converts a dense polynomial, choosing the largest admissible spacing.
pub fn es_convert(f: &DensePoly) -> Result<EqualSpacedPoly> {
    if f.is_zero() {
        return Err(argument("cannot convert the zero polynomial"));
    }
    let terms: Vec<(u64, u64)> = f.terms().collect();
    let exps: Vec<u64> = terms.iter().map(|t| t.1).collect();
    let (k, r) = detect_spacing(&exps, f.degree().unwrap() as u64);
    Ok(build(&terms, k, r))
}

pub fn es_to_dense(f: &EqualSpacedPoly, cap: u64) -> Result<DensePoly> {
    let Some(deg) = f.degree() else {
        return Ok(DensePoly::zero());
    };
    if deg >= cap {
        return Err(capacity(format!("dense length {} exceeds cap {cap}", deg as u128 + 1)));
    }
    let mut out = vec![0; deg as usize + 1];
    for (c, i) in f.core.terms() {
        out[(f.shift + f.spacing * i) as usize] = c;
    }
    for &(c, e) in f.noise.terms() {
        out[e as usize] = c;
    }
    Ok(DensePoly::new(out))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EsMulStats {
    /// Sub-products in the interleaved grid.
    pub products: usize,
    /// Output positions written by more than one sub-product.
    pub collisions: u64,
}

/// Nonzero sub-polynomials `(i, f_i)` with `f_i[j] = core[i + stride*j]`.
pub(crate) fn interleave(core: &[u64], stride: usize) -> Vec<(usize, DensePoly)> {
    (0..stride.min(core.len()))
        .map(|i| (i, DensePoly::new(core[i..].iter().step_by(stride).copied().collect())))
        .filter(|(_, p)| !p.is_zero())
        .collect()
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Strides `(s/k, s/l, s)` of the interleaved grid for spacings `k`, `l`.
pub(crate) fn grid_strides(k: u64, l: u64) -> Result<(usize, usize, u64)> {
    let s = (k / gcd(k, l))
        .checked_mul(l)
        .ok_or_else(|| capacity("lcm of spacings overflows"))?;
    Ok(((s / k) as usize, (s / l) as usize, s))
}

/// Writes `(fc o x^k) * (gc o x^l)` into the zeroed `out` by assignment, one
/// dense product per pair of interleaved sub-polynomials. Returns the number
/// of sub-products and of positions written twice.
pub(crate) fn grid_into<R: Ring>(
    ring: &R,
    kernel: &DenseKernel,
    fc: &[u64],
    k: u64,
    gc: &[u64],
    l: u64,
    out: &mut [u64],
) -> Result<EsMulStats> {
    let (a, b, s) = grid_strides(k, l)?;
    let fs = interleave(fc, a);
    let gs = interleave(gc, b);
    let mut written = vec![false; out.len()];
    let mut stats = EsMulStats::default();
    let mut tmp = Vec::new();
    for (i, fi) in &fs {
        for (j, gj) in &gs {
            tmp.clear();
            tmp.resize(fi.len() + gj.len() - 1, 0);
            kernel.mul_into(ring, fi.coeffs(), gj.coeffs(), &mut tmp);
            let base = *i as u64 * k + *j as u64 * l;
            for (p, &c) in tmp.iter().enumerate() {
                let pos = (base + s * p as u64) as usize;
                if written[pos] {
                    stats.collisions += 1;
                    out[pos] = ring.add(out[pos], c);
                } else {
                    written[pos] = true;
                    out[pos] = c;
                }
            }
            stats.products += 1;
        }
    }
    Ok(stats)
}

/// Model cost of the interleaved grid product.
pub(crate) fn grid_cost(fc: &[u64], k: u64, gc: &[u64], l: u64, model: &CostModel) -> f64 {
    let Ok((a, b, _)) = grid_strides(k, l) else {
        return f64::INFINITY;
    };
    let fl: Vec<u64> = interleave(fc, a).iter().map(|(_, p)| p.len() as u64).collect();
    let gl: Vec<u64> = interleave(gc, b).iter().map(|(_, p)| p.len() as u64).collect();
    let mut total = 0.0;
    for &x in &fl {
        for &y in &gl {
            total += model.mult_cost(x, y);
        }
    }
    total
}

/// Model cost of [`es_mul`]: grid products plus the three sparse cross terms.
pub fn es_cost(f: &EqualSpacedPoly, g: &EqualSpacedPoly, model: &CostModel) -> f64 {
    let grid = grid_cost(f.core.coeffs(), f.spacing, g.core.coeffs(), g.spacing, model);
    let (fd, fs) = (f.core.term_count() as f64, f.noise.len() as f64);
    let (gd, gs) = (g.core.term_count() as f64, g.noise.len() as f64);
    grid + fd * gs + gd * fs + fs * gs
}

pub fn es_mul<R: Ring>(ring: &R, f: &EqualSpacedPoly, g: &EqualSpacedPoly, model: &CostModel) -> Result<DensePoly> {
    Ok(es_mul_stats(ring, f, g, model)?.0)
}

/// As [`es_mul`], also reporting grid statistics.
pub fn es_mul_stats<R: Ring>(
    ring: &R,
    f: &EqualSpacedPoly,
    g: &EqualSpacedPoly,
    model: &CostModel,
) -> Result<(DensePoly, EsMulStats)> {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return Ok((DensePoly::zero(), EsMulStats::default()));
    };
    let len = df as u128 + dg as u128 + 1;
    if len > model.cap as u128 {
        return Err(capacity(format!("product length {len} exceeds cap {}", model.cap)));
    }
    let mut out = vec![0; len as usize];
    let mut stats = EsMulStats::default();
    if !f.core.is_zero() && !g.core.is_zero() {
        let base = (f.shift + g.shift) as usize;
        let span = (f.core.len() - 1) * f.spacing as usize + (g.core.len() - 1) * g.spacing as usize + 1;
        let kernel = DenseKernel::for_model(model);
        stats = grid_into(
            ring,
            &kernel,
            f.core.coeffs(),
            f.spacing,
            g.core.coeffs(),
            g.spacing,
            &mut out[base..base + span],
        )?;
    }
    let (fd, gd) = (f.core_sparse(), g.core_sparse());
    for (x, y) in [(&fd, &g.noise), (&gd, &f.noise), (&f.noise, &g.noise)] {
        for &(c, e) in sparse_mul(ring, x, y)?.terms() {
            out[e as usize] = ring.add(out[e as usize], c);
        }
    }
    Ok((DensePoly::new(out), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::ring::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn from_exps(exps: &[u64]) -> DensePoly {
        SparsePoly::new(exps.iter().map(|&e| (1, e)).collect()).unwrap().to_dense(1 << 20).unwrap()
    }

    fn noise_exps(e: &EqualSpacedPoly) -> Vec<u64> {
        e.noise.terms().iter().map(|t| t.1).collect()
    }

    #[test]
    fn bound_values() {
        assert_eq!(k_bound(32, 310), 14);
        assert_eq!(k_bound(5, 20), 20);
        assert_eq!(k_bound(1024, 1024), 1);
    }

    #[test]
    fn trivial_path() {
        let e = es_convert(&from_exps(&[0, 100])).unwrap();
        assert_eq!((e.spacing, e.shift, e.noise.len()), (100, 0, 0));
        let e = es_convert(&from_exps(&[7])).unwrap();
        assert_eq!((e.spacing, e.shift, e.core.coeffs()), (1, 7, &[1u64][..]));
    }

    #[test]
    fn conversion_examples() {
        let e = es_convert(&from_exps(&[0, 5, 10, 15, 20])).unwrap();
        assert_eq!((e.spacing, e.shift, noise_exps(&e)), (10, 0, vec![5, 15]));
        let e = es_convert(&from_exps(&[2, 9, 16, 23, 30])).unwrap();
        assert_eq!((e.spacing, e.shift, noise_exps(&e)), (14, 2, vec![9, 23]));
    }

    #[test]
    fn to_dense_examples() {
        let e = EqualSpacedPoly::new(DensePoly::new(vec![1, 1]), 5, 3, SparsePoly::zero()).unwrap();
        assert_eq!(es_to_dense(&e, 100).unwrap(), from_exps(&[3, 8]));
        let core = DensePoly::new(vec![4, 0, 5]);
        let e = EqualSpacedPoly::new(core.clone(), 1, 0, SparsePoly::zero()).unwrap();
        assert_eq!(es_to_dense(&e, 100).unwrap(), core);
    }

    #[test]
    fn multiplication_examples() {
        let ring = PrimeField::new(97).unwrap();
        let model = CostModel::default();
        let f = EqualSpacedPoly::new(DensePoly::new(vec![1, 1, 1]), 2, 0, SparsePoly::zero()).unwrap();
        let g = es_convert(&from_exps(&[0, 3])).unwrap();
        assert_eq!(g.spacing, 3);
        let (h, stats) = es_mul_stats(&ring, &f, &g, &model).unwrap();
        assert_eq!(h, from_exps(&[0, 2, 3, 4, 5, 7]));
        assert_eq!((stats.products, stats.collisions), (6, 0));

        let f = es_convert(&from_exps(&[0, 2])).unwrap();
        let (h, stats) = es_mul_stats(&ring, &f, &f, &model).unwrap();
        assert_eq!(h.coeffs(), &[1, 0, 2, 0, 1]);
        assert_eq!(stats.products, 1);

        let one = es_convert(&DensePoly::one()).unwrap();
        let f = es_convert(&from_exps(&[1, 4, 9])).unwrap();
        assert_eq!(es_mul(&ring, &f, &one, &model).unwrap(), from_exps(&[1, 4, 9]));
    }

    #[test]
    fn interleave_reconstructs() {
        let core = [1u64, 2, 3, 4, 5, 6, 7];
        for stride in 1..9 {
            let mut back = vec![0; core.len()];
            for (i, p) in interleave(&core, stride) {
                for (j, &c) in p.coeffs().iter().enumerate() {
                    back[i + stride * j] = c;
                }
            }
            assert_eq!(back, core);
        }
    }

    #[test]
    fn random_products_match_oracle() {
        let ring = PrimeField::new(101).unwrap();
        let model = CostModel::karatsuba().with_threshold(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let make = |rng: &mut ChaCha8Rng| {
                let k = rng.gen_range(1..9u64);
                let d = rng.gen_range(0..20u64);
                let n = rng.gen_range(1..40u64);
                let mut c: Vec<u64> = (0..n).map(|_| rng.gen_range(0..101)).collect();
                c[0] = 1;
                let mut terms: Vec<(u64, u64)> =
                    c.iter().enumerate().filter(|t| *t.1 != 0).map(|(i, &v)| (v, d + k * i as u64)).collect();
                for _ in 0..rng.gen_range(0..4) {
                    terms.push((rng.gen_range(1..101), rng.gen_range(0..d + k * n + 5)));
                }
                terms.sort_by_key(|t| t.1);
                terms.dedup_by_key(|t| t.1);
                SparsePoly::new(terms).unwrap().to_dense(1 << 20).unwrap()
            };
            let (f, g) = (make(&mut rng), make(&mut rng));
            let (ef, eg) = (es_convert(&f).unwrap(), es_convert(&g).unwrap());
            assert_eq!(es_to_dense(&ef, 1 << 20).unwrap(), f);
            let (h, stats) = es_mul_stats(&ring, &ef, &eg, &model).unwrap();
            assert_eq!(stats.collisions, 0);
            let want = oracle::expand(&ring, f.terms(), g.terms());
            assert_eq!(h.to_sparse(), want);
        }
    }
}
