use super::SparsePoly;
use crate::error::{argument, capacity, Result};
use crate::ring::Ring;

/// One term of a multivariate polynomial: coefficient and exponent vector.
pub type MultiTerm = (u64, Vec<u64>);

fn checked_base(bound: u64) -> Result<u64> {
    if bound == 0 {
        return Err(argument("degree bound must be positive"));
    }
    bound.checked_mul(2).ok_or_else(|| capacity("packing base overflows u64"))
}

/// Packs an `nvars`-variate polynomial with all per-variable degrees `< bound`
/// into one variable via `x_i = y^((2*bound)^(i-1))`.
///
/// The doubled base leaves room for products of two packed operands, so
/// `unpack(pack(f) * pack(g)) == f * g`. Repeated exponent vectors are summed.
pub fn kronecker_pack<R: Ring>(ring: &R, nvars: usize, bound: u64, terms: &[MultiTerm]) -> Result<SparsePoly> {
    let base = checked_base(bound)?;
    let mut packed = Vec::with_capacity(terms.len());
    for (c, exps) in terms {
        if exps.len() != nvars {
            return Err(argument(format!("expected {nvars} exponents, got {}", exps.len())));
        }
        let mut e: u64 = 0;
        for &x in exps.iter().rev() {
            if x >= bound {
                return Err(argument(format!("exponent {x} violates degree bound {bound}")));
            }
            e = e
                .checked_mul(base)
                .and_then(|e| e.checked_add(x))
                .ok_or_else(|| capacity("packed exponent overflows u64"))?;
        }
        packed.push((ring.reduce(*c), e));
    }
    packed.sort_unstable_by_key(|&(_, e)| e);
    let mut out: Vec<(u64, u64)> = Vec::with_capacity(packed.len());
    for (c, e) in packed {
        match out.last_mut() {
            Some(last) if last.1 == e => last.0 = ring.add(last.0, c),
            _ => out.push((c, e)),
        }
    }
    out.retain(|&(c, _)| c != 0);
    Ok(SparsePoly::from_sorted_unchecked(out))
}

/// Inverse of [`kronecker_pack`]: splits each exponent by repeated
/// division by `2*bound`.
pub fn kronecker_unpack(nvars: usize, bound: u64, f: &SparsePoly) -> Result<Vec<MultiTerm>> {
    let base = checked_base(bound)?;
    f.terms()
        .iter()
        .map(|&(c, mut e)| {
            let mut exps = Vec::with_capacity(nvars);
            for _ in 0..nvars {
                exps.push(e % base);
                e /= base;
            }
            if e != 0 {
                return Err(argument(format!("exponent does not fit {nvars} variables of base {base}")));
            }
            Ok((c, exps))
        })
        .collect()
}
