//! Seeded random instances with controllable structure.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::DEFAULT_CAP;
use crate::error::{argument, Error, Result};
use crate::poly::{Poly, SparsePoly};
use crate::ring::PrimeField;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Every coefficient up to the degree bound drawn at random.
    RandomDense,
    /// `t` distinct exponents up to the degree bound.
    RandomSparse { t: u64 },
    /// `chunks` dense runs of `len` nonzero terms separated by `gap` zeros.
    Chunky { chunks: u64, len: u64, gap: u64 },
    /// `core` terms on `d + k*i` plus `noise` terms off that class.
    Spaced { k: u64, core: u64, noise: u64 },
    /// Chunky runs whose terms are spaced by `k`, plus stray terms.
    Combined { chunks: u64, len: u64, gap: u64, k: u64, noise: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Repr {
    Dense,
    Sparse,
}

impl FromStr for Repr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Repr::Dense),
            "sparse" => Ok(Repr::Sparse),
            _ => Err(argument(format!("unknown representation {s:?}"))),
        }
    }
}

impl fmt::Display for Repr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Repr::Dense => "dense",
            Repr::Sparse => "sparse",
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::RandomDense => write!(f, "random-dense"),
            Family::RandomSparse { t } => write!(f, "random-sparse:t={t}"),
            Family::Chunky { chunks, len, gap } => write!(f, "chunky:chunks={chunks},len={len},gap={gap}"),
            Family::Spaced { k, core, noise } => write!(f, "spaced:k={k},core={core},noise={noise}"),
            Family::Combined { chunks, len, gap, k, noise } => {
                write!(f, "combined:chunks={chunks},len={len},gap={gap},k={k},noise={noise}")
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `name` or `name:key=value,...`, e.g. `chunky:chunks=4,len=8,gap=100`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s.split_once(':').unwrap_or((s, ""));
        let mut kv = Vec::new();
        for item in params.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| argument(format!("expected key=value, got {item:?}")))?;
            let v: u64 = v.parse().map_err(|_| argument(format!("bad number in {item:?}")))?;
            kv.push((k.trim(), v));
        }
        let take = |key: &str| {
            kv.iter()
                .find(|p| p.0 == key)
                .map(|p| p.1)
                .ok_or_else(|| argument(format!("family {name} needs {key}=")))
        };
        let family = match name {
            "random-dense" => Family::RandomDense,
            "random-sparse" => Family::RandomSparse { t: take("t")? },
            "chunky" => Family::Chunky {
                chunks: take("chunks")?,
                len: take("len")?,
                gap: take("gap")?,
            },
            "spaced" => Family::Spaced {
                k: take("k")?,
                core: take("core")?,
                noise: take("noise")?,
            },
            "combined" => Family::Combined {
                chunks: take("chunks")?,
                len: take("len")?,
                gap: take("gap")?,
                k: take("k")?,
                noise: take("noise")?,
            },
            _ => return Err(argument(format!("unknown family {name:?}"))),
        };
        family.check()?;
        Ok(family)
    }
}

impl Family {
    fn check(&self) -> Result<()> {
        let ok = match *self {
            Family::RandomDense => true,
            Family::RandomSparse { t } => t >= 1,
            Family::Chunky { chunks, len, gap } => chunks >= 1 && len >= 1 && gap >= 1,
            Family::Spaced { k, core, .. } => k >= 1 && core >= 1,
            Family::Combined { chunks, len, gap, k, .. } => chunks >= 1 && len >= 1 && gap >= 1 && k >= 1,
        };
        if ok {
            Ok(())
        } else {
            Err(argument(format!("degenerate parameters in {self}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InstanceSpec {
    pub seed: u64,
    /// Degree bound for the random families; structured families derive
    /// their degree from their parameters.
    pub degree: u64,
    pub family: Family,
    pub modulus: u64,
    pub repr: Repr,
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<(PrimeField, Poly)> {
        self.family.check()?;
        let field = PrimeField::new(self.modulus)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let p = self.modulus;
        let coeff = |rng: &mut ChaCha8Rng| rng.gen_range(1..p);
        let mut terms: Vec<(u64, u64)> = Vec::new();
        match self.family {
            Family::RandomDense => {
                for e in 0..=self.degree {
                    let c = if e == self.degree { coeff(&mut rng) } else { rng.gen_range(0..p) };
                    if c != 0 {
                        terms.push((c, e));
                    }
                }
            }
            Family::RandomSparse { t } => {
                let t = t.min(self.degree.saturating_add(1));
                let mut exps = BTreeSet::new();
                while (exps.len() as u64) < t {
                    exps.insert(rng.gen_range(0..=self.degree));
                }
                terms.extend(exps.into_iter().map(|e| (coeff(&mut rng), e)));
            }
            Family::Chunky { chunks, len, gap } => {
                for i in 0..chunks {
                    let at = i * (len + gap);
                    terms.extend((0..len).map(|j| (coeff(&mut rng), at + j)));
                }
            }
            Family::Spaced { k, core, noise } => {
                let d = rng.gen_range(0..k);
                let top = d + k * (core - 1);
                terms.extend((0..core).map(|i| (coeff(&mut rng), d + k * i)));
                add_noise(&mut rng, &mut terms, noise, top, |e| e % k == d % k, p);
            }
            Family::Combined { chunks, len, gap, k, noise } => {
                let span = k * (len - 1) + 1;
                let d = rng.gen_range(0..k);
                for i in 0..chunks {
                    let at = d + i * (span + gap);
                    terms.extend((0..len).map(|j| (coeff(&mut rng), at + k * j)));
                }
                let top = terms.last().unwrap().1;
                let on_class: BTreeSet<u64> = terms.iter().map(|t| t.1).collect();
                add_noise(&mut rng, &mut terms, noise, top, |e| on_class.contains(&e) || e % k == d % k, p);
            }
        }
        terms.sort_unstable_by_key(|t| t.1);
        let poly = SparsePoly::new(terms)?;
        let poly = match self.repr {
            Repr::Sparse => Poly::Sparse(poly),
            Repr::Dense => Poly::Dense(poly.to_dense(DEFAULT_CAP)?),
        };
        Ok((field, poly))
    }
}

/// Adds up to `count` distinct terms in `0..=top` rejected by `taken`.
fn add_noise(
    rng: &mut ChaCha8Rng,
    terms: &mut Vec<(u64, u64)>,
    count: u64,
    top: u64,
    taken: impl Fn(u64) -> bool,
    p: u64,
) {
    let free = (0..=top).filter(|&e| !taken(e)).count() as u64;
    let mut chosen = BTreeSet::new();
    while (chosen.len() as u64) < count.min(free) {
        let e = rng.gen_range(0..=top);
        if !taken(e) {
            chosen.insert(e);
        }
    }
    terms.extend(chosen.into_iter().map(|e| (rng.gen_range(1..p), e)));
}
