//! The multiplication-time ratio `delta(n) = M(n)/n` that drives every
//! conversion decision.
//!
//! All arguments are lengths (coefficient counts). Costs are `f64`; a length
//! beyond the model's cap maps to [`INFINITE`], which compares above every
//! finite cost and absorbs sums and products.

use std::fmt;
use std::str::FromStr;

use crate::error::{argument, Error, Result};

/// Saturating "cannot be done in memory" cost.
pub const INFINITE: f64 = f64::INFINITY;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Schoolbook,
    Karatsuba,
    /// Behaves as if a quasi-linear kernel existed; never executed.
    FftLike,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Schoolbook => "schoolbook",
            ModelKind::Karatsuba => "karatsuba",
            ModelKind::FftLike => "fftlike",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "schoolbook" => Ok(ModelKind::Schoolbook),
            "karatsuba" => Ok(ModelKind::Karatsuba),
            "fftlike" => Ok(ModelKind::FftLike),
            other => Err(argument(format!("unknown cost model `{other}`"))),
        }
    }
}

pub const DEFAULT_THRESHOLD: u64 = 32;
pub const DEFAULT_CAP: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    pub kind: ModelKind,
    /// Dense-kernel crossover: schoolbook at or below, Karatsuba above.
    pub threshold: u64,
    /// Largest representable dense length.
    pub cap: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::new(ModelKind::Karatsuba)
    }
}

impl CostModel {
    pub fn new(kind: ModelKind) -> Self {
        CostModel {
            kind,
            threshold: DEFAULT_THRESHOLD,
            cap: DEFAULT_CAP,
        }
    }

    pub fn schoolbook() -> Self {
        Self::new(ModelKind::Schoolbook)
    }

    pub fn karatsuba() -> Self {
        Self::new(ModelKind::Karatsuba)
    }

    pub fn fftlike() -> Self {
        Self::new(ModelKind::FftLike)
    }

    pub fn with_threshold(mut self, threshold: u64) -> Result<Self> {
        if threshold == 0 {
            return Err(argument("threshold must be positive"));
        }
        self.threshold = threshold;
        Ok(self)
    }

    pub fn with_cap(mut self, cap: u64) -> Result<Self> {
        if cap == 0 {
            return Err(argument("cap must be positive"));
        }
        self.cap = cap;
        Ok(self)
    }

    /// `delta(n)`; panics on `n == 0` (see [`CostModel::try_delta`]).
    #[inline]
    pub fn delta(&self, n: u64) -> f64 {
        assert!(n >= 1, "delta is defined for n >= 1");
        if n > self.cap {
            return INFINITE;
        }
        match self.kind {
            ModelKind::Schoolbook => n as f64,
            ModelKind::Karatsuba => {
                if n <= self.threshold {
                    n as f64
                } else {
                    let t = self.threshold as f64;
                    t * (n as f64 / t).powf(3f64.log2() - 1.0)
                }
            }
            ModelKind::FftLike => 1.0 + (n as f64).log2(),
        }
    }

    pub fn try_delta(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(argument("delta(0) is undefined"));
        }
        Ok(self.delta(n))
    }

    /// Blocked dense multiplication cost of operands with `n` and `m`
    /// coefficients: `max(n,m) * delta(min(n,m))`.
    #[inline]
    pub fn mult_cost(&self, n: u64, m: u64) -> f64 {
        let (lo, hi) = if n <= m { (n, m) } else { (m, n) };
        if hi > self.cap {
            return INFINITE;
        }
        hi as f64 * self.delta(lo)
    }

    pub fn try_mult_cost(&self, n: u64, m: u64) -> Result<f64> {
        if n == 0 || m == 0 {
            return Err(argument("operand lengths must be positive"));
        }
        Ok(self.mult_cost(n, m))
    }

    /// Exhaustively checks monotonicity and the concavity axiom
    /// `delta(a+d) - delta(a) >= delta(b+d) - delta(b)` for `a < b`,
    /// `b + d <= limit`.
    pub fn validate(&self, limit: u64) -> ModelReport {
        validate_fn(|n| self.delta(n), limit.min(self.cap))
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (threshold {}, cap {})", self.kind, self.threshold, self.cap)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Violation {
    /// `delta(1) != 1`.
    Normalization(f64),
    /// `delta(n+1) < delta(n)`.
    Decreasing { n: u64 },
    /// Concavity fails at `(a, b, d)`.
    Concavity { a: u64, b: u64, d: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelReport {
    pub limit: u64,
    pub violation: Option<Violation>,
}

impl ModelReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Validation for an arbitrary `delta` function, so deliberately broken
/// models can be checked too.
pub fn validate_fn(delta: impl Fn(u64) -> f64, limit: u64) -> ModelReport {
    let table: Vec<f64> = (0..=limit).map(|n| if n == 0 { 0.0 } else { delta(n) }).collect();
    let tol = |x: f64| 1e-9 * x.abs().max(1.0);
    let fail = |v| ModelReport {
        limit,
        violation: Some(v),
    };
    if limit >= 1 && (table[1] - 1.0).abs() > tol(1.0) {
        return fail(Violation::Normalization(table[1]));
    }
    for n in 1..limit {
        if table[n as usize + 1] + tol(table[n as usize]) < table[n as usize] {
            return fail(Violation::Decreasing { n });
        }
    }
    for a in 1..limit {
        for b in a + 1..limit {
            for d in 1..=limit - b {
                let lhs = table[(a + d) as usize] - table[a as usize];
                let rhs = table[(b + d) as usize] - table[b as usize];
                if lhs + tol(table[(b + d) as usize]) < rhs {
                    return fail(Violation::Concavity { a, b, d });
                }
            }
        }
    }
    ModelReport {
        limit,
        violation: None,
    }
}
