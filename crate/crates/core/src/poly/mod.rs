//! Dense and sparse univariate polynomials and the baseline multipliers.

mod dense;
mod kronecker;
mod sparse;
pub mod text;

pub use dense::{dense_mul, dense_mul_count, DenseKernel};
pub use kronecker::{kronecker_pack, kronecker_unpack, MultiTerm};
pub use sparse::sparse_mul;

use crate::error::{argument, capacity, Result};

/// Coefficient array, index = exponent. Empty means zero; otherwise the last
/// coefficient is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DensePoly {
    coeffs: Vec<u64>,
}

impl DensePoly {
    /// Builds a polynomial, trimming trailing zeros. Coefficients must
    /// already be canonical residues for the ring they will be used with.
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        DensePoly { coeffs }
    }

    pub fn zero() -> Self {
        DensePoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        DensePoly { coeffs: vec![1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of coefficients (`degree + 1`, or 0 for zero).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (c, e as u64))
    }

    pub fn to_sparse(&self) -> SparsePoly {
        SparsePoly {
            terms: self.terms().collect(),
        }
    }
}

/// Nonzero `(coefficient, exponent)` terms with strictly increasing exponents.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: Vec<(u64, u64)>,
}

impl SparsePoly {
    pub fn new(terms: Vec<(u64, u64)>) -> Result<Self> {
        if terms.iter().any(|&(c, _)| c == 0) {
            return Err(argument("sparse terms must have nonzero coefficients"));
        }
        if terms.windows(2).any(|w| w[0].1 >= w[1].1) {
            return Err(argument("sparse exponents must be strictly increasing"));
        }
        Ok(SparsePoly { terms })
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(u64, u64)>) -> Self {
        debug_assert!(terms.iter().all(|&(c, _)| c != 0));
        debug_assert!(terms.windows(2).all(|w| w[0].1 < w[1].1));
        SparsePoly { terms }
    }

    pub fn zero() -> Self {
        SparsePoly { terms: Vec::new() }
    }

    pub fn monomial(coeff: u64, exp: u64) -> Self {
        if coeff == 0 {
            Self::zero()
        } else {
            SparsePoly {
                terms: vec![(coeff, exp)],
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(u64, u64)> {
        self.terms
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.last().map(|&(_, e)| e)
    }

    /// Fails when the dense length would exceed `cap`.
    pub fn to_dense(&self, cap: u64) -> Result<DensePoly> {
        let Some(deg) = self.degree() else {
            return Ok(DensePoly::zero());
        };
        if deg >= cap {
            return Err(capacity(format!("dense length {} exceeds cap {cap}", deg as u128 + 1)));
        }
        let mut coeffs = vec![0; deg as usize + 1];
        for &(c, e) in &self.terms {
            coeffs[e as usize] = c;
        }
        Ok(DensePoly { coeffs })
    }
}

/// A polynomial in whichever representation it arrived in.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Poly {
    Dense(DensePoly),
    Sparse(SparsePoly),
}

impl Poly {
    pub fn is_zero(&self) -> bool {
        match self {
            Poly::Dense(d) => d.is_zero(),
            Poly::Sparse(s) => s.is_zero(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Poly::Dense(_))
    }

    pub fn term_count(&self) -> usize {
        match self {
            Poly::Dense(d) => d.term_count(),
            Poly::Sparse(s) => s.len(),
        }
    }

    pub fn degree(&self) -> Option<u64> {
        match self {
            Poly::Dense(d) => d.degree().map(|d| d as u64),
            Poly::Sparse(s) => s.degree(),
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Terms<'_> {
        match self {
            Poly::Dense(d) => Terms::Dense(d.coeffs.iter().enumerate()),
            Poly::Sparse(s) => Terms::Sparse(s.terms.iter()),
        }
    }

    pub fn to_sparse(&self) -> SparsePoly {
        match self {
            Poly::Dense(d) => d.to_sparse(),
            Poly::Sparse(s) => s.clone(),
        }
    }

    pub fn to_dense(&self, cap: u64) -> Result<DensePoly> {
        match self {
            Poly::Dense(d) => {
                if d.len() as u64 > cap {
                    return Err(capacity(format!("dense length {} exceeds cap {cap}", d.len())));
                }
                Ok(d.clone())
            }
            Poly::Sparse(s) => s.to_dense(cap),
        }
    }
}

impl From<DensePoly> for Poly {
    fn from(d: DensePoly) -> Self {
        Poly::Dense(d)
    }
}

impl From<SparsePoly> for Poly {
    fn from(s: SparsePoly) -> Self {
        Poly::Sparse(s)
    }
}

pub enum Terms<'a> {
    Dense(std::iter::Enumerate<std::slice::Iter<'a, u64>>),
    Sparse(std::slice::Iter<'a, (u64, u64)>),
}

impl Iterator for Terms<'_> {
    type Item = (u64, u64);

    fn next(&mut self) -> Option<(u64, u64)> {
        match self {
            Terms::Dense(it) => it.find(|(_, &c)| c != 0).map(|(e, &c)| (c, e as u64)),
            Terms::Sparse(it) => it.next().copied(),
        }
    }
}
