//! Adaptive univariate polynomial multiplication over prime fields.
//!
//! Besides the classical dense and sparse products, polynomials can be
//! multiplied in a chunky representation (sparse list of dense blocks), an
//! equal-spaced representation (dense polynomial in `x^k` plus a few stray
//! terms), or a combination of both. [`multiply`] picks among them by model
//! cost.

pub mod adaptive;
pub mod chunky;
pub mod combined;
pub mod cost;
pub mod error;
pub mod instance;
pub mod oracle;
pub mod poly;
pub mod ring;
pub mod spaced;

pub use adaptive::{explain, multiply, MultiplyReport, Strategy};
pub use cost::{CostModel, ModelKind};
pub use error::{Error, Result};
pub use poly::{DensePoly, Poly, SparsePoly};
pub use ring::{CountedField, PrimeField, Ring};
