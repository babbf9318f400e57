//! Strategy selection and execution with operation-count reporting.

use std::fmt;
use std::str::FromStr;

use crate::chunky::{chunky_mul, chunky_mul_dense, PlanChoice};
use crate::combined::{combined_mul, combined_plan, CombinedPlan, DEFAULT_SCAN_BUDGET};
use crate::cost::CostModel;
use crate::error::{argument, Result};
use crate::poly::{dense_mul, sparse_mul, DensePoly, Poly, SparsePoly};
use crate::ring::{PrimeField, Ring};
use crate::spaced::{es_convert, es_cost, es_mul_stats, EqualSpacedPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Dense,
    Sparse,
    Chunky,
    EqSpace,
    Combined,
    Auto,
}

impl Strategy {
    /// Concrete strategies in tie-breaking order.
    pub const CANDIDATES: [Strategy; 5] = [
        Strategy::Dense,
        Strategy::Sparse,
        Strategy::Chunky,
        Strategy::EqSpace,
        Strategy::Combined,
    ];

    pub const ALL: [Strategy; 6] = [
        Strategy::Dense,
        Strategy::Sparse,
        Strategy::Chunky,
        Strategy::EqSpace,
        Strategy::Combined,
        Strategy::Auto,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Dense => "dense",
            Strategy::Sparse => "sparse",
            Strategy::Chunky => "chunky",
            Strategy::EqSpace => "eqspace",
            Strategy::Combined => "combined",
            Strategy::Auto => "auto",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| argument(format!("unknown strategy {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiplyReport {
    pub requested: Strategy,
    /// Strategy actually executed.
    pub strategy: Strategy,
    /// Model cost of every concrete strategy, in [`Strategy::CANDIDATES`]
    /// order. Infinite when the strategy does not apply to the inputs.
    pub costs: Vec<(Strategy, f64)>,
    pub chunk_size: Option<u64>,
    pub chunking: Option<(PlanChoice, PlanChoice)>,
    /// Shared spacings of the combined representation.
    pub spacings: Option<(u64, u64)>,
    /// Noise term counts of the combined representation.
    pub noise: Option<(usize, usize)>,
    /// Whole-polynomial spacings when both inputs are dense.
    pub es_spacings: Option<(u64, u64)>,
    pub collisions: u64,
    pub mul_count: u64,
    pub add_count: u64,
    pub output_dense: bool,
    pub trivial: bool,
}

impl MultiplyReport {
    pub fn cost_of(&self, s: Strategy) -> f64 {
        self.costs.iter().find(|c| c.0 == s).map_or(f64::INFINITY, |c| c.1)
    }

    /// Single-line `key=value` record.
    pub fn render(&self) -> String {
        let pair = |p: Option<(u64, u64)>| p.map_or("-".to_string(), |(a, b)| format!("{a},{b}"));
        let mut out = format!("requested={} strategy={}", self.requested, self.strategy);
        for (s, c) in &self.costs {
            out += &format!(" cost.{s}={c}");
        }
        out += &format!(
            " chunk_size={} chunking={} spacing={} noise={} es_spacing={} collisions={} mul_count={} add_count={} output={}",
            self.chunk_size.map_or("-".to_string(), |k| k.to_string()),
            self.chunking.map_or("-".to_string(), |(a, b)| format!("{},{}", a.name(), b.name())),
            pair(self.spacings),
            self.noise.map_or("-".to_string(), |(a, b)| format!("{a},{b}")),
            pair(self.es_spacings),
            self.collisions,
            self.mul_count,
            self.add_count,
            if self.output_dense { "dense" } else { "sparse" },
        );
        out
    }

    fn trivial(requested: Strategy, output_dense: bool) -> Self {
        MultiplyReport {
            requested,
            strategy: requested,
            costs: Vec::new(),
            chunk_size: None,
            chunking: None,
            spacings: None,
            noise: None,
            es_spacings: None,
            collisions: 0,
            mul_count: 0,
            add_count: 0,
            output_dense,
            trivial: true,
        }
    }
}

/// Human-readable summary of a report.
pub fn explain(report: &MultiplyReport) -> String {
    if report.trivial {
        return "trivial: zero operand".to_string();
    }
    let mut out = format!("executed {} (requested {})\n", report.strategy, report.requested);
    out += "model costs:\n";
    for (s, c) in &report.costs {
        let mark = if *s == report.strategy { " <" } else { "" };
        if c.is_finite() {
            out += &format!("  {:<9}{c:.1}{mark}\n", s.name());
        } else {
            out += &format!("  {:<9}n/a{mark}\n", s.name());
        }
    }
    if let Some(k) = report.chunk_size {
        out += &format!("chunk size {k}");
        if let Some((a, b)) = report.chunking {
            out += &format!(", chunkings {} / {}", a.name(), b.name());
        }
        out += "\n";
    }
    if let (Some((k, l)), Some((nf, ng))) = (report.spacings, report.noise) {
        out += &format!("combined spacings {k} / {l}, noise terms {nf} / {ng}\n");
    }
    if let Some((k, l)) = report.es_spacings {
        out += &format!("equal spacings {k} / {l}\n");
    }
    out += &format!(
        "ring operations: {} multiplications, {} additions\n",
        report.mul_count, report.add_count
    );
    out += &format!("output {}\n", if report.output_dense { "dense" } else { "sparse" });
    out
}

/// Everything needed to cost and run each strategy.
struct Prepared {
    combined: CombinedPlan,
    spaced: Option<(EqualSpacedPoly, EqualSpacedPoly)>,
    costs: Vec<(Strategy, f64)>,
}

fn dense_cost(f: &Poly, g: &Poly, model: &CostModel) -> f64 {
    let (n, m) = (f.degree().unwrap() + 1, g.degree().unwrap() + 1);
    if n.checked_add(m).is_none_or(|s| s - 1 > model.cap) {
        return f64::INFINITY;
    }
    model.mult_cost(n, m)
}

fn prepare(f: &Poly, g: &Poly, model: &CostModel) -> Result<Prepared> {
    let combined = combined_plan(f, g, model, DEFAULT_SCAN_BUDGET)?;
    let spaced = match (f, g) {
        (Poly::Dense(a), Poly::Dense(b)) => Some((es_convert(a)?, es_convert(b)?)),
        _ => None,
    };
    let costs = vec![
        (Strategy::Dense, dense_cost(f, g, model)),
        (Strategy::Sparse, f.term_count() as f64 * g.term_count() as f64),
        (Strategy::Chunky, combined.chunky.cost),
        (Strategy::EqSpace, spaced.as_ref().map_or(f64::INFINITY, |(a, b)| es_cost(a, b, model))),
        (Strategy::Combined, combined.cost),
    ];
    Ok(Prepared { combined, spaced, costs })
}

/// Multiplies `f` by `g` over `field` with the requested strategy.
///
/// The product is dense when both inputs are dense and sparse otherwise.
/// `Auto` runs the strategy of least model cost; equal spacing is only a
/// candidate for two dense inputs.
pub fn multiply(
    field: &PrimeField,
    f: &Poly,
    g: &Poly,
    strategy: Strategy,
    model: &CostModel,
) -> Result<(Poly, MultiplyReport)> {
    let output_dense = f.is_dense() && g.is_dense();
    if f.is_zero() || g.is_zero() {
        let zero = if output_dense { Poly::Dense(DensePoly::zero()) } else { Poly::Sparse(SparsePoly::zero()) };
        return Ok((zero, MultiplyReport::trivial(strategy, output_dense)));
    }
    let prep = prepare(f, g, model)?;
    let chosen = match strategy {
        Strategy::Auto => {
            let mut best = (Strategy::Dense, f64::INFINITY);
            for &(s, c) in &prep.costs {
                if c < best.1 {
                    best = (s, c);
                }
            }
            if best.1.is_infinite() {
                Strategy::Sparse
            } else {
                best.0
            }
        }
        s => s,
    };

    let ring = field.counted();
    let mut report = MultiplyReport {
        requested: strategy,
        strategy: chosen,
        costs: prep.costs.clone(),
        chunk_size: Some(prep.combined.chunky.k),
        chunking: Some(prep.combined.chunky.choice),
        spacings: Some((prep.combined.f.spacing, prep.combined.g.spacing)),
        noise: Some((prep.combined.f.noise.len(), prep.combined.g.noise.len())),
        es_spacings: prep.spaced.as_ref().map(|(a, b)| (a.spacing, b.spacing)),
        collisions: 0,
        mul_count: 0,
        add_count: 0,
        output_dense,
        trivial: false,
    };

    let product = match chosen {
        Strategy::Dense => {
            let (a, b) = (f.to_dense(model.cap)?, g.to_dense(model.cap)?);
            shape(Poly::Dense(dense_mul(&ring, &a, &b, model)?), output_dense)
        }
        Strategy::Sparse => shape(Poly::Sparse(sparse_mul(&ring, &f.to_sparse(), &g.to_sparse())?), output_dense),
        Strategy::Chunky => {
            let plan = &prep.combined.chunky;
            if output_dense {
                Poly::Dense(chunky_mul_dense(&ring, &plan.f, &plan.g, model)?.0)
            } else {
                Poly::Sparse(chunky_mul(&ring, &plan.f, &plan.g, model)?.0.to_sparse())
            }
        }
        Strategy::EqSpace => {
            let (a, b) = match prep.spaced {
                Some(pair) => pair,
                None => (es_convert(&f.to_dense(model.cap)?)?, es_convert(&g.to_dense(model.cap)?)?),
            };
            report.es_spacings = Some((a.spacing, b.spacing));
            let (h, stats) = es_mul_stats(&ring, &a, &b, model)?;
            report.collisions = stats.collisions;
            shape(Poly::Dense(h), output_dense)
        }
        Strategy::Combined => {
            let plan = &prep.combined;
            let (h, stats) = combined_mul(&ring, &plan.f, &plan.g, model, output_dense)?;
            report.collisions = stats.collisions;
            h
        }
        Strategy::Auto => unreachable!("auto resolves to a concrete strategy"),
    };
    report.mul_count = ring.mul_count();
    report.add_count = ring.add_count();
    debug_assert_eq!(ring.modulus(), field.modulus());
    Ok((product, report))
}

fn shape(p: Poly, dense: bool) -> Poly {
    match (p, dense) {
        (Poly::Dense(d), false) => Poly::Sparse(d.to_sparse()),
        (Poly::Sparse(s), true) => {
            Poly::Dense(s.to_dense(u64::MAX).expect("dense inputs bound the product degree"))
        }
        (p, _) => p,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn sparse(terms: &[(u64, u64)]) -> Poly {
        Poly::Sparse(SparsePoly::new(terms.to_vec()).unwrap())
    }

    #[test]
    fn zero_operand_is_trivial() {
        let field = PrimeField::new(97).unwrap();
        let f = sparse(&[(1, 0), (1, 5)]);
        let (h, r) = multiply(&field, &f, &Poly::Sparse(SparsePoly::zero()), Strategy::Auto, &CostModel::default()).unwrap();
        assert!(h.is_zero());
        assert_eq!(explain(&r), "trivial: zero operand");
    }

    #[test]
    fn far_apart_terms_choose_sparse() {
        let field = PrimeField::new(97).unwrap();
        let f = sparse(&[(1, 0), (1, 100)]);
        let (h, r) = multiply(&field, &f, &f, Strategy::Auto, &CostModel::default()).unwrap();
        assert_eq!(h.to_sparse().terms(), &[(1, 0), (2, 100), (1, 200)]);
        assert_eq!(r.strategy, Strategy::Sparse);
        assert_eq!(r.chunk_size, Some(1));
    }

    #[test]
    fn strategies_agree() {
        let field = PrimeField::new(9973).unwrap();
        let model = CostModel::karatsuba().with_threshold(8).unwrap();
        let f = Poly::Dense(DensePoly::new((0..200).map(|i| if i % 3 == 0 { i + 1 } else { 0 }).collect()));
        let g = Poly::Dense(DensePoly::new((0..90).map(|i| (i * i) % 7).collect()));
        let want = oracle::expand(&field, f.terms(), g.terms());
        for s in Strategy::ALL {
            let (h, r) = multiply(&field, &f, &g, s, &model).unwrap();
            assert!(h.is_dense());
            assert_eq!(h.to_sparse(), want, "{s}");
            assert_eq!(r.collisions, 0);
            assert!(r.mul_count > 0);
        }
    }

    #[test]
    fn report_is_deterministic() {
        let field = PrimeField::new(97).unwrap();
        let f = sparse(&[(3, 0), (1, 1), (5, 40)]);
        let (_, a) = multiply(&field, &f, &f, Strategy::Auto, &CostModel::default()).unwrap();
        let (_, b) = multiply(&field, &f, &f, Strategy::Auto, &CostModel::default()).unwrap();
        assert_eq!(a.render(), b.render());
        assert_eq!(explain(&a), explain(&b));
        assert!(a.render().contains("cost.dense="));
        assert!(explain(&a).contains("dense"));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("fast".parse::<Strategy>().is_err());
    }
}
