//! The chunky pipeline: pick `k`, convert both operands, and fall back to a
//! trivial chunking whenever that is cheaper under the model.

use super::{chunky_convert, optimal_chunk_size, pair_cost, ChunkyPoly};
use crate::cost::CostModel;
use crate::error::{argument, Result};
use crate::poly::Poly;

/// Which chunking each operand ended up with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanChoice {
    /// Optimal conversion for the selected chunk size.
    Converted,
    /// One chunk from the lowest to the highest term.
    Single,
    /// Maximal runs of nonzero coefficients.
    Blocks,
}

impl PlanChoice {
    pub fn name(self) -> &'static str {
        match self {
            PlanChoice::Converted => "converted",
            PlanChoice::Single => "single",
            PlanChoice::Blocks => "blocks",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ChunkyPlan {
    pub k: u64,
    pub f: ChunkyPoly,
    pub g: ChunkyPoly,
    pub choice: (PlanChoice, PlanChoice),
    /// Model cost of multiplying `f` by `g` chunk pair by chunk pair.
    pub cost: f64,
}

fn candidates(f: &Poly, k: u64, model: &CostModel) -> Result<Vec<(PlanChoice, ChunkyPoly)>> {
    let mut out = vec![(PlanChoice::Converted, chunky_convert(f, k, model)?)];
    if let Ok(single) = ChunkyPoly::single(f, model.cap) {
        out.push((PlanChoice::Single, single));
    }
    out.push((PlanChoice::Blocks, ChunkyPoly::from_blocks(f)?));
    Ok(out)
}

/// Runs chunk-size selection and conversion, then keeps the cheapest of the
/// converted, single-chunk and block chunkings. The single chunk never costs
/// more than the dense product and the blocks never more than the sparse
/// one, so the plan is never worse than either.
pub fn chunky_plan(f: &Poly, g: &Poly, model: &CostModel) -> Result<ChunkyPlan> {
    if f.is_zero() || g.is_zero() {
        return Err(argument("chunky plan of a zero polynomial"));
    }
    let k = optimal_chunk_size(f, g, model)?;
    let fc = candidates(f, k, model)?;
    let gc = candidates(g, k, model)?;
    let mut best: Option<(f64, usize, usize)> = None;
    for (i, (_, a)) in fc.iter().enumerate() {
        let la = a.lengths();
        for (j, (_, b)) in gc.iter().enumerate() {
            let cost = pair_cost(&la, &b.lengths(), model);
            if best.is_none_or(|(c, _, _)| cost < c) {
                best = Some((cost, i, j));
            }
        }
    }
    let (cost, i, j) = best.unwrap();
    let (cf, f) = fc.into_iter().nth(i).unwrap();
    let (cg, g) = gc.into_iter().nth(j).unwrap();
    Ok(ChunkyPlan {
        k,
        f,
        g,
        choice: (cf, cg),
        cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{DensePoly, SparsePoly};

    #[test]
    fn never_worse_than_baselines() {
        let model = CostModel::default();
        let f = Poly::Dense(DensePoly::new((1..=40).collect()));
        let g = Poly::Sparse(SparsePoly::new(vec![(1, 0), (2, 7), (3, 900)]).unwrap());
        let plan = chunky_plan(&f, &g, &model).unwrap();
        assert!(plan.cost <= model.mult_cost(40, 901));
        assert!(plan.cost <= 40.0 * 3.0);
    }

    #[test]
    fn separated_chunks_stay_separate() {
        let mut terms: Vec<(u64, u64)> = (0..20).map(|e| (1, e)).collect();
        terms.extend((0..20).map(|e| (1, 5000 + e)));
        let f = Poly::Sparse(SparsePoly::new(terms).unwrap());
        let plan = chunky_plan(&f, &f, &CostModel::schoolbook()).unwrap();
        assert_eq!(plan.f.lengths(), vec![20, 20]);
        assert_eq!(plan.cost, 4.0 * 400.0);
    }
}
