//! Exact solver for a single `Z_2` coordinate.
//!
//! Over `Z_2` a plan's support is a graph whose odd-degree vertices are
//! exactly the points with coefficient 1. By the triangle inequality such an
//! edge set never beats a minimum-weight perfect matching on those points,
//! so the optimum is computed by dynamic programming over subsets.

use crate::error::{Error, Result};
use crate::group::{Coord, FactorSpec, GroupElement};
use crate::metric::Instance;
use crate::plan::{PlanMethod, TransportPlan};
use crate::scalar::Scalar;

/// Hard cutoff on the number of coefficient-1 points; the subset table has
/// `2^k` entries and beyond 20 the solver refuses rather than approximate.
pub const PARITY_CUTOFF: u32 = 20;

/// Minimum-cost plan for one width-2 modular factor.
pub fn solve_parity(inst: &Instance) -> Result<TransportPlan> {
    match inst.group.factors() {
        [FactorSpec::ModM { moduli, .. }] if moduli == &[2] => {}
        [other] => {
            return Err(Error::UnsupportedFactor {
                index: 0,
                reason: format!("parity matching needs a single Z_2 factor, found {other:?}"),
            })
        }
        factors => {
            return Err(Error::UnsupportedFactor {
                index: factors.len().min(1),
                reason: "parity matching needs a single Z_2 factor".into(),
            })
        }
    }
    let odd: Vec<usize> = inst
        .coefficients
        .iter()
        .enumerate()
        .filter(|(_, c)| matches!(&c.coords[0], Coord::Mod(r) if r[0] == 1))
        .map(|(i, _)| i)
        .collect();
    if odd.len() % 2 != 0 {
        return Err(Error::NonZeroSum);
    }
    let k = odd.len() as u32;
    if k > PARITY_CUTOFF {
        return Err(Error::BudgetExceeded {
            needed: 1u128 << k,
            budget: 1u128 << PARITY_CUTOFF,
        });
    }

    // match_cost[mask] = min matching cost of the odd points selected by mask.
    let full = 1usize << k;
    let mut match_cost: Vec<Option<Scalar>> = vec![None; full];
    match_cost[0] = Some(Scalar::zero());
    for mask in 1..full {
        if (mask.count_ones() % 2) != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best: Option<Scalar> = None;
        let mut m = rest;
        while m != 0 {
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let sub = rest & !(1 << j);
            if let Some(prev) = &match_cost[sub] {
                let cost = prev + inst.metric.dist(odd[i], odd[j]);
                if best.as_ref().map_or(true, |b| &cost < b) {
                    best = Some(cost);
                }
            }
        }
        match_cost[mask] = best;
    }

    // Walk the table back to the pairs, always matching the lowest index and
    // taking the first partner that achieves the optimum.
    let n = inst.len();
    let mut entries = vec![vec![inst.group.zero(); n]; n];
    let one = GroupElement::new(vec![Coord::Mod(vec![1])]);
    let minus_one = inst.group.neg(&one)?;
    let mut mask = full - 1;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let target = match_cost[mask].clone().expect("even mask is matchable");
        let mut m = rest;
        loop {
            debug_assert!(m != 0, "table walk must find a partner");
            let j = m.trailing_zeros() as usize;
            m &= m - 1;
            let sub = rest & !(1 << j);
            if let Some(prev) = &match_cost[sub] {
                if prev + inst.metric.dist(odd[i], odd[j]) == target {
                    let (u, v) = (odd[i].min(odd[j]), odd[i].max(odd[j]));
                    entries[u][v] = one.clone();
                    entries[v][u] = minus_one.clone();
                    mask = sub;
                    break;
                }
            }
        }
    }

    TransportPlan::new(inst.group.clone(), entries, PlanMethod::Parity)?.with_cost(&inst.metric)
}
