//! Exact minimization of the transport cost
//! `sum_{i<j} |g_ij| d(x_i, x_j)` over antisymmetric plans with prescribed
//! row sums.
//!
//! Because the group norm is a weighted sum of per-factor norms and the
//! constraints act coordinate-wise, [`solve`] optimizes each factor
//! independently (flow for ordered factors, matching for `Z_2`, exhaustive
//! search otherwise) and recombines the coordinates; the total cost is the
//! sum of the factor costs, which is globally optimal.

pub mod brute;
pub mod flow;
pub mod parity;

pub use brute::{solve_brute, CandidateBound};
pub use flow::solve_flow;
pub use parity::solve_parity;

use crate::error::Result;
use crate::group::{FactorSpec, GroupElement};
use crate::metric::{FiniteMetric, Instance};
use crate::plan::{PlanMethod, TransportPlan};
use crate::scalar::Scalar;

/// Node budget for exhaustive searches; a search that would visit more
/// assignment nodes stops with [`crate::Error::BudgetExceeded`].
pub const DEFAULT_NODE_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Maximum number of assignment nodes an exhaustive search may visit.
    pub budget: u128,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Restriction of the instance to factor `k`: same metric, coefficient
/// coordinates `k` wrapped as elements of the single-factor group.
pub(crate) fn factor_instance(inst: &Instance, k: usize) -> Result<Instance> {
    let group = inst.group.factor_spec(k);
    let coeffs = inst
        .coefficients
        .iter()
        .map(|c| GroupElement::new(vec![c.coords[k].clone()]))
        .collect();
    Instance::new(group, inst.metric.clone(), coeffs)
}

fn route(inst: &Instance, opts: &SolveOptions) -> Result<TransportPlan> {
    match inst.group.factors() {
        [FactorSpec::IntZ { .. }] | [FactorSpec::RealQ { .. }] => solve_flow(inst),
        [FactorSpec::ModM { moduli, .. }] if moduli == &[2] => solve_parity(inst),
        _ => solve_brute(inst, &CandidateBound::Auto, opts),
    }
}

/// Optimal transport plan for the instance, with the default budget.
pub fn solve(inst: &Instance) -> Result<TransportPlan> {
    solve_with(inst, &SolveOptions::default())
}

/// Optimal transport plan for the instance.
pub fn solve_with(inst: &Instance, opts: &SolveOptions) -> Result<TransportPlan> {
    let factors = inst.group.factors();
    if factors.len() == 1 {
        return route(inst, opts);
    }
    let n = inst.len();
    let mut entries = vec![vec![inst.group.zero(); n]; n];
    for k in 0..factors.len() {
        let sub = factor_instance(inst, k)?;
        let plan = route(&sub, opts)?;
        for i in 0..n {
            for j in 0..n {
                entries[i][j].coords[k] = plan.entry(i, j).coords[0].clone();
            }
        }
    }
    TransportPlan::new(inst.group.clone(), entries, PlanMethod::Decomposed)?
        .with_cost(&inst.metric)
}

/// Exact plan cost against a metric, `sum_{i<j} |g_ij| d(x_i, x_j)`.
pub fn cost(plan: &TransportPlan, metric: &FiniteMetric) -> Result<Scalar> {
    plan.cost_against(metric)
}
