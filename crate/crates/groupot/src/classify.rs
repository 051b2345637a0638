//! Sweep of finite abelian groups: enumerate them up to isomorphism by
//! invariant factors and decide, for each, whether any norm makes all
//! zero-sum triples collinear.

use crate::error::Result;
use crate::feasibility::{czt_norm_feasibility, NormFeasibilityResult};
use crate::solver::SolveOptions;

/// One group in the sweep, with its feasibility verdict.
#[derive(Debug, Clone)]
pub struct ClassifiedGroup {
    /// Invariant factors `d_1 | d_2 | ... | d_k`.
    pub moduli: Vec<u64>,
    pub name: String,
    pub order: u64,
    pub result: NormFeasibilityResult,
}

#[derive(Debug, Clone)]
pub struct GroupClassification {
    pub max_order: u64,
    pub entries: Vec<ClassifiedGroup>,
}

impl GroupClassification {
    pub fn feasible(&self) -> Vec<&ClassifiedGroup> {
        self.entries.iter().filter(|e| e.result.feasible).collect()
    }

    pub fn infeasible(&self) -> Vec<&ClassifiedGroup> {
        self.entries.iter().filter(|e| !e.result.feasible).collect()
    }
}

/// Invariant-factor chains `d_1 | d_2 | ... | d_k` with product in
/// `2..=max_order`, one per isomorphism class of nontrivial finite abelian
/// groups. Ordered by group order, then lexicographically.
pub fn invariant_factor_chains(max_order: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut chain = Vec::new();
    extend_chain(max_order, 2, 1, &mut chain, &mut out);
    out.sort_by_key(|c| (c.iter().product::<u64>(), c.clone()));
    out
}

fn extend_chain(
    max_order: u64,
    min_factor: u64,
    product: u64,
    chain: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let mut d = min_factor;
    while product * d <= max_order {
        // Invariant factors divide their successors, so only multiples of
        // the last factor extend the chain.
        if chain.last().is_none_or(|&prev| d % prev == 0) {
            chain.push(d);
            out.push(chain.clone());
            extend_chain(max_order, d, product * d, chain, out);
            chain.pop();
        }
        d += 1;
    }
}

/// Compact name: equal factors collapse to a power, e.g. `Z2^3`,
/// `Z2 x Z4`.
pub fn group_name(moduli: &[u64]) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut i = 0;
    while i < moduli.len() {
        let mut j = i;
        while j < moduli.len() && moduli[j] == moduli[i] {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            parts.push(format!("Z{}", moduli[i]));
        } else {
            parts.push(format!("Z{}^{}", moduli[i], run));
        }
        i = j;
    }
    parts.join(" x ")
}

/// Runs the norm-feasibility decision over every abelian group of order at
/// most `max_order`. Budget overruns in any single group abort the sweep.
pub fn classify_groups(max_order: u64, opts: &SolveOptions) -> Result<GroupClassification> {
    let mut entries = Vec::new();
    for moduli in invariant_factor_chains(max_order) {
        let result = czt_norm_feasibility(&moduli, opts)?;
        entries.push(ClassifiedGroup {
            name: group_name(&moduli),
            order: moduli.iter().product(),
            moduli,
            result,
        });
    }
    Ok(GroupClassification { max_order, entries })
}
