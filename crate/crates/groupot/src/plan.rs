//! Transport plans: antisymmetric matrices of group coefficients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{element_from_json, element_to_json, GroupElement, GroupSpec};
use crate::metric::FiniteMetric;
use crate::scalar::Scalar;

/// How a plan was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlanMethod {
    /// Min-cost flow on integer or rational coefficients.
    Flow,
    /// Parity matching on two-element factors.
    Parity,
    /// Exhaustive search over a finite candidate set.
    Brute,
    /// Factor-wise optimal plans recombined.
    Decomposed,
    /// Metric-free normed-balancing construction.
    Constructed,
    /// Found by plan-space search rather than optimization.
    Search,
    /// Supplied by the caller.
    External,
}

/// An antisymmetric matrix `g[i][j]` of group elements with zero diagonal.
/// `cost` is present when the plan was priced against a metric.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan {
    pub group: GroupSpec,
    entries: Vec<Vec<GroupElement>>,
    pub cost: Option<Scalar>,
    pub method: PlanMethod,
}

impl TransportPlan {
    /// Wraps and validates a full matrix: square, zero diagonal,
    /// `g[j][i] = -g[i][j]`.
    pub fn new(
        group: GroupSpec,
        entries: Vec<Vec<GroupElement>>,
        method: PlanMethod,
    ) -> Result<Self> {
        let n = entries.len();
        if let Some(i) = entries.iter().position(|row| row.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: entries[i].len(),
            });
        }
        for (i, row) in entries.iter().enumerate() {
            for g in row {
                group.conforms(g)?;
            }
            if !group.is_zero(&row[i]) {
                return Err(Error::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let neg = group.neg(&entries[i][j])?;
                if entries[j][i] != neg {
                    return Err(Error::AsymmetricMatrix { i, j });
                }
            }
        }
        Ok(TransportPlan {
            group,
            entries,
            cost: None,
            method,
        })
    }

    /// Builds a plan from its upper triangle (row-major `(i, j)` with
    /// `i < j`); the lower triangle and diagonal are filled in.
    pub fn from_upper_triangle(
        group: GroupSpec,
        n: usize,
        upper: &[GroupElement],
        method: PlanMethod,
    ) -> Result<Self> {
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::ShapeMismatch {
                expected: n * (n - 1) / 2,
                found: upper.len(),
            });
        }
        let mut entries = vec![vec![group.zero(); n]; n];
        let mut at = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                entries[i][j] = upper[at].clone();
                entries[j][i] = group.neg(&upper[at])?;
                at += 1;
            }
        }
        TransportPlan::new(group, entries, method)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupElement {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<GroupElement>] {
        &self.entries
    }

    /// Row sums `sum_j g[i][j]`; a plan transports coefficients `c` when
    /// this equals `c`.
    pub fn row_sums(&self) -> Result<Vec<GroupElement>> {
        let n = self.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut sum = self.group.zero();
            for j in 0..n {
                sum = self.group.add(&sum, &self.entries[i][j])?;
            }
            out.push(sum);
        }
        Ok(out)
    }

    /// Checks that the plan transports the given coefficients.
    pub fn transports(&self, coefficients: &[GroupElement]) -> Result<()> {
        if coefficients.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                found: coefficients.len(),
            });
        }
        let sums = self.row_sums()?;
        for (i, (s, c)) in sums.iter().zip(coefficients).enumerate() {
            if s != c {
                return Err(Error::InfeasiblePlan(format!(
                    "row {i} sums to {s}, coefficient is {c}"
                )));
            }
        }
        Ok(())
    }

    /// `sum_{i<j} |g[i][j]| d(i, j)`.
    pub fn cost_against(&self, metric: &FiniteMetric) -> Result<Scalar> {
        if metric.len() != self.len() {
            return Err(Error::ShapeMismatch {
                expected: self.len(),
                found: metric.len(),
            });
        }
        let mut total = Scalar::zero();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let norm = self.group.norm(&self.entries[i][j])?;
                total += &(&norm * metric.dist(i, j));
            }
        }
        Ok(total)
    }

    /// Prices the plan against a metric, filling in `cost`.
    pub fn with_cost(mut self, metric: &FiniteMetric) -> Result<Self> {
        self.cost = Some(self.cost_against(metric)?);
        Ok(self)
    }

    /// Edges `(i, j, g[i][j])` with `i < j` and nonzero entry.
    pub fn support_edges(&self) -> Vec<(usize, usize, &GroupElement)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if !self.group.is_zero(&self.entries[i][j]) {
                    out.push((i, j, &self.entries[i][j]));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group,
            "entries": self
                .entries
                .iter()
                .map(|row| row.iter().map(element_to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "cost": self.cost,
            "method": self.method,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            group: GroupSpec,
            entries: Vec<Vec<serde_json::Value>>,
            #[serde(default)]
            cost: Option<Scalar>,
            #[serde(default)]
            method: Option<PlanMethod>,
        }
        let raw: Raw = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("bad plan: {e}")))?;
        let entries = raw
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| element_from_json(&raw.group, v))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut plan = TransportPlan::new(
            raw.group,
            entries,
            raw.method.unwrap_or(PlanMethod::External),
        )?;
        plan.cost = raw.cost;
        Ok(plan)
    }
}
