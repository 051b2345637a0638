//! Exhaustive minimization over a finite candidate grid.
//!
//! This is the oracle the faster solvers are tested against. Entries range
//! over an explicit candidate list; one entry per row is forced by the row
//! sum, so only `(n-1)(n-2)/2` positions are searched.

use num::bigint::BigInt;
use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{Coord, FactorSpec, GroupElement, GroupSpec};
use crate::metric::Instance;
use crate::plan::{PlanMethod, TransportPlan};
use crate::scalar::Scalar;
use crate::solver::SolveOptions;

/// Candidate set for each plan entry.
#[derive(Debug, Clone)]
pub enum CandidateBound {
    /// Derive candidates from the group: finite factors contribute all their
    /// elements; an integer factor contributes the interval `[-B, B]` where
    /// `B` is the total absolute value of that coordinate over the instance
    /// coefficients (an optimal flow never ships more than everything).
    Auto,
    /// An explicit list, tried in the given order.
    Elements(Vec<GroupElement>),
}

/// Candidates for one integer coordinate, in magnitude order
/// `0, 1, -1, 2, -2, ...` so cheap entries are tried first.
fn int_interval(bound: &BigInt) -> Vec<Coord> {
    let mut out = vec![Coord::Int(BigInt::zero())];
    let mut k = BigInt::from(1);
    while &k <= bound {
        out.push(Coord::Int(k.clone()));
        out.push(Coord::Int(-k.clone()));
        k += 1;
    }
    out
}

/// Builds the per-entry candidate list for [`CandidateBound::Auto`].
pub fn auto_candidates(inst: &Instance) -> Result<Vec<GroupElement>> {
    let mut per_factor: Vec<Vec<Coord>> = Vec::new();
    for (idx, factor) in inst.group.factors().iter().enumerate() {
        match factor {
            FactorSpec::ModM { .. } => {
                let single = GroupSpec::single(factor.clone());
                let elems = single.enumerate_elements()?;
                per_factor.push(
                    elems
                        .into_iter()
                        .map(|e| e.coords.into_iter().next().expect("single factor"))
                        .collect(),
                );
            }
            FactorSpec::IntZ { .. } => {
                let mut bound = BigInt::zero();
                for c in &inst.coefficients {
                    if let Coord::Int(v) = &c.coords[idx] {
                        bound += v.abs();
                    }
                }
                per_factor.push(int_interval(&bound));
            }
            FactorSpec::RealQ { .. } => {
                return Err(Error::UnsupportedFactor {
                    index: idx,
                    reason: "rational coordinates need an explicit candidate list".into(),
                });
            }
        }
    }
    // Cartesian product, first factor varying slowest.
    let mut elems = vec![Vec::new()];
    for coords in &per_factor {
        let mut next = Vec::with_capacity(elems.len() * coords.len());
        for prefix in &elems {
            for c in coords {
                let mut v: Vec<Coord> = prefix.clone();
                v.push(c.clone());
                next.push(v);
            }
        }
        elems = next;
    }
    Ok(elems.into_iter().map(GroupElement::new).collect())
}

struct Search<'a> {
    inst: &'a Instance,
    candidates: &'a [GroupElement],
    budget: u128,
    nodes: u128,
    /// Upper-triangle assignment, row-major `(i, j)`, `i < j`.
    upper: Vec<GroupElement>,
    /// Running sum of assigned entries per row.
    acc: Vec<GroupElement>,
    best: Option<(Vec<GroupElement>, Scalar)>,
}

impl<'a> Search<'a> {
    fn upper_index(&self, i: usize, j: usize) -> usize {
        let n = self.inst.len();
        i * n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Places `g` at `(i, j)` and returns the new partial cost, or `None`
    /// when the branch is already no better than the incumbent.
    fn place(
        &mut self,
        i: usize,
        j: usize,
        g: GroupElement,
        partial: &Scalar,
    ) -> Result<Option<Scalar>> {
        let grp = &self.inst.group;
        let cost = partial + &(&grp.norm(&g)? * self.inst.metric.dist(i, j));
        if let Some((_, best)) = &self.best {
            if &cost >= best {
                return Ok(None);
            }
        }
        self.acc[i] = grp.add(&self.acc[i], &g)?;
        self.acc[j] = grp.sub(&self.acc[j], &g)?;
        let at = self.upper_index(i, j);
        self.upper[at] = g;
        Ok(Some(cost))
    }

    fn unplace(&mut self, i: usize, j: usize) -> Result<()> {
        let grp = &self.inst.group;
        let at = self.upper_index(i, j);
        let g = self.upper[at].clone();
        self.acc[i] = grp.sub(&self.acc[i], &g)?;
        self.acc[j] = grp.add(&self.acc[j], &g)?;
        Ok(())
    }

    /// Fills the forced last entry of row `i` and recurses into row `i + 1`.
    fn close_row(&mut self, i: usize, partial: Scalar) -> Result<()> {
        let n = self.inst.len();
        let grp = &self.inst.group;
        let forced = grp.sub(&self.inst.coefficients[i], &self.acc[i])?;
        match self.place(i, n - 1, forced, &partial)? {
            Some(cost) => {
                self.descend(i + 1, i + 2, cost)?;
                self.unplace(i, n - 1)
            }
            None => Ok(()),
        }
    }

    /// `(i, j)` is the next free position; rows `n-1` and beyond are leaves.
    fn descend(&mut self, i: usize, j: usize, partial: Scalar) -> Result<()> {
        let n = self.inst.len();
        if i >= n - 1 {
            // All rows closed; row n-1 is determined by the others.
            debug_assert_eq!(self.acc[n - 1], self.inst.coefficients[n - 1]);
            let better = match &self.best {
                Some((_, best)) => &partial < best,
                None => true,
            };
            if better {
                self.best = Some((self.upper.clone(), partial));
            }
            return Ok(());
        }
        if j > n - 2 {
            return self.close_row(i, partial);
        }
        for k in 0..self.candidates.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded {
                    needed: self.nodes,
                    budget: self.budget,
                });
            }
            let g = self.candidates[k].clone();
            if let Some(cost) = self.place(i, j, g, &partial)? {
                self.descend(i, j + 1, cost)?;
                self.unplace(i, j)?;
            }
        }
        Ok(())
    }
}

/// Globally minimal plan over the candidate grid. Ties are broken by trying
/// candidates in list order, which makes the result the lexicographically
/// least optimal upper triangle with respect to that order.
///
/// Candidates constrain the free positions only; the last entry of each row
/// is forced by the row sum and may fall outside the list. For a finite
/// group with [`CandidateBound::Auto`] every entry ranges over all of `G`,
/// so the result is the exact optimum.
pub fn solve_brute(
    inst: &Instance,
    bound: &CandidateBound,
    opts: &SolveOptions,
) -> Result<TransportPlan> {
    let n = inst.len();
    if n <= 1 {
        let plan = TransportPlan::new(
            inst.group.clone(),
            vec![vec![inst.group.zero(); n]; n],
            PlanMethod::Brute,
        )?;
        return plan.with_cost(&inst.metric);
    }
    let owned;
    let candidates: &[GroupElement] = match bound {
        CandidateBound::Auto => {
            owned = auto_candidates(inst)?;
            &owned
        }
        CandidateBound::Elements(list) => {
            if list.is_empty() {
                return Err(Error::InvalidInput("empty candidate list".into()));
            }
            for g in list {
                inst.group.conforms(g)?;
            }
            list
        }
    };
    let mut search = Search {
        inst,
        candidates,
        budget: opts.budget,
        nodes: 0,
        upper: vec![inst.group.zero(); n * (n - 1) / 2],
        acc: vec![inst.group.zero(); n],
        best: None,
    };
    search.descend(0, 1, Scalar::zero())?;
    let (upper, cost) = search
        .best
        .ok_or_else(|| Error::InvalidInput("candidate grid admits no plan".into()))?;
    let plan = TransportPlan::from_upper_triangle(inst.group.clone(), n, &upper, PlanMethod::Brute)?
        .with_cost(&inst.metric)?;
    debug_assert_eq!(plan.cost.as_ref(), Some(&cost));
    Ok(plan)
}
