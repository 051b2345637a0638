//! Nonbranching transport plans: checking, metric-free construction,
//! exhaustive search with absence certificates, and counterexample hunting.
//!
//! A plan is nonbranching when, besides transporting its coefficients, every
//! row's norm splits exactly across its entries, `|g_i| = sum_j |g_ij|`.
//! Such a plan routes each point's mass without cancellation, which makes it
//! optimal for every metric at once; whether one exists depends only on the
//! group and the coefficients, never on distances. All routines here are
//! therefore metric-free.

use std::collections::HashSet;

use num::bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{Coord, ElementTable, FactorSpec, GroupElement, GroupSpec};
use crate::metric::Instance;
use crate::plan::{PlanMethod, TransportPlan};
use crate::scalar::Scalar;
use crate::solver::{SolveOptions, DEFAULT_NODE_BUDGET};
use crate::structure::list_indecomposables;

/// Nonbranching verdict for one plan.
#[derive(Debug, Clone)]
pub struct NbpReport {
    pub plan: TransportPlan,
    /// All row-norm equalities hold.
    pub nbp: bool,
    /// The support graph is a forest.
    pub acyclic: bool,
    /// Rows where the equality fails, as `(i, |g_i|, sum_j |g_ij|)`.
    pub violated_rows: Vec<(usize, Scalar, Scalar)>,
    /// One cycle of the support graph, in walk order, when there is one.
    pub cycle_witness: Option<Vec<usize>>,
}

/// Checks the row-norm equalities of `plan` against the instance it claims
/// to transport. Fails early when the plan does not move `inst`'s
/// coefficients at all.
pub fn check_nbp(plan: &TransportPlan, inst: &Instance) -> Result<NbpReport> {
    if plan.group != inst.group {
        return Err(Error::InfeasiblePlan(
            "plan and instance use different groups".into(),
        ));
    }
    check_nbp_coeffs(plan, &inst.coefficients)
}

/// [`check_nbp`] without the metric wrapper: coefficients are all that the
/// nonbranching equations mention.
pub fn check_nbp_coeffs(plan: &TransportPlan, coeffs: &[GroupElement]) -> Result<NbpReport> {
    plan.transports(coeffs)?;
    let spec = &plan.group;
    let n = plan.len();
    let mut violated = Vec::new();
    for i in 0..n {
        let full = spec.norm(&coeffs[i])?;
        let mut split = Scalar::zero();
        for j in 0..n {
            if i != j {
                split = &split + &spec.norm(plan.entry(i, j))?;
            }
        }
        if full != split {
            violated.push((i, full, split));
        }
    }
    let (acyclic, cycle_witness) = is_acyclic(plan);
    Ok(NbpReport {
        plan: plan.clone(),
        nbp: violated.is_empty(),
        acyclic,
        violated_rows: violated,
        cycle_witness,
    })
}

/// Undirected support graph on row indices: `(i, j)` with `i < j` and a
/// nonzero entry. Vertices are indices, so repeated coefficients stay
/// distinct points.
pub fn support_graph(plan: &TransportPlan) -> Vec<(usize, usize)> {
    plan.support_edges()
        .into_iter()
        .map(|(i, j, _)| (i, j))
        .collect()
}

/// Forest test for the support graph; on failure the witness lists the
/// vertices of one cycle in walk order.
pub fn is_acyclic(plan: &TransportPlan) -> (bool, Option<Vec<usize>>) {
    let n = plan.len();
    let mut adj = vec![Vec::new(); n];
    for (i, j) in support_graph(plan) {
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if Some(w) == parent[u] {
                    continue;
                }
                if seen[w] {
                    return (false, Some(close_cycle(&parent, u, w)));
                }
                seen[w] = true;
                parent[w] = Some(u);
                stack.push(w);
            }
        }
    }
    (true, None)
}

/// Joins the tree paths of `u` and `w` at their lowest common ancestor; the
/// non-tree edge `(w, u)` closes the walk.
fn close_cycle(parent: &[Option<usize>], u: usize, w: usize) -> Vec<usize> {
    let path = |mut v: usize| {
        let mut p = vec![v];
        while let Some(q) = parent[v] {
            p.push(q);
            v = q;
        }
        p
    };
    let pu = path(u);
    let pw = path(w);
    let on_pu: HashSet<usize> = pu.iter().copied().collect();
    let lca = *pw
        .iter()
        .find(|v| on_pu.contains(v))
        .expect("u and w share a DFS tree");
    let mut cycle: Vec<usize> = pu.iter().copied().take_while(|&v| v != lca).collect();
    cycle.push(lca);
    let down: Vec<usize> = pw.iter().copied().take_while(|&v| v != lca).collect();
    cycle.extend(down.into_iter().rev());
    cycle
}

/// Splits a zero-sum value list into transfers whose magnitudes add up to
/// each point's value: repeatedly the largest positive point absorbs the
/// most negative one (smaller index on ties), the smaller magnitude dies,
/// and its value moves across one new edge. Each step retires a point, so
/// the edges form a forest.
fn merge_induction(values: &[Scalar]) -> Vec<(usize, usize, Scalar)> {
    let mut live: Vec<(usize, Scalar)> = values
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect();
    let mut edges = Vec::new();
    while !live.is_empty() {
        let p = live
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.1.cmp(&b.1).then(ib.cmp(ia)))
            .map(|(at, _)| at)
            .expect("nonempty");
        let q = live
            .iter()
            .enumerate()
            .min_by(|(ia, a), (ib, b)| a.1.cmp(&b.1).then(ia.cmp(ib)))
            .map(|(at, _)| at)
            .expect("nonempty");
        let (ip, vp) = live[p].clone();
        let (iq, vq) = live[q].clone();
        debug_assert!(vp.is_positive() && vq.is_negative(), "zero sum, nonzero values");
        let merged = &vp + &vq;
        if merged.is_negative() {
            // The positive point empties into q across one edge.
            edges.push((ip, iq, vp));
            live[q].1 = merged;
            live.remove(p);
        } else {
            edges.push((ip, iq, -&vq));
            live[p].1 = merged.clone();
            live.remove(q);
            if merged.is_zero() {
                live.retain(|(i, _)| *i != ip);
            }
        }
    }
    edges
}

/// Metric-free nonbranching plan for weighted-`l1` groups built from
/// integer, rational, and parity factors. Parity coordinates pair off their
/// odd points in index order; integer and rational coordinates run the
/// absorb-the-most-negative induction. Coordinates recombine into one plan
/// whose row norms split exactly.
///
/// Each parity factor must carry a single modulus-2 coordinate; a joint
/// modular factor cannot be treated coordinate by coordinate because its
/// norm table need not be additive across coordinates.
pub fn construct_nbp(spec: &GroupSpec, coeffs: &[GroupElement]) -> Result<TransportPlan> {
    for g in coeffs {
        spec.conforms(g)?;
    }
    let mut total = spec.zero();
    for g in coeffs {
        total = spec.add(&total, g)?;
    }
    if !spec.is_zero(&total) {
        return Err(Error::NonZeroSum);
    }
    for (k, f) in spec.factors().iter().enumerate() {
        if let FactorSpec::ModM { moduli, .. } = f {
            if moduli.as_slice() != [2] {
                return Err(Error::UnsupportedFactor {
                    index: k,
                    reason: "nonbranching construction needs parity factors with a \
                             single modulus-2 coordinate; other modular groups can \
                             lack nonbranching plans"
                        .into(),
                });
            }
        }
    }
    let n = coeffs.len();
    let mut entries = vec![vec![spec.zero(); n]; n];
    let mut put = |i: usize, j: usize, k: usize, fwd: Coord, bwd: Coord| {
        entries[i][j].coords[k] = fwd;
        entries[j][i].coords[k] = bwd;
    };
    for (k, f) in spec.factors().iter().enumerate() {
        match f {
            FactorSpec::ModM { .. } => {
                let odd: Vec<usize> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| matches!(&g.coords[k], Coord::Mod(rs) if rs[0] == 1))
                    .map(|(i, _)| i)
                    .collect();
                debug_assert!(odd.len() % 2 == 0, "zero sum makes the odd set even");
                for pair in odd.chunks(2) {
                    put(pair[0], pair[1], k, Coord::Mod(vec![1]), Coord::Mod(vec![1]));
                }
            }
            FactorSpec::IntZ { .. } => {
                let values: Vec<Scalar> = coeffs
                    .iter()
                    .map(|g| match &g.coords[k] {
                        Coord::Int(v) => Scalar::from_bigint(v.clone()),
                        _ => unreachable!("conformance checked"),
                    })
                    .collect();
                for (i, j, amount) in merge_induction(&values) {
                    let v = amount.to_integer().expect("integer coordinates stay integral");
                    let (lo, hi) = (i.min(j), i.max(j));
                    let signed = if lo == i { v } else { -v };
                    put(lo, hi, k, Coord::Int(signed.clone()), Coord::Int(-signed));
                }
            }
            FactorSpec::RealQ { .. } => {
                let values: Vec<Scalar> = coeffs
                    .iter()
                    .map(|g| match &g.coords[k] {
                        Coord::Rat(v) => v.clone(),
                        _ => unreachable!("conformance checked"),
                    })
                    .collect();
                for (i, j, amount) in merge_induction(&values) {
                    let (lo, hi) = (i.min(j), i.max(j));
                    let signed = if lo == i { amount } else { -&amount };
                    put(lo, hi, k, Coord::Rat(signed.clone()), Coord::Rat(-&signed));
                }
            }
        }
    }
    let plan = TransportPlan::new(spec.clone(), entries, PlanMethod::Constructed)?;
    debug_assert!(
        check_nbp_coeffs(&plan, coeffs)?.nbp,
        "constructed plans split every row norm"
    );
    Ok(plan)
}

/// Controls for the exhaustive plan search.
#[derive(Debug, Clone)]
pub struct NbpSearchOptions {
    /// Also demand a forest support graph.
    pub require_acyclic: bool,
    /// Upper bound on entry placements before giving up.
    pub budget: u128,
}

impl Default for NbpSearchOptions {
    fn default() -> Self {
        NbpSearchOptions {
            require_acyclic: false,
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Certificate that a full search found no plan.
#[derive(Debug, Clone)]
pub struct ProofOfAbsence {
    /// `|G|` to the number of matrix entries above the diagonal.
    pub search_space: BigInt,
    /// Entry placements actually performed; pruning keeps this far below
    /// the search space.
    pub visited: u128,
    /// Whether the refuted notion included acyclicity.
    pub require_acyclic: bool,
}

/// Outcome of [`search_nbp`].
#[derive(Debug, Clone)]
pub enum NbpSearch {
    Found(TransportPlan),
    Absent(ProofOfAbsence),
}

impl NbpSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, NbpSearch::Found(_))
    }

    pub fn plan(&self) -> Option<&TransportPlan> {
        match self {
            NbpSearch::Found(p) => Some(p),
            NbpSearch::Absent(_) => None,
        }
    }
}

/// Union-find over row indices with an undo trail, for the acyclic search.
struct Forest {
    parent: Vec<usize>,
    size: Vec<usize>,
    trail: Vec<(usize, usize)>,
}

impl Forest {
    fn new(n: usize) -> Forest {
        Forest {
            parent: (0..n).collect(),
            size: vec![1; n],
            trail: Vec::new(),
        }
    }

    // No path compression: unions must be undoable in O(1).
    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// False when `i` and `j` already touch (the edge would close a cycle).
    fn link(&mut self, i: usize, j: usize) -> bool {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.trail.push((b, a));
        true
    }

    fn mark(&self) -> usize {
        self.trail.len()
    }

    fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (child, root) = self.trail.pop().expect("trail above mark");
            self.parent[child] = child;
            self.size[root] -= self.size[child];
        }
    }
}

struct NbpSearcher<'a> {
    table: &'a ElementTable,
    n: usize,
    coeff_idx: Vec<u32>,
    row_norm: Vec<Scalar>,
    used: Vec<Scalar>,
    acc: Vec<u32>,
    ent: Vec<u32>,
    forest: Option<Forest>,
    zero: u32,
    budget: u128,
    nodes: u128,
}

impl<'a> NbpSearcher<'a> {
    fn upper_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * self.n - i * (i + 1) / 2 + (j - i - 1)
    }

    /// Places `g` at `(i, j)`, keeping every row's norm sum within its
    /// budget; rows only accumulate norm, so overshoot can never recover.
    fn place(&mut self, i: usize, j: usize, g: u32) -> Result<Option<(Scalar, Scalar, usize)>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                needed: self.nodes,
                budget: self.budget,
            });
        }
        let norm = self.table.norms[g as usize].clone();
        let ni = &self.used[i] + &norm;
        if ni > self.row_norm[i] {
            return Ok(None);
        }
        let nj = &self.used[j] + &norm;
        if nj > self.row_norm[j] {
            return Ok(None);
        }
        let mark = self.forest.as_ref().map(|f| f.mark()).unwrap_or(0);
        if g != self.zero {
            if let Some(f) = self.forest.as_mut() {
                if !f.link(i, j) {
                    return Ok(None);
                }
            }
        }
        let old_i = std::mem::replace(&mut self.used[i], ni);
        let old_j = std::mem::replace(&mut self.used[j], nj);
        self.acc[i] = self.table.add(self.acc[i], g);
        self.acc[j] = self.table.add(self.acc[j], self.table.neg[g as usize]);
        let at = self.upper_index(i, j);
        self.ent[at] = g;
        Ok(Some((old_i, old_j, mark)))
    }

    fn unplace(&mut self, i: usize, j: usize, saved: (Scalar, Scalar, usize)) {
        let g = self.ent[self.upper_index(i, j)];
        self.used[i] = saved.0;
        self.used[j] = saved.1;
        self.acc[i] = self.table.add(self.acc[i], self.table.neg[g as usize]);
        self.acc[j] = self.table.add(self.acc[j], g);
        if let Some(f) = self.forest.as_mut() {
            f.rollback(saved.2);
        }
    }

    /// Depth-first over free entries; `(i, n-1)` closes row `i` with the
    /// forced value, at which point the row's norm split must be exact.
    fn descend(&mut self, i: usize, j: usize) -> Result<bool> {
        if i + 1 >= self.n {
            return Ok(self.used[self.n - 1] == self.row_norm[self.n - 1]);
        }
        if j == self.n - 1 {
            let forced = self
                .table
                .add(self.coeff_idx[i], self.table.neg[self.acc[i] as usize]);
            let Some(saved) = self.place(i, j, forced)? else {
                return Ok(false);
            };
            if self.used[i] == self.row_norm[i] && self.descend(i + 1, i + 2)? {
                return Ok(true);
            }
            self.unplace(i, j, saved);
            return Ok(false);
        }
        for g in 0..self.table.len() as u32 {
            let Some(saved) = self.place(i, j, g)? else {
                continue;
            };
            if self.descend(i, j + 1)? {
                return Ok(true);
            }
            self.unplace(i, j, saved);
        }
        Ok(false)
    }
}

/// Exhaustive search for a nonbranching plan over a finite group. Entries
/// range over the whole group; the last column of each row is forced by its
/// row sum. Finds the first plan in entry-lexicographic order or certifies
/// that none exists.
pub fn search_nbp(
    spec: &GroupSpec,
    coeffs: &[GroupElement],
    opts: &NbpSearchOptions,
) -> Result<NbpSearch> {
    spec.ensure_valid_norm()?;
    let table = ElementTable::build(spec)?;
    let mut total = spec.zero();
    for g in coeffs {
        spec.conforms(g)?;
        total = spec.add(&total, g)?;
    }
    if !spec.is_zero(&total) {
        return Err(Error::NonZeroSum);
    }
    let n = coeffs.len();
    let pairs = (n * (n - 1) / 2) as u32;
    let search_space = BigInt::from(table.len()).pow(pairs);
    if n <= 1 {
        let plan = TransportPlan::from_upper_triangle(spec.clone(), n, &[], PlanMethod::Search)?;
        return Ok(NbpSearch::Found(plan));
    }
    let mut searcher = NbpSearcher {
        n,
        coeff_idx: coeffs.iter().map(|g| table.index_of(g)).collect(),
        row_norm: coeffs.iter().map(|g| spec.norm(g)).collect::<Result<_>>()?,
        used: vec![Scalar::zero(); n],
        acc: vec![table.index_of(&spec.zero()); n],
        ent: vec![table.index_of(&spec.zero()); pairs as usize],
        forest: opts.require_acyclic.then(|| Forest::new(n)),
        zero: table.index_of(&spec.zero()),
        budget: opts.budget,
        nodes: 0,
        table: &table,
    };
    if searcher.descend(0, 1)? {
        let upper: Vec<GroupElement> = searcher
            .ent
            .iter()
            .map(|&g| table.elems[g as usize].clone())
            .collect();
        let plan = TransportPlan::from_upper_triangle(spec.clone(), n, &upper, PlanMethod::Search)?;
        debug_assert!(check_nbp_coeffs(&plan, coeffs)?.nbp);
        Ok(NbpSearch::Found(plan))
    } else {
        Ok(NbpSearch::Absent(ProofOfAbsence {
            search_space,
            visited: searcher.nodes,
            require_acyclic: opts.require_acyclic,
        }))
    }
}

/// Hunts for a zero-sum coefficient list that admits no nonbranching plan.
/// Candidates follow the repeated-indecomposable pattern `g, ..., g, -sg`
/// first, then every small zero-sum multiset; the first refuted list is
/// returned with its absence certificate.
pub fn find_nbp_counterexample(
    spec: &GroupSpec,
    n_max: usize,
    opts: &NbpSearchOptions,
) -> Result<Option<(Vec<GroupElement>, ProofOfAbsence)>> {
    spec.ensure_valid_norm()?;
    let table = ElementTable::build(spec)?;
    let solver_opts = SolveOptions {
        budget: opts.budget,
    };
    let mut seen: HashSet<Vec<GroupElement>> = HashSet::new();
    let try_coeffs = |coeffs: Vec<GroupElement>,
                          seen: &mut HashSet<Vec<GroupElement>>|
     -> Result<Option<(Vec<GroupElement>, ProofOfAbsence)>> {
        let mut key = coeffs.clone();
        key.sort();
        if !seen.insert(key) {
            return Ok(None);
        }
        match search_nbp(spec, &coeffs, opts)? {
            NbpSearch::Found(_) => Ok(None),
            NbpSearch::Absent(proof) => Ok(Some((coeffs, proof))),
        }
    };

    for g in list_indecomposables(spec, &solver_opts)?.representatives {
        for s in 1..=n_max {
            let sg = spec.mul_int(&g, &BigInt::from(s))?;
            let mut coeffs = vec![g.clone(); s];
            if spec.is_zero(&sg) {
                if s < 2 {
                    continue;
                }
            } else {
                if s + 1 > n_max {
                    continue;
                }
                coeffs.push(spec.neg(&sg)?);
            }
            if let Some(hit) = try_coeffs(coeffs, &mut seen)? {
                return Ok(Some(hit));
            }
        }
    }

    // Fallback: every multiset of nonzero elements with zero sum, smallest
    // first, elements in table order within a size.
    let zero = table.index_of(&spec.zero());
    for size in 2..=n_max {
        let mut pick = Vec::with_capacity(size);
        if let Some(hit) = multiset_scan(spec, &table, zero, size, 0, &mut pick, &mut seen, opts)? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn multiset_scan(
    spec: &GroupSpec,
    table: &ElementTable,
    zero: u32,
    size: usize,
    from: u32,
    pick: &mut Vec<u32>,
    seen: &mut HashSet<Vec<GroupElement>>,
    opts: &NbpSearchOptions,
) -> Result<Option<(Vec<GroupElement>, ProofOfAbsence)>> {
    if pick.len() == size {
        let sum = pick.iter().fold(zero, |a, &b| table.add(a, b));
        if sum != zero {
            return Ok(None);
        }
        let coeffs: Vec<GroupElement> = pick
            .iter()
            .map(|&g| table.elems[g as usize].clone())
            .collect();
        let mut key = coeffs.clone();
        key.sort();
        if !seen.insert(key) {
            return Ok(None);
        }
        return match search_nbp(spec, &coeffs, opts)? {
            NbpSearch::Found(_) => Ok(None),
            NbpSearch::Absent(proof) => Ok(Some((coeffs, proof))),
        };
    }
    for g in from..table.len() as u32 {
        if g == zero {
            continue;
        }
        pick.push(g);
        let hit = multiset_scan(spec, table, zero, size, g, pick, seen, opts)?;
        pick.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::FiniteMetric;

    fn z_spec() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::IntZ {
            weight: Scalar::one(),
        }])
        .unwrap()
    }

    fn z2_spec() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::z2(Scalar::one())]).unwrap()
    }

    fn z2sq_spec() -> GroupSpec {
        GroupSpec::new(vec![
            FactorSpec::z2(Scalar::one()),
            FactorSpec::z2(Scalar::one()),
        ])
        .unwrap()
    }

    fn z4_spec() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::zmod(
            4,
            vec![
                Scalar::zero(),
                Scalar::one(),
                Scalar::from_int(2),
                Scalar::one(),
            ],
        )])
        .unwrap()
    }

    fn ints(vals: &[i64]) -> Vec<GroupElement> {
        vals.iter()
            .map(|&v| GroupElement::new(vec![Coord::Int(BigInt::from(v))]))
            .collect()
    }

    fn bits(vals: &[&[u64]]) -> Vec<GroupElement> {
        vals.iter()
            .map(|row| GroupElement::new(row.iter().map(|&b| Coord::Mod(vec![b])).collect()))
            .collect()
    }

    fn int_entry(v: i64) -> GroupElement {
        GroupElement::new(vec![Coord::Int(BigInt::from(v))])
    }

    #[test]
    fn integer_construction_splits_the_positive_row() {
        let spec = z_spec();
        let coeffs = ints(&[3, -1, -2]);
        let plan = construct_nbp(&spec, &coeffs).unwrap();
        assert_eq!(plan.entry(0, 1), &int_entry(1));
        assert_eq!(plan.entry(0, 2), &int_entry(2));
        assert_eq!(plan.entry(1, 2), &int_entry(0));
        let report = check_nbp_coeffs(&plan, &coeffs).unwrap();
        assert!(report.nbp && report.acyclic);
        assert!(report.violated_rows.is_empty());
    }

    #[test]
    fn parity_points_pair_off_in_index_order() {
        let spec = z2_spec();
        let coeffs = bits(&[&[1], &[1], &[1], &[1]]);
        let plan = construct_nbp(&spec, &coeffs).unwrap();
        assert_eq!(plan.entry(0, 1), &bits(&[&[1]])[0]);
        assert_eq!(plan.entry(2, 3), &bits(&[&[1]])[0]);
        assert!(spec.is_zero(plan.entry(0, 2)));
        assert!(spec.is_zero(plan.entry(1, 3)));
        let report = check_nbp_coeffs(&plan, &coeffs).unwrap();
        assert!(report.nbp && report.acyclic);
    }

    #[test]
    fn square_group_triple_recombines_per_coordinate() {
        let spec = z2sq_spec();
        let coeffs = bits(&[&[1, 1], &[1, 0], &[0, 1]]);
        let plan = construct_nbp(&spec, &coeffs).unwrap();
        assert_eq!(plan.entry(0, 1), &bits(&[&[1, 0]])[0]);
        assert_eq!(plan.entry(0, 2), &bits(&[&[0, 1]])[0]);
        assert!(spec.is_zero(plan.entry(1, 2)));
        let report = check_nbp_coeffs(&plan, &coeffs).unwrap();
        assert!(report.nbp && report.acyclic);
    }

    #[test]
    fn rational_masses_split_without_branching() {
        let spec = GroupSpec::new(vec![FactorSpec::RealQ {
            weight: Scalar::one(),
        }])
        .unwrap();
        let coeffs: Vec<GroupElement> = [
            Scalar::ratio(3, 2),
            Scalar::ratio(-1, 2),
            Scalar::from_int(-1),
        ]
        .iter()
        .map(|v| GroupElement::new(vec![Coord::Rat(v.clone())]))
        .collect();
        let plan = construct_nbp(&spec, &coeffs).unwrap();
        let report = check_nbp_coeffs(&plan, &coeffs).unwrap();
        assert!(report.nbp && report.acyclic);
    }

    #[test]
    fn star_plans_branch_and_get_flagged() {
        let spec = z4_spec();
        let one = GroupElement::new(vec![Coord::Mod(vec![1])]);
        let zero = spec.zero();
        let upper = vec![
            zero.clone(),
            zero.clone(),
            one.clone(),
            zero.clone(),
            one.clone(),
            one.clone(),
        ];
        let plan =
            TransportPlan::from_upper_triangle(spec.clone(), 4, &upper, PlanMethod::External)
                .unwrap();
        let coeffs = bits(&[&[1], &[1], &[1], &[1]]);
        let report = check_nbp_coeffs(&plan, &coeffs).unwrap();
        assert!(!report.nbp);
        assert_eq!(
            report.violated_rows,
            vec![(3, Scalar::one(), Scalar::from_int(3))]
        );
    }

    #[test]
    fn mismatched_coefficients_are_rejected() {
        let spec = z2_spec();
        let coeffs = bits(&[&[1], &[1]]);
        let plan = construct_nbp(&spec, &coeffs).unwrap();
        let wrong = bits(&[&[1], &[0]]);
        assert!(matches!(
            check_nbp_coeffs(&plan, &wrong),
            Err(Error::InfeasiblePlan(_))
        ));
    }

    #[test]
    fn triangle_support_is_reported_as_a_cycle() {
        let spec = z_spec();
        let upper = vec![int_entry(1), int_entry(1), int_entry(1)];
        let plan =
            TransportPlan::from_upper_triangle(spec.clone(), 3, &upper, PlanMethod::External)
                .unwrap();
        let (acyclic, witness) = is_acyclic(&plan);
        assert!(!acyclic);
        let cycle = witness.unwrap();
        assert_eq!(cycle.len(), 3);
        // Consecutive witness vertices are support edges, as is the wrap.
        for w in cycle.windows(2) {
            assert!(!spec.is_zero(plan.entry(w[0], w[1])));
        }
        assert!(!spec.is_zero(plan.entry(cycle[cycle.len() - 1], cycle[0])));
    }

    #[test]
    fn zero_plan_is_a_forest() {
        let spec = z_spec();
        let plan = TransportPlan::from_upper_triangle(
            spec,
            3,
            &[int_entry(0), int_entry(0), int_entry(0)],
            PlanMethod::External,
        )
        .unwrap();
        let (acyclic, witness) = is_acyclic(&plan);
        assert!(acyclic);
        assert!(witness.is_none());
        assert!(support_graph(&plan).is_empty());
    }

    #[test]
    fn search_agrees_with_construction_on_parity_groups() {
        let spec = z2sq_spec();
        let coeffs = bits(&[&[1, 1], &[1, 0], &[0, 1]]);
        let opts = NbpSearchOptions::default();
        let found = search_nbp(&spec, &coeffs, &opts).unwrap();
        let plan = found.plan().expect("a plan exists");
        assert!(check_nbp_coeffs(plan, &coeffs).unwrap().nbp);
    }

    #[test]
    fn two_point_parity_search_is_immediate() {
        let spec = z2_spec();
        let coeffs = bits(&[&[1], &[1]]);
        let found = search_nbp(&spec, &coeffs, &NbpSearchOptions::default()).unwrap();
        let plan = found.plan().unwrap();
        assert_eq!(plan.entry(0, 1), &bits(&[&[1]])[0]);
    }

    #[test]
    fn four_units_have_no_plan_in_the_cyclic_group() {
        let spec = z4_spec();
        let coeffs = bits(&[&[1], &[1], &[1], &[1]]);
        let out = search_nbp(&spec, &coeffs, &NbpSearchOptions::default()).unwrap();
        match out {
            NbpSearch::Absent(proof) => {
                assert_eq!(proof.search_space, BigInt::from(4096));
                assert!(proof.visited < 4096);
            }
            NbpSearch::Found(p) => panic!("unexpected plan {p:?}"),
        }
    }

    #[test]
    fn acyclic_search_still_finds_forest_pairings() {
        let spec = z2_spec();
        let coeffs = bits(&[&[1], &[1], &[1], &[1]]);
        let opts = NbpSearchOptions {
            require_acyclic: true,
            ..NbpSearchOptions::default()
        };
        let out = search_nbp(&spec, &coeffs, &opts).unwrap();
        let plan = out.plan().expect("pairing is a forest");
        let report = check_nbp_coeffs(plan, &coeffs).unwrap();
        assert!(report.nbp && report.acyclic);
    }

    #[test]
    fn counterexample_hunt_lands_on_four_units() {
        let spec = z4_spec();
        let hit = find_nbp_counterexample(&spec, 4, &NbpSearchOptions::default())
            .unwrap()
            .expect("the cyclic group of order four branches");
        let (coeffs, proof) = hit;
        assert_eq!(coeffs, bits(&[&[1], &[1], &[1], &[1]]));
        assert_eq!(proof.search_space, BigInt::from(4096));
    }

    #[test]
    fn parity_groups_survive_the_hunt() {
        let spec = z2_spec();
        assert!(find_nbp_counterexample(&spec, 6, &NbpSearchOptions::default())
            .unwrap()
            .is_none());
        let square = z2sq_spec();
        assert!(find_nbp_counterexample(&square, 5, &NbpSearchOptions::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn constructed_plans_price_below_any_feasible_star() {
        // Against an explicit metric the constructed plan's cost matches
        // the exact solver; spot-check one integer instance.
        let spec = z_spec();
        let coeffs = ints(&[3, -1, -2]);
        let d = FiniteMetric::new(vec![
            vec![Scalar::zero(), Scalar::from_int(2), Scalar::from_int(1)],
            vec![Scalar::from_int(2), Scalar::zero(), Scalar::from_int(3)],
            vec![Scalar::from_int(1), Scalar::from_int(3), Scalar::zero()],
        ])
        .unwrap();
        let plan = construct_nbp(&spec, &coeffs).unwrap();
        let cost = plan.cost_against(&d).unwrap();
        let inst = Instance::new(spec, d, coeffs).unwrap();
        let best = crate::solver::solve(&inst).unwrap();
        assert_eq!(cost, best.cost.unwrap());
    }

    #[test]
    fn unsupported_modulus_is_named() {
        let spec = z4_spec();
        let coeffs = bits(&[&[1], &[3]]);
        match construct_nbp(&spec, &coeffs) {
            Err(Error::UnsupportedFactor { index: 0, .. }) => {}
            other => panic!("expected an unsupported factor, got {other:?}"),
        }
    }

    #[test]
    fn nonzero_sum_is_rejected_up_front() {
        let spec = z_spec();
        assert!(matches!(
            construct_nbp(&spec, &ints(&[1, 1])),
            Err(Error::NonZeroSum)
        ));
        let z2 = z2_spec();
        assert!(matches!(
            search_nbp(&z2, &bits(&[&[1]]), &NbpSearchOptions::default()),
            Err(Error::NonZeroSum)
        ));
    }

    #[test]
    fn budget_cuts_the_search_short() {
        let spec = z4_spec();
        let coeffs = bits(&[&[1], &[1], &[1], &[1]]);
        let opts = NbpSearchOptions {
            budget: 3,
            ..NbpSearchOptions::default()
        };
        match search_nbp(&spec, &coeffs, &opts) {
            Err(Error::BudgetExceeded { budget: 3, .. }) => {}
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }
}
