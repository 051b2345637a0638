//! Polyhedral 1-chains over a finite metric vertex set, and the interior
//! vertex elimination loop that flattens them onto their boundary.
//!
//! A chain is a finite set of oriented edges with nonzero group
//! coefficients. Eliminating an interior vertex v rewires its star through
//! a nonbranching plan for the star coefficients: the star edges are
//! dropped and replaced by direct edges between v's neighbors. The plan's
//! row equalities together with the triangle inequality make the rewrite
//! mass non-increasing, and the boundary is preserved exactly.

use std::collections::{BTreeMap, BTreeSet};

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{element_from_json, element_to_json, GroupElement, GroupSpec};
use crate::metric::{FiniteMetric, MetricRaw};
use crate::nbp::{check_nbp_coeffs, construct_nbp, search_nbp, NbpSearch, NbpSearchOptions};
use crate::plan::{PlanMethod, TransportPlan};
use crate::scalar::Scalar;

/// A 0-chain: group coefficients at finitely many vertices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain0 {
    entries: BTreeMap<usize, GroupElement>,
}

impl Chain0 {
    /// Builds a 0-chain, merging entries at the same vertex additively and
    /// dropping those that cancel.
    pub fn from_entries(
        group: &GroupSpec,
        entries: impl IntoIterator<Item = (usize, GroupElement)>,
    ) -> Result<Chain0> {
        let mut acc: BTreeMap<usize, GroupElement> = BTreeMap::new();
        for (v, g) in entries {
            group.conforms(&g)?;
            let merged = match acc.remove(&v) {
                None => g,
                Some(old) => group.add(&old, &g)?,
            };
            acc.insert(v, merged);
        }
        acc.retain(|_, g| !group.is_zero(g));
        Ok(Chain0 { entries: acc })
    }

    pub fn support(&self) -> Vec<usize> {
        self.entries.keys().copied().collect()
    }

    pub fn get(&self, vertex: usize) -> Option<&GroupElement> {
        self.entries.get(&vertex)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GroupElement)> {
        self.entries.iter().map(|(&v, g)| (v, g))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let items: Vec<serde_json::Value> = self
            .iter()
            .map(|(v, g)| serde_json::json!({ "vertex": v, "coeff": element_to_json(g) }))
            .collect();
        serde_json::Value::from(items)
    }
}

/// An oriented edge chain on a finite metric space with a designated
/// boundary vertex set.
///
/// Edges are stored once per unordered pair, keyed `(u, v)` with `u < v`;
/// the coefficient is read in the `u` to `v` orientation. Parallel input
/// edges are merged additively and zero coefficients are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyChain1 {
    group: GroupSpec,
    metric: FiniteMetric,
    boundary_set: BTreeSet<usize>,
    edges: BTreeMap<(usize, usize), GroupElement>,
}

impl PolyChain1 {
    pub fn new(
        group: GroupSpec,
        metric: FiniteMetric,
        boundary_set: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize, GroupElement)>,
    ) -> Result<Self> {
        let n = metric.len();
        let mut bset = BTreeSet::new();
        for v in boundary_set {
            if v >= n {
                return Err(Error::InvalidChain(format!(
                    "boundary vertex {v} outside metric of {n} points"
                )));
            }
            bset.insert(v);
        }
        let mut chain = PolyChain1 {
            group,
            metric,
            boundary_set: bset,
            edges: BTreeMap::new(),
        };
        for (u, v, coeff) in edges {
            if u == v {
                return Err(Error::InvalidChain(format!("loop edge at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidChain(format!(
                    "edge ({u},{v}) outside metric of {n} points"
                )));
            }
            chain.group.conforms(&coeff)?;
            chain.merge_edge(u, v, coeff)?;
        }
        Ok(chain)
    }

    /// Adds `coeff` in the `u` to `v` orientation, normalizing the key and
    /// dropping the edge if the merged coefficient vanishes.
    fn merge_edge(&mut self, u: usize, v: usize, coeff: GroupElement) -> Result<()> {
        let (key, oriented) = if u < v {
            ((u, v), coeff)
        } else {
            ((v, u), self.group.neg(&coeff)?)
        };
        let merged = match self.edges.remove(&key) {
            None => oriented,
            Some(old) => self.group.add(&old, &oriented)?,
        };
        if !self.group.is_zero(&merged) {
            self.edges.insert(key, merged);
        }
        Ok(())
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn metric(&self) -> &FiniteMetric {
        &self.metric
    }

    pub fn boundary_set(&self) -> &BTreeSet<usize> {
        &self.boundary_set
    }

    /// Edges as `(u, v, coefficient)` with `u < v`, ascending.
    pub fn edges(&self) -> Vec<(usize, usize, &GroupElement)> {
        self.edges.iter().map(|(&(u, v), g)| (u, v, g)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The boundary 0-chain: each edge deposits its coefficient at its head
    /// and withdraws it at its tail.
    pub fn boundary(&self) -> Result<Chain0> {
        let mut acc: BTreeMap<usize, GroupElement> = BTreeMap::new();
        for (&(u, v), g) in &self.edges {
            let at_v = match acc.remove(&v) {
                None => g.clone(),
                Some(old) => self.group.add(&old, g)?,
            };
            acc.insert(v, at_v);
            let neg = self.group.neg(g)?;
            let at_u = match acc.remove(&u) {
                None => neg,
                Some(old) => self.group.add(&old, &neg)?,
            };
            acc.insert(u, at_u);
        }
        acc.retain(|_, g| !self.group.is_zero(g));
        Ok(Chain0 { entries: acc })
    }

    /// Total mass: the norm-weighted length of all edges.
    pub fn mass(&self) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (&(u, v), g) in &self.edges {
            total = &total + &(&self.group.norm(g)? * self.metric.dist(u, v));
        }
        Ok(total)
    }

    /// Vertices incident to at least one edge but not in the boundary set,
    /// ascending.
    pub fn interior_vertices(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        for &(u, v) in self.edges.keys() {
            seen.insert(u);
            seen.insert(v);
        }
        seen.into_iter()
            .filter(|v| !self.boundary_set.contains(v))
            .collect()
    }

    /// The star at `v`: its neighbors in ascending order and the edge
    /// coefficients read in the `v` to neighbor orientation.
    fn star(&self, v: usize) -> Result<(Vec<usize>, Vec<GroupElement>)> {
        let mut neighbors = Vec::new();
        let mut coeffs = Vec::new();
        for (&(a, b), g) in &self.edges {
            if a == v {
                neighbors.push(b);
                coeffs.push(g.clone());
            } else if b == v {
                neighbors.push(a);
                coeffs.push(self.group.neg(g)?);
            }
        }
        let mut order: Vec<usize> = (0..neighbors.len()).collect();
        order.sort_by_key(|&i| neighbors[i]);
        Ok((
            order.iter().map(|&i| neighbors[i]).collect(),
            order.into_iter().map(|i| coeffs[i].clone()).collect(),
        ))
    }

    /// Replaces the star at `v` by direct edges between its neighbors,
    /// using a nonbranching plan whose row sums are the star coefficients.
    /// The result drops `v`, keeps the boundary 0-chain, and never gains
    /// mass.
    pub fn eliminate_vertex(&self, v: usize, plan: &TransportPlan) -> Result<PolyChain1> {
        if self.boundary_set.contains(&v) {
            return Err(Error::VertexOnBoundary { v });
        }
        let (neighbors, star) = self.star(v)?;
        if plan.group != self.group {
            return Err(Error::PlanMismatch("plan group differs from chain".into()));
        }
        if plan.len() != neighbors.len() {
            return Err(Error::PlanMismatch(format!(
                "plan covers {} points, star at {v} has {} neighbors",
                plan.len(),
                neighbors.len()
            )));
        }
        plan.transports(&star)
            .map_err(|e| Error::PlanMismatch(format!("row sums are not the star at {v}: {e}")))?;
        let report = check_nbp_coeffs(plan, &star)?;
        if let Some(&(row, _, _)) = report.violated_rows.first() {
            return Err(Error::PlanNotNbp { row });
        }
        let mut next = self.clone();
        for &u in &neighbors {
            let key = if u < v { (u, v) } else { (v, u) };
            next.edges.remove(&key);
        }
        for (i, j, g) in plan.support_edges() {
            // The plan entry for (i, j) rides the edge from neighbor j to
            // neighbor i, which keeps every row sum on the boundary side.
            next.merge_edge(neighbors[j], neighbors[i], g.clone())?;
        }
        let before = self.mass()?;
        let after = next.mass()?;
        assert!(
            after <= before,
            "elimination at {v} grew mass from {before} to {after}"
        );
        debug_assert_eq!(next.boundary()?, self.boundary()?);
        Ok(next)
    }

    /// Eliminates every interior vertex, highest index first, planning each
    /// star by direct construction with exhaustive search as fallback.
    pub fn simplify(&self, opts: &NbpSearchOptions) -> Result<(PolyChain1, SimplifyTrace)> {
        let bd = self.boundary()?;
        for v in bd.support() {
            if !self.boundary_set.contains(&v) {
                return Err(Error::InvalidChain(format!(
                    "boundary supported at interior vertex {v}"
                )));
            }
        }
        let interior_at_start = self.interior_vertices().len();
        let mut current = self.clone();
        let mut steps = Vec::new();
        while let Some(&v) = current.interior_vertices().last() {
            let (_, star) = current.star(v)?;
            let (plan, method) = match construct_nbp(&current.group, &star) {
                Ok(plan) => (plan, PlanMethod::Constructed),
                Err(Error::UnsupportedFactor { .. }) => {
                    let search_opts = NbpSearchOptions {
                        require_acyclic: false,
                        budget: opts.budget,
                    };
                    match search_nbp(&current.group, &star, &search_opts)? {
                        NbpSearch::Found(plan) => (plan, PlanMethod::Search),
                        NbpSearch::Absent(proof) => {
                            let rendered: Vec<String> =
                                star.iter().map(|g| element_to_json(g).to_string()).collect();
                            return Err(Error::NoNbpPlanForStar {
                                vertex: v,
                                star_coeffs: format!("[{}]", rendered.join(", ")),
                                search_space: proof
                                    .search_space
                                    .to_u128()
                                    .unwrap_or(u128::MAX),
                            });
                        }
                    }
                }
                Err(e) => return Err(e),
            };
            let mass_before = current.mass()?;
            current = current.eliminate_vertex(v, &plan)?;
            steps.push(SimplifyStep {
                vertex: v,
                mass_before,
                mass_after: current.mass()?,
                method,
            });
        }
        debug_assert!(steps.len() <= interior_at_start);
        Ok((current, SimplifyTrace { steps }))
    }

    /// Reads the chain as a transport plan over all metric points: entry
    /// (i, j) is the negated `i` to `j` edge coefficient, so row sums equal
    /// the boundary and the plan's cost equals the chain's mass.
    pub fn to_plan(&self) -> Result<TransportPlan> {
        let n = self.metric.len();
        let mut entries = vec![vec![self.group.zero(); n]; n];
        for (&(u, v), g) in &self.edges {
            entries[u][v] = self.group.neg(g)?;
            entries[v][u] = g.clone();
        }
        TransportPlan::new(self.group.clone(), entries, PlanMethod::External)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let edges: Vec<serde_json::Value> = self
            .edges
            .iter()
            .map(|(&(u, v), g)| {
                serde_json::json!({ "u": u, "v": v, "coeff": element_to_json(g) })
            })
            .collect();
        serde_json::json!({
            "group": self.group,
            "metric": MetricRaw::matrix(&self.metric),
            "boundary_set": self.boundary_set.iter().collect::<Vec<_>>(),
            "edges": edges,
        })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        #[derive(Serialize, Deserialize)]
        struct EdgeRaw {
            u: usize,
            v: usize,
            coeff: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct ChainRaw {
            group: GroupSpec,
            metric: MetricRaw,
            boundary_set: Vec<usize>,
            edges: Vec<EdgeRaw>,
        }
        let raw: ChainRaw = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("bad chain: {e}")))?;
        let metric = raw.metric.realize()?;
        let edges = raw
            .edges
            .iter()
            .map(|e| Ok((e.u, e.v, element_from_json(&raw.group, &e.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        PolyChain1::new(raw.group, metric, raw.boundary_set, edges)
    }
}

/// One elimination step of `simplify`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyStep {
    pub vertex: usize,
    pub mass_before: Scalar,
    pub mass_after: Scalar,
    pub method: PlanMethod,
}

#[derive(Debug, Clone, Default)]
pub struct SimplifyTrace {
    pub steps: Vec<SimplifyStep>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Coord, FactorSpec};
    use crate::metric::{metric_from_points, PointNorm};
    use crate::solver::solve;
    use num::BigInt;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn z_group() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::IntZ { weight: s(1) }]).unwrap()
    }

    fn z(n: i64) -> GroupElement {
        GroupElement::new(vec![Coord::Int(BigInt::from(n))])
    }

    fn uniform_metric(n: usize, d: i64) -> FiniteMetric {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { s(0) } else { s(d) }).collect())
            .collect();
        FiniteMetric::new(rows).unwrap()
    }

    #[test]
    fn single_edge_boundary_is_a_dipole() {
        let chain = PolyChain1::new(
            z_group(),
            uniform_metric(3, 1),
            [1, 2],
            [(1, 2, z(5))],
        )
        .unwrap();
        let bd = chain.boundary().unwrap();
        assert_eq!(bd.support(), vec![1, 2]);
        assert_eq!(bd.get(2), Some(&z(5)));
        assert_eq!(bd.get(1), Some(&z(-5)));
    }

    #[test]
    fn triangle_cycle_has_zero_boundary() {
        let chain = PolyChain1::new(
            z_group(),
            uniform_metric(3, 1),
            [0, 1, 2],
            [(0, 1, z(4)), (1, 2, z(4)), (2, 0, z(4))],
        )
        .unwrap();
        assert!(chain.boundary().unwrap().is_empty());
        assert_eq!(chain.mass().unwrap(), s(12));
    }

    #[test]
    fn empty_chain_is_massless_with_empty_boundary() {
        let chain = PolyChain1::new(z_group(), uniform_metric(2, 3), [0], []).unwrap();
        assert!(chain.boundary().unwrap().is_empty());
        assert_eq!(chain.mass().unwrap(), s(0));
        assert!(chain.interior_vertices().is_empty());
    }

    #[test]
    fn mass_weighs_edges_by_norm_times_length() {
        let chain = PolyChain1::new(
            z_group(),
            uniform_metric(2, 3),
            [0, 1],
            [(0, 1, z(2))],
        )
        .unwrap();
        assert_eq!(chain.mass().unwrap(), s(6));

        let two = PolyChain1::new(
            z_group(),
            uniform_metric(3, 2),
            [0, 2],
            [(0, 1, z(1)), (1, 2, z(1))],
        )
        .unwrap();
        assert_eq!(two.mass().unwrap(), s(4));
    }

    #[test]
    fn parallel_edges_merge_and_cancel() {
        let chain = PolyChain1::new(
            z_group(),
            uniform_metric(2, 1),
            [0, 1],
            [(0, 1, z(1)), (1, 0, z(1))],
        )
        .unwrap();
        assert_eq!(chain.edge_count(), 0);

        let doubled = PolyChain1::new(
            z_group(),
            uniform_metric(2, 1),
            [0, 1],
            [(0, 1, z(1)), (0, 1, z(2))],
        )
        .unwrap();
        assert_eq!(doubled.edges()[0].2, &z(3));
    }

    #[test]
    fn loops_and_stray_indices_are_rejected() {
        assert!(matches!(
            PolyChain1::new(z_group(), uniform_metric(2, 1), [0], [(1, 1, z(1))]),
            Err(Error::InvalidChain(_))
        ));
        assert!(matches!(
            PolyChain1::new(z_group(), uniform_metric(2, 1), [0], [(0, 2, z(1))]),
            Err(Error::InvalidChain(_))
        ));
        assert!(matches!(
            PolyChain1::new(z_group(), uniform_metric(2, 1), [5], []),
            Err(Error::InvalidChain(_))
        ));
    }

    /// Star metric where the center sits on every geodesic: rewiring keeps
    /// the mass exactly.
    fn star_metric(cross: i64) -> FiniteMetric {
        let mut rows = vec![vec![s(0); 4]; 4];
        for i in 0..3 {
            rows[i][3] = s(1);
            rows[3][i] = s(1);
            for j in 0..3 {
                if i != j {
                    rows[i][j] = s(2);
                }
            }
        }
        rows[0][2] = s(cross);
        rows[2][0] = s(cross);
        FiniteMetric::new(rows).unwrap()
    }

    fn star_chain(metric: FiniteMetric) -> PolyChain1 {
        // Edges oriented out of the center 3 carry (1, 1, -2).
        PolyChain1::new(
            z_group(),
            metric,
            [0, 1, 2],
            [(0, 3, z(-1)), (1, 3, z(-1)), (2, 3, z(2))],
        )
        .unwrap()
    }

    fn star_plan() -> TransportPlan {
        TransportPlan::from_upper_triangle(z_group(), 3, &[z(0), z(1), z(1)], PlanMethod::External)
            .unwrap()
    }

    #[test]
    fn elimination_preserves_mass_when_center_lies_on_geodesics() {
        let chain = star_chain(star_metric(2));
        assert_eq!(chain.mass().unwrap(), s(4));
        let next = chain.eliminate_vertex(3, &star_plan()).unwrap();
        assert_eq!(next.mass().unwrap(), s(4));
        assert_eq!(next.boundary().unwrap(), chain.boundary().unwrap());
        assert!(next.interior_vertices().is_empty());
        assert_eq!(
            next.edges()
                .iter()
                .map(|&(u, v, _)| (u, v))
                .collect::<Vec<_>>(),
            vec![(0, 2), (1, 2)]
        );
    }

    #[test]
    fn elimination_strictly_drops_mass_on_a_shortcut() {
        let chain = star_chain(star_metric(1));
        let next = chain.eliminate_vertex(3, &star_plan()).unwrap();
        assert_eq!(next.mass().unwrap(), s(3));
    }

    #[test]
    fn elimination_guards_its_inputs() {
        let chain = star_chain(star_metric(2));
        assert_eq!(
            chain.eliminate_vertex(0, &star_plan()),
            Err(Error::VertexOnBoundary { v: 0 })
        );

        let wrong_sums =
            TransportPlan::from_upper_triangle(z_group(), 3, &[z(1), z(0), z(0)], PlanMethod::External)
                .unwrap();
        assert!(matches!(
            chain.eliminate_vertex(3, &wrong_sums),
            Err(Error::PlanMismatch(_))
        ));

        // Row sums match (1, 1, -2) but row 0 ships norm 3 for a deficit
        // of 1.
        let wasteful =
            TransportPlan::from_upper_triangle(z_group(), 3, &[z(2), z(-1), z(3)], PlanMethod::External)
                .unwrap();
        assert_eq!(
            chain.eliminate_vertex(3, &wasteful),
            Err(Error::PlanNotNbp { row: 0 })
        );
    }

    #[test]
    fn y_shape_simplifies_to_direct_edges() {
        let points = vec![
            vec![s(-1), s(1)],
            vec![s(1), s(1)],
            vec![s(0), s(-1)],
            vec![s(0), s(0)],
        ];
        let metric = metric_from_points(&points, PointNorm::L1).unwrap();
        let chain = PolyChain1::new(
            z_group(),
            metric,
            [0, 1, 2],
            [(0, 3, z(1)), (1, 3, z(1)), (2, 3, z(-2))],
        )
        .unwrap();
        assert_eq!(chain.mass().unwrap(), s(6));

        let (flat, trace) = chain.simplify(&NbpSearchOptions::default()).unwrap();
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].vertex, 3);
        assert_eq!(trace.steps[0].method, PlanMethod::Constructed);
        assert!(flat.interior_vertices().is_empty());
        assert_eq!(flat.boundary().unwrap(), chain.boundary().unwrap());
        assert!(flat.mass().unwrap() <= chain.mass().unwrap());

        // The flattened chain read as a plan is feasible for the boundary
        // and its cost is the chain's mass, here matching the true optimum.
        let plan = flat.to_plan().unwrap();
        let bd = flat.boundary().unwrap();
        let coeffs: Vec<GroupElement> = (0..4)
            .map(|v| bd.get(v).cloned().unwrap_or_else(|| flat.group().zero()))
            .collect();
        plan.transports(&coeffs).unwrap();
        let cost = plan.cost_against(flat.metric()).unwrap();
        assert_eq!(cost, flat.mass().unwrap());
        let inst = crate::metric::Instance::new(
            flat.group().clone(),
            flat.metric().clone(),
            coeffs,
        )
        .unwrap();
        let solved = solve(&inst).unwrap();
        assert_eq!(cost, solved.cost.unwrap());
    }

    #[test]
    fn boundary_supported_chain_returns_unchanged() {
        let chain = PolyChain1::new(
            z_group(),
            uniform_metric(3, 1),
            [0, 1],
            [(0, 1, z(7))],
        )
        .unwrap();
        let (flat, trace) = chain.simplify(&NbpSearchOptions::default()).unwrap();
        assert!(trace.steps.is_empty());
        assert_eq!(flat, chain);
    }

    #[test]
    fn simplify_requires_boundary_inside_the_marked_set() {
        let chain = PolyChain1::new(
            z_group(),
            uniform_metric(3, 1),
            [0],
            [(0, 1, z(7))],
        )
        .unwrap();
        assert!(matches!(
            chain.simplify(&NbpSearchOptions::default()),
            Err(Error::InvalidChain(_))
        ));
    }

    #[test]
    fn branching_star_is_reported_with_its_coefficients() {
        let z4 = GroupSpec::new(vec![FactorSpec::zmod(
            4,
            vec![s(0), s(1), s(2), s(1)],
        )])
        .unwrap();
        let one = GroupElement::new(vec![Coord::Mod(vec![1])]);
        let three = GroupElement::new(vec![Coord::Mod(vec![3])]);
        let chain = PolyChain1::new(
            z4.clone(),
            uniform_metric(5, 1),
            [0, 1, 2, 3],
            (0..4).map(|i| (i, 4, three.clone())).collect::<Vec<_>>(),
        )
        .unwrap();
        // Center edges read outward all carry 1: the all-ones star.
        let (_, star) = chain.star(4).unwrap();
        assert_eq!(star, vec![one.clone(), one.clone(), one.clone(), one]);
        match chain.simplify(&NbpSearchOptions::default()) {
            Err(Error::NoNbpPlanForStar {
                vertex,
                star_coeffs,
                search_space,
            }) => {
                assert_eq!(vertex, 4);
                assert_eq!(star_coeffs, "[[1], [1], [1], [1]]");
                assert_eq!(search_space, 4096);
            }
            other => panic!("expected a star refutation, got {other:?}"),
        }
    }

    #[test]
    fn chain_json_round_trips() {
        let chain = star_chain(star_metric(2));
        let json = chain.to_json();
        let back = PolyChain1::from_json(&json).unwrap();
        assert_eq!(back, chain);
        assert_eq!(json["edges"][0]["u"], 0);
        assert!(json["boundary_set"].is_array());
    }
}
