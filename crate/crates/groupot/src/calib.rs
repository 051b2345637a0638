//! Duality certificates: exact Kantorovich potentials for line factors,
//! fillings of 0-chains in finite geodesic trees, Lipschitz verification of
//! candidate maps, and the equality-case check that turns a calibrated
//! instance into a nonbranching report.
//!
//! The lower-bound side works for any coefficient group: push each
//! factor's 0-chain through a 1-Lipschitz map into a tree, fill it there
//! (the filling in a tree is unique), and add up the masses. Since maps
//! only shrink distances and the filling is minimal on the tree, the total
//! never exceeds the transport cost.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::chain::{Chain0, PolyChain1};
use crate::error::{Error, Result};
use crate::group::{Coord, FactorSpec, GroupElement, GroupSpec};
use crate::linear::{Constraint, System};
use crate::metric::{FiniteMetric, Instance};
use crate::nbp::{check_nbp, NbpReport};
use crate::scalar::Scalar;
use crate::solver::solve;

/// A finite geodesic tree: vertices `0..n`, edges with positive lengths,
/// connected and acyclic. Path distances are precomputed on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    n: usize,
    edges: Vec<(usize, usize, Scalar)>,
    dist: Vec<Vec<Scalar>>,
}

impl Tree {
    pub fn new(n: usize, edges: Vec<(usize, usize, Scalar)>) -> Result<Tree> {
        if n == 0 {
            return Err(Error::InvalidTree("a tree needs at least one vertex".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidTree(format!(
                "a tree on {n} vertices needs {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (id, &(u, v, ref len)) in edges.iter().enumerate() {
            if u == v {
                return Err(Error::InvalidTree(format!("loop edge at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidTree(format!(
                    "edge ({u},{v}) outside vertex range 0..{n}"
                )));
            }
            if !len.is_positive() {
                return Err(Error::InvalidTree(format!(
                    "edge ({u},{v}) has nonpositive length {len}"
                )));
            }
            adj[u].push((v, id));
            adj[v].push((u, id));
        }
        // n-1 edges and connectivity together rule out cycles.
        let mut dist = vec![vec![Scalar::zero(); n]; n];
        for root in 0..n {
            let mut seen = vec![false; n];
            seen[root] = true;
            let mut stack = vec![root];
            let mut reached = 1;
            while let Some(v) = stack.pop() {
                for &(w, id) in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        reached += 1;
                        dist[root][w] = &dist[root][v] + &edges[id].2;
                        stack.push(w);
                    }
                }
            }
            if reached != n {
                return Err(Error::InvalidTree("tree is not connected".into()));
            }
        }
        Ok(Tree { n, edges, dist })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> &[(usize, usize, Scalar)] {
        &self.edges
    }

    pub fn path_dist(&self, i: usize, j: usize) -> &Scalar {
        &self.dist[i][j]
    }

    /// The full path metric; valid because edge lengths are positive.
    pub fn path_metric(&self) -> Result<FiniteMetric> {
        FiniteMetric::new(self.dist.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "n": self.n, "edges": self.edges })
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Tree> {
        #[derive(Deserialize)]
        struct TreeRaw {
            n: usize,
            edges: Vec<(usize, usize, Scalar)>,
        }
        let raw: TreeRaw = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("bad tree: {e}")))?;
        Tree::new(raw.n, raw.edges)
    }
}

/// Assignment of instance points to tree vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeMap {
    pub to_vertex: Vec<usize>,
}

/// A pair violating the Lipschitz inequality: the tree pulls these points
/// further apart than the space does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LipschitzBreach {
    pub i: usize,
    pub j: usize,
    pub tree_dist: Scalar,
    pub space_dist: Scalar,
}

impl LipschitzBreach {
    fn into_error(self) -> Error {
        Error::LipschitzViolation {
            i: self.i,
            j: self.j,
            tree: self.tree_dist,
            space: self.space_dist,
        }
    }
}

/// Exact pairwise Lipschitz check of a candidate map; an empty report
/// means the map is 1-Lipschitz.
pub fn verify_tree_map(
    metric: &FiniteMetric,
    tree: &Tree,
    map: &TreeMap,
) -> Result<Vec<LipschitzBreach>> {
    let n = metric.len();
    if map.to_vertex.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            found: map.to_vertex.len(),
        });
    }
    if let Some(&v) = map.to_vertex.iter().find(|&&v| v >= tree.len()) {
        return Err(Error::InvalidInput(format!(
            "map target {v} outside tree of {} vertices",
            tree.len()
        )));
    }
    let mut breaches = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let t = tree.path_dist(map.to_vertex[i], map.to_vertex[j]);
            let d = metric.dist(i, j);
            if t > d {
                breaches.push(LipschitzBreach {
                    i,
                    j,
                    tree_dist: t.clone(),
                    space_dist: d.clone(),
                });
            }
        }
    }
    Ok(breaches)
}

/// Per-point potential values for one line factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPotential {
    pub values: Vec<Scalar>,
}

impl DualPotential {
    /// First pair violating `|f(x_i) - f(x_j)| <= d(x_i, x_j)`, if any.
    pub fn lipschitz_breach(&self, metric: &FiniteMetric) -> Option<LipschitzBreach> {
        let n = self.values.len().min(metric.len());
        for i in 0..n {
            for j in (i + 1)..n {
                let gap = (&self.values[i] - &self.values[j]).abs();
                if &gap > metric.dist(i, j) {
                    return Some(LipschitzBreach {
                        i,
                        j,
                        tree_dist: gap,
                        space_dist: metric.dist(i, j).clone(),
                    });
                }
            }
        }
        None
    }
}

fn lipschitz_rows(n: usize, nvars: usize, metric: &FiniteMetric, sys: &mut System) {
    for i in 0..n {
        for j in (i + 1)..n {
            for (a, b) in [(i, j), (j, i)] {
                let mut coeffs = vec![Scalar::zero(); nvars];
                coeffs[a] = Scalar::one();
                coeffs[b] = -Scalar::one();
                sys.push(Constraint::le(coeffs, metric.dist(i, j).clone()));
            }
        }
    }
}

/// Maximizes `sum c_i f(x_i)` over 1-Lipschitz potentials, exactly, by
/// rational projection. The potential is normalized to `f(x_0) = 0` and is
/// the least such maximizer coordinatewise.
pub fn kantorovich_dual(
    metric: &FiniteMetric,
    coeffs: &[Scalar],
) -> Result<(DualPotential, Scalar)> {
    let n = metric.len();
    if coeffs.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            found: coeffs.len(),
        });
    }
    let mut total = Scalar::zero();
    for c in coeffs {
        total = &total + c;
    }
    if !total.is_zero() {
        return Err(Error::NonZeroSum);
    }
    if n == 0 {
        return Ok((DualPotential { values: vec![] }, Scalar::zero()));
    }
    // Variables 0..n are the potential, variable n the objective value.
    let mut sys = System::new(n + 1);
    let mut gauge = vec![Scalar::zero(); n + 1];
    gauge[0] = Scalar::one();
    sys.push(Constraint::eq(gauge, Scalar::zero()));
    lipschitz_rows(n, n + 1, metric, &mut sys);
    let mut obj = vec![Scalar::zero(); n + 1];
    for (i, c) in coeffs.iter().enumerate() {
        obj[i] = -c.clone();
    }
    obj[n] = Scalar::one();
    sys.push(Constraint::eq(obj, Scalar::zero()));
    let range = sys
        .range_of(n)?
        .ok_or_else(|| Error::InvalidInput("dual system infeasible".into()))?;
    let (value, strict) = range
        .upper
        .expect("the pinned Lipschitz polytope is compact");
    debug_assert!(!strict);
    // Recover the least maximizer from a fresh system without the
    // objective variable.
    let mut pinned = System::new(n);
    let mut gauge = vec![Scalar::zero(); n];
    gauge[0] = Scalar::one();
    pinned.push(Constraint::eq(gauge, Scalar::zero()));
    lipschitz_rows(n, n, metric, &mut pinned);
    pinned.push(Constraint::eq(coeffs.to_vec(), value.clone()));
    let values = pinned
        .lex_min()?
        .expect("the maximum is attained on the polytope");
    Ok((DualPotential { values }, value))
}

/// Runs the dual on one `IntZ`/`RealQ` factor of an instance; the value is
/// scaled by the factor weight and equals that factor's exact flow cost.
pub fn kantorovich_dual_factor(
    inst: &Instance,
    factor: usize,
) -> Result<(DualPotential, Scalar)> {
    let fs = inst.group.factors();
    if factor >= fs.len() {
        return Err(Error::InvalidInput(format!(
            "factor {factor} out of range for {} factors",
            fs.len()
        )));
    }
    let weight = match &fs[factor] {
        FactorSpec::IntZ { weight } | FactorSpec::RealQ { weight } => weight.clone(),
        FactorSpec::ModM { .. } => {
            return Err(Error::UnsupportedFactor {
                index: factor,
                reason: "dual potentials need a line factor".into(),
            })
        }
    };
    let coeffs: Vec<Scalar> = inst
        .coefficients
        .iter()
        .map(|g| match &g.coords[factor] {
            Coord::Int(v) => Scalar::from_bigint(v.clone()),
            Coord::Rat(r) => r.clone(),
            Coord::Mod(_) => unreachable!("line factor has a numeric coordinate"),
        })
        .collect();
    let (pot, value) = kantorovich_dual(&inst.metric, &coeffs)?;
    Ok((pot, &value * &weight))
}

/// Realizes a potential as an interval tree: one vertex per distinct
/// value, consecutive gaps as edge lengths, points mapped to their value's
/// vertex. The map is 1-Lipschitz whenever the potential is.
pub fn realize_potential(potential: &DualPotential) -> Result<(Tree, TreeMap)> {
    if potential.values.is_empty() {
        return Err(Error::InvalidInput("potential on no points".into()));
    }
    let levels: Vec<Scalar> = potential
        .values
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let edges: Vec<(usize, usize, Scalar)> = levels
        .windows(2)
        .enumerate()
        .map(|(i, w)| (i, i + 1, &w[1] - &w[0]))
        .collect();
    let tree = Tree::new(levels.len(), edges)?;
    let to_vertex = potential
        .values
        .iter()
        .map(|v| levels.binary_search(v).expect("value is a level"))
        .collect();
    Ok((tree, TreeMap { to_vertex }))
}

/// Fills a zero-sum 0-chain in a tree by leaf peeling. The filling is the
/// unique 1-chain with that boundary; returns it with its mass.
pub fn tree_fill(
    tree: &Tree,
    chain: &Chain0,
    group: &GroupSpec,
) -> Result<(PolyChain1, Scalar)> {
    if let Some(v) = chain.support().iter().find(|&&v| v >= tree.len()) {
        return Err(Error::InvalidInput(format!(
            "chain vertex {v} outside tree of {} vertices",
            tree.len()
        )));
    }
    let mut sum = group.zero();
    for (_, g) in chain.iter() {
        sum = group.add(&sum, g)?;
    }
    if !group.is_zero(&sum) {
        return Err(Error::NonZeroSum);
    }
    let n = tree.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v, _)) in tree.edges().iter().enumerate() {
        adj[u].push((v, id));
        adj[v].push((u, id));
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive = vec![true; n];
    let mut required: Vec<GroupElement> = vec![group.zero(); n];
    for (v, g) in chain.iter() {
        required[v] = g.clone();
    }
    let mut leaves: BTreeSet<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    let mut fill_edges = Vec::new();
    let mut remaining = n;
    while remaining > 1 {
        let v = *leaves.iter().next().expect("a finite tree has a leaf");
        leaves.remove(&v);
        let &(p, _) = adj[v]
            .iter()
            .find(|&&(w, _)| alive[w])
            .expect("a live leaf has a live neighbor");
        let r = required[v].clone();
        if !group.is_zero(&r) {
            // Oriented p -> v so the leaf keeps its boundary coefficient.
            fill_edges.push((p, v, r.clone()));
            required[p] = group.add(&required[p], &r)?;
        }
        alive[v] = false;
        remaining -= 1;
        degree[p] -= 1;
        if degree[p] == 1 {
            leaves.insert(p);
        }
    }
    let last = (0..n).find(|&v| alive[v]).expect("one vertex remains");
    debug_assert!(group.is_zero(&required[last]));
    let fill = PolyChain1::new(
        group.clone(),
        tree.path_metric()?,
        chain.support(),
        fill_edges,
    )?;
    let mass = fill.mass()?;
    Ok((fill, mass))
}

/// Joins trees through a fresh hub vertex, each by an edge of the given
/// length. Returns the glued tree and the vertex offset of each subtree;
/// the hub is vertex 0.
pub fn star_glue(trees: &[Tree], separation: &Scalar) -> Result<(Tree, Vec<usize>)> {
    if trees.is_empty() {
        return Err(Error::InvalidInput("no trees to glue".into()));
    }
    if !separation.is_positive() {
        return Err(Error::InvalidInput(format!(
            "separation {separation} must be positive"
        )));
    }
    let mut offsets = Vec::with_capacity(trees.len());
    let mut next = 1;
    let mut edges = Vec::new();
    for tree in trees {
        offsets.push(next);
        edges.push((0, next, separation.clone()));
        for &(u, v, ref len) in tree.edges() {
            edges.push((next + u, next + v, len.clone()));
        }
        next += tree.len();
    }
    Ok((Tree::new(next, edges)?, offsets))
}

/// Weak-duality lower bound: verifies each factor's map, pushes that
/// factor's 0-chain into its tree, fills, and sums the masses. Never
/// exceeds the transport cost.
pub fn calibration_value(inst: &Instance, certs: &[(Tree, TreeMap)]) -> Result<Scalar> {
    let fs = inst.group.factors();
    if certs.len() != fs.len() {
        return Err(Error::ShapeMismatch {
            expected: fs.len(),
            found: certs.len(),
        });
    }
    let mut total = Scalar::zero();
    for (k, (tree, map)) in certs.iter().enumerate() {
        if let Some(breach) = verify_tree_map(&inst.metric, tree, map)?.into_iter().next() {
            return Err(breach.into_error());
        }
        let factor_group = GroupSpec::new(vec![fs[k].clone()])?;
        let pushed = Chain0::from_entries(
            &factor_group,
            inst.coefficients
                .iter()
                .enumerate()
                .map(|(i, g)| (map.to_vertex[i], GroupElement::new(vec![g.coords[k].clone()]))),
        )?;
        let (_, mass) = tree_fill(tree, &pushed, &factor_group)?;
        total = &total + &mass;
    }
    Ok(total)
}

/// Equality-case check: if the certificate's value matches the exact
/// transport cost, the optimal plan inherits the nonbranching row
/// equalities; reports the plan's nonbranching status. A strict gap is the
/// `NotCalibrated` error.
pub fn converse_check(inst: &Instance, tree: &Tree, map: &TreeMap) -> Result<NbpReport> {
    let certs: Vec<(Tree, TreeMap)> = inst
        .group
        .factors()
        .iter()
        .map(|_| (tree.clone(), map.clone()))
        .collect();
    let fill = calibration_value(inst, &certs)?;
    let plan = solve(inst)?;
    let optimal = plan.cost.clone().expect("solve attaches the cost");
    if fill != optimal {
        return Err(Error::NotCalibrated { fill, optimal });
    }
    check_nbp(&plan, inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_flow;
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

    fn z2_group() -> GroupSpec {
        GroupSpec::new(vec![FactorSpec::z2(s(1))]).unwrap()
    }

    fn bit(b: u64) -> GroupElement {
        GroupElement::new(vec![Coord::Mod(vec![b])])
    }

    fn metric(rows: &[&[i64]]) -> FiniteMetric {
        FiniteMetric::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| s(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn line_metric(n: usize) -> FiniteMetric {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| s((i as i64 - j as i64).abs()))
                    .collect()
            })
            .collect();
        FiniteMetric::new(rows).unwrap()
    }

    fn path_tree(lengths: &[i64]) -> Tree {
        Tree::new(
            lengths.len() + 1,
            lengths
                .iter()
                .enumerate()
                .map(|(i, &l)| (i, i + 1, s(l)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn tree_validation_enforces_shape() {
        assert!(matches!(Tree::new(0, vec![]), Err(Error::InvalidTree(_))));
        // cycle: right edge count, not a tree
        assert!(matches!(
            Tree::new(3, vec![(0, 1, s(1)), (1, 2, s(1)), (2, 0, s(1))]),
            Err(Error::InvalidTree(_))
        ));
        // doubled edge leaves a vertex stranded
        assert!(matches!(
            Tree::new(3, vec![(0, 1, s(1)), (0, 1, s(1))]),
            Err(Error::InvalidTree(_))
        ));
        assert!(matches!(
            Tree::new(2, vec![(0, 1, s(0))]),
            Err(Error::InvalidTree(_))
        ));
        assert!(matches!(
            Tree::new(2, vec![(0, 0, s(1))]),
            Err(Error::InvalidTree(_))
        ));
        assert!(Tree::new(1, vec![]).is_ok());
    }

    #[test]
    fn path_distances_accumulate_lengths() {
        let tree = path_tree(&[1, 2]);
        assert_eq!(tree.path_dist(0, 2), &s(3));
        assert_eq!(tree.path_dist(2, 0), &s(3));
        assert_eq!(tree.path_dist(1, 1), &s(0));
        assert!(tree.path_metric().is_ok());
    }

    #[test]
    fn dual_maximizes_the_three_point_objective() {
        let m = metric(&[&[0, 2, 1], &[2, 0, 2], &[1, 2, 0]]);
        let (pot, value) = kantorovich_dual(&m, &[s(1), s(1), s(-2)]).unwrap();
        assert_eq!(value, s(3));
        assert_eq!(pot.values, vec![s(0), s(1), s(-1)]);
        assert!(pot.lipschitz_breach(&m).is_none());
    }

    #[test]
    fn dual_on_two_points_is_the_distance_rate() {
        let m = metric(&[&[0, 3], &[3, 0]]);
        let (pot, value) = kantorovich_dual(&m, &[s(5), s(-5)]).unwrap();
        assert_eq!(value, s(15));
        assert_eq!(pot.values, vec![s(0), s(-3)]);
    }

    #[test]
    fn dual_of_zero_coefficients_is_zero() {
        let m = metric(&[&[0, 1], &[1, 0]]);
        let (_, value) = kantorovich_dual(&m, &[s(0), s(0)]).unwrap();
        assert_eq!(value, s(0));
        assert_eq!(
            kantorovich_dual(&m, &[s(1), s(1)]),
            Err(Error::NonZeroSum)
        );
    }

    #[test]
    fn dual_value_matches_flow_cost() {
        let m = metric(&[&[0, 2, 3, 1], &[2, 0, 4, 2], &[3, 4, 0, 3], &[1, 2, 3, 0]]);
        let raw = [3i64, -1, -1, -1];
        let coeffs: Vec<Scalar> = raw.iter().map(|&v| s(v)).collect();
        let inst = Instance::new(
            z_group(),
            m.clone(),
            raw.iter().map(|&v| z(v)).collect(),
        )
        .unwrap();
        let (_, dual) = kantorovich_dual(&m, &coeffs).unwrap();
        let flow = solve_flow(&inst).unwrap();
        assert_eq!(dual, flow.cost.unwrap());
    }

    #[test]
    fn factor_dual_scales_by_weight() {
        let group = GroupSpec::new(vec![FactorSpec::RealQ { weight: s(2) }]).unwrap();
        let m = metric(&[&[0, 3], &[3, 0]]);
        let inst = Instance::new(
            group,
            m,
            vec![
                GroupElement::new(vec![Coord::Rat(s(5))]),
                GroupElement::new(vec![Coord::Rat(s(-5))]),
            ],
        )
        .unwrap();
        let (_, value) = kantorovich_dual_factor(&inst, 0).unwrap();
        assert_eq!(value, s(30));
        assert_eq!(value, solve_flow(&inst).unwrap().cost.unwrap());
        assert!(matches!(
            kantorovich_dual_factor(&inst, 1),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn interval_realization_is_lipschitz_and_exact() {
        let m = metric(&[&[0, 2, 1], &[2, 0, 2], &[1, 2, 0]]);
        let coeffs = [s(1), s(1), s(-2)];
        let (pot, value) = kantorovich_dual(&m, &coeffs).unwrap();
        let (tree, map) = realize_potential(&pot).unwrap();
        assert!(verify_tree_map(&m, &tree, &map).unwrap().is_empty());
        let inst = Instance::new(z_group(), m, vec![z(1), z(1), z(-2)]).unwrap();
        let cal = calibration_value(&inst, &[(tree, map)]).unwrap();
        assert_eq!(cal, value);
        assert_eq!(cal, solve(&inst).unwrap().cost.unwrap());
    }

    #[test]
    fn path_fill_pushes_through_both_edges() {
        let tree = path_tree(&[1, 1]);
        let chain =
            Chain0::from_entries(&z_group(), [(0, z(7)), (2, z(-7))]).unwrap();
        let (fill, mass) = tree_fill(&tree, &chain, &z_group()).unwrap();
        assert_eq!(mass, s(14));
        assert_eq!(fill.boundary().unwrap(), chain);
        assert_eq!(fill.edge_count(), 2);
    }

    #[test]
    fn star_fill_carries_each_leaf_coefficient() {
        // center 0, leaves 1..=4, unit lengths
        let tree = Tree::new(
            5,
            (1..5).map(|v| (0, v, s(1))).collect(),
        )
        .unwrap();
        let chain = Chain0::from_entries(
            &z2_group(),
            (1..5).map(|v| (v, bit(1))),
        )
        .unwrap();
        let (fill, mass) = tree_fill(&tree, &chain, &z2_group()).unwrap();
        assert_eq!(mass, s(4));
        assert_eq!(fill.boundary().unwrap(), chain);
    }

    #[test]
    fn fill_is_the_unique_chain_with_that_boundary() {
        let tree = path_tree(&[1, 1]);
        let chain =
            Chain0::from_entries(&z_group(), [(0, z(3)), (2, z(-3))]).unwrap();
        let (fill, _) = tree_fill(&tree, &chain, &z_group()).unwrap();
        // bump one edge coefficient: the boundary moves
        let mut edges: Vec<(usize, usize, GroupElement)> = fill
            .edges()
            .iter()
            .map(|&(u, v, g)| (u, v, g.clone()))
            .collect();
        edges[0].2 = z_group().add(&edges[0].2, &z(1)).unwrap();
        let bumped = PolyChain1::new(
            z_group(),
            tree.path_metric().unwrap(),
            chain.support(),
            edges,
        )
        .unwrap();
        assert_ne!(bumped.boundary().unwrap(), chain);
    }

    #[test]
    fn fill_rejects_unbalanced_chains() {
        let tree = path_tree(&[1]);
        let chain = Chain0::from_entries(&z_group(), [(0, z(1))]).unwrap();
        assert!(matches!(
            tree_fill(&tree, &chain, &z_group()),
            Err(Error::NonZeroSum)
        ));
    }

    #[test]
    fn lipschitz_check_reports_the_stretched_pair() {
        let m = metric(&[&[0, 1], &[1, 0]]);
        let tree = path_tree(&[2]);
        let stretched = TreeMap { to_vertex: vec![0, 1] };
        let breaches = verify_tree_map(&m, &tree, &stretched).unwrap();
        assert_eq!(
            breaches,
            vec![LipschitzBreach {
                i: 0,
                j: 1,
                tree_dist: s(2),
                space_dist: s(1),
            }]
        );
        let collapsed = TreeMap { to_vertex: vec![0, 0] };
        assert!(verify_tree_map(&m, &tree, &collapsed).unwrap().is_empty());
    }

    #[test]
    fn isometric_path_embedding_passes() {
        let m = line_metric(4);
        let tree = path_tree(&[1, 1, 1]);
        let map = TreeMap { to_vertex: vec![0, 1, 2, 3] };
        assert!(verify_tree_map(&m, &tree, &map).unwrap().is_empty());
    }

    #[test]
    fn star_glue_counts_vertices_and_splits_fills() {
        let a = path_tree(&[2]);
        let b = path_tree(&[3]);
        let (glued, offsets) = star_glue(&[a.clone(), b.clone()], &s(100)).unwrap();
        assert_eq!(glued.len(), 5);
        assert_eq!(offsets, vec![1, 3]);
        assert_eq!(glued.path_dist(1, 3), &s(200));

        // zero-sum images inside each subtree: glued fill = sum of parts
        let za = Chain0::from_entries(&z_group(), [(0, z(2)), (1, z(-2))]).unwrap();
        let zb = Chain0::from_entries(&z_group(), [(0, z(1)), (1, z(-1))]).unwrap();
        let (_, mass_a) = tree_fill(&a, &za, &z_group()).unwrap();
        let (_, mass_b) = tree_fill(&b, &zb, &z_group()).unwrap();
        let combined = Chain0::from_entries(
            &z_group(),
            [
                (offsets[0], z(2)),
                (offsets[0] + 1, z(-2)),
                (offsets[1], z(1)),
                (offsets[1] + 1, z(-1)),
            ],
        )
        .unwrap();
        let (_, glued_mass) = tree_fill(&glued, &combined, &z_group()).unwrap();
        assert_eq!(glued_mass, &mass_a + &mass_b);
        assert_eq!(glued_mass, s(7));
    }

    #[test]
    fn glue_rejects_degenerate_input() {
        assert!(matches!(
            star_glue(&[], &s(1)),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            star_glue(&[path_tree(&[1])], &s(0)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn mixed_factor_calibration_reaches_the_cost() {
        let group = GroupSpec::new(vec![
            FactorSpec::IntZ { weight: s(1) },
            FactorSpec::z2(s(1)),
        ])
        .unwrap();
        let m = metric(&[&[0, 2], &[2, 0]]);
        let el = |n: i64, b: u64| {
            GroupElement::new(vec![Coord::Int(BigInt::from(n)), Coord::Mod(vec![b])])
        };
        let inst = Instance::new(group, m.clone(), vec![el(4, 1), el(-4, 1)]).unwrap();

        let (pot, _) = kantorovich_dual(&m, &[s(4), s(-4)]).unwrap();
        let (ztree, zmap) = realize_potential(&pot).unwrap();
        let edge_tree = path_tree(&[2]);
        let edge_map = TreeMap { to_vertex: vec![0, 1] };
        let cal = calibration_value(
            &inst,
            &[(ztree, zmap), (edge_tree, edge_map)],
        )
        .unwrap();
        let cost = solve(&inst).unwrap().cost.unwrap();
        assert_eq!(cal, s(10));
        assert_eq!(cal, cost);

        // collapsing the parity factor to a point stays a valid lower bound
        let point = Tree::new(1, vec![]).unwrap();
        let collapse = TreeMap { to_vertex: vec![0, 0] };
        let (pot2, _) = kantorovich_dual(&m, &[s(4), s(-4)]).unwrap();
        let (zt2, zm2) = realize_potential(&pot2).unwrap();
        let weak = calibration_value(&inst, &[(zt2, zm2), (point, collapse)]).unwrap();
        assert_eq!(weak, s(8));
        assert!(weak < cost);
    }

    #[test]
    fn converse_reports_nonbranching_at_equality() {
        let m = metric(&[&[0, 3], &[3, 0]]);
        let inst = Instance::new(z_group(), m.clone(), vec![z(5), z(-5)]).unwrap();
        let (pot, _) = kantorovich_dual(&m, &[s(5), s(-5)]).unwrap();
        let (tree, map) = realize_potential(&pot).unwrap();
        let report = converse_check(&inst, &tree, &map).unwrap();
        assert!(report.nbp);
    }

    #[test]
    fn converse_on_paired_bits_finds_the_matching() {
        let inst = Instance::new(
            z2_group(),
            line_metric(4),
            vec![bit(1), bit(1), bit(1), bit(1)],
        )
        .unwrap();
        let tree = path_tree(&[1, 1, 1]);
        let map = TreeMap { to_vertex: vec![0, 1, 2, 3] };
        let report = converse_check(&inst, &tree, &map).unwrap();
        assert!(report.nbp);

        let shrunk = path_tree(&[1, 1]);
        let collapse = TreeMap { to_vertex: vec![0, 1, 2, 2] };
        match converse_check(&inst, &shrunk, &collapse) {
            Err(Error::NotCalibrated { fill, optimal }) => {
                assert!(fill < optimal);
                assert_eq!(optimal, s(2));
            }
            other => panic!("expected a calibration gap, got {other:?}"),
        }
    }

    #[test]
    fn tree_json_round_trips() {
        let tree = path_tree(&[1, 2]);
        let back = Tree::from_json(&tree.to_json()).unwrap();
        assert_eq!(back, tree);
        assert!(Tree::from_json(&serde_json::json!({"n": 2, "edges": []})).is_err());
    }
}
