//! Polytope norms on `Q^d` and the extreme-direction additivity test.
//!
//! A centrally symmetric polytope with vertices `V` is the unit ball of a
//! norm whose value at `x` is the gauge `min { sum λ_i : x = sum λ_i v_i,
//! λ_i >= 0 }`. For vertices `p_i` of the ball, nonbranching routing along
//! the directions `p_i` requires `gauge(sum λ_i p_i) = sum |λ_i|`; a strict
//! inequality is a finite certificate that mass moving along those
//! directions can merge more cheaply than it can travel separately. The
//! gauge is computed exactly: every linear program here is solved by
//! enumerating basic solutions over the rationals.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Norm on `Q^d` whose unit ball is the convex hull of a symmetric,
/// full-dimensional vertex list.
#[derive(Debug, Clone)]
pub struct PolytopeNorm {
    vertices: Vec<Vec<Scalar>>,
    dim: usize,
}

impl PolytopeNorm {
    /// Validates the vertex list: consistent dimensions, no zero or
    /// duplicate points, closed under negation, and spanning all of `Q^d`
    /// so the gauge is finite everywhere.
    pub fn new(vertices: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = match vertices.first() {
            Some(v) if !v.is_empty() => v.len(),
            _ => {
                return Err(Error::InvalidInput(
                    "polytope needs vertices of positive dimension".into(),
                ))
            }
        };
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    index: i,
                    expected: dim,
                    found: v.len(),
                });
            }
            if v.iter().all(Scalar::is_zero) {
                return Err(Error::InvalidInput(format!(
                    "vertex {i} is the origin, which is interior to any \
                     symmetric ball"
                )));
            }
        }
        for i in 0..vertices.len() {
            for j in (i + 1)..vertices.len() {
                if vertices[i] == vertices[j] {
                    return Err(Error::DuplicatePoint { i, j });
                }
            }
        }
        for (i, v) in vertices.iter().enumerate() {
            let neg: Vec<Scalar> = v.iter().map(|x| -x).collect();
            if !vertices.contains(&neg) {
                return Err(Error::InvalidInput(format!(
                    "vertex list is not symmetric: the negation of vertex {i} \
                     is missing"
                )));
            }
        }
        let rows: Vec<Vec<Scalar>> = vertices.clone();
        if rank(rows, dim) < dim {
            return Err(Error::InvalidInput(
                "vertices do not span the space; the ball is degenerate".into(),
            ));
        }
        Ok(PolytopeNorm { vertices, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<Scalar>] {
        &self.vertices
    }

    /// Exact gauge of `x`: the cheapest total weight writing `x` as a
    /// nonnegative combination of vertices. Some optimum uses at most `d`
    /// linearly independent vertices, so all such bases are tried.
    pub fn gauge(&self, x: &[Scalar]) -> Result<Scalar> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: self.dim,
                found: x.len(),
            });
        }
        if x.iter().all(Scalar::is_zero) {
            return Ok(Scalar::zero());
        }
        let mut best: Option<Scalar> = None;
        let mut chosen: Vec<usize> = Vec::new();
        self.gauge_scan(x, 0, &mut chosen, &mut best);
        Ok(best.expect("a symmetric spanning vertex set reaches every point"))
    }

    fn gauge_scan(
        &self,
        x: &[Scalar],
        from: usize,
        chosen: &mut Vec<usize>,
        best: &mut Option<Scalar>,
    ) {
        if !chosen.is_empty() {
            let cols: Vec<&[Scalar]> = chosen.iter().map(|&i| &self.vertices[i][..]).collect();
            if let Some(lambda) = solve_columns(&cols, x) {
                if lambda.iter().all(|l| !l.is_negative()) {
                    let total = lambda.iter().fold(Scalar::zero(), |a, l| &a + l);
                    if best.as_ref().map_or(true, |b| &total < b) {
                        *best = Some(total);
                    }
                }
            }
        }
        if chosen.len() == self.dim {
            return;
        }
        for i in from..self.vertices.len() {
            chosen.push(i);
            self.gauge_scan(x, i + 1, chosen, best);
            chosen.pop();
        }
    }

    /// Whether `p` is an extreme point of the unit ball, that is, a listed
    /// vertex outside the hull of the remaining ones.
    pub fn is_extreme(&self, p: &[Scalar]) -> Result<bool> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: self.dim,
                found: p.len(),
            });
        }
        let Some(at) = self.vertices.iter().position(|v| v[..] == *p) else {
            return Ok(false);
        };
        let others: Vec<&[Scalar]> = self
            .vertices
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != at)
            .map(|(_, v)| &v[..])
            .collect();
        Ok(!in_convex_hull(&others, p))
    }
}

/// Membership of `p` in the convex hull of `points`, decided by basic
/// solutions of the lifted system (weights sum to one).
fn in_convex_hull(points: &[&[Scalar]], p: &[Scalar]) -> bool {
    let d = p.len();
    let lifted: Vec<Vec<Scalar>> = points
        .iter()
        .map(|q| {
            let mut col: Vec<Scalar> = q.to_vec();
            col.push(Scalar::one());
            col
        })
        .collect();
    let mut target: Vec<Scalar> = p.to_vec();
    target.push(Scalar::one());
    let mut chosen: Vec<usize> = Vec::new();
    hull_scan(&lifted, &target, d + 1, 0, &mut chosen)
}

fn hull_scan(
    lifted: &[Vec<Scalar>],
    target: &[Scalar],
    max_size: usize,
    from: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    if !chosen.is_empty() {
        let cols: Vec<&[Scalar]> = chosen.iter().map(|&i| &lifted[i][..]).collect();
        if let Some(mu) = solve_columns(&cols, target) {
            if mu.iter().all(|m| !m.is_negative()) {
                return true;
            }
        }
    }
    if chosen.len() == max_size {
        return false;
    }
    for i in from..lifted.len() {
        chosen.push(i);
        if hull_scan(lifted, target, max_size, i + 1, chosen) {
            chosen.pop();
            return true;
        }
        chosen.pop();
    }
    false
}

/// Row echelon pivot count over the first `cols` columns.
fn rank(mut rows: Vec<Vec<Scalar>>, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    rows[i][j] = &rows[i][j] - &(&f * &rows[r][j]);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Unique solution of `cols · λ = b` when the columns are independent and
/// `b` lies in their span; `None` otherwise.
fn solve_columns(cols: &[&[Scalar]], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let d = b.len();
    let k = cols.len();
    debug_assert!(cols.iter().all(|c| c.len() == d));
    let mut rows: Vec<Vec<Scalar>> = (0..d)
        .map(|r| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..d).find(|&i| !rows[i][c].is_zero()) else {
            return None; // dependent columns
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &lead;
        }
        for i in 0..d {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..rows[i].len() {
                    rows[i][j] = &rows[i][j] - &(&f * &rows[r][j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    for row in rows.iter().skip(r) {
        if !row[k].is_zero() {
            return None; // b leaves the span
        }
    }
    Some((0..k).map(|t| rows[t][k].clone()).collect())
}

/// Outcome of the extreme-direction additivity test.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtremeCondition {
    /// `gauge(sum λ_i p_i) = sum |λ_i|`; the common value is reported.
    Holds { value: Scalar },
    Violated(ViolationWitness),
}

/// A strict gap `gauge(point) < l1_value` on a combination of extreme
/// directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationWitness {
    pub point: Vec<Scalar>,
    pub gauge: Scalar,
    pub l1_value: Scalar,
}

/// Tests `gauge(sum λ_i p_i) = sum |λ_i|` for extreme points `p_i` of the
/// ball and nonzero coefficients. The gauge never exceeds the right side,
/// so the test either holds or produces a strict-gap witness.
pub fn check_l1_extreme_condition(
    norm: &PolytopeNorm,
    pts: &[Vec<Scalar>],
    lambdas: &[Scalar],
) -> Result<ExtremeCondition> {
    if pts.is_empty() || pts.len() != lambdas.len() {
        return Err(Error::InvalidInput(format!(
            "{} points need {} coefficients, one each",
            pts.len(),
            pts.len()
        )));
    }
    for (i, l) in lambdas.iter().enumerate() {
        if l.is_zero() {
            return Err(Error::InvalidInput(format!(
                "coefficient {i} is zero; drop the point instead"
            )));
        }
    }
    for (i, p) in pts.iter().enumerate() {
        if p.len() != norm.dim() {
            return Err(Error::DimensionMismatch {
                index: i,
                expected: norm.dim(),
                found: p.len(),
            });
        }
        if !norm.is_extreme(p)? {
            return Err(Error::NotExtreme { index: i });
        }
    }
    if rank(pts.to_vec(), norm.dim()) < pts.len() {
        return Err(Error::DependentPoints);
    }
    let mut point = vec![Scalar::zero(); norm.dim()];
    let mut l1_value = Scalar::zero();
    for (p, l) in pts.iter().zip(lambdas) {
        for (acc, x) in point.iter_mut().zip(p) {
            *acc = &*acc + &(l * x);
        }
        l1_value = &l1_value + &l.abs();
    }
    let gauge = norm.gauge(&point)?;
    debug_assert!(gauge <= l1_value, "the gauge is subadditive");
    if gauge == l1_value {
        Ok(ExtremeCondition::Holds { value: gauge })
    } else {
        Ok(ExtremeCondition::Violated(ViolationWitness {
            point,
            gauge,
            l1_value,
        }))
    }
}
