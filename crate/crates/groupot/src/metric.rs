//! Finite metric spaces and transport instances.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{element_from_json, element_to_json, GroupElement, GroupSpec};
use crate::scalar::Scalar;

/// A symmetric distance matrix over `n` points satisfying the triangle
/// inequality, with zero diagonal and positive off-diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMetric {
    dist: Vec<Vec<Scalar>>,
}

impl FiniteMetric {
    /// Validates and wraps a distance matrix. Checks run in a fixed order:
    /// squareness, symmetry, zero diagonal, positive off-diagonal entries,
    /// triangle inequality.
    pub fn new(dist: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = dist.len();
        if let Some(i) = dist.iter().position(|row| row.len() != n) {
            return Err(Error::ShapeMismatch {
                expected: n,
                found: dist[i].len(),
            });
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::AsymmetricMatrix { i, j });
                }
            }
        }
        for (i, row) in dist.iter().enumerate() {
            if !row[i].is_zero() {
                return Err(Error::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if dist[i][j].is_negative() {
                    return Err(Error::NegativeDistance { i, j });
                }
                if dist[i][j].is_zero() {
                    return Err(Error::ZeroOffDiagonal { i, j });
                }
            }
        }
        for via in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if &dist[i][j] > &(&dist[i][via] + &dist[via][j]) {
                        return Err(Error::TriangleViolation { i, j, via });
                    }
                }
            }
        }
        Ok(FiniteMetric { dist })
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    pub fn dist(&self, i: usize, j: usize) -> &Scalar {
        &self.dist[i][j]
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.dist
    }
}

/// Which p-norm to use when deriving a metric from point coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointNorm {
    L1,
    Linf,
}

/// Builds the distance matrix of a point cloud in `Q^d` under the chosen
/// norm.
pub fn metric_from_points(points: &[Vec<Scalar>], norm: PointNorm) -> Result<FiniteMetric> {
    let n = points.len();
    let d = points.first().map_or(0, Vec::len);
    for (index, p) in points.iter().enumerate() {
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                index,
                expected: d,
                found: p.len(),
            });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if points[i] == points[j] {
                return Err(Error::DuplicatePoint { i, j });
            }
        }
    }
    let mut dist = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let mut l1 = Scalar::zero();
            let mut linf = Scalar::zero();
            for k in 0..d {
                let diff = (&points[i][k] - &points[j][k]).abs();
                linf = linf.max(diff.clone());
                l1 += &diff;
            }
            let v = match norm {
                PointNorm::L1 => l1,
                PointNorm::Linf => linf,
            };
            dist[i][j] = v.clone();
            dist[j][i] = v;
        }
    }
    FiniteMetric::new(dist)
}

/// A metric tagged as the vertex restriction of the geodesic metric on the
/// complete graph over its points. On the vertices the two metrics agree, so
/// the matrix is carried unchanged; the tag records that plans over this
/// metric can be read as fillings in the geodesic graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicVertexMetric {
    pub metric: FiniteMetric,
}

/// Wraps a metric as the vertex metric of its geodesic complete graph.
pub fn complete_graph_metric(vertex_metric: FiniteMetric) -> GeodesicVertexMetric {
    GeodesicVertexMetric {
        metric: vertex_metric,
    }
}

/// Shortest-path closure of a symmetric nonnegative edge-length matrix,
/// turning a weighted complete graph into a geodesic metric. Returns the
/// closed matrix; entries only shrink.
pub fn geodesic_closure(mut dist: Vec<Vec<Scalar>>) -> Result<Vec<Vec<Scalar>>> {
    let n = dist.len();
    if let Some(i) = dist.iter().position(|row| row.len() != n) {
        return Err(Error::ShapeMismatch {
            expected: n,
            found: dist[i].len(),
        });
    }
    for via in 0..n {
        for i in 0..n {
            for j in 0..n {
                let relaxed = &dist[i][via] + &dist[via][j];
                if relaxed < dist[i][j] {
                    dist[i][j] = relaxed;
                }
            }
        }
    }
    Ok(dist)
}

/// A transport problem: group-valued coefficients at metric points, summing
/// to zero.
#[derive(Debug, Clone)]
pub struct Instance {
    pub group: GroupSpec,
    pub metric: FiniteMetric,
    pub coefficients: Vec<GroupElement>,
}

impl Instance {
    pub fn new(
        group: GroupSpec,
        metric: FiniteMetric,
        coefficients: Vec<GroupElement>,
    ) -> Result<Self> {
        if coefficients.len() != metric.len() {
            return Err(Error::ShapeMismatch {
                expected: metric.len(),
                found: coefficients.len(),
            });
        }
        let mut sum = group.zero();
        for c in &coefficients {
            group.conforms(c)?;
            sum = group.add(&sum, c)?;
        }
        if !group.is_zero(&sum) {
            return Err(Error::NonZeroSum);
        }
        Ok(Instance {
            group,
            metric,
            coefficients,
        })
    }

    pub fn len(&self) -> usize {
        self.metric.len()
    }

    pub fn is_empty(&self) -> bool {
        self.metric.is_empty()
    }
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub(crate) enum MetricRaw {
    Matrix {
        d: Vec<Vec<Scalar>>,
    },
    Points {
        #[serde(default = "default_point_norm")]
        p: PointNorm,
        coords: Vec<Vec<Scalar>>,
    },
}

impl MetricRaw {
    pub(crate) fn matrix(m: &FiniteMetric) -> MetricRaw {
        MetricRaw::Matrix {
            d: m.rows().to_vec(),
        }
    }

    pub(crate) fn realize(self) -> Result<FiniteMetric> {
        match self {
            MetricRaw::Matrix { d } => FiniteMetric::new(d),
            MetricRaw::Points { p, coords } => metric_from_points(&coords, p),
        }
    }
}

fn default_point_norm() -> PointNorm {
    PointNorm::L1
}

#[derive(Serialize, Deserialize)]
struct InstanceRaw {
    group: GroupSpec,
    metric: MetricRaw,
    coefficients: Vec<serde_json::Value>,
}

impl Instance {
    /// Parses an instance from its JSON form. The metric is either
    /// `{"kind":"matrix","d":[[...]]}` or
    /// `{"kind":"points","p":"l1"|"linf","coords":[[...]]}`.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: InstanceRaw = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("bad instance: {e}")))?;
        let metric = raw.metric.realize()?;
        let coefficients = raw
            .coefficients
            .iter()
            .map(|v| element_from_json(&raw.group, v))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(raw.group, metric, coefficients)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.group,
            "metric": { "kind": "matrix", "d": self.metric.rows() },
            "coefficients": self.coefficients.iter().map(element_to_json).collect::<Vec<_>>(),
        })
    }
}
