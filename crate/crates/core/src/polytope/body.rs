use super::{for_each_combination, GeometryError, Point, RationalAffine};
use crate::linalg::{affine_dimension, determinant, normal_from_directions, rank, solve};
use crate::rational::{factorial, qbig, qi, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

/// Full-dimensional convex polytope with rational vertices, kept in both
/// representations: sorted extreme points and irredundant facet inequalities
/// `f(x) ≥ 0` scaled to primitive integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<RationalAffine>,
}

/// Solid simplex given by `dim + 1` affinely independent vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplex {
    pub vertices: Vec<Point>,
}

impl Simplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let dim = vertices.len().saturating_sub(1);
        let refs: Vec<&[Rational]> = vertices.iter().map(|v| v.as_slice()).collect();
        let found = affine_dimension(&refs).unwrap_or(0);
        if vertices.iter().any(|v| v.len() != dim) || found != dim {
            return Err(GeometryError::Degenerate { dim, found });
        }
        Ok(Self { vertices })
    }

    /// Standard corner simplex `{x ≥ 0, Σx ≤ side}` in `R^dim`.
    pub fn corner(dim: usize, side: &Rational) -> Self {
        let mut vertices = vec![vec![Rational::zero(); dim]];
        for i in 0..dim {
            let mut v = vec![Rational::zero(); dim];
            v[i] = side.clone();
            vertices.push(v);
        }
        Self { vertices }
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn volume(&self) -> Rational {
        let base = &self.vertices[0];
        let rows: Vec<Vec<Rational>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        determinant(&rows).abs() / qbig(factorial(self.dim()))
    }

    pub fn centroid(&self) -> Point {
        let count = qi(self.vertices.len() as i64);
        (0..self.dim())
            .map(|i| {
                self.vertices
                    .iter()
                    .map(|v| v[i].clone())
                    .sum::<Rational>()
                    / &count
            })
            .collect()
    }
}

/// Scales `f` to integer coefficients with gcd one, preserving orientation.
pub(crate) fn primitive(f: &RationalAffine) -> RationalAffine {
    let coeffs: Vec<&Rational> = f.slope.iter().chain(std::iter::once(&f.constant)).collect();
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if gcd.is_zero() {
        return f.clone();
    }
    let mut scaled: Vec<Rational> = ints.into_iter().map(|v| qbig(v / &gcd)).collect();
    let constant = scaled.pop().unwrap();
    RationalAffine::new(scaled, constant)
}

/// All vertices of the polyhedron `{x : f(x) ≥ 0 for f in constraints}`,
/// by exhaustive enumeration of `dim`-subsets of tight constraints. Sorted
/// and deduplicated; empty when the polyhedron has no vertex.
pub fn polyhedron_vertices(dim: usize, constraints: &[RationalAffine]) -> Vec<Point> {
    let mut found: BTreeSet<Point> = BTreeSet::new();
    for_each_combination(constraints.len(), dim, |idx| {
        let a: Vec<Vec<Rational>> = idx.iter().map(|&i| constraints[i].slope.clone()).collect();
        let b: Vec<Rational> = idx.iter().map(|&i| -&constraints[i].constant).collect();
        let Some(x) = solve(&a, &b) else {
            return;
        };
        if constraints.iter().all(|c| !c.eval(&x).is_negative()) {
            found.insert(x);
        }
    });
    found.into_iter().collect()
}

impl ConvexBody {
    /// Convex hull of a finite point set. Redundant points are discarded.
    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self, GeometryError> {
        if let Some(bad) = points.iter().find(|p| p.len() != dim) {
            return Err(GeometryError::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        let pts: Vec<Point> = points
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let refs: Vec<&[Rational]> = pts.iter().map(|p| p.as_slice()).collect();
        let found = affine_dimension(&refs).ok_or(GeometryError::Empty)?;
        if found < dim {
            return Err(GeometryError::Degenerate { dim, found });
        }

        let mut facets: BTreeSet<RationalAffine> = BTreeSet::new();
        for_each_combination(pts.len(), dim, |idx| {
            let base = &pts[idx[0]];
            let dirs: Vec<Vec<Rational>> = idx[1..]
                .iter()
                .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
                .collect();
            let normal = normal_from_directions(&dirs, dim);
            if normal.iter().all(Zero::is_zero) {
                return;
            }
            let constant = -crate::linalg::dot(&normal, base);
            let mut f = RationalAffine::new(normal, constant);
            let (mut pos, mut neg) = (false, false);
            for p in &pts {
                let v = f.eval(p);
                pos |= v.is_positive();
                neg |= v.is_negative();
            }
            if pos && neg {
                return;
            }
            if neg {
                f = f.scale(&qi(-1));
            }
            facets.insert(primitive(&f));
        });
        let facets: Vec<RationalAffine> = facets.into_iter().collect();

        let vertices: Vec<Point> = pts
            .into_iter()
            .filter(|p| {
                let tight: Vec<Vec<Rational>> = facets
                    .iter()
                    .filter(|f| f.eval(p).is_zero())
                    .map(|f| f.slope.clone())
                    .collect();
                rank(&tight) == dim
            })
            .collect();
        Ok(Self {
            dim,
            vertices,
            facets,
        })
    }

    /// Polytope cut out by `f(x) ≥ 0` for each constraint. Errors when the
    /// region is empty, unbounded in a way that leaves no vertex, or not
    /// full-dimensional.
    pub fn from_constraints(
        dim: usize,
        constraints: &[RationalAffine],
    ) -> Result<Self, GeometryError> {
        let vertices = polyhedron_vertices(dim, constraints);
        if vertices.is_empty() {
            return Err(GeometryError::Empty);
        }
        Self::from_points(dim, &vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn facets(&self) -> &[RationalAffine] {
        &self.facets
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.facets.iter().all(|f| !f.eval(x).is_negative())
    }

    /// Intersection with extra half-spaces.
    pub fn intersect(&self, extra: &[RationalAffine]) -> Result<Self, GeometryError> {
        let mut constraints = self.facets.clone();
        constraints.extend(extra.iter().cloned());
        Self::from_constraints(self.dim, &constraints)
    }

    /// Pulling triangulation: cone from the lexicographically smallest vertex
    /// over the triangulated facets not containing it, recursively.
    pub fn triangulate(&self) -> Vec<Simplex> {
        let facet_sets: Vec<Vec<usize>> = self
            .facets
            .iter()
            .map(|f| {
                (0..self.vertices.len())
                    .filter(|&i| f.eval(&self.vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        self.pull(&all, self.dim, &facet_sets, &mut prefix, &mut out);
        out.into_iter()
            .map(|idx| Simplex {
                vertices: idx.into_iter().map(|i| self.vertices[i].clone()).collect(),
            })
            .collect()
    }

    fn pull(
        &self,
        face: &[usize],
        d: usize,
        facet_sets: &[Vec<usize>],
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if face.len() == d + 1 {
            let mut cell = prefix.clone();
            cell.extend_from_slice(face);
            out.push(cell);
            return;
        }
        let apex = face[0];
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for set in facet_sets {
            let sub: Vec<usize> = face.iter().copied().filter(|i| set.contains(i)).collect();
            if sub.len() < d || sub.contains(&apex) {
                continue;
            }
            let refs: Vec<&[Rational]> = sub.iter().map(|&i| self.vertices[i].as_slice()).collect();
            if affine_dimension(&refs) == Some(d - 1) {
                subfaces.insert(sub);
            }
        }
        prefix.push(apex);
        for sub in subfaces {
            self.pull(&sub, d - 1, facet_sets, prefix, out);
        }
        prefix.pop();
    }

    pub fn volume(&self) -> Rational {
        self.triangulate().iter().map(Simplex::volume).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn pts(raw: &[&[i64]]) -> Vec<Point> {
        raw.iter()
            .map(|p| p.iter().map(|&v| qi(v)).collect())
            .collect()
    }

    #[test]
    fn hull_drops_interior_and_edge_points() {
        let body =
            ConvexBody::from_points(2, &pts(&[&[0, 0], &[2, 0], &[0, 2], &[1, 0], &[0, 1], &[1, 1], &[2, 2]]))
                .unwrap();
        assert_eq!(body.vertices(), pts(&[&[0, 0], &[0, 2], &[2, 0], &[2, 2]]).as_slice());
        assert_eq!(body.facets().len(), 4);
        assert_eq!(body.volume(), qi(4));
    }

    #[test]
    fn cube_triangulation_has_unit_volume() {
        let mut raw = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    raw.push(vec![qi(x), qi(y), qi(z)]);
                }
            }
        }
        let body = ConvexBody::from_points(3, &raw).unwrap();
        assert_eq!(body.facets().len(), 6);
        let cells = body.triangulate();
        assert!(cells.iter().all(|c| !c.volume().is_zero()));
        assert_eq!(cells.iter().map(Simplex::volume).sum::<Rational>(), qi(1));
    }

    #[test]
    fn degenerate_input_rejected() {
        let err = ConvexBody::from_points(2, &pts(&[&[0, 0], &[1, 1], &[2, 2]])).unwrap_err();
        assert_eq!(err, GeometryError::Degenerate { dim: 2, found: 1 });
    }

    #[test]
    fn constraints_cut_a_triangle() {
        // x ≥ 0, y ≥ 0, 1 - x - y ≥ 0, x - 1/4 ≥ 0
        let cs = vec![
            RationalAffine::from_ints(&[1, 0], 0),
            RationalAffine::from_ints(&[0, 1], 0),
            RationalAffine::from_ints(&[-1, -1], 1),
            RationalAffine::new(vec![qi(1), qi(0)], q(-1, 4)),
        ];
        let body = ConvexBody::from_constraints(2, &cs).unwrap();
        assert_eq!(body.vertices().len(), 3);
        assert_eq!(body.volume(), q(9, 32));
    }

    #[test]
    fn segment_body() {
        let body = ConvexBody::from_points(1, &pts(&[&[3], &[0], &[1]])).unwrap();
        assert_eq!(body.vertices(), pts(&[&[0], &[3]]).as_slice());
        assert_eq!(body.volume(), qi(3));
        assert_eq!(body.triangulate().len(), 1);
    }
}
