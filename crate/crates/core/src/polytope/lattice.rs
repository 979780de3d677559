use super::body::ConvexBody;
use super::{GeometryError, Point};
use crate::poly::{horner, interpolate, WeightPolynomial};
use crate::rational::{qi, Rational};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use std::fmt;

/// Full-dimensional polytope with integer vertices.
///
/// Only the extreme points are stored; facets are kept as primitive integer
/// inequalities `⟨normal, x⟩ + offset ≥ 0` for fast lattice membership tests.
#[derive(Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    body: ConvexBody,
    int_facets: Vec<(Vec<i64>, i64)>,
    volume: Rational,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LatticePolytope")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices)
            .finish()
    }
}

impl LatticePolytope {
    /// Convex hull of integer points; rejects lower-dimensional input.
    pub fn new(dim: usize, points: &[Vec<i64>]) -> Result<Self, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::Degenerate { dim, found: 0 });
        }
        let rational: Vec<Point> = points
            .iter()
            .map(|p| p.iter().map(|&v| qi(v)).collect())
            .collect();
        let body = ConvexBody::from_points(dim, &rational)?;
        Self::from_body(body)
    }

    /// Wraps a convex body whose vertices are all integral.
    pub fn from_body(body: ConvexBody) -> Result<Self, GeometryError> {
        if let Some(v) = body.vertices().iter().find(|v| !v.iter().all(|x| x.is_integer())) {
            return Err(GeometryError::NotIntegral(v.clone()));
        }
        let to_int = |x: &Rational| -> i64 {
            x.to_integer().to_i64().expect("coordinate out of i64 range")
        };
        let vertices = body
            .vertices()
            .iter()
            .map(|v| v.iter().map(to_int).collect())
            .collect();
        let int_facets = body
            .facets()
            .iter()
            .map(|f| (f.slope.iter().map(to_int).collect(), to_int(&f.constant)))
            .collect();
        let volume = body.volume();
        Ok(Self {
            dim: body.dim(),
            vertices,
            body,
            int_facets,
            volume,
        })
    }

    /// The segment `[0, 1]`.
    pub fn unit_interval() -> Self {
        Self::new(1, &[vec![0], vec![1]]).unwrap()
    }

    /// Standard simplex `conv(0, e_1, …, e_n)`.
    pub fn unit_simplex(dim: usize) -> Self {
        let mut pts = vec![vec![0; dim]];
        for i in 0..dim {
            let mut e = vec![0; dim];
            e[i] = 1;
            pts.push(e);
        }
        Self::new(dim, &pts).unwrap()
    }

    /// Unit cube `[0, 1]^n`.
    pub fn unit_cube(dim: usize) -> Self {
        let pts: Vec<Vec<i64>> = (0..1usize << dim)
            .map(|mask| (0..dim).map(|i| ((mask >> i) & 1) as i64).collect())
            .collect();
        Self::new(dim, &pts).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn body(&self) -> &ConvexBody {
        &self.body
    }

    pub fn volume(&self) -> &Rational {
        &self.volume
    }

    pub fn facet_inequalities(&self) -> &[(Vec<i64>, i64)] {
        &self.int_facets
    }

    /// Whether `a ∈ kP`.
    pub fn contains_scaled(&self, a: &[i64], k: i64) -> bool {
        self.int_facets.iter().all(|(normal, offset)| {
            let s: i64 = normal.iter().zip(a).map(|(n, x)| n * x).sum();
            s + offset * k >= 0
        })
    }

    pub fn scaled(&self, r: i64) -> Self {
        let pts: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|x| x * r).collect())
            .collect();
        Self::new(self.dim, &pts).expect("dilation of a full-dimensional polytope")
    }

    /// `kP ∩ Z^n` in lexicographic order.
    pub fn lattice_points(&self, k: u64) -> Vec<Vec<i64>> {
        let k = k as i64;
        let lo: Vec<i64> = (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| v[i]).min().unwrap() * k)
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|i| self.vertices.iter().map(|v| v[i]).max().unwrap() * k)
            .collect();
        // Slices by the first coordinate are scanned independently, then
        // concatenated in order.
        (lo[0]..=hi[0])
            .into_par_iter()
            .map(|x0| {
                let mut out = Vec::new();
                let mut cur = lo.clone();
                cur[0] = x0;
                loop {
                    if self.contains_scaled(&cur, k) {
                        out.push(cur.clone());
                    }
                    let mut i = self.dim - 1;
                    loop {
                        if i == 0 {
                            return out;
                        }
                        if cur[i] < hi[i] {
                            cur[i] += 1;
                            break;
                        }
                        cur[i] = lo[i];
                        i -= 1;
                    }
                }
            })
            .flatten_iter()
            .collect()
    }

    pub fn lattice_count(&self, k: u64) -> u64 {
        self.lattice_points(k).len() as u64
    }

    /// Ehrhart polynomial: interpolated at `k = 1..=n+1`, verified at
    /// `k = n+2..=2n+2`.
    pub fn ehrhart_fit(&self) -> Result<WeightPolynomial, GeometryError> {
        let n = self.dim as u64;
        let count = |k: u64| qi(self.lattice_count(k) as i64);
        let xs: Vec<Rational> = (1..=n + 1).map(|k| qi(k as i64)).collect();
        let ys: Vec<Rational> = (1..=n + 1).map(count).collect();
        let coefficients = interpolate(&xs, &ys);
        if let Some(k) = (n + 2..=2 * n + 2).find(|&k| horner(&coefficients, &qi(k as i64)) != count(k)) {
            return Err(GeometryError::FitMismatch { k });
        }
        Ok(WeightPolynomial::polynomial(coefficients, 1))
    }

    /// Whether `a` is a vertex of `P` (degree one).
    pub fn vertex_index(&self, a: &[i64]) -> Option<usize> {
        self.vertices.iter().position(|v| v == a)
    }

    /// Rational coordinates of the vertices.
    pub fn rational_vertices(&self) -> &[Point] {
        self.body.vertices()
    }
}
