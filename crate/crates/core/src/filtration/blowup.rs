//! Smooth-corner charts and the Okounkov body of a point blowup.

use super::{AffineForm, FiltrationError};
use crate::linalg::{rank, solve};
use crate::polytope::{ConvexBody, GeometryError, LatticePolytope, Point, RationalAffine};
use crate::rational::{factorial, pow, qbig, qi, Rational};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Unimodular affine chart sending a smooth vertex of a lattice polytope to
/// the origin and its tangent cone onto the standard orthant.
///
/// Chart coordinates `y` relate to original coordinates `x` in degree `k` by
/// `x = k·v + E y`, where the columns of `E` are the primitive edge vectors
/// at the vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerChart {
    vertex: usize,
    origin: Vec<i64>,
    /// `edges[j]` is the `j`-th column of `E`.
    edges: Vec<Vec<i64>>,
    /// Rows of `E^{-1}`.
    inverse: Vec<Vec<i64>>,
    image: LatticePolytope,
}

fn primitive_direction(d: &[i64]) -> Vec<i64> {
    let g = d.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    d.iter().map(|x| x / g).collect()
}

impl CornerChart {
    pub fn new(p: &LatticePolytope, vertex: usize) -> Result<Self, FiltrationError> {
        let n = p.dim();
        let v = p
            .vertices()
            .get(vertex)
            .ok_or(FiltrationError::NoSuchVertex(vertex))?
            .clone();
        let tight = |w: &[i64]| -> Vec<usize> {
            p.facet_inequalities()
                .iter()
                .enumerate()
                .filter(|(_, (nrm, off))| nrm.iter().zip(w).map(|(a, b)| a * b).sum::<i64>() + off == 0)
                .map(|(i, _)| i)
                .collect()
        };
        let at_v = tight(&v);
        let mut edges: Vec<Vec<i64>> = p
            .vertices()
            .iter()
            .filter(|w| **w != v)
            .filter(|w| {
                let common: Vec<Vec<Rational>> = tight(w)
                    .into_iter()
                    .filter(|i| at_v.contains(i))
                    .map(|i| p.facet_inequalities()[i].0.iter().map(|&x| qi(x)).collect())
                    .collect();
                rank(&common) == n - 1
            })
            .map(|w| primitive_direction(&w.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>()))
            .collect();
        edges.sort();
        if edges.len() != n {
            return Err(FiltrationError::NonSmoothCorner {
                vertex,
                detail: format!("{} edges meet at the vertex", edges.len()),
            });
        }
        // rows of E^T; det(E^T) = det(E)
        let et: Vec<Vec<Rational>> = edges
            .iter()
            .map(|e| e.iter().map(|&x| qi(x)).collect())
            .collect();
        let det = crate::linalg::determinant(&et);
        if det.abs() != Rational::one() {
            return Err(FiltrationError::NonSmoothCorner {
                vertex,
                detail: format!("edge cone has index {}", det.abs()),
            });
        }
        // E has columns edges[j]; solve E x = e_i for each unit vector.
        let e_rows: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| qi(edges[j][i])).collect())
            .collect();
        let mut inv_cols = Vec::with_capacity(n);
        for i in 0..n {
            let mut unit = vec![Rational::zero(); n];
            unit[i] = Rational::one();
            inv_cols.push(solve(&e_rows, &unit).expect("unimodular matrix is invertible"));
        }
        let inverse: Vec<Vec<i64>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| inv_cols[c][r].to_integer().to_i64().expect("integral inverse"))
                    .collect()
            })
            .collect();
        let mapped: Vec<Vec<i64>> = p
            .vertices()
            .iter()
            .map(|w| {
                let d: Vec<i64> = w.iter().zip(&v).map(|(a, b)| a - b).collect();
                inverse
                    .iter()
                    .map(|row| row.iter().zip(&d).map(|(a, b)| a * b).sum())
                    .collect()
            })
            .collect();
        let image = LatticePolytope::new(n, &mapped).map_err(FiltrationError::Geometry)?;
        Ok(Self {
            vertex,
            origin: v,
            edges,
            inverse,
            image,
        })
    }

    pub fn vertex(&self) -> usize {
        self.vertex
    }

    pub fn origin(&self) -> &[i64] {
        &self.origin
    }

    /// The polytope in chart coordinates (corner at the origin).
    pub fn image(&self) -> &LatticePolytope {
        &self.image
    }

    /// Chart point `y` in degree `k` back to original lattice coordinates.
    pub fn to_original(&self, y: &[i64], k: i64) -> Vec<i64> {
        (0..self.origin.len())
            .map(|i| {
                k * self.origin[i] + self.edges.iter().zip(y).map(|(e, yj)| e[i] * yj).sum::<i64>()
            })
            .collect()
    }

    /// Original lattice point `x` in degree `k` to chart coordinates.
    pub fn to_chart(&self, x: &[i64], k: i64) -> Vec<i64> {
        let d: Vec<i64> = x.iter().zip(&self.origin).map(|(a, b)| a - k * b).collect();
        self.inverse
            .iter()
            .map(|row| row.iter().zip(&d).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn to_original_rational(&self, y: &[Rational]) -> Point {
        (0..self.origin.len())
            .map(|i| {
                qi(self.origin[i])
                    + self
                        .edges
                        .iter()
                        .zip(y)
                        .map(|(e, yj)| qi(e[i]) * yj)
                        .sum::<Rational>()
            })
            .collect()
    }

    /// Pulls an integer form back to chart coordinates: `(E^T u, ⟨u, v⟩ + c)`.
    pub fn pull_form(&self, f: &AffineForm) -> AffineForm {
        AffineForm {
            u: self
                .edges
                .iter()
                .map(|e| e.iter().zip(&f.u).map(|(a, b)| a * b).sum())
                .collect(),
            c: f.u.iter().zip(&self.origin).map(|(a, b)| a * b).sum::<i64>() + f.c,
        }
    }

    pub fn pull_rational(&self, f: &RationalAffine) -> RationalAffine {
        RationalAffine::new(
            self.edges
                .iter()
                .map(|e| e.iter().zip(&f.slope).map(|(a, b)| qi(*a) * b).sum())
                .collect(),
            f.eval(&self.origin.iter().map(|&x| qi(x)).collect::<Vec<_>>()),
        )
    }

    /// Whether the corner simplex `Δ_side` lies in the chart image.
    pub fn contains_corner_simplex(&self, side: &Rational) -> bool {
        let n = self.image.dim();
        (0..n).all(|i| {
            let mut e = vec![Rational::zero(); n];
            e[i] = side.clone();
            self.image.body().contains(&e)
        })
    }
}

/// Okounkov body `closure(mP \ Δ₁)` of the blowup at a smooth torus-fixed
/// point, in chart coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupBody {
    base: LatticePolytope,
    chart: CornerChart,
    m: u64,
    body: LatticePolytope,
}

impl BlowupBody {
    pub fn new(p: &LatticePolytope, vertex: usize, m: u64) -> Result<Self, FiltrationError> {
        if m == 0 {
            return Err(FiltrationError::InvalidParameter("m must be positive".into()));
        }
        let chart = CornerChart::new(p, vertex)?;
        let side = Rational::new(1.into(), (m as i64).into());
        if !chart.contains_corner_simplex(&side) {
            return Err(FiltrationError::SimplexNotContained { vertex, m });
        }
        let n = p.dim();
        let scaled = chart.image().scaled(m as i64);
        let cut = RationalAffine::new(vec![Rational::one(); n], qi(-1));
        let body = match scaled.body().intersect(&[cut]) {
            Ok(b) => b,
            Err(GeometryError::Degenerate { .. } | GeometryError::Empty) => {
                return Err(FiltrationError::DegenerateBlowup { vertex, m })
            }
            Err(e) => return Err(FiltrationError::Geometry(e)),
        };
        let body = LatticePolytope::from_body(body).map_err(FiltrationError::Geometry)?;
        Ok(Self {
            base: p.clone(),
            chart,
            m,
            body,
        })
    }

    pub fn base(&self) -> &LatticePolytope {
        &self.base
    }

    pub fn chart(&self) -> &CornerChart {
        &self.chart
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn body(&self) -> &LatticePolytope {
        &self.body
    }

    /// `mⁿ·vol(P) − 1/n!`.
    pub fn expected_volume(&self) -> Rational {
        let n = self.base.dim();
        pow(&qi(self.m as i64), n as u32) * self.base.volume() - Rational::one() / qbig(factorial(n))
    }

    /// Point of the base polytope corresponding to `x/m` for `x ∈ P̂`.
    pub fn to_base_point(&self, x: &[Rational]) -> Point {
        let m = qi(self.m as i64);
        let y: Vec<Rational> = x.iter().map(|v| v / &m).collect();
        self.chart.to_original_rational(&y)
    }

    /// Degree-`k` lattice points: `{a ∈ kmP' : |a|₁ ≥ k}` in chart coordinates.
    pub fn lattice_points(&self, k: u64) -> Vec<Vec<i64>> {
        self.body.lattice_points(k)
    }

    /// `ConvexBody` of the scaled chart image `mP'`, before the corner cut.
    pub fn uncut(&self) -> ConvexBody {
        self.chart.image().scaled(self.m as i64).body().clone()
    }
}
