//! Exact polytope geometry: convex bodies with rational vertices, lattice
//! polytopes with Ehrhart fitting, concave envelopes and their simplicial
//! subdivisions, and exact quadrature of piecewise polynomials of degree ≤ 2.

mod body;
mod envelope;
mod lattice;
mod quadrature;

pub use body::{polyhedron_vertices, ConvexBody, Simplex};
pub use envelope::{concave_majorant, subdivide_common, Envelope, PiecewiseAffine};
pub use lattice::LatticePolytope;
pub use quadrature::{integrate_envelope_product, integrate_poly2};

use crate::linalg::dot;
use crate::rational::{qi, Rational};
use num_traits::Zero;

pub type Point = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("DegenerateInput: point set spans only {found} of {dim} dimensions")]
    Degenerate { dim: usize, found: usize },
    #[error("empty body")]
    Empty,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("UnsupportedDegree: integrand of degree {0} (at most 2 supported)")]
    UnsupportedDegree(usize),
    #[error("non-integral vertex {0:?} where a lattice polytope was expected")]
    NotIntegral(Vec<Rational>),
    #[error("FitMismatch: Ehrhart interpolation disagrees with lattice count at k = {k}")]
    FitMismatch { k: u64 },
}

/// Rational affine function `x ↦ ⟨slope, x⟩ + constant`.
///
/// Also used as a half-space `{x : f(x) ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalAffine {
    pub slope: Vec<Rational>,
    pub constant: Rational,
}

impl RationalAffine {
    pub fn new(slope: Vec<Rational>, constant: Rational) -> Self {
        Self { slope, constant }
    }

    pub fn from_ints(slope: &[i64], constant: i64) -> Self {
        Self {
            slope: slope.iter().map(|&v| qi(v)).collect(),
            constant: qi(constant),
        }
    }

    pub fn constant_fn(dim: usize, c: Rational) -> Self {
        Self {
            slope: vec![Rational::zero(); dim],
            constant: c,
        }
    }

    pub fn dim(&self) -> usize {
        self.slope.len()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.slope, x) + &self.constant
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            slope: self
                .slope
                .iter()
                .zip(&other.slope)
                .map(|(a, b)| a - b)
                .collect(),
            constant: &self.constant - &other.constant,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            slope: self
                .slope
                .iter()
                .zip(&other.slope)
                .map(|(a, b)| a + b)
                .collect(),
            constant: &self.constant + &other.constant,
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self {
            slope: self.slope.iter().map(|a| a * s).collect(),
            constant: &self.constant * s,
        }
    }

    pub fn add_constant(&self, c: &Rational) -> Self {
        Self {
            slope: self.slope.clone(),
            constant: &self.constant + c,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.slope.iter().all(Zero::is_zero)
    }
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
pub(crate) fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
