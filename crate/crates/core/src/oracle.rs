//! Brute-force reference computations used to cross-check the exact paths.
//!
//! Nothing here reuses the weight sums, fitting, subdivision or quadrature of
//! the main modules: points are enumerated from bounding boxes, filtered
//! pieces are counted directly, and integrals are Riemann sums.

use crate::filtration::{Filtration, FiltrationError, OneParamSubgroup};
use crate::polytope::{Envelope, LatticePolytope};
use crate::rational::{q, qi, Rational};
use num_traits::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("BudgetExceeded: {needed} decompositions exceed the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

/// Decomposition budget of [`generated`].
pub const GENERATED_BUDGET: u128 = 1_000_000;

/// Lattice points of `kP` by scanning the bounding box of `kP` and testing
/// every facet.
pub fn box_points(p: &LatticePolytope, k: u64) -> Vec<Vec<i64>> {
    let n = p.dim();
    let k = k as i64;
    let lo: Vec<i64> = (0..n).map(|i| p.vertices().iter().map(|v| v[i] * k).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|i| p.vertices().iter().map(|v| v[i] * k).max().unwrap()).collect();
    let inside = |a: &[i64]| {
        p.facet_inequalities()
            .iter()
            .all(|(u, c)| u.iter().zip(a).map(|(x, y)| x * y).sum::<i64>() + c * k >= 0)
    };
    let mut out = Vec::new();
    let mut cur = lo.clone();
    'scan: loop {
        if inside(&cur) {
            out.push(cur.clone());
        }
        for i in (0..n).rev() {
            if cur[i] < hi[i] {
                cur[i] += 1;
                continue 'scan;
            }
            cur[i] = lo[i];
        }
        break;
    }
    out
}

/// `λ ↦ dim F^λ S_k / F^{λ+1} S_k`: the number of degree-`k` monomials whose
/// weight is exactly `λ`.
pub fn filtered_dims(f: &Filtration, k: u64) -> Result<BTreeMap<i64, u64>, OracleError> {
    let mut hist = BTreeMap::new();
    for a in box_points(f.domain(), k) {
        *hist.entry(f.lattice_weight(k, &a)?).or_insert(0) += 1;
    }
    Ok(hist)
}

/// `Σ_λ λ^p · count(λ)`.
pub fn histogram_moment(hist: &BTreeMap<i64, u64>, p: u32) -> i128 {
    hist.iter().map(|(l, c)| (*l as i128).pow(p) * *c as i128).sum()
}

/// `Σ_{λ,μ} T(λ, μ) · dim (F^λ S_k / F^{λ+1} S_k)_μ`, with the bigraded
/// dimensions obtained as differences of the dimensions of the superlevel
/// pieces `(F^λ S_k)_μ`.
pub fn t_sum<T>(f: &Filtration, beta: &OneParamSubgroup, k: u64, t: T) -> Result<Rational, OracleError>
where
    T: Fn(i64, i64) -> Rational,
{
    let mut by_mu: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for a in box_points(f.domain(), k) {
        let lambda = f.lattice_weight(k, &a)?;
        by_mu.entry(beta.weight(k, &a)).or_default().push(lambda);
    }
    let mut total = Rational::zero();
    for (mu, lambdas) in by_mu {
        let lo = *lambdas.iter().min().unwrap();
        let hi = *lambdas.iter().max().unwrap();
        let superlevel = |l: i64| lambdas.iter().filter(|&&x| x >= l).count() as i64;
        for lambda in lo..=hi {
            let dim = superlevel(lambda) - superlevel(lambda + 1);
            if dim != 0 {
                total += t(lambda, mu) * qi(dim);
            }
        }
    }
    Ok(total)
}

fn multiset_count(n: u128, k: u128) -> u128 {
    // C(n + k − 1, k), saturating
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.saturating_mul(n + i) / (i + 1);
    }
    c
}

/// Degree-`k` weights of `F_(r)` by exhaustive enumeration of all multisets
/// of `k` points of `P_r`.
pub fn generated(f: &Filtration, r: u64, k: u64) -> Result<BTreeMap<Vec<i64>, i64>, OracleError> {
    let points = box_points(f.domain(), r);
    let weights: Vec<i64> = points
        .iter()
        .map(|a| f.lattice_weight(r, a))
        .collect::<Result<_, _>>()?;
    let needed = multiset_count(points.len() as u128, k as u128);
    if needed > GENERATED_BUDGET {
        return Err(OracleError::BudgetExceeded {
            needed,
            budget: GENERATED_BUDGET,
        });
    }
    let n = f.dim();
    let mut best: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut idx = vec![0usize; k as usize];
    loop {
        let mut sum = vec![0i64; n];
        let mut w = 0;
        for &i in &idx {
            for (s, x) in sum.iter_mut().zip(&points[i]) {
                *s += x;
            }
            w += weights[i];
        }
        best.entry(sum).and_modify(|b| *b = (*b).max(w)).or_insert(w);
        // next nondecreasing index sequence
        let Some(pos) = (0..idx.len()).rev().find(|&j| idx[j] + 1 < points.len()) else {
            return Ok(best);
        };
        let v = idx[pos] + 1;
        for j in pos..idx.len() {
            idx[j] = v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridIntegral {
    pub estimate: Rational,
    /// Certified bound on `|estimate − ∫_P G|`.
    pub bound: Rational,
}

impl GridIntegral {
    pub fn brackets(&self, exact: &Rational) -> bool {
        (&self.estimate - exact).abs() <= self.bound
    }
}

/// Midpoint Riemann sum of `G` over `P` on the grid of pitch `1/N`.
///
/// Cells with every corner in `P` contribute `G(center)·N⁻ⁿ` with error at
/// most `L·N⁻¹/2·N⁻ⁿ`, where `L` bounds the ℓ¹ norms of the slopes. Cells that
/// may meet the boundary contribute nothing, with error at most `M·N⁻ⁿ`,
/// where `M` bounds `|G|` on `P`.
pub fn grid_integral(g: &Envelope, p: &LatticePolytope, n_grid: u64) -> GridIntegral {
    let n = p.dim();
    let big_n = n_grid as i64;
    let lipschitz = g
        .forms()
        .iter()
        .map(|f| f.slope.iter().map(|s| s.abs()).sum::<Rational>())
        .max()
        .unwrap();
    let sup = p
        .rational_vertices()
        .iter()
        .flat_map(|v| g.forms().iter().map(move |f| f.eval(v).abs()))
        .max()
        .unwrap();
    let cell_vol = Rational::new(1.into(), num_bigint::BigInt::from(big_n).pow(n as u32));
    let facet_value = |u: &[i64], c: i64, x: &[i64]| -> i64 {
        u.iter().zip(x).map(|(a, b)| a * b).sum::<i64>() + c * big_n
    };
    let lo: Vec<i64> = (0..n).map(|i| p.vertices().iter().map(|v| v[i] * big_n).min().unwrap()).collect();
    let hi: Vec<i64> = (0..n).map(|i| p.vertices().iter().map(|v| v[i] * big_n).max().unwrap()).collect();
    let mut inner_cells: i64 = 0;
    let mut boundary_cells: i64 = 0;
    let mut sum = Rational::zero();
    let mut cell = lo.clone();
    'scan: loop {
        let corners: Vec<Vec<i64>> = (0..1u32 << n)
            .map(|mask| (0..n).map(|i| cell[i] + ((mask >> i) & 1) as i64).collect())
            .collect();
        let mut all_in = true;
        let mut any_in = false;
        for c in &corners {
            let inside = p.facet_inequalities().iter().all(|(u, off)| facet_value(u, *off, c) >= 0);
            all_in &= inside;
            any_in |= inside;
        }
        let straddles = || {
            p.facet_inequalities().iter().any(|(u, off)| {
                let vals: Vec<i64> = corners.iter().map(|c| facet_value(u, *off, c)).collect();
                vals.iter().any(|&v| v > 0) && vals.iter().any(|&v| v < 0)
            })
        };
        if all_in {
            let center: Vec<Rational> = cell.iter().map(|&x| q(2 * x + 1, 2 * big_n)).collect();
            sum += g.eval(&center);
            inner_cells += 1;
        } else if any_in || straddles() {
            boundary_cells += 1;
        }
        for i in (0..n).rev() {
            if cell[i] + 1 < hi[i] {
                cell[i] += 1;
                continue 'scan;
            }
            cell[i] = lo[i];
        }
        break;
    }
    let half_pitch = q(1, 2 * big_n);
    GridIntegral {
        estimate: sum * &cell_vol,
        bound: (qi(inner_cells) * lipschitz * half_pitch + qi(boundary_cells) * sup) * cell_vol,
    }
}

/// Coefficient grid `{−radius, −radius + step, …, radius}^d`.
pub fn coefficient_grid(d: usize, step: &Rational, radius: &Rational) -> Vec<Vec<Rational>> {
    let mut axis = Vec::new();
    let mut x = -radius.clone();
    while &x <= radius {
        axis.push(x.clone());
        x += step;
    }
    let mut grid = vec![Vec::new()];
    for _ in 0..d {
        grid = grid
            .into_iter()
            .flat_map(|g| {
                axis.iter().map(move |a| {
                    let mut h = g.clone();
                    h.push(a.clone());
                    h
                })
            })
            .collect();
    }
    grid
}

/// Quadratic data of `ζ ↦ ‖F‖² + 2⟨F, ζ⟩ + ‖ζ‖²` in torus coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistQuadratic {
    pub norm2: Rational,
    pub linear: Vec<Rational>,
    pub gram: Vec<Vec<Rational>>,
}

impl TwistQuadratic {
    pub fn eval(&self, z: &[Rational]) -> Rational {
        let mut v = self.norm2.clone();
        for (i, zi) in z.iter().enumerate() {
            v += qi(2) * &self.linear[i] * zi;
            for (j, zj) in z.iter().enumerate() {
                v += &self.gram[i][j] * zi * zj;
            }
        }
        v
    }

    /// `(step/2)² Σ|G_ij|`: excess of a grid minimum over the true minimum
    /// when the minimizer lies inside the grid box.
    pub fn grid_gap_bound(&self, step: &Rational) -> Rational {
        let h = step / qi(2);
        &h * &h * self.gram.iter().flatten().map(|x| x.abs()).sum::<Rational>()
    }
}

/// Minimum of the twisted norm over a finite grid, with its minimizer.
pub fn reduced_min(quad: &TwistQuadratic, grid: &[Vec<Rational>]) -> (Rational, Vec<Rational>) {
    grid.iter()
        .map(|z| (quad.eval(z), z.clone()))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("nonempty grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::AffineForm;
    use crate::polytope::RationalAffine;

    fn tent() -> Filtration {
        Filtration::min_affine(
            &LatticePolytope::unit_interval(),
            vec![AffineForm::new(vec![1], 0), AffineForm::new(vec![-1], 1)],
        )
        .unwrap()
    }

    #[test]
    fn histogram_examples() {
        let h = filtered_dims(&tent(), 2).unwrap();
        assert_eq!(h, [(0, 2), (1, 1)].into_iter().collect());
        let seg = LatticePolytope::unit_interval();
        let z = filtered_dims(&Filtration::zero(&seg), 5).unwrap();
        assert_eq!(z, [(0, 6)].into_iter().collect());
        let b = Filtration::from_one_param(&OneParamSubgroup::new(vec![1], 0), &seg).unwrap();
        let h = filtered_dims(&b, 3).unwrap();
        assert_eq!(h, [(0, 1), (1, 1), (2, 1), (3, 1)].into_iter().collect());
        assert_eq!(histogram_moment(&h, 1), 6);
        assert_eq!(histogram_moment(&h, 2), 14);
    }

    #[test]
    fn t_sum_examples() {
        let beta = OneParamSubgroup::new(vec![1], 0);
        let t = tent();
        assert_eq!(t_sum(&t, &beta, 2, |l, m| qi(l * m)).unwrap(), qi(1));
        assert_eq!(t_sum(&t, &beta, 2, |_, _| qi(1)).unwrap(), qi(3));
        assert_eq!(t_sum(&t, &beta, 2, |l, m| qi(l + m)).unwrap(), qi(4));
    }

    #[test]
    fn generated_examples() {
        let g = generated(&tent(), 2, 2).unwrap();
        let vals: Vec<i64> = g.values().copied().collect();
        assert_eq!(vals, vec![0, 1, 2, 1, 0]);
        let tri = LatticePolytope::unit_simplex(2);
        let b = Filtration::from_one_param(&OneParamSubgroup::new(vec![1, -2], 3), &tri).unwrap();
        for (a, w) in generated(&b, 2, 3).unwrap() {
            assert_eq!(w, a[0] - 2 * a[1] + 3 * 6);
        }
        let c = Filtration::from_one_param(&OneParamSubgroup::new(vec![0, 0], 5), &tri).unwrap();
        assert!(generated(&c, 1, 4).unwrap().values().all(|&w| w == 20));
        let big = LatticePolytope::unit_cube(2);
        assert!(matches!(
            generated(&Filtration::zero(&big), 6, 8),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn grid_integral_examples() {
        let seg = LatticePolytope::unit_interval();
        let t = tent().envelope().unwrap();
        let gi = grid_integral(&t, &seg, 64);
        assert!(gi.brackets(&q(1, 4)));
        let tri = LatticePolytope::unit_simplex(2);
        let c = Envelope::single(RationalAffine::from_ints(&[0, 0], 3));
        assert!(grid_integral(&c, &tri, 16).brackets(&q(3, 2)));
        // ∫ (x + 2y) over the 2-simplex = vol · mean of vertex values = 1/2
        let a = Envelope::single(RationalAffine::from_ints(&[1, 2], 0));
        let gi = grid_integral(&a, &tri, 32);
        assert!(gi.brackets(&q(1, 2)));
        assert!(gi.bound < q(1, 4));
    }

    #[test]
    fn reduced_min_examples() {
        // tent against β = (1,0): ‖F‖² = 1/48, ⟨F,β⟩ = 0, ‖β‖² = 1/12
        let quad = TwistQuadratic {
            norm2: q(1, 48),
            linear: vec![qi(0)],
            gram: vec![vec![q(1, 12)]],
        };
        let grid = coefficient_grid(1, &q(1, 16), &qi(4));
        assert_eq!(grid.len(), 129);
        assert_eq!(reduced_min(&quad, &grid), (q(1, 48), vec![qi(0)]));
        let empty = TwistQuadratic {
            norm2: q(1, 48),
            linear: vec![],
            gram: vec![],
        };
        assert_eq!(reduced_min(&empty, &coefficient_grid(0, &q(1, 16), &qi(4))).0, q(1, 48));
        // F = β itself: minimum 0 at ζ = −1
        let inside = TwistQuadratic {
            norm2: q(1, 12),
            linear: vec![q(1, 12)],
            gram: vec![vec![q(1, 12)]],
        };
        assert_eq!(reduced_min(&inside, &grid), (qi(0), vec![qi(-1)]));
    }
}
