#![allow(dead_code)]

use kfiltr::filtration::{AffineForm, Filtration, OneParamSubgroup};
use kfiltr::polytope::LatticePolytope;
use proptest::prelude::*;

/// Small lattice polytopes used throughout the property tests.
pub fn test_polytopes() -> Vec<LatticePolytope> {
    vec![
        LatticePolytope::unit_interval(),
        LatticePolytope::new(1, &[vec![0], vec![3]]).unwrap(),
        LatticePolytope::unit_simplex(2),
        LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap(),
        LatticePolytope::unit_cube(2),
        LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![0, 1], vec![2, 1]]).unwrap(),
        LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 1]]).unwrap(),
    ]
}

/// Test polytopes whose vertex 0 is a smooth corner admitting blowups with `m ≥ 2`.
pub fn smooth_corner_polytopes() -> Vec<LatticePolytope> {
    vec![
        LatticePolytope::unit_interval(),
        LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap(),
        LatticePolytope::unit_cube(2),
        LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![0, 1], vec![2, 1]]).unwrap(),
    ]
}

pub fn form(dim: usize) -> impl Strategy<Value = AffineForm> {
    (prop::collection::vec(-2i64..=2, dim), -2i64..=2).prop_map(|(u, c)| AffineForm::new(u, c))
}

pub fn one_param(dim: usize) -> impl Strategy<Value = OneParamSubgroup> {
    (prop::collection::vec(-2i64..=2, dim), -2i64..=2).prop_map(|(u, c)| OneParamSubgroup::new(u, c))
}

/// A polytope from `polys` with a random min-affine filtration of 1 to 3 forms.
pub fn min_affine_on(polys: Vec<LatticePolytope>) -> impl Strategy<Value = Filtration> {
    (0..polys.len()).prop_flat_map(move |i| {
        let p = polys[i].clone();
        prop::collection::vec(form(p.dim()), 1..=3)
            .prop_map(move |forms| Filtration::min_affine(&p, forms).unwrap())
    })
}

pub fn min_affine() -> impl Strategy<Value = Filtration> {
    min_affine_on(test_polytopes())
}

/// A min-affine filtration together with a one-parameter subgroup of the same dimension.
pub fn min_affine_with_beta() -> impl Strategy<Value = (Filtration, OneParamSubgroup)> {
    min_affine().prop_flat_map(|f| {
        let d = f.dim();
        (Just(f), one_param(d))
    })
}

pub fn tent() -> Filtration {
    Filtration::min_affine(
        &LatticePolytope::unit_interval(),
        vec![AffineForm::new(vec![1], 0), AffineForm::new(vec![-1], 1)],
    )
    .unwrap()
}

use kfiltr::rational::{qi, Rational};
use num_traits::Signed;

/// `max |⟨u,v⟩ + c|` over forms and vertices; bounds `|G_F|` on `P`.
pub fn form_max(f: &Filtration) -> Rational {
    let p = f.domain();
    f.forms()
        .expect("min-affine")
        .iter()
        .flat_map(|form| p.vertices().iter().map(move |v| qi(form.eval(v, 1)).abs()))
        .max()
        .unwrap()
}

/// `max ‖u‖₁` over forms; a Lipschitz constant of `G_F`.
pub fn form_lipschitz(f: &Filtration) -> Rational {
    f.forms()
        .expect("min-affine")
        .iter()
        .map(|form| qi(form.u.iter().map(|x| x.abs()).sum::<i64>()))
        .max()
        .unwrap()
}

/// `Σ_{i≥1} |a_i|` over the lower Ehrhart coefficients.
pub fn lower_ehrhart_mass(p: &LatticePolytope) -> Rational {
    let h = p.ehrhart_fit().unwrap();
    h.coefficients()[1..].iter().map(|c| c.abs()).sum()
}

/// Constant `C` with `|Σ_{a ∈ kP} G(a/k)/kⁿ − ∫_P G| ≤ C/k` for `|G| ≤ m`
/// and Lipschitz constant `l`: `C = m·Σ_{i≥1}|a_i| + l·a0·n`.
pub fn riemann_constant(p: &LatticePolytope, m: &Rational, l: &Rational) -> Rational {
    m * lower_ehrhart_mass(p) + l * p.volume() * qi(p.dim() as i64)
}

/// Constant for the discrete average against `∫_P G / vol(P)`.
pub fn average_constant(p: &LatticePolytope, m: &Rational, l: &Rational) -> Rational {
    (riemann_constant(p, m, l) + m * lower_ehrhart_mass(p)) / p.volume()
}

/// Constant `C` with `|⟨F,G⟩_r − ⟨F,G⟩| ≤ C/r`, assembled from the average
/// constants of `G_F`, `G_G` and their product.
pub fn inner_r_constant(f: &Filtration, g: &Filtration) -> Rational {
    let p = f.domain();
    let (mf, lf) = (form_max(f), form_lipschitz(f));
    let (mg, lg) = (form_max(g), form_lipschitz(g));
    let ef = average_constant(p, &mf, &lf);
    let eg = average_constant(p, &mg, &lg);
    let efg = average_constant(p, &(&mf * &mg), &(&lf * &mg + &mf * &lg));
    efg + &ef * &mg + &mf * &eg + ef * eg
}
