//! Twisting a filtration by a one-parameter subgroup shifts its weights and
//! expands its norm quadratically.

use kfiltr::filtration::{AffineForm, Filtration, OneParamSubgroup};
use kfiltr::invariants as inv;
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::{format_rational, qi};

fn main() {
    let p = LatticePolytope::unit_simplex(2);
    let f = Filtration::min_affine(&p, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![-1, -1], 1)]).unwrap();
    let beta = OneParamSubgroup::new(vec![2, -1], 1);
    let twisted = f.twist(&beta).unwrap();
    let b = Filtration::from_one_param(&beta, &p).unwrap();
    for k in 1..=5 {
        let lhs = inv::weight(&twisted, k, 2).unwrap();
        let rhs = inv::weight(&f, k, 2).unwrap() + 2 * inv::mixed_square_weight(&f, &beta, k).unwrap() + inv::weight(&b, k, 2).unwrap();
        println!("k = {k}: w²(F_β) = {lhs}, expansion = {rhs}");
    }
    let lhs = inv::l2_norm2(&twisted).unwrap();
    let rhs = inv::l2_norm2(&f).unwrap() + qi(2) * inv::inner_beta(&f, &beta).unwrap() + inv::l2_norm2(&b).unwrap();
    println!("‖F_β‖² = {}, ‖F‖² + 2⟨F,β⟩ + ‖β‖² = {}", format_rational(&lhs), format_rational(&rhs));
}
