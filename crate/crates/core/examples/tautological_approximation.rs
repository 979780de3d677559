//! The filtration generated in degree r sits below the original, and its
//! degree-one Chow weight is bounded by the degree-r Chow weight.

use kfiltr::filtration::{AffineForm, Filtration};
use kfiltr::invariants as inv;
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let seg = LatticePolytope::unit_interval();
    let tent = Filtration::min_affine(&seg, vec![AffineForm::new(vec![1], 0), AffineForm::new(vec![-1], 1)]).unwrap();
    for r in 1..=6 {
        let a = tent.approximate(r).unwrap();
        println!(
            "r = {r}: Chow_1(F_(r)) = {:<6} Chow_r(F) = {}",
            format_rational(&inv::chow(&a, 1).unwrap()),
            format_rational(&inv::chow(&tent, r).unwrap())
        );
    }
    let a = tent.approximate(2).unwrap();
    for (pt, w) in a.lattice_weights(2).unwrap() {
        println!("F_(2) degree 2 at {pt:?}: {w} (original {})", tent.lattice_weight(4, &pt).unwrap());
    }
}
