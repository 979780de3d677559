//! Difference of CM degrees of two fillings, realized by their filtrations.

use kfiltr::filtration::{AffineForm, Filtration};
use kfiltr::invariants as inv;
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let square = LatticePolytope::unit_cube(2);
    let valley = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    let diagonal = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 1], -1)]).unwrap();
    let trivial = Filtration::zero(&square);
    println!("CM(valley) − CM(trivial) = {}", format_rational(&inv::cm_difference(&valley, &trivial).unwrap()));
    println!("CM(valley) − CM(diagonal) = {}", format_rational(&inv::cm_difference(&valley, &diagonal).unwrap()));
}
