//! Weight functions, their fitted polynomials, and the L² norm of a filtration.

use kfiltr::filtration::{AffineForm, Filtration};
use kfiltr::invariants as inv;
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let square = LatticePolytope::unit_cube(2);
    let valley = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    for k in 1..=4 {
        println!("k = {k}: w¹ = {}, w² = {}", inv::weight(&valley, k, 1).unwrap(), inv::weight(&valley, k, 2).unwrap());
    }
    let w = inv::fit_weight_poly(&valley, 1, inv::default_window(2, 1)).unwrap();
    let coeffs: Vec<String> = w.coefficients().iter().map(format_rational).collect();
    println!("w¹(k) coefficients: [{}]", coeffs.join(", "));
    let (b0, c0) = inv::leading_coeffs(&valley).unwrap();
    println!("b0 = {}, c0 = {}", format_rational(&b0), format_rational(&c0));
    println!("‖F‖² = {}", format_rational(&inv::l2_norm2(&valley).unwrap()));
}
