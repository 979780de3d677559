//! Chow weights in increasing degree approach the Donaldson-Futaki invariant.

use kfiltr::filtration::{AffineForm, Filtration, OneParamSubgroup};
use kfiltr::invariants::{self as inv, TorusBasis};
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::{decimal, format_rational};

fn main() {
    let square = LatticePolytope::unit_cube(2);
    let valley = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    let torus = TorusBasis::new(&square, vec![OneParamSubgroup::new(vec![1, 0], 0), OneParamSubgroup::new(vec![0, 1], 0)]).unwrap();
    let df = inv::df(&valley).unwrap();
    let df_t = inv::df_rel(&valley, &torus).unwrap();
    println!("DF = {}, DF_T = {}", format_rational(&df), format_rational(&df_t));
    for r in [1, 2, 5, 10, 20, 40] {
        let c = inv::chow(&valley, r).unwrap();
        let ct = inv::chow_rel(&valley, &torus, r).unwrap();
        println!("r = {r:>2}: Chow_r = {:<12} Chow_r,T = {}", decimal(&c), decimal(&ct));
    }
}
