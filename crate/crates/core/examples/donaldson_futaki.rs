//! Donaldson-Futaki invariants, Futaki invariants and their relative versions.

use kfiltr::filtration::{AffineForm, Filtration, OneParamSubgroup};
use kfiltr::invariants::{self as inv, InvariantError, TorusBasis};
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let square = LatticePolytope::unit_cube(2);
    for u in [[1, 0], [0, 1], [1, 1]] {
        let fut = inv::futaki(&OneParamSubgroup::new(u.to_vec(), 0), &square).unwrap();
        println!("Fut{u:?} on the square = {}", format_rational(&fut));
    }
    let trapezoid = LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![1, 1], vec![0, 1]]).unwrap();
    let fut = inv::futaki(&OneParamSubgroup::new(vec![1, 0], 0), &trapezoid).unwrap();
    println!("Fut[1, 0] on a trapezoid = {}", format_rational(&fut));

    let valley = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    let torus = TorusBasis::new(&square, vec![OneParamSubgroup::new(vec![1, 0], 0), OneParamSubgroup::new(vec![0, 1], 0)]).unwrap();
    println!("DF(valley) = {}", format_rational(&inv::df(&valley).unwrap()));
    println!("DF_T(valley) = {}", format_rational(&inv::df_rel(&valley, &torus).unwrap()));

    let seg = LatticePolytope::unit_interval();
    let tent = Filtration::min_affine(&seg, vec![AffineForm::new(vec![1], 0), AffineForm::new(vec![-1], 1)]).unwrap();
    match inv::df(&tent) {
        Err(e @ InvariantError::NotGood { .. }) => println!("DF(tent): {e}"),
        other => println!("DF(tent): unexpected {other:?}"),
    }
}
