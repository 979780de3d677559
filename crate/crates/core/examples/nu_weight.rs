//! The threshold Λ_F and the weight ν of the shifted blowup filtration.

use kfiltr::filtration::{AffineForm, Filtration, OneParamSubgroup};
use kfiltr::invariants::{self as inv, TorusBasis};
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let square = LatticePolytope::unit_cube(2);
    let valley = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    let lt = inv::lambda_threshold(&valley).unwrap();
    println!(
        "M = {}, mean = {}, Λ = {}, A = {}, B = {}, δ < {}",
        format_rational(&lt.extremes.m_f),
        format_rational(&lt.extremes.mean),
        format_rational(&lt.lambda),
        format_rational(&lt.a_n),
        format_rational(&lt.b_n),
        format_rational(&lt.delta_bound)
    );
    let torus = TorusBasis::new(&square, vec![OneParamSubgroup::new(vec![1, 0], 0), OneParamSubgroup::new(vec![0, 1], 0)]).unwrap();
    for r in [12, 24, 48] {
        let nu = inv::nu_weight(&valley, 0, 3, r, &lt.lambda).unwrap();
        let nu_t = inv::nu_rel(&valley, &torus, 0, 3, r, &lt.lambda).unwrap();
        println!("m = 3, r = {r}: ν = {}, ν_T = {}", format_rational(&nu), format_rational(&nu_t));
    }
}
