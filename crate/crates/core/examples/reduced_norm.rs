//! Reduced norm relative to a torus, compared with a grid search over twists.

use kfiltr::filtration::{AffineForm, Filtration, OneParamSubgroup};
use kfiltr::invariants::{self as inv, TorusBasis};
use kfiltr::oracle::{coefficient_grid, reduced_min, TwistQuadratic};
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::{format_rational, q, qi};

fn main() {
    let seg = LatticePolytope::unit_interval();
    let tent = Filtration::min_affine(&seg, vec![AffineForm::new(vec![1], 0), AffineForm::new(vec![-1], 1)]).unwrap();
    let torus = TorusBasis::new(&seg, vec![OneParamSubgroup::new(vec![1], 0)]).unwrap();
    let r = inv::reduced_norm2(&tent, &torus).unwrap();
    println!("tent: ‖F‖²_T = {}", format_rational(&r.value));

    let square = LatticePolytope::unit_cube(2);
    let f = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    let torus = TorusBasis::new(&square, vec![OneParamSubgroup::new(vec![1, 0], 0), OneParamSubgroup::new(vec![0, 1], 0)]).unwrap();
    let r = inv::reduced_norm2(&f, &torus).unwrap();
    let xi: Vec<String> = r.xi.iter().map(format_rational).collect();
    println!("valley: ‖F‖²_T = {}, ξ = [{}]", format_rational(&r.value), xi.join(", "));

    let betas = torus.filtrations();
    let quad = TwistQuadratic {
        norm2: inv::l2_norm2(&f).unwrap(),
        linear: betas.iter().map(|b| inv::inner(&f, b).unwrap()).collect(),
        gram: betas.iter().map(|bi| betas.iter().map(|bj| inv::inner(bi, bj).unwrap()).collect()).collect(),
    };
    let step = q(1, 16);
    let (min, at) = reduced_min(&quad, &coefficient_grid(2, &step, &qi(2)));
    let at: Vec<String> = at.iter().map(format_rational).collect();
    println!("grid minimum {} at [{}], gap bound {}", format_rational(&min), at.join(", "), format_rational(&quad.grid_gap_bound(&step)));
}
