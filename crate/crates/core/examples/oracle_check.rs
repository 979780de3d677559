//! Slow reference computations agreeing with the fast paths.

use kfiltr::filtration::{AffineForm, Filtration};
use kfiltr::invariants as inv;
use kfiltr::oracle;
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let p = LatticePolytope::new(2, &[vec![0, 0], vec![2, 0], vec![0, 2]]).unwrap();
    let f = Filtration::min_affine(&p, vec![AffineForm::new(vec![2, 1], 0), AffineForm::new(vec![-1, 0], 2), AffineForm::new(vec![0, -1], 2)]).unwrap();
    let hist = oracle::filtered_dims(&f, 3).unwrap();
    println!("jumps in degree 3: {hist:?}");
    for p in [1, 2] {
        println!("p = {p}: histogram {} vs weight {}", oracle::histogram_moment(&hist, p), inv::weight(&f, 3, p).unwrap());
    }
    let slow = oracle::generated(&f, 2, 2).unwrap();
    let fast = f.approximate(2).unwrap().lattice_weights(2).unwrap();
    println!("generated r = 2, k = 2: {} points agree: {}", fast.len(), fast.iter().all(|(a, w)| slow.get(a) == Some(w)));
    let (b0, _) = inv::leading_coeffs(&f).unwrap();
    for n in [8, 32] {
        let g = oracle::grid_integral(&f.envelope().unwrap(), &p, n);
        println!(
            "grid N = {n}: {} ± {} brackets b0 = {}: {}",
            format_rational(&g.estimate),
            format_rational(&g.bound),
            format_rational(&b0),
            g.brackets(&b0)
        );
    }
}
