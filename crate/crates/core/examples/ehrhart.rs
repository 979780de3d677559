//! Ehrhart polynomials of a few lattice polytopes, checked against direct counts.

use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::format_rational;

fn main() {
    let polys = [
        ("segment", LatticePolytope::unit_interval()),
        ("triangle", LatticePolytope::unit_simplex(2)),
        ("square", LatticePolytope::unit_cube(2)),
        ("hexagon", LatticePolytope::new(2, &[vec![1, 0], vec![2, 0], vec![2, 1], vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap()),
        ("cube", LatticePolytope::unit_cube(3)),
    ];
    for (name, p) in &polys {
        let h = p.ehrhart_fit().unwrap();
        let coeffs: Vec<String> = h.coefficients().iter().map(format_rational).collect();
        let counts: Vec<u64> = (1..=4).map(|k| p.lattice_count(k)).collect();
        println!("{name:<9} vol {:<4} h = [{}]  h(1..4) = {counts:?}", format_rational(p.volume()), coeffs.join(", "));
    }
}
