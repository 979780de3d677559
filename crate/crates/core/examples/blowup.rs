//! Blowing up a smooth torus-fixed point: the cut body and the induced filtration.

use kfiltr::filtration::{AffineForm, BlowupBody, Filtration};
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::{format_rational, q};

fn main() {
    let square = LatticePolytope::unit_cube(2);
    let valley = Filtration::min_affine(&square, vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)]).unwrap();
    for m in [2, 3] {
        let body = BlowupBody::new(&square, 0, m).unwrap();
        println!(
            "m = {m}: vol = {}, expected {}, vertices {:?}",
            format_rational(body.body().volume()),
            format_rational(&body.expected_volume()),
            body.body().vertices()
        );
        let hat = valley.blowup(&body).unwrap();
        let (eh, ef) = (hat.envelope().unwrap(), valley.envelope().unwrap());
        let x = vec![q(3, 2), q(2, 3)];
        println!(
            "  G_F̂({}, {}) = {}, m·G_F(x/m) = {}",
            format_rational(&x[0]),
            format_rational(&x[1]),
            format_rational(&eh.eval(&x)),
            format_rational(&(q(m as i64, 1) * ef.eval(&body.to_base_point(&x))))
        );
    }
}
