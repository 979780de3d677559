use super::body::{ConvexBody, Simplex};
use super::envelope::{subdivide_common, Envelope};
use super::{GeometryError, RationalAffine};
use crate::rational::{qi, Rational};
use num_traits::Zero;

/// `∫_cell f` (when `g` is `None`) or `∫_cell f·g` for affine `f`, `g`.
///
/// Uses `∫ λ_i λ_j = vol·(1 + δ_ij)/((n+1)(n+2))` for the barycentric
/// coordinates of an `n`-simplex.
pub(crate) fn simplex_moment(cell: &Simplex, f: &RationalAffine, g: Option<&RationalAffine>) -> Rational {
    let vol = cell.volume();
    let n = cell.dim() as i64;
    let fv: Vec<Rational> = cell.vertices.iter().map(|v| f.eval(v)).collect();
    match g {
        None => vol * fv.iter().sum::<Rational>() / qi(n + 1),
        Some(g) => {
            let gv: Vec<Rational> = cell.vertices.iter().map(|v| g.eval(v)).collect();
            let diag: Rational = fv.iter().zip(&gv).map(|(a, b)| a * b).sum();
            let cross = fv.iter().sum::<Rational>() * gv.iter().sum::<Rational>();
            vol * (diag + cross) / qi((n + 1) * (n + 2))
        }
    }
}

/// Exact `∫ Π factors` over the union of `cells`, where each factor is a
/// concave envelope that must be affine on every cell. At most two factors.
pub fn integrate_poly2(cells: &[Simplex], factors: &[&Envelope]) -> Result<Rational, GeometryError> {
    if factors.len() > 2 {
        return Err(GeometryError::UnsupportedDegree(factors.len()));
    }
    let mut total = Rational::zero();
    for cell in cells {
        let c = cell.centroid();
        let active: Vec<&RationalAffine> = factors
            .iter()
            .map(|env| &env.forms()[env.active(&c)])
            .collect();
        total += match active.as_slice() {
            [] => cell.volume(),
            [f] => simplex_moment(cell, f, None),
            [f, g] => simplex_moment(cell, f, Some(g)),
            _ => unreachable!(),
        };
    }
    Ok(total)
}

/// `∫_domain Π factors` after subdividing along all envelope breaks.
pub fn integrate_envelope_product(
    domain: &ConvexBody,
    factors: &[&Envelope],
) -> Result<Rational, GeometryError> {
    if factors.len() > 2 {
        return Err(GeometryError::UnsupportedDegree(factors.len()));
    }
    let cells = subdivide_common(domain, factors)?;
    integrate_poly2(&cells, factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::LatticePolytope;
    use crate::rational::q;

    fn tent() -> Envelope {
        Envelope::new(vec![
            RationalAffine::from_ints(&[1], 0),
            RationalAffine::from_ints(&[-1], 1),
        ])
    }

    // Piecewise antiderivatives: ∫_0^{1/2} x dx = 1/8 per half, ∫_0^{1/2} x² dx = 1/24 per half.
    #[test]
    fn tent_moments() {
        let p = LatticePolytope::unit_interval();
        let t = tent();
        assert_eq!(integrate_envelope_product(p.body(), &[&t]).unwrap(), q(1, 4));
        assert_eq!(integrate_envelope_product(p.body(), &[&t, &t]).unwrap(), q(1, 12));
    }

    #[test]
    fn constant_over_simplex_is_volume() {
        let p = LatticePolytope::unit_simplex(2);
        assert_eq!(integrate_envelope_product(p.body(), &[]).unwrap(), q(1, 2));
    }

    #[test]
    fn simplex_second_moments() {
        // ∫_{Δ²} x = 1/6, ∫ x² = 1/12, ∫ xy = 1/24
        let p = LatticePolytope::unit_simplex(2);
        let x = Envelope::single(RationalAffine::from_ints(&[1, 0], 0));
        let y = Envelope::single(RationalAffine::from_ints(&[0, 1], 0));
        assert_eq!(integrate_envelope_product(p.body(), &[&x]).unwrap(), q(1, 6));
        assert_eq!(integrate_envelope_product(p.body(), &[&x, &x]).unwrap(), q(1, 12));
        assert_eq!(integrate_envelope_product(p.body(), &[&x, &y]).unwrap(), q(1, 24));
    }

    #[test]
    fn cubic_rejected() {
        let p = LatticePolytope::unit_interval();
        let t = tent();
        assert_eq!(
            integrate_envelope_product(p.body(), &[&t, &t, &t]).unwrap_err(),
            GeometryError::UnsupportedDegree(3)
        );
    }
}
