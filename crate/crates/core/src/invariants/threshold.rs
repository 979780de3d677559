use super::{leading_b0, projection, InvariantError, Result, TorusBasis};
use crate::filtration::{CornerChart, Filtration, FiltrationError};
use crate::polytope::{
    integrate_envelope_product, subdivide_common, ConvexBody, Envelope, Simplex,
};
use crate::rational::{factorial, format_rational, pow, q, qbig, qi, Rational};
use num_traits::Signed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    /// Maximum of `G_F` over `P`.
    pub e_max: Rational,
    /// Minimum of `G_F` over `P`, attained at a vertex.
    pub m_f: Rational,
    /// `Ḡ_F = b0/vol(P)`.
    pub mean: Rational,
}

/// Exact maximum of a concave envelope over a body, taken over the vertices
/// of its linearity cells.
fn envelope_max(body: &ConvexBody, env: &Envelope) -> Result<Rational> {
    let cells = subdivide_common(body, &[env])?;
    Ok(cells
        .iter()
        .flat_map(|c| c.vertices.iter())
        .map(|v| env.eval(v))
        .max()
        .expect("nonempty subdivision"))
}

pub fn extremes(f: &Filtration) -> Result<Extremes> {
    let env = f.envelope()?;
    let p = f.domain();
    let m_f = p
        .rational_vertices()
        .iter()
        .map(|v| env.eval(v))
        .min()
        .expect("polytope has vertices");
    Ok(Extremes {
        e_max: envelope_max(p.body(), &env)?,
        m_f,
        mean: leading_b0(f)? / p.volume(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaThreshold {
    pub lambda: Rational,
    /// `A_n = (5n − 1)/(2n)`.
    pub a_n: Rational,
    /// `B_n = (7n − 1)/(2n)`.
    pub b_n: Rational,
    /// Admissible range `0 < δ < (Ḡ_F − M_F)/(A_n B_n)`.
    pub delta_bound: Rational,
    pub extremes: Extremes,
}

/// `Λ_F = Ḡ_F − (Ḡ_F − M_F)/A_n`, strictly between `M_F` and `Ḡ_F`.
pub fn lambda_threshold(f: &Filtration) -> Result<LambdaThreshold> {
    let n = f.dim();
    if n < 2 {
        return Err(InvariantError::DimensionTooSmall(n));
    }
    let ex = extremes(f)?;
    if ex.m_f >= ex.mean {
        return Err(InvariantError::DegenerateFiltration(format_rational(&ex.mean)));
    }
    let n = n as i64;
    let a_n = q(5 * n - 1, 2 * n);
    let b_n = q(7 * n - 1, 2 * n);
    let gap = &ex.mean - &ex.m_f;
    Ok(LambdaThreshold {
        lambda: &ex.mean - &gap / &a_n,
        delta_bound: gap / (&a_n * &b_n),
        a_n,
        b_n,
        extremes: ex,
    })
}

/// `(Λ(3n−1)/(2(n−1)!) − r·m^{n−1} ∫_shell G)` scaled by `(n−2)!·a0`, with
/// `G` read in the corner chart. `check` enforces `G ≤ Λ` on `Δ_{1/m}`.
fn nu_inner(
    f: &Filtration,
    chart: &CornerChart,
    m: u64,
    r: u64,
    lambda: &Rational,
    check: bool,
) -> Result<Rational> {
    let n = f.dim();
    let env = f.envelope()?;
    let local = Envelope::new(env.forms().iter().map(|g| chart.pull_rational(g)).collect());
    let outer_side = q(1, m as i64);
    let inner_side = &outer_side - q(n as i64, r as i64);
    let corner = |side: &Rational| -> Result<ConvexBody> {
        Ok(ConvexBody::from_points(n, &Simplex::corner(n, side).vertices)?)
    };
    let outer = corner(&outer_side)?;
    if check {
        let max = envelope_max(&outer, &local)?;
        if &max > lambda {
            return Err(InvariantError::BoundViolated {
                max: format_rational(&max),
                lambda: format_rational(lambda),
            });
        }
    }
    let inner = corner(&inner_side)?;
    let shell = integrate_envelope_product(&outer, &[&local])?
        - integrate_envelope_product(&inner, &[&local])?;
    let a0 = f.domain().volume();
    let nn = n as i64;
    let lead = lambda * qi(3 * nn - 1) / (qi(2) * qbig(factorial(n - 1)));
    let scale = qi(r as i64) * pow(&qi(m as i64), (n - 1) as u32);
    Ok(qbig(factorial(n - 2)) * a0 * (lead - scale * shell))
}

fn nu_setup(f: &Filtration, vertex: usize, m: u64, r: u64) -> Result<CornerChart> {
    let n = f.dim();
    if n < 2 {
        return Err(InvariantError::DimensionTooSmall(n));
    }
    if m == 0 || r == 0 {
        return Err(InvariantError::InvalidParameter("m and r must be positive".into()));
    }
    if !(q(1, m as i64) - q(n as i64, r as i64)).is_positive() {
        return Err(InvariantError::ShellEmpty { m, r, n });
    }
    let chart = CornerChart::new(f.domain(), vertex)?;
    if !chart.contains_corner_simplex(&q(1, m as i64)) {
        return Err(FiltrationError::SimplexNotContained { vertex, m }.into());
    }
    Ok(chart)
}

/// `ν(p, F) = (n−2)!·a0·(Λ(3n−1)/(2(n−1)!) − r·m^{n−1}·∫_{Δ_{1/m} \ Δ_{1/m−n/r}} G_F)`
/// at the torus-fixed point of the given smooth vertex.
pub fn nu_weight(f: &Filtration, vertex: usize, m: u64, r: u64, lambda: &Rational) -> Result<Rational> {
    let chart = nu_setup(f, vertex, m, r)?;
    nu_inner(f, &chart, m, r, lambda, true)
}

/// `ν_T(p, F) = ν(p, F) − Σ x_i (ν(p, β_i) − b_{i,0}/a0)`, with `x` the
/// projection coefficients of `F` onto the torus.
pub fn nu_rel(
    f: &Filtration,
    t: &TorusBasis,
    vertex: usize,
    m: u64,
    r: u64,
    lambda: &Rational,
) -> Result<Rational> {
    let chart = nu_setup(f, vertex, m, r)?;
    let mut out = nu_inner(f, &chart, m, r, lambda, true)?;
    let x = projection(f, t)?;
    let a0 = f.domain().volume();
    for (xi, b) in x.iter().zip(t.filtrations()) {
        let nb = nu_inner(&b, &chart, m, r, lambda, false)?;
        out -= xi * (nb - leading_b0(&b)? / a0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::{AffineForm, OneParamSubgroup};
    use crate::polytope::LatticePolytope;
    use num_traits::Zero;

    fn tent() -> Filtration {
        Filtration::min_affine(
            &LatticePolytope::unit_interval(),
            vec![AffineForm::new(vec![1], 0), AffineForm::new(vec![-1], 1)],
        )
        .unwrap()
    }

    #[test]
    fn extremes_examples() {
        assert_eq!(
            extremes(&tent()).unwrap(),
            Extremes {
                e_max: q(1, 2),
                m_f: qi(0),
                mean: q(1, 4)
            }
        );
        let tri = LatticePolytope::unit_simplex(2);
        let aff = Filtration::from_one_param(&OneParamSubgroup::new(vec![2, -1], 1), &tri).unwrap();
        let ex = extremes(&aff).unwrap();
        assert_eq!((ex.e_max, ex.m_f), (qi(3), qi(0)));
        let c = Filtration::from_one_param(&OneParamSubgroup::new(vec![0, 0], 4), &tri).unwrap();
        let ex = extremes(&c).unwrap();
        assert_eq!((ex.e_max, ex.m_f, ex.mean), (qi(4), qi(4), qi(4)));
    }

    #[test]
    fn threshold_constants() {
        let sq = LatticePolytope::unit_cube(2);
        // G = min(x, y) - 1/3 has mean 0 and minimum -1/3
        let f = Filtration::min_affine(
            &sq,
            vec![AffineForm::new(vec![1, 0], 0), AffineForm::new(vec![0, 1], 0)],
        )
        .unwrap()
        .shift(&q(1, 3));
        let lt = lambda_threshold(&f).unwrap();
        assert_eq!((lt.a_n.clone(), lt.b_n.clone()), (q(9, 4), q(13, 4)));
        assert_eq!(lt.extremes.mean, qi(0));
        assert_eq!(lt.extremes.m_f, q(-1, 3));
        assert_eq!(lt.lambda, q(-4, 27));
        assert_eq!(lt.delta_bound, q(1, 3) / (q(9, 4) * q(13, 4)));
    }

    #[test]
    fn threshold_plug_in() {
        // 3·min(x, y) − 1 on the square: mean 0, minimum −1
        let f = Filtration::min_affine(
            &LatticePolytope::unit_cube(2),
            vec![AffineForm::new(vec![3, 0], 0), AffineForm::new(vec![0, 3], 0)],
        )
        .unwrap()
        .shift(&qi(1));
        let lt = lambda_threshold(&f).unwrap();
        assert_eq!((lt.extremes.mean.clone(), lt.extremes.m_f.clone()), (qi(0), qi(-1)));
        assert_eq!(lt.lambda, q(-4, 9));
    }

    #[test]
    fn threshold_errors() {
        assert_eq!(
            lambda_threshold(&tent()).unwrap_err(),
            InvariantError::DimensionTooSmall(1)
        );
        let tri = LatticePolytope::unit_simplex(2);
        assert!(matches!(
            lambda_threshold(&Filtration::zero(&tri)),
            Err(InvariantError::DegenerateFiltration(_))
        ));
    }

    #[test]
    fn nu_examples() {
        let tri = LatticePolytope::unit_simplex(2);
        let z = Filtration::zero(&tri);
        assert!(nu_weight(&z, 0, 2, 8, &qi(0)).unwrap().is_zero());
        assert_eq!(nu_weight(&z, 0, 2, 8, &qi(1)).unwrap(), q(5, 4));
        let t = TorusBasis::empty(&tri);
        assert_eq!(nu_rel(&z, &t, 0, 2, 8, &qi(1)).unwrap(), q(5, 4));
    }

    #[test]
    fn nu_shell_integral() {
        // G = x on the 2-simplex, m = 2, r = 8: shell Δ_{1/2} \ Δ_{1/4}
        // ∫_{Δ_s} x = s³/6, so the shell integral is (1/8 − 1/64)/6 = 7/384
        let tri = LatticePolytope::unit_simplex(2);
        let f = Filtration::from_one_param(&OneParamSubgroup::new(vec![1, 0], 0), &tri).unwrap();
        let lambda = qi(1);
        let expected = q(1, 2) * (q(5, 2) - qi(8) * qi(2) * q(7, 384));
        assert_eq!(nu_weight(&f, 0, 2, 8, &lambda).unwrap(), expected);
    }

    #[test]
    fn nu_errors() {
        let tri = LatticePolytope::unit_simplex(2);
        let f = Filtration::from_one_param(&OneParamSubgroup::new(vec![1, 0], 0), &tri).unwrap();
        assert!(matches!(
            nu_weight(&f, 0, 2, 8, &q(1, 4)),
            Err(InvariantError::BoundViolated { .. })
        ));
        assert!(matches!(
            nu_weight(&f, 0, 2, 4, &qi(1)),
            Err(InvariantError::ShellEmpty { .. })
        ));
        assert_eq!(
            nu_weight(&tent(), 0, 2, 8, &qi(1)).unwrap_err(),
            InvariantError::DimensionTooSmall(1)
        );
    }

    #[test]
    fn relative_nu_of_torus_direction() {
        // ν_T vanishes on the torus direction itself: ν(β) − (ν(β) − b0/a0)
        let tri = LatticePolytope::unit_simplex(2);
        let beta = OneParamSubgroup::new(vec![1, 0], 0);
        let f = Filtration::from_one_param(&beta, &tri).unwrap();
        let t = TorusBasis::new(&tri, vec![beta]).unwrap();
        let b0 = leading_b0(&f).unwrap();
        assert_eq!(
            nu_rel(&f, &t, 0, 2, 8, &qi(1)).unwrap(),
            b0 / tri.volume()
        );
    }
}
