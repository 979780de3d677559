//! Numerical invariants of filtrations: weight functions and their fitted
//! polynomials, L² norms and inner products, reduced norms, Donaldson–Futaki
//! and Chow weights (absolute and relative to a torus), and the threshold
//! quantities of the blowup argument.
//!
//! Everything is exact. Leading coefficients come from integrating the
//! concave transform; finite-level quantities come from lattice sums.

mod threshold;

pub use threshold::{extremes, lambda_threshold, nu_rel, nu_weight, Extremes, LambdaThreshold};

use crate::filtration::{Filtration, FiltrationError, OneParamSubgroup};
use crate::linalg::{rank, solve};
use crate::poly::{fit_quasi, FitError, WeightPolynomial};
use crate::polytope::{integrate_envelope_product, GeometryError, LatticePolytope};
use crate::rational::{qi, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("NotGood: weight quasipolynomial period {period}")]
    NotGood { period: usize },
    #[error("NotPolynomial: {0}")]
    NotPolynomial(#[from] FitError),
    #[error("SingularGram: Gram matrix of the torus generators is singular")]
    SingularGram,
    #[error("DependentGenerators: torus slopes are linearly dependent")]
    DependentGenerators,
    #[error("DimensionTooSmall: dimension {0} < 2")]
    DimensionTooSmall(usize),
    #[error("DegenerateFiltration: essential infimum equals the mean {0}")]
    DegenerateFiltration(String),
    #[error("BoundViolated: concave transform reaches {max} > Λ = {lambda} on the corner simplex")]
    BoundViolated { max: String, lambda: String },
    #[error("ShellEmpty: 1/m − n/r = 1/{m} − {n}/{r} is not positive")]
    ShellEmpty { m: u64, r: u64, n: usize },
    #[error("DomainMismatch: filtrations live on different polytopes")]
    DomainMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

type Result<T> = std::result::Result<T, InvariantError>;

/// A basis `β_1, …, β_d` of a subtorus acting on the toric variety of `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusBasis {
    generators: Vec<OneParamSubgroup>,
    polytope: LatticePolytope,
}

impl TorusBasis {
    pub fn new(polytope: &LatticePolytope, generators: Vec<OneParamSubgroup>) -> Result<Self> {
        let n = polytope.dim();
        if let Some(g) = generators.iter().find(|g| g.form.dim() != n) {
            return Err(FiltrationError::DimensionMismatch {
                expected: n,
                found: g.form.dim(),
            }
            .into());
        }
        let slopes: Vec<Vec<Rational>> = generators
            .iter()
            .map(|g| g.form.u.iter().map(|&x| qi(x)).collect())
            .collect();
        if generators.len() > n || rank(&slopes) < generators.len() {
            return Err(InvariantError::DependentGenerators);
        }
        Ok(Self {
            generators,
            polytope: polytope.clone(),
        })
    }

    pub fn empty(polytope: &LatticePolytope) -> Self {
        Self {
            generators: Vec::new(),
            polytope: polytope.clone(),
        }
    }

    pub fn generators(&self) -> &[OneParamSubgroup] {
        &self.generators
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// The same torus acting on `(Y, rH)`, whose polytope is `rP`.
    pub fn rescaled(&self, r: u64) -> Self {
        Self {
            generators: self.generators.iter().map(|g| g.rescaled(r)).collect(),
            polytope: self.polytope.scaled(r as i64),
        }
    }

    /// Product filtrations of the generators.
    pub fn filtrations(&self) -> Vec<Filtration> {
        self.generators
            .iter()
            .map(|g| Filtration::from_one_param(g, &self.polytope).expect("dimension checked"))
            .collect()
    }
}

fn check_degree(k: u64) -> Result<()> {
    if k == 0 {
        return Err(InvariantError::InvalidParameter("degree must be positive".into()));
    }
    Ok(())
}

/// `w^p_F(k) = Σ_{a ∈ P_k} g_{F,k}(a)^p`.
pub fn weight(f: &Filtration, k: u64, p: u32) -> Result<i128> {
    check_degree(k)?;
    Ok(f
        .lattice_weights(k)?
        .into_iter()
        .map(|(_, w)| (w as i128).pow(p))
        .sum())
}

/// `Σ_{a ∈ P_k} g_{F,k}(a)·g_{G,k}(a)` for two filtrations on the same polytope.
pub fn mixed_weight(f: &Filtration, g: &Filtration, k: u64) -> Result<i128> {
    check_degree(k)?;
    if f.domain() != g.domain() {
        return Err(InvariantError::DomainMismatch);
    }
    let wf = f.lattice_weights(k)?;
    let wg = g.lattice_weights(k)?;
    Ok(wf
        .iter()
        .zip(&wg)
        .map(|((_, x), (_, y))| *x as i128 * *y as i128)
        .sum())
}

/// `w²_{F,β}(k) = Σ_{a ∈ P_k} g_{F,k}(a)·g_{β,k}(a)`.
pub fn mixed_square_weight(f: &Filtration, beta: &OneParamSubgroup, k: u64) -> Result<i128> {
    let b = Filtration::from_one_param(beta, f.domain())?;
    mixed_weight(f, &b, k)
}

/// Leading Hilbert coefficients `(a0, a1)` of `h(k) = a0 kⁿ + a1 kⁿ⁻¹ + …`.
pub fn hilbert(p: &LatticePolytope) -> Result<(Rational, Rational)> {
    let h = p.ehrhart_fit()?;
    Ok((h.coefficient(0), h.coefficient(1)))
}

/// Sampling window used when no window is given: `2(n + p + 1)` degrees.
pub fn default_window(dim: usize, p: u32) -> usize {
    2 * (dim + p as usize + 1)
}

/// Fits `w^p_F` by a polynomial of degree `n + p`, interpolating on the first
/// `n + p + 1` degrees of the window and verifying on the rest; falls back to
/// quasipolynomials of period up to 4.
pub fn fit_weight_poly(f: &Filtration, p: u32, window: usize) -> Result<WeightPolynomial> {
    let degree = f.dim() + p as usize;
    if window < 2 * (degree + 1) {
        return Err(InvariantError::InvalidParameter(format!(
            "window {window} is shorter than {}",
            2 * (degree + 1)
        )));
    }
    let mut failure = None;
    let poly = fit_quasi(
        |k| match weight(f, k, p) {
            Ok(w) => Rational::from_integer(BigInt::from(w)),
            Err(e) => {
                failure.get_or_insert(e);
                Rational::zero()
            }
        },
        degree,
        1,
        window - degree - 1,
        4,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(poly?)
}

/// `(b0, c0) = (∫_P G_F, ∫_P G_F²)`.
pub fn leading_coeffs(f: &Filtration) -> Result<(Rational, Rational)> {
    let env = f.envelope()?;
    let body = f.domain().body();
    Ok((
        integrate_envelope_product(body, &[&env])?,
        integrate_envelope_product(body, &[&env, &env])?,
    ))
}

/// `‖F‖² = (c0 a0 − b0²)/a0²`.
pub fn l2_norm2(f: &Filtration) -> Result<Rational> {
    let a0 = f.domain().volume();
    let (b0, c0) = leading_coeffs(f)?;
    Ok((c0 * a0 - &b0 * &b0) / (a0 * a0))
}

/// `⟨F, G⟩ = (c0′ a0 − b0 b0′)/a0²` with `c0′ = ∫ G_F G_G`.
pub fn inner(f: &Filtration, g: &Filtration) -> Result<Rational> {
    if f.domain() != g.domain() {
        return Err(InvariantError::DomainMismatch);
    }
    let a0 = f.domain().volume();
    let body = f.domain().body();
    let (ef, eg) = (f.envelope()?, g.envelope()?);
    let b0 = integrate_envelope_product(body, &[&ef])?;
    let b0p = integrate_envelope_product(body, &[&eg])?;
    let c0p = integrate_envelope_product(body, &[&ef, &eg])?;
    Ok((c0p * a0 - b0 * b0p) / (a0 * a0))
}

/// `⟨F, β⟩`.
pub fn inner_beta(f: &Filtration, beta: &OneParamSubgroup) -> Result<Rational> {
    inner(f, &Filtration::from_one_param(beta, f.domain())?)
}

fn int(x: i128) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// `⟨F, G⟩_r = (w²_{F,G}(r) h(r) − w_F(r) w_G(r)) / (r² h(r)²)`.
pub fn inner_r_filtrations(f: &Filtration, g: &Filtration, r: u64) -> Result<Rational> {
    let mixed = int(mixed_weight(f, g, r)?);
    let h = int(f.domain().lattice_count(r) as i128);
    let wf = int(weight(f, r, 1)?);
    let wg = int(weight(g, r, 1)?);
    let rr = int(r as i128);
    Ok((mixed * &h - wf * wg) / (&rr * &rr * &h * &h))
}

/// `⟨F, β⟩_r`.
pub fn inner_r(f: &Filtration, beta: &OneParamSubgroup, r: u64) -> Result<Rational> {
    inner_r_filtrations(f, &Filtration::from_one_param(beta, f.domain())?, r)
}

fn gram_solve(gram: Vec<Vec<Rational>>, rhs: Vec<Rational>) -> Result<Vec<Rational>> {
    if rhs.is_empty() {
        return Ok(Vec::new());
    }
    solve(&gram, &rhs).ok_or(InvariantError::SingularGram)
}

fn check_torus(f: &Filtration, t: &TorusBasis) -> Result<()> {
    if f.domain() != t.polytope() {
        return Err(InvariantError::DomainMismatch);
    }
    Ok(())
}

/// Coefficients `x` of the L² projection `ξ(F) = Σ x_i β_i` onto the torus,
/// from the Gram system `⟨β_i, β_j⟩ x = ⟨F, β_i⟩`.
pub fn projection(f: &Filtration, t: &TorusBasis) -> Result<Vec<Rational>> {
    check_torus(f, t)?;
    let betas = t.filtrations();
    let gram = betas
        .iter()
        .map(|bi| betas.iter().map(|bj| inner(bi, bj)).collect())
        .collect::<Result<_>>()?;
    let rhs = betas.iter().map(|b| inner(f, b)).collect::<Result<_>>()?;
    gram_solve(gram, rhs)
}

/// Same projection at finite level `r`, using `⟨·,·⟩_r`.
pub fn projection_r(f: &Filtration, t: &TorusBasis, r: u64) -> Result<Vec<Rational>> {
    check_torus(f, t)?;
    let betas = t.filtrations();
    let gram = betas
        .iter()
        .map(|bi| betas.iter().map(|bj| inner_r_filtrations(bi, bj, r)).collect())
        .collect::<Result<_>>()?;
    let rhs = betas
        .iter()
        .map(|b| inner_r_filtrations(f, b, r))
        .collect::<Result<_>>()?;
    gram_solve(gram, rhs)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedNorm {
    /// `‖F‖²_T`.
    pub value: Rational,
    /// Projection coefficients of `ξ(F)`; the infimum over twists is
    /// attained at `−ξ(F)`.
    pub xi: Vec<Rational>,
}

/// `‖F‖²_T = ‖F‖² − 2⟨F, ξ(F)⟩ + ‖ξ(F)‖²`.
pub fn reduced_norm2(f: &Filtration, t: &TorusBasis) -> Result<ReducedNorm> {
    let xi = projection(f, t)?;
    let betas = t.filtrations();
    let mut along = Rational::zero();
    let mut xi_norm = Rational::zero();
    for (i, bi) in betas.iter().enumerate() {
        along += &xi[i] * inner(f, bi)?;
        for (j, bj) in betas.iter().enumerate() {
            xi_norm += &xi[i] * &xi[j] * inner(bi, bj)?;
        }
    }
    Ok(ReducedNorm {
        value: l2_norm2(f)? - qi(2) * along + xi_norm,
        xi,
    })
}

/// Fitted weight polynomial, rejected unless it is a true polynomial.
pub fn good_weight_poly(f: &Filtration) -> Result<WeightPolynomial> {
    let w = fit_weight_poly(f, 1, default_window(f.dim(), 1))?;
    if !w.is_polynomial() {
        return Err(InvariantError::NotGood { period: w.period() });
    }
    Ok(w)
}

/// `DF(F) = (b0 a1 − b1 a0)/a0²`.
pub fn df(f: &Filtration) -> Result<Rational> {
    let w = good_weight_poly(f)?;
    let (a0, a1) = hilbert(f.domain())?;
    let (b0, b1) = (w.coefficient(0), w.coefficient(1));
    Ok((b0 * &a1 - b1 * &a0) / (&a0 * &a0))
}

/// Futaki invariant of `β` on the toric variety of `P`.
pub fn futaki(beta: &OneParamSubgroup, p: &LatticePolytope) -> Result<Rational> {
    df(&Filtration::from_one_param(beta, p)?)
}

/// `DF_T(F) = DF(F) − Σ x_i Fut(β_i)`.
pub fn df_rel(f: &Filtration, t: &TorusBasis) -> Result<Rational> {
    let base = df(f)?;
    let x = projection(f, t)?;
    let mut out = base;
    for (xi, beta) in x.iter().zip(t.generators()) {
        out -= xi * futaki(beta, t.polytope())?;
    }
    Ok(out)
}

/// `Chow_r(F) = r b0/a0 − w_F(r)/h(r)`.
pub fn chow(f: &Filtration, r: u64) -> Result<Rational> {
    check_degree(r)?;
    let b0 = leading_b0(f)?;
    let a0 = f.domain().volume();
    let w = int(weight(f, r, 1)?);
    let h = int(f.domain().lattice_count(r) as i128);
    Ok(int(r as i128) * b0 / a0 - w / h)
}

/// `b0 = ∫_P G_F`.
pub(crate) fn leading_b0(f: &Filtration) -> Result<Rational> {
    let env = f.envelope()?;
    Ok(integrate_envelope_product(f.domain().body(), &[&env])?)
}

/// `Chow_{r,T}(F) = Chow_r(F) − Σ x_i Chow_r(β_i)` with level-`r` projection.
pub fn chow_rel(f: &Filtration, t: &TorusBasis, r: u64) -> Result<Rational> {
    let x = projection_r(f, t, r)?;
    let mut out = chow(f, r)?;
    for (xi, b) in x.iter().zip(t.filtrations()) {
        out -= xi * chow(&b, r)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowInfEstimate {
    /// `(r, Chow_{1,T}(F_(r)))`.
    pub values: Vec<(u64, Rational)>,
    /// `DF_T(F)` when `F` is good.
    pub df_rel: Option<Rational>,
}

/// `Chow_{1,T}(F_(r))` for each `r`, where `F_(r)` lives on `rP` and the
/// torus acts through its rescaled generators.
pub fn chow_inf_estimate(f: &Filtration, t: &TorusBasis, rs: &[u64]) -> Result<ChowInfEstimate> {
    check_torus(f, t)?;
    let values = rs
        .iter()
        .map(|&r| {
            let approx = f.approximate(r)?;
            Ok((r, chow_rel(&approx, &t.rescaled(r), 1)?))
        })
        .collect::<Result<_>>()?;
    let df_rel = match df_rel(f, t) {
        Ok(v) => Some(v),
        Err(InvariantError::NotGood { .. } | InvariantError::NotPolynomial(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(ChowInfEstimate { values, df_rel })
}

/// `DF(F1) − DF(F2)`: the difference of CM degrees of the two fillings the
/// filtrations encode.
pub fn cm_difference(f1: &Filtration, f2: &Filtration) -> Result<Rational> {
    if f1.domain() != f2.domain() {
        return Err(InvariantError::DomainMismatch);
    }
    Ok(df(f1)? - df(f2)?)
}

/// Summary of the invariants of one filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantReport {
    pub a0: Rational,
    pub a1: Rational,
    pub b0: Rational,
    pub b1: Option<Rational>,
    pub c0: Rational,
    /// Period of the weight quasipolynomial; `None` when no fit of period at
    /// most 4 exists on the default window.
    pub period: Option<usize>,
    pub norm2: Rational,
    pub mean: Rational,
    pub e_max: Rational,
    pub m_f: Rational,
    pub df: Option<Rational>,
    pub df_rel: Option<Rational>,
    pub reduced_norm2: Option<Rational>,
    pub inner_products: Vec<Rational>,
}

pub fn invariant_report(f: &Filtration, t: &TorusBasis) -> Result<InvariantReport> {
    check_torus(f, t)?;
    let (a0, a1) = hilbert(f.domain())?;
    let (b0, c0) = leading_coeffs(f)?;
    let w = match fit_weight_poly(f, 1, default_window(f.dim(), 1)) {
        Ok(w) => Some(w),
        Err(InvariantError::NotPolynomial(_)) => None,
        Err(e) => return Err(e),
    };
    let good = w.as_ref().is_some_and(|w| w.is_polynomial());
    let ex = extremes(f)?;
    let betas = t.filtrations();
    let inner_products = betas.iter().map(|b| inner(f, b)).collect::<Result<_>>()?;
    let reduced = if t.rank() > 0 {
        Some(reduced_norm2(f, t)?.value)
    } else {
        None
    };
    Ok(InvariantReport {
        norm2: (&c0 * &a0 - &b0 * &b0) / (&a0 * &a0),
        a0,
        a1,
        b1: w.as_ref().filter(|_| good).map(|w| w.coefficient(1)),
        b0,
        c0,
        period: w.as_ref().map(|w| w.period()),
        mean: ex.mean,
        e_max: ex.e_max,
        m_f: ex.m_f,
        df: if good { Some(df(f)?) } else { None },
        df_rel: if good { Some(df_rel(f, t)?) } else { None },
        reduced_norm2: reduced,
        inner_products,
    })
}
