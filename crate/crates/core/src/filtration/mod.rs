//! Torus-invariant filtrations of toric section rings, encoded as integer
//! weights on the lattice points of the dilates `kP`.
//!
//! A degree-`k` section is a lattice point `a ∈ kP ∩ Z^n`; its weight
//! `g_k(a)` is the largest `λ` with the monomial in the `λ`-th filtered piece.
//! Every constructor here produces weights that are superadditive,
//! `g_{k+l}(a + b) ≥ g_k(a) + g_l(b)`, and linearly bounded.

mod blowup;
mod generated;

pub use blowup::{BlowupBody, CornerChart};
pub use generated::Generated;

use crate::polytope::{
    concave_majorant, polyhedron_vertices, Envelope, GeometryError, LatticePolytope,
    PiecewiseAffine, Point, RationalAffine,
};
use crate::rational::{floor_int, qi, Rational};
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiltrationError {
    #[error("OutOfBody: point {point:?} is not in {k}P")]
    OutOfBody { k: u64, point: Vec<i64> },
    #[error("UnsupportedKind: {op} is not defined for {kind} filtrations")]
    UnsupportedKind { op: &'static str, kind: &'static str },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("filtration needs at least one affine form")]
    NoForms,
    #[error("point {point:?} of degree {k} is not a sum of {k} generators")]
    Undecomposable { k: u64, point: Vec<i64> },
    #[error("NoSuchVertex: polytope has no vertex {0}")]
    NoSuchVertex(usize),
    #[error("NonSmoothCorner: vertex {vertex} is not a smooth torus-fixed point ({detail})")]
    NonSmoothCorner { vertex: usize, detail: String },
    #[error("SimplexNotContained: corner simplex of side 1/{m} does not fit at vertex {vertex}")]
    SimplexNotContained { vertex: usize, m: u64 },
    #[error("degenerate blowup body at vertex {vertex} with m = {m} (mP minus the unit corner simplex has empty interior)")]
    DegenerateBlowup { vertex: usize, m: u64 },
    #[error("filtration lives on a different polytope")]
    DomainMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Integer affine weight `a ↦ ⟨u, a⟩ + c·k` in degree `k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineForm {
    pub u: Vec<i64>,
    pub c: i64,
}

impl AffineForm {
    pub fn new(u: Vec<i64>, c: i64) -> Self {
        Self { u, c }
    }

    pub fn zero(dim: usize) -> Self {
        Self { u: vec![0; dim], c: 0 }
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn eval(&self, a: &[i64], k: i64) -> i64 {
        self.u.iter().zip(a).map(|(x, y)| x * y).sum::<i64>() + self.c * k
    }

    /// The degree-one profile `x ↦ ⟨u, x⟩ + c`.
    pub fn profile(&self) -> RationalAffine {
        RationalAffine::from_ints(&self.u, self.c)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            u: self.u.iter().zip(&other.u).map(|(a, b)| a + b).collect(),
            c: self.c + other.c,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            u: self.u.iter().map(|a| -a).collect(),
            c: -self.c,
        }
    }

    pub fn scale_constant(&self, r: i64) -> Self {
        Self {
            u: self.u.clone(),
            c: self.c * r,
        }
    }
}

/// A ℂ*-action in the torus, recorded by its linearized weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OneParamSubgroup {
    pub form: AffineForm,
}

impl OneParamSubgroup {
    pub fn new(u: Vec<i64>, c: i64) -> Self {
        Self {
            form: AffineForm::new(u, c),
        }
    }

    pub fn weight(&self, k: u64, a: &[i64]) -> i64 {
        self.form.eval(a, k as i64)
    }

    pub fn neg(&self) -> Self {
        Self {
            form: self.form.neg(),
        }
    }

    /// The same action seen on `(Y, rH)`: constant scaled by `r`.
    pub fn rescaled(&self, r: u64) -> Self {
        Self {
            form: self.form.scale_constant(r as i64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationKind {
    MinAffine(Vec<AffineForm>),
    Generated(Generated),
    Shifted { base: Box<Filtration>, s: Rational },
    Blowup { base: Box<Filtration>, body: BlowupBody },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    kind: FiltrationKind,
    domain: LatticePolytope,
}

/// `{x ∈ P : G_F(x) ≥ s}` as an intersection of half-spaces, with its
/// vertices (empty when the set is empty).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperlevelBody {
    pub constraints: Vec<RationalAffine>,
    pub vertices: Vec<Point>,
}

impl SuperlevelBody {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.constraints
            .iter()
            .all(|c| c.eval(x) >= Rational::zero())
    }

    /// Inclusion test through the vertex description of `self`.
    pub fn is_subset_of(&self, other: &SuperlevelBody) -> bool {
        self.vertices.iter().all(|v| other.contains(v))
    }
}

/// Superadditivity failure `g_{k+l}(a+b) < g_k(a) + g_l(b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperadditivityViolation {
    pub k: u64,
    pub l: u64,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl Filtration {
    /// `g_k(a) = min_i (⟨u_i, a⟩ + c_i k)`.
    pub fn min_affine(domain: &LatticePolytope, forms: Vec<AffineForm>) -> Result<Self, FiltrationError> {
        if forms.is_empty() {
            return Err(FiltrationError::NoForms);
        }
        if let Some(f) = forms.iter().find(|f| f.dim() != domain.dim()) {
            return Err(FiltrationError::DimensionMismatch {
                expected: domain.dim(),
                found: f.dim(),
            });
        }
        let mut unique: Vec<AffineForm> = Vec::with_capacity(forms.len());
        for f in forms {
            if !unique.contains(&f) {
                unique.push(f);
            }
        }
        Ok(Self {
            kind: FiltrationKind::MinAffine(unique),
            domain: domain.clone(),
        })
    }

    /// Filtration of the product test configuration of `beta`.
    pub fn from_one_param(beta: &OneParamSubgroup, domain: &LatticePolytope) -> Result<Self, FiltrationError> {
        Self::min_affine(domain, vec![beta.form.clone()])
    }

    /// The trivial filtration, all weights zero.
    pub fn zero(domain: &LatticePolytope) -> Self {
        Self::min_affine(domain, vec![AffineForm::zero(domain.dim())]).unwrap()
    }

    pub fn kind(&self) -> &FiltrationKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            FiltrationKind::MinAffine(_) => "min_affine",
            FiltrationKind::Generated(_) => "generated",
            FiltrationKind::Shifted { .. } => "shifted",
            FiltrationKind::Blowup { .. } => "blowup",
        }
    }

    /// Polytope whose dilates index the sections.
    pub fn domain(&self) -> &LatticePolytope {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn forms(&self) -> Option<&[AffineForm]> {
        match &self.kind {
            FiltrationKind::MinAffine(forms) => Some(forms),
            _ => None,
        }
    }

    /// Weight of the degree-`k` section `a`.
    pub fn lattice_weight(&self, k: u64, a: &[i64]) -> Result<i64, FiltrationError> {
        if k == 0 {
            return Err(FiltrationError::InvalidParameter("degree must be positive".into()));
        }
        if a.len() != self.dim() {
            return Err(FiltrationError::DimensionMismatch {
                expected: self.dim(),
                found: a.len(),
            });
        }
        if !self.domain.contains_scaled(a, k as i64) {
            return Err(FiltrationError::OutOfBody {
                k,
                point: a.to_vec(),
            });
        }
        self.weight_unchecked(k, a, None)
    }

    fn weight_unchecked(
        &self,
        k: u64,
        a: &[i64],
        generated: Option<&HashMap<Vec<i64>, i64>>,
    ) -> Result<i64, FiltrationError> {
        match &self.kind {
            FiltrationKind::MinAffine(forms) => Ok(forms
                .iter()
                .map(|f| f.eval(a, k as i64))
                .min()
                .expect("nonempty forms")),
            FiltrationKind::Generated(g) => {
                let lookup = |t: &HashMap<Vec<i64>, i64>| -> Result<i64, FiltrationError> {
                    t.get(a).copied().ok_or_else(|| FiltrationError::Undecomposable {
                        k,
                        point: a.to_vec(),
                    })
                };
                match generated {
                    Some(t) => lookup(t),
                    None => {
                        let t = g.degree(k)?;
                        lookup(&t)
                    }
                }
            }
            FiltrationKind::Shifted { base, s } => {
                let shift = floor_int(&(s * qi(k as i64)))
                    .to_i64()
                    .expect("shift out of range");
                Ok(base.weight_unchecked(k, a, generated)? - shift)
            }
            FiltrationKind::Blowup { base, body } => {
                let km = k * body.m();
                let x = body.chart().to_original(a, km as i64);
                base.lattice_weight(km, &x)
            }
        }
    }

    /// All degree-`k` sections with their weights, in lexicographic order.
    pub fn lattice_weights(&self, k: u64) -> Result<Vec<(Vec<i64>, i64)>, FiltrationError> {
        if k == 0 {
            return Err(FiltrationError::InvalidParameter("degree must be positive".into()));
        }
        let table = self.generated_table(k)?;
        self.domain
            .lattice_points(k)
            .into_iter()
            .map(|a| {
                let w = self.weight_unchecked(k, &a, table.as_deref())?;
                Ok((a, w))
            })
            .collect()
    }

    fn generated_table(
        &self,
        k: u64,
    ) -> Result<Option<std::sync::Arc<HashMap<Vec<i64>, i64>>>, FiltrationError> {
        match &self.kind {
            FiltrationKind::Generated(g) => Ok(Some(g.degree(k)?)),
            FiltrationKind::Shifted { base, .. } => base.generated_table(k),
            _ => Ok(None),
        }
    }

    /// Concave envelope `G_F` on the domain.
    pub fn envelope(&self) -> Result<Envelope, FiltrationError> {
        match &self.kind {
            FiltrationKind::MinAffine(forms) => {
                Ok(Envelope::new(forms.iter().map(AffineForm::profile).collect()))
            }
            FiltrationKind::Generated(g) => {
                let data: Vec<(Vec<i64>, i64)> =
                    g.table().iter().map(|(a, w)| (a.clone(), *w)).collect();
                Ok(concave_majorant(self.dim(), &data))
            }
            FiltrationKind::Shifted { base, s } => {
                let env = base.envelope()?;
                Ok(Envelope::new(
                    env.forms().iter().map(|f| f.add_constant(&-s)).collect(),
                ))
            }
            FiltrationKind::Blowup { base, body } => {
                let env = base.envelope()?;
                let m = qi(body.m() as i64);
                Ok(Envelope::new(
                    env.forms()
                        .iter()
                        .map(|f| {
                            let pulled = body.chart().pull_rational(f);
                            RationalAffine::new(pulled.slope, pulled.constant * &m)
                        })
                        .collect(),
                ))
            }
        }
    }

    /// Concave transform with its simplicial subdivision of the domain.
    pub fn concave_transform(&self) -> Result<PiecewiseAffine, FiltrationError> {
        Ok(PiecewiseAffine::from_envelope(
            self.domain.body().clone(),
            self.envelope()?,
        )?)
    }

    /// Twist by a one-parameter subgroup: every form is translated by `beta`.
    pub fn twist(&self, beta: &OneParamSubgroup) -> Result<Self, FiltrationError> {
        match &self.kind {
            FiltrationKind::MinAffine(forms) => Self::min_affine(
                &self.domain,
                forms.iter().map(|f| f.add(&beta.form)).collect(),
            ),
            _ => Err(FiltrationError::UnsupportedKind {
                op: "twist",
                kind: self.kind_name(),
            }),
        }
    }

    /// Tautological approximation `F_(r)`: the filtration of `(Y, rH)`
    /// generated by the degree-`r` weights. Its domain is `rP`.
    pub fn approximate(&self, r: u64) -> Result<Self, FiltrationError> {
        if r == 0 {
            return Err(FiltrationError::InvalidParameter("r must be positive".into()));
        }
        let table: BTreeMap<Vec<i64>, i64> = self.lattice_weights(r)?.into_iter().collect();
        Ok(Self {
            kind: FiltrationKind::Generated(Generated::new(r, table)),
            domain: self.domain.scaled(r as i64),
        })
    }

    /// `g'_k(a) = g_k(a) − ⌊s·k⌋`.
    pub fn shift(&self, s: &Rational) -> Self {
        Self {
            kind: FiltrationKind::Shifted {
                base: Box::new(self.clone()),
                s: s.clone(),
            },
            domain: self.domain.clone(),
        }
    }

    /// Filtration induced on the blowup: degree-`k` sections are the points
    /// of `kmP` vanishing to order `≥ k` at the corner, weighted by `g_{km}`.
    pub fn blowup(&self, body: &BlowupBody) -> Result<Self, FiltrationError> {
        if !matches!(self.kind, FiltrationKind::MinAffine(_)) {
            return Err(FiltrationError::UnsupportedKind {
                op: "blowup",
                kind: self.kind_name(),
            });
        }
        if body.base() != &self.domain {
            return Err(FiltrationError::DomainMismatch);
        }
        Ok(Self {
            kind: FiltrationKind::Blowup {
                base: Box::new(self.clone()),
                body: body.clone(),
            },
            domain: body.body().clone(),
        })
    }

    /// `{x ∈ P : G_F(x) ≥ s}`.
    pub fn superlevel_body(&self, s: &Rational) -> Result<SuperlevelBody, FiltrationError> {
        let env = self.envelope()?;
        let mut constraints: Vec<RationalAffine> = self.domain.body().facets().to_vec();
        constraints.extend(env.forms().iter().map(|f| f.add_constant(&-s)));
        let vertices = polyhedron_vertices(self.dim(), &constraints);
        Ok(SuperlevelBody {
            constraints,
            vertices,
        })
    }

    /// `C` with `|g_k(a)| ≤ C·k`: the largest absolute form value over the
    /// vertices of the domain.
    pub fn linear_bound(&self) -> Result<Rational, FiltrationError> {
        let env = self.envelope()?;
        Ok(self
            .domain
            .rational_vertices()
            .iter()
            .flat_map(|v| env.forms().iter().map(move |f| f.eval(v)))
            .map(|x| if x < Rational::zero() { -x } else { x })
            .max()
            .unwrap_or_else(Rational::zero))
    }

    /// Exhaustive superadditivity check for all degrees `k, l ≤ max_degree`.
    pub fn check_superadditive(
        &self,
        max_degree: u64,
    ) -> Result<Option<SuperadditivityViolation>, FiltrationError> {
        let tables: Vec<HashMap<Vec<i64>, i64>> = (1..=2 * max_degree)
            .map(|k| Ok(self.lattice_weights(k)?.into_iter().collect()))
            .collect::<Result<_, FiltrationError>>()?;
        for k in 1..=max_degree {
            for l in k..=max_degree {
                for (a, wa) in &tables[(k - 1) as usize] {
                    for (b, wb) in &tables[(l - 1) as usize] {
                        let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                        let ws = tables[(k + l - 1) as usize][&s];
                        if ws < wa + wb {
                            return Ok(Some(SuperadditivityViolation {
                                k,
                                l,
                                a: a.clone(),
                                b: b.clone(),
                            }));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}
