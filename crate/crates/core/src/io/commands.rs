//! Command dispatch shared by the CLI and the `tasks` list of problem files.

use super::problem::{ProblemError, ProblemFile, TaskSpec};
use super::report::{Report, Section};
use rayon::prelude::*;
use crate::filtration::{BlowupBody, Filtration, FiltrationError, FiltrationKind, OneParamSubgroup};
use crate::invariants::{self as inv, InvariantError, TorusBasis};
use crate::polytope::{GeometryError, LatticePolytope};
use crate::rational::{format_rational, Rational};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("{op}: {message} [requires: {requirement}]")]
    Domain {
        op: String,
        message: String,
        requirement: &'static str,
    },
}

impl CommandError {
    /// 1 for input problems, 2 for mathematical preconditions that fail.
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Problem(_) | CommandError::Usage(_) => 1,
            CommandError::Domain { .. } => 2,
        }
    }
}

fn requirement_of_invariant(e: &InvariantError) -> &'static str {
    match e {
        InvariantError::NotGood { .. } | InvariantError::NotPolynomial(_) => {
            "a good filtration, whose weight function is eventually a polynomial"
        }
        InvariantError::SingularGram | InvariantError::DependentGenerators => {
            "a torus basis with linearly independent generators (nonsingular Gram matrix)"
        }
        InvariantError::DimensionTooSmall(_) => "dimension n ≥ 2",
        InvariantError::DegenerateFiltration(_) => {
            "a nonconstant concave transform (essential infimum below the mean)"
        }
        InvariantError::BoundViolated { .. } => "G_F ≤ Λ on the corner simplex Δ_{1/m}",
        InvariantError::ShellEmpty { .. } => "a nonempty shell, 1/m − n/r > 0",
        InvariantError::DomainMismatch => "filtrations on the same polytope",
        InvariantError::InvalidParameter(_) => "positive degrees and parameters",
        InvariantError::Filtration(f) => requirement_of_filtration(f),
        InvariantError::Geometry(g) => requirement_of_geometry(g),
    }
}

fn requirement_of_filtration(e: &FiltrationError) -> &'static str {
    match e {
        FiltrationError::OutOfBody { .. } => "a lattice point of kP",
        FiltrationError::UnsupportedKind { .. } => "a min-affine (monomial) filtration",
        FiltrationError::NonSmoothCorner { .. } | FiltrationError::NoSuchVertex(_) => {
            "a smooth torus-fixed point (unimodular vertex cone)"
        }
        FiltrationError::SimplexNotContained { .. } | FiltrationError::DegenerateBlowup { .. } => {
            "Δ_{1/m} contained in P with mP minus Δ_1 full-dimensional"
        }
        FiltrationError::DomainMismatch => "a filtration on the blowup's base polytope",
        FiltrationError::Geometry(g) => requirement_of_geometry(g),
        _ => "well-formed filtration data",
    }
}

fn requirement_of_geometry(e: &GeometryError) -> &'static str {
    match e {
        GeometryError::FitMismatch { .. } => "an Ehrhart polynomial verified on the sample window",
        GeometryError::UnsupportedDegree(_) => "integrands of degree at most 2",
        _ => "a full-dimensional lattice polytope",
    }
}

fn domain(op: &str) -> impl Fn(InvariantError) -> CommandError + '_ {
    move |e| CommandError::Domain {
        op: op.to_string(),
        requirement: requirement_of_invariant(&e),
        message: e.to_string(),
    }
}

fn fdomain(op: &str) -> impl Fn(FiltrationError) -> CommandError + '_ {
    move |e| CommandError::Domain {
        op: op.to_string(),
        requirement: requirement_of_filtration(&e),
        message: e.to_string(),
    }
}

/// A parsed problem file with its objects built.
pub struct Session {
    pub problem: ProblemFile,
    pub polytope: LatticePolytope,
    pub torus: TorusBasis,
    built: BTreeMap<String, Result<Filtration, String>>,
}

impl Session {
    pub fn new(problem: ProblemFile) -> Result<Self, CommandError> {
        let polytope = problem.lattice_polytope()?;
        let torus = problem.torus_basis()?;
        let built = problem.build()?;
        Ok(Self {
            problem,
            polytope,
            torus,
            built,
        })
    }

    pub fn filtration(&self, op: &str, name: &str) -> Result<&Filtration, CommandError> {
        match self.built.get(name) {
            None => Err(CommandError::Usage(format!("unknown filtration `{name}`"))),
            Some(Ok(f)) => Ok(f),
            Some(Err(message)) => Err(CommandError::Domain {
                op: op.to_string(),
                message: format!("filtration `{name}` could not be built: {message}"),
                requirement: "constructible filtration data",
            }),
        }
    }

    /// Built filtrations in file order, skipping those that failed.
    pub fn filtrations(&self) -> Vec<(&str, &Filtration)> {
        self.problem
            .filtration_names()
            .into_iter()
            .filter_map(|n| match self.built.get(n) {
                Some(Ok(f)) => Some((n, f)),
                _ => None,
            })
            .collect()
    }

    /// The file's torus when `f` lives on the file polytope, else the trivial torus.
    pub fn torus_for(&self, f: &Filtration) -> TorusBasis {
        if f.domain() == &self.polytope {
            self.torus.clone()
        } else {
            TorusBasis::empty(f.domain())
        }
    }

    /// Runs the tasks of the file concurrently; sections keep task order and
    /// the first failing task (by index) decides the error.
    pub fn run_tasks(&self) -> Result<Report, CommandError> {
        let results: Vec<Result<Vec<Section>, CommandError>> =
            self.problem.tasks.par_iter().map(|t| self.run(t)).collect();
        let mut report = Report::default();
        for r in results {
            for s in r? {
                report.push(s);
            }
        }
        Ok(report)
    }

    pub fn run(&self, t: &TaskSpec) -> Result<Vec<Section>, CommandError> {
        let op = t.command.as_str();
        let need_f = || -> Result<(&str, &Filtration), CommandError> {
            let name = t
                .filtration
                .as_deref()
                .ok_or_else(|| CommandError::Usage(format!("{op} needs --filtration")))?;
            Ok((name, self.filtration(op, name)?))
        };
        let need = |v: Option<u64>, flag: &str| {
            v.ok_or_else(|| CommandError::Usage(format!("{op} needs --{flag}")))
        };
        match op {
            "hilbert" => {
                let p = match &t.filtration {
                    Some(name) => self.filtration(op, name)?.domain().clone(),
                    None => self.polytope.clone(),
                };
                let h = p.ehrhart_fit().map_err(|e| domain(op)(e.into()))?;
                let mut s = Section::quantities("hilbert");
                s.quantity("dim", p.dim() as u64).quantity("volume", p.volume());
                for (i, c) in h.coefficients().iter().enumerate() {
                    s.quantity(&format!("a{i}"), c);
                }
                if let Some(k) = t.k {
                    s.quantity(&format!("h({k})"), p.lattice_count(k));
                }
                Ok(vec![s])
            }
            "invariants" => {
                let (name, f) = need_f()?;
                let torus = self.torus_for(f);
                let rep = inv::invariant_report(f, &torus).map_err(domain(op))?;
                let mut s = Section::quantities(format!("invariants {name}"));
                s.quantity("a0", &rep.a0)
                    .quantity("a1", &rep.a1)
                    .quantity("b0", &rep.b0);
                if let Some(b1) = &rep.b1 {
                    s.quantity("b1", b1);
                }
                s.quantity("c0", &rep.c0);
                match rep.period {
                    Some(p) => s.quantity("period", p as u64),
                    None => s.quantity("period", "unknown"),
                };
                s.quantity("norm2", &rep.norm2)
                    .quantity("mean", &rep.mean)
                    .quantity("e_max", &rep.e_max)
                    .quantity("M_F", &rep.m_f);
                for (label, v) in [("df", &rep.df), ("df_rel", &rep.df_rel), ("reduced_norm2", &rep.reduced_norm2)] {
                    if let Some(v) = v {
                        s.quantity(label, v);
                    }
                }
                for (i, ip) in rep.inner_products.iter().enumerate() {
                    s.quantity(&format!("inner[{i}]"), ip);
                }
                let mut out = vec![s];
                if let Some(k) = t.k {
                    let p = t.p.unwrap_or(1);
                    let mut w = Section::quantities(format!("weight {name} k={k} p={p}"));
                    w.quantity("w", inv::weight(f, k, p).map_err(domain(op))?);
                    let fit = inv::fit_weight_poly(f, p, inv::default_window(f.dim(), p)).map_err(domain(op))?;
                    w.quantity("period", fit.period() as u64);
                    for (c, class) in fit.classes().iter().enumerate() {
                        for (i, x) in class.iter().enumerate() {
                            w.quantity(&format!("class{c}.coeff{i}"), x);
                        }
                    }
                    out.push(w);
                }
                Ok(out)
            }
            "df" => {
                let (name, f) = need_f()?;
                let mut s = Section::quantities(format!("df {name}"));
                s.quantity("df", inv::df(f).map_err(domain(op))?);
                Ok(vec![s])
            }
            "df-rel" => {
                let (name, f) = need_f()?;
                let torus = self.torus_for(f);
                let mut s = Section::quantities(format!("df-rel {name}"));
                s.quantity("df", inv::df(f).map_err(domain(op))?)
                    .quantity("df_rel", inv::df_rel(f, &torus).map_err(domain(op))?);
                for (i, x) in inv::projection(f, &torus).map_err(domain(op))?.iter().enumerate() {
                    s.quantity(&format!("xi[{i}]"), x);
                }
                Ok(vec![s])
            }
            "futaki" => {
                let betas: Vec<(String, OneParamSubgroup, LatticePolytope)> = match &t.filtration {
                    Some(name) => {
                        let f = self.filtration(op, name)?;
                        match f.forms() {
                            Some([form]) => vec![(name.clone(), OneParamSubgroup { form: form.clone() }, f.domain().clone())],
                            _ => {
                                return Err(CommandError::Domain {
                                    op: op.into(),
                                    message: format!("filtration `{name}` is not a one-parameter subgroup"),
                                    requirement: "a single affine form (product test configuration)",
                                })
                            }
                        }
                    }
                    None => self
                        .torus
                        .generators()
                        .iter()
                        .enumerate()
                        .map(|(i, g)| (format!("torus[{i}]"), g.clone(), self.polytope.clone()))
                        .collect(),
                };
                let mut s = Section::new("futaki", &["generator", "u", "c", "futaki"]);
                for (label, b, p) in betas {
                    let fut = inv::futaki(&b, &p).map_err(domain(op))?;
                    s.row(vec![label.into(), format!("{:?}", b.form.u).into(), b.form.c.into(), fut.into()]);
                }
                Ok(vec![s])
            }
            "chow" | "chow-rel" => {
                let (name, f) = need_f()?;
                let r = need(t.r, "r")?;
                let mut s = Section::quantities(format!("{op} {name} r={r}"));
                s.quantity("chow", inv::chow(f, r).map_err(domain(op))?);
                if op == "chow-rel" {
                    let torus = self.torus_for(f);
                    s.quantity("chow_rel", inv::chow_rel(f, &torus, r).map_err(domain(op))?);
                }
                Ok(vec![s])
            }
            "approx" => {
                let (name, f) = need_f()?;
                let r = need(t.r, "r")?;
                let k = t.k.unwrap_or(1);
                let a = f.approximate(r).map_err(fdomain(op))?;
                let mut s = Section::quantities(format!("approx {name} r={r}"));
                s.quantity("chow_1(F_(r))", inv::chow(&a, 1).map_err(domain(op))?)
                    .quantity("chow_r(F)", inv::chow(f, r).map_err(domain(op))?);
                let mut w = Section::new(format!("approx {name} r={r} weights k={k}"), &["point", "weight", "original"]);
                for (pt, wt) in a.lattice_weights(k).map_err(fdomain(op))? {
                    let orig = f.lattice_weight(k * r, &pt).map_err(fdomain(op))?;
                    w.row(vec![format!("{pt:?}").into(), wt.into(), orig.into()]);
                }
                Ok(vec![s, w])
            }
            "blowup" => {
                let (name, f) = need_f()?;
                let vertex = t
                    .vertex
                    .ok_or_else(|| CommandError::Usage("blowup needs --vertex".into()))?;
                let m = need(t.m, "m")?;
                let k = t.k.unwrap_or(1);
                let body = BlowupBody::new(f.domain(), vertex, m).map_err(fdomain(op))?;
                let hat = f.blowup(&body).map_err(fdomain(op))?;
                let mut s = Section::quantities(format!("blowup {name} vertex={vertex} m={m}"));
                s.quantity("volume", body.body().volume())
                    .quantity("expected_volume", body.expected_volume())
                    .quantity(&format!("sections({k})"), body.lattice_points(k).len() as u64);
                for (i, v) in body.body().vertices().iter().enumerate() {
                    s.quantity(&format!("vertex[{i}]"), format!("{v:?}"));
                }
                let mut w = Section::new(format!("blowup {name} weights k={k}"), &["point", "weight"]);
                for (pt, wt) in hat.lattice_weights(k).map_err(fdomain(op))? {
                    w.row(vec![format!("{pt:?}").into(), wt.into()]);
                }
                Ok(vec![s, w])
            }
            "nu" => {
                let (name, f) = need_f()?;
                let vertex = t.vertex.unwrap_or(0);
                let m = need(t.m, "m")?;
                let r = need(t.r, "r")?;
                let mut s = Section::quantities(format!("nu {name} vertex={vertex} m={m} r={r}"));
                let lambda: Rational = match &t.lambda {
                    Some(l) => l.0.clone(),
                    None => {
                        let lt = inv::lambda_threshold(f).map_err(domain(op))?;
                        s.quantity("A_n", &lt.a_n)
                            .quantity("B_n", &lt.b_n)
                            .quantity("delta_bound", &lt.delta_bound)
                            .quantity("mean", &lt.extremes.mean)
                            .quantity("M_F", &lt.extremes.m_f);
                        lt.lambda
                    }
                };
                s.quantity("lambda", &lambda);
                s.quantity("nu", inv::nu_weight(f, vertex, m, r, &lambda).map_err(domain(op))?);
                let torus = self.torus_for(f);
                s.quantity("nu_rel", inv::nu_rel(f, &torus, vertex, m, r, &lambda).map_err(domain(op))?);
                Ok(vec![s])
            }
            "chow-inf" => {
                let (name, f) = need_f()?;
                let r_max = need(t.r, "r")?;
                let rs: Vec<u64> = (1..=r_max).collect();
                let torus = self.torus_for(f);
                let est = inv::chow_inf_estimate(f, &torus, &rs).map_err(domain(op))?;
                let mut s = Section::new(format!("chow-inf {name}"), &["r", "chow_1T(F_(r))"]);
                for (r, v) in &est.values {
                    s.row(vec![(*r).into(), v.into()]);
                }
                let mut d = Section::quantities(format!("chow-inf {name} limit"));
                match &est.df_rel {
                    Some(v) => d.quantity("df_rel", v),
                    None => d.quantity("df_rel", "not good"),
                };
                Ok(vec![s, d])
            }
            "cm-diff" => {
                let (name, f) = need_f()?;
                let other = t
                    .against
                    .as_deref()
                    .ok_or_else(|| CommandError::Usage("cm-diff needs --against".into()))?;
                let g = self.filtration(op, other)?;
                let mut s = Section::quantities(format!("cm-diff {name} {other}"));
                s.quantity("cm_difference", inv::cm_difference(f, g).map_err(domain(op))?);
                Ok(vec![s])
            }
            "check" => Ok(vec![super::check::run_checks(self)]),
            other => Err(CommandError::Usage(format!("unknown command `{other}`"))),
        }
    }
}

/// Short description of a filtration for listings.
pub fn describe(f: &Filtration) -> String {
    match f.kind() {
        FiltrationKind::MinAffine(forms) => format!("min_affine with {} forms", forms.len()),
        FiltrationKind::Generated(g) => format!("generated in degree 1 from r = {}", g.r()),
        FiltrationKind::Shifted { s, .. } => format!("shifted by {}", format_rational(s)),
        FiltrationKind::Blowup { body, .. } => format!("blowup at vertex {} with m = {}", body.chart().vertex(), body.m()),
    }
}
