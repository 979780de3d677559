//! The `check` command: independent oracles run against the fast paths for
//! every filtration of a problem file.

use super::commands::Session;
use super::report::Section;
use crate::filtration::{Filtration, FiltrationKind};
use crate::invariants::{self as inv, TorusBasis};
use crate::oracle::{self, OracleError, TwistQuadratic};
use crate::rational::{floor_int, q, qi, Rational};
use num_traits::Signed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skip => "SKIP",
        }
    }
}

struct Checks {
    section: Section,
}

impl Checks {
    fn record(&mut self, name: &str, property: &str, outcome: Outcome, detail: String) {
        self.section.row(vec![
            name.into(),
            property.into(),
            outcome.label().into(),
            detail.into(),
        ]);
    }

    fn compare<T: PartialEq + std::fmt::Display, E: std::fmt::Display>(
        &mut self,
        name: &str,
        property: &str,
        fast: Result<T, E>,
        slow: Result<T, E>,
    ) {
        match (fast, slow) {
            (Ok(a), Ok(b)) => {
                let outcome = if a == b { Outcome::Pass } else { Outcome::Fail };
                self.record(name, property, outcome, format!("{a} vs {b}"));
            }
            (Err(e), _) | (_, Err(e)) => self.record(name, property, Outcome::Skip, e.to_string()),
        }
    }
}

const K: u64 = 2;

/// Runs all checks; the `outcome` column holds PASS, FAIL or SKIP.
pub fn run_checks(session: &Session) -> Section {
    let mut c = Checks {
        section: Section::new("check", &["filtration", "property", "outcome", "detail"]),
    };
    for (name, f) in session.filtrations() {
        let torus = session.torus_for(f);
        check_histogram(&mut c, name, f);
        check_t_sum(&mut c, name, f, &torus);
        check_generated(&mut c, name, f);
        check_grid_integral(&mut c, name, f);
        check_reduced_min(&mut c, name, f, &torus);
        check_superadditive(&mut c, name, f);
        check_twists(&mut c, name, f, &torus);
    }
    c.section
}

/// True when any row of a check section failed.
pub fn any_failed(section: &Section) -> bool {
    section
        .rows
        .iter()
        .any(|r| matches!(&r[2], super::report::Cell::Text(t) if t == "FAIL"))
}

fn check_histogram(c: &mut Checks, name: &str, f: &Filtration) {
    let hist = oracle::filtered_dims(f, K).map_err(|e| e.to_string());
    for p in [1u32, 2] {
        let slow = hist.clone().map(|h| oracle::histogram_moment(&h, p));
        let fast = inv::weight(f, K, p).map_err(|e| e.to_string());
        c.compare(name, &format!("histogram moment p={p} k={K}"), fast, slow);
    }
}

fn check_t_sum(c: &mut Checks, name: &str, f: &Filtration, torus: &TorusBasis) {
    let count = oracle::t_sum(f, &crate::filtration::OneParamSubgroup::new(vec![0; f.dim()], 0), K, |_, _| qi(1));
    c.compare(
        name,
        &format!("t_sum(1) = h({K})"),
        Ok::<_, String>(qi(f.domain().lattice_count(K) as i64)),
        count.map_err(|e| e.to_string()),
    );
    for (i, beta) in torus.generators().iter().enumerate() {
        let slow = oracle::t_sum(f, beta, K, |l, m| qi(l) * qi(m)).map_err(|e| e.to_string());
        let fast = inv::mixed_square_weight(f, beta, K)
            .map(|w| Rational::from_integer(w.into()))
            .map_err(|e| e.to_string());
        c.compare(name, &format!("t_sum(λμ) = w²_(F,β{i})({K})"), fast, slow);
    }
}

fn check_generated(c: &mut Checks, name: &str, f: &Filtration) {
    let r = 2;
    let property = format!("generated r={r} k={K}");
    let slow = match oracle::generated(f, r, K) {
        Ok(t) => t,
        Err(e @ OracleError::BudgetExceeded { .. }) => {
            return c.record(name, &property, Outcome::Skip, e.to_string())
        }
        Err(e) => return c.record(name, &property, Outcome::Skip, e.to_string()),
    };
    let fast = match f.approximate(r).and_then(|a| a.lattice_weights(K)) {
        Ok(w) => w,
        Err(e) => return c.record(name, &property, Outcome::Skip, e.to_string()),
    };
    let mismatch = fast.iter().find(|(a, w)| slow.get(a) != Some(w));
    match mismatch {
        None if fast.len() == slow.len() => {
            c.record(name, &property, Outcome::Pass, format!("{} points", fast.len()))
        }
        None => c.record(name, &property, Outcome::Fail, "point sets differ".into()),
        Some((a, w)) => c.record(
            name,
            &property,
            Outcome::Fail,
            format!("at {a:?}: {w} vs {:?}", slow.get(a)),
        ),
    }
}

fn check_grid_integral(c: &mut Checks, name: &str, f: &Filtration) {
    let n_grid = 16;
    let property = format!("grid integral N={n_grid} brackets b0");
    let (env, b0) = match f.envelope().map_err(inv::InvariantError::from).and_then(|e| {
        inv::leading_coeffs(f).map(|(b0, _)| (e, b0))
    }) {
        Ok(x) => x,
        Err(e) => return c.record(name, &property, Outcome::Skip, e.to_string()),
    };
    let g = oracle::grid_integral(&env, f.domain(), n_grid);
    let outcome = if g.brackets(&b0) { Outcome::Pass } else { Outcome::Fail };
    c.record(
        name,
        &property,
        outcome,
        format!("|{} − {}| ≤ {}", g.estimate, b0, g.bound),
    );
}

fn check_reduced_min(c: &mut Checks, name: &str, f: &Filtration, torus: &TorusBasis) {
    let property = "grid minimum of twisted norm";
    if torus.rank() == 0 || torus.rank() > 3 {
        return c.record(name, property, Outcome::Skip, format!("torus rank {}", torus.rank()));
    }
    let betas = torus.filtrations();
    let data = (|| -> Result<_, inv::InvariantError> {
        let quad = TwistQuadratic {
            norm2: inv::l2_norm2(f)?,
            linear: betas.iter().map(|b| inv::inner(f, b)).collect::<Result<_, _>>()?,
            gram: betas
                .iter()
                .map(|bi| betas.iter().map(|bj| inv::inner(bi, bj)).collect())
                .collect::<Result<_, _>>()?,
        };
        Ok((quad, inv::reduced_norm2(f, torus)?))
    })();
    let (quad, reduced) = match data {
        Ok(x) => x,
        Err(e) => return c.record(name, property, Outcome::Skip, e.to_string()),
    };
    let reach = reduced
        .xi
        .iter()
        .map(|x| Rational::from_integer(floor_int(&x.abs()) + 2))
        .fold(qi(4), |a, b| a.max(b));
    let step = if torus.rank() == 3 { q(1, 4) } else { q(1, 8) };
    let grid = oracle::coefficient_grid(torus.rank(), &step, &reach);
    let (min, _) = oracle::reduced_min(&quad, &grid);
    let gap = quad.grid_gap_bound(&step);
    let ok = reduced.value <= min && min <= &reduced.value + &gap;
    c.record(
        name,
        property,
        if ok { Outcome::Pass } else { Outcome::Fail },
        format!("{} ≤ {} ≤ {} + {}", reduced.value, min, reduced.value, gap),
    );
}

fn check_superadditive(c: &mut Checks, name: &str, f: &Filtration) {
    let property = format!("superadditive up to degree {K}");
    if matches!(f.kind(), FiltrationKind::Shifted { .. }) {
        return c.record(name, &property, Outcome::Skip, "fractional shifts round down".into());
    }
    match f.check_superadditive(K) {
        Ok(None) => c.record(name, &property, Outcome::Pass, String::new()),
        Ok(Some(v)) => c.record(
            name,
            &property,
            Outcome::Fail,
            format!("k={} l={} a={:?} b={:?}", v.k, v.l, v.a, v.b),
        ),
        Err(e) => c.record(name, &property, Outcome::Skip, e.to_string()),
    }
}

fn check_twists(c: &mut Checks, name: &str, f: &Filtration, torus: &TorusBasis) {
    if !matches!(f.kind(), FiltrationKind::MinAffine(_)) {
        return;
    }
    for (i, beta) in torus.generators().iter().enumerate() {
        let property = format!("twist by β{i}: w(k) adds, DF adds Futaki");
        let result = (|| -> Result<bool, inv::InvariantError> {
            let t = f.twist(beta)?;
            let b = Filtration::from_one_param(beta, f.domain())?;
            let mut ok = true;
            for k in 1..=3 {
                ok &= inv::weight(&t, k, 1)? == inv::weight(f, k, 1)? + inv::weight(&b, k, 1)?;
            }
            ok &= inv::leading_coeffs(&t)?.0 == inv::leading_coeffs(f)?.0 + inv::leading_coeffs(&b)?.0;
            if let (Ok(dt), Ok(df)) = (inv::df(&t), inv::df(f)) {
                ok &= dt == df + inv::futaki(beta, f.domain())?;
            }
            Ok(ok)
        })();
        match result {
            Ok(true) => c.record(name, &property, Outcome::Pass, String::new()),
            Ok(false) => c.record(name, &property, Outcome::Fail, String::new()),
            Err(e) => c.record(name, &property, Outcome::Skip, e.to_string()),
        }
    }
}
