//! JSON problem files.
//!
//! ```json
//! {
//!   "polytope": { "dim": 1, "vertices": [[0], [1]] },
//!   "filtrations": {
//!     "tent": { "type": "min_affine", "forms": [{ "u": [1], "c": 0 }, { "u": [-1], "c": 1 }] },
//!     "half": { "type": "shifted", "base": "tent", "s": "1/2" }
//!   },
//!   "torus": [{ "u": [1], "c": 0 }],
//!   "tasks": [{ "command": "chow", "filtration": "tent", "r": 2 }]
//! }
//! ```

use crate::filtration::{AffineForm, BlowupBody, Filtration, OneParamSubgroup};
use crate::invariants::TorusBasis;
use crate::polytope::LatticePolytope;
use crate::rational::{format_rational, parse_rational, Rational};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ProblemError {
    #[error("ParseError at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("ValidationError: {0}")]
    Validation(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Rational number written as a `"p/q"` or `"p"` string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map(RationalText).map_err(de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpec {
    pub u: Vec<i64>,
    pub c: i64,
}

impl From<&FormSpec> for AffineForm {
    fn from(f: &FormSpec) -> Self {
        AffineForm::new(f.u.clone(), f.c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FiltrationSpec {
    MinAffine { forms: Vec<FormSpec> },
    Generated { base: String, r: u64 },
    Shifted { base: String, s: RationalText },
    Blowup { base: String, vertex: usize, m: u64 },
    Twist { base: String, u: Vec<i64>, c: i64 },
}

impl FiltrationSpec {
    fn base(&self) -> Option<&str> {
        match self {
            FiltrationSpec::MinAffine { .. } => None,
            FiltrationSpec::Generated { base, .. }
            | FiltrationSpec::Shifted { base, .. }
            | FiltrationSpec::Blowup { base, .. }
            | FiltrationSpec::Twist { base, .. } => Some(base),
        }
    }
}

/// Named filtrations in file order; duplicate names are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NamedFiltrations(pub Vec<(String, FiltrationSpec)>);

impl Serialize for NamedFiltrations {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (name, spec) in &self.0 {
            map.serialize_entry(name, spec)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for NamedFiltrations {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Named;
        impl<'de> Visitor<'de> for Named {
            type Value = NamedFiltrations;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from filtration names to filtrations")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut out: Vec<(String, FiltrationSpec)> = Vec::new();
                while let Some(name) = access.next_key::<String>()? {
                    if out.iter().any(|(n, _)| *n == name) {
                        return Err(de::Error::custom(format!("duplicate filtration name `{name}`")));
                    }
                    out.push((name, access.next_value()?));
                }
                Ok(NamedFiltrations(out))
            }
        }
        d.deserialize_map(Named)
    }
}

/// One task of the file; fields mirror the CLI flags.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filtration: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub against: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<RationalText>,
}

pub const COMMANDS: &[&str] = &[
    "hilbert", "invariants", "df", "df-rel", "futaki", "chow", "chow-rel", "approx", "blowup", "nu",
    "chow-inf", "cm-diff", "check",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub polytope: PolytopeSpec,
    #[serde(default)]
    pub filtrations: NamedFiltrations,
    #[serde(default)]
    pub torus: Vec<FormSpec>,
    #[serde(default)]
    pub tasks: Vec<TaskSpec>,
}

fn classify(e: serde_json::Error) -> ProblemError {
    use serde_json::error::Category;
    match e.classify() {
        Category::Data => ProblemError::Validation(e.to_string()),
        _ => {
            let message = e.to_string();
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            ProblemError::Parse {
                line: e.line(),
                column: e.column(),
                message,
            }
        }
    }
}

impl ProblemFile {
    pub fn from_str(text: &str) -> Result<Self, ProblemError> {
        let file: ProblemFile = serde_json::from_str(text).map_err(classify)?;
        file.validate()?;
        Ok(file)
    }

    pub fn from_reader(r: impl std::io::Read) -> Result<Self, ProblemError> {
        let file: ProblemFile = serde_json::from_reader(r).map_err(classify)?;
        file.validate()?;
        Ok(file)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, ProblemError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ProblemError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_str(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    fn validate(&self) -> Result<(), ProblemError> {
        let invalid = |m: String| Err(ProblemError::Validation(m));
        let n = self.polytope.dim;
        for (i, v) in self.polytope.vertices.iter().enumerate() {
            if v.len() != n {
                return invalid(format!("vertex {i} has {} coordinates, expected {n}", v.len()));
            }
        }
        self.lattice_polytope()?;
        let names: BTreeSet<&str> = self.filtrations.0.iter().map(|(n, _)| n.as_str()).collect();
        for (name, spec) in &self.filtrations.0 {
            if let Some(base) = spec.base() {
                if !names.contains(base) {
                    return invalid(format!("filtration `{name}` refers to unknown base `{base}`"));
                }
            }
            let dims_ok = match spec {
                FiltrationSpec::MinAffine { forms } => {
                    if forms.is_empty() {
                        return invalid(format!("filtration `{name}` has no forms"));
                    }
                    forms.iter().all(|f| f.u.len() == n)
                }
                FiltrationSpec::Twist { u, .. } => u.len() == n,
                FiltrationSpec::Generated { r, .. } if *r == 0 => {
                    return invalid(format!("filtration `{name}`: r must be positive"))
                }
                FiltrationSpec::Blowup { m, .. } if *m == 0 => {
                    return invalid(format!("filtration `{name}`: m must be positive"))
                }
                _ => true,
            };
            if !dims_ok {
                return invalid(format!("filtration `{name}` has a form of the wrong dimension"));
            }
        }
        for (name, _) in &self.filtrations.0 {
            let mut seen = BTreeSet::new();
            let mut cur = name.as_str();
            while let Some(base) = self.spec(cur).and_then(FiltrationSpec::base) {
                if !seen.insert(cur) {
                    return invalid(format!("filtration `{name}` is defined in terms of itself"));
                }
                cur = base;
            }
        }
        for (i, g) in self.torus.iter().enumerate() {
            if g.u.len() != n {
                return invalid(format!("torus generator {i} has the wrong dimension"));
            }
        }
        self.torus_basis()?;
        for (i, t) in self.tasks.iter().enumerate() {
            if !COMMANDS.contains(&t.command.as_str()) {
                return invalid(format!("task {i}: unknown command `{}`", t.command));
            }
            for name in [&t.filtration, &t.against].into_iter().flatten() {
                if !names.contains(name.as_str()) {
                    return invalid(format!("task {i}: unknown filtration `{name}`"));
                }
            }
        }
        Ok(())
    }

    fn spec(&self, name: &str) -> Option<&FiltrationSpec> {
        self.filtrations.0.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn lattice_polytope(&self) -> Result<LatticePolytope, ProblemError> {
        LatticePolytope::new(self.polytope.dim, &self.polytope.vertices)
            .map_err(|e| ProblemError::Validation(format!("polytope: {e}")))
    }

    pub fn torus_basis(&self) -> Result<TorusBasis, ProblemError> {
        let p = self.lattice_polytope()?;
        TorusBasis::new(
            &p,
            self.torus.iter().map(|g| OneParamSubgroup::new(g.u.clone(), g.c)).collect(),
        )
        .map_err(|e| ProblemError::Validation(format!("torus: {e}")))
    }

    pub fn filtration_names(&self) -> Vec<&str> {
        self.filtrations.0.iter().map(|(n, _)| n.as_str()).collect()
    }

    /// Builds every named filtration. Construction failures (a non-smooth
    /// blowup corner, twisting a non-monomial filtration, …) are returned per
    /// name rather than failing the whole file.
    pub fn build(&self) -> Result<BTreeMap<String, Result<Filtration, String>>, ProblemError> {
        let p = self.lattice_polytope()?;
        let mut built: BTreeMap<String, Result<Filtration, String>> = BTreeMap::new();
        for (name, _) in &self.filtrations.0 {
            let _ = self.build_one(name, &p, &mut built);
        }
        Ok(built)
    }

    fn build_one(
        &self,
        name: &str,
        p: &LatticePolytope,
        built: &mut BTreeMap<String, Result<Filtration, String>>,
    ) -> Result<Filtration, String> {
        if let Some(done) = built.get(name) {
            return done.clone();
        }
        let spec = self.spec(name).expect("validated name");
        let base = spec.base().map(|b| self.build_one(b, p, built));
        let made = match (spec, base) {
            (FiltrationSpec::MinAffine { forms }, _) => {
                Filtration::min_affine(p, forms.iter().map(AffineForm::from).collect()).map_err(|e| e.to_string())
            }
            (_, Some(Err(e))) => Err(format!("base filtration failed: {e}")),
            (FiltrationSpec::Generated { r, .. }, Some(Ok(b))) => b.approximate(*r).map_err(|e| e.to_string()),
            (FiltrationSpec::Shifted { s, .. }, Some(Ok(b))) => Ok(b.shift(&s.0)),
            (FiltrationSpec::Blowup { vertex, m, .. }, Some(Ok(b))) => BlowupBody::new(b.domain(), *vertex, *m)
                .and_then(|body| b.blowup(&body))
                .map_err(|e| e.to_string()),
            (FiltrationSpec::Twist { u, c, .. }, Some(Ok(b))) => {
                b.twist(&OneParamSubgroup::new(u.clone(), *c)).map_err(|e| e.to_string())
            }
            (_, None) => unreachable!("non-base kinds have a base"),
        };
        built.insert(name.to_string(), made.clone());
        made
    }
}
