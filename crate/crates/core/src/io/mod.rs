//! Problem files, task dispatch and report rendering.

mod check;
mod commands;
mod problem;
mod report;

pub use check::{any_failed, run_checks, Outcome};
pub use commands::{describe, CommandError, Session};
pub use problem::{
    FiltrationSpec, FormSpec, NamedFiltrations, PolytopeSpec, ProblemError, ProblemFile, RationalText, TaskSpec,
    COMMANDS,
};
pub use report::{Cell, Format, Report, Section};
