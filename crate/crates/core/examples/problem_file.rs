//! Loading a problem file and running its tasks, as the CLI does.

use kfiltr::io::{Format, ProblemFile, Session};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/p1_tent.json").to_string());
    let problem = ProblemFile::from_path(&path).unwrap();
    let session = Session::new(problem).unwrap();
    print!("{}", session.run_tasks().unwrap().render(Format::Table));
}
