pub mod filtration;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod polytope;
pub mod rational;
