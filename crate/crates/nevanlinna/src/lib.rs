pub mod cli;
pub mod jordan;
pub mod krein;
pub mod linalg;
pub mod poly;
pub mod ratfun;
pub mod realization;
pub mod relation;
pub mod sumcriteria;
