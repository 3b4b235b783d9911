//! Input language, checks suite and report format behind the jetlie binary.

pub mod app;
pub mod dsl;
pub mod report;
pub mod suite;
