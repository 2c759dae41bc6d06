//! Library side of the command-line tool: verdict reporting and the
//! verification suites, kept separate from argument parsing so they can be
//! tested directly.

pub mod report;
pub mod suites;
