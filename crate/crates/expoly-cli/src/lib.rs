//! Library surface of the command-line front end: the expression parser,
//! re-exported for integration tests and embedding.

pub mod parse;
