//! Text input and output: the expression grammar, plain and LaTeX printing,
//! and session files.
//!
//! Expressions are sums of `*`-separated factors. Generators are `q`, `b`,
//! `p1`, `p2`, … when `m = 1` and `q<α>`, `b<α>`, `p<j>.<α>` otherwise; base
//! variables are `x` (or `x1..xn`). Derivatives are written as a suffix,
//! `q_xx` or `b2_x1x1x2`.

mod parser;
mod printer;
mod session;

pub use parser::{parse, Scope};
pub use printer::{print, variable_latex, variable_name, Style};
pub use session::Session;

/// A syntax or name-resolution error at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
