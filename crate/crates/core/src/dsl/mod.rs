//! The scene language: one statement per line.
//!
//! ```text
//! # title: Midline
//! free triangle A B C { acute, min_angle 15deg }
//! let M = midpoint(A, B)
//! free point P on segment(B, C)
//! require directed_ratio(P, B, C) > 0
//! assert parallel(line(M, midpoint(A, C)), line(B, C))
//! ```

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod resolve;

use std::fmt;

pub use ast::{pretty_print, SceneAst, Span};
pub use eval::{evaluate, evaluate_with, Bindings, DegenerateSample, EvalOptions, Value};
pub use parser::parse;
pub use resolve::{resolve, AssertKind, Assertion, Scene};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn at(span: Span, message: impl Into<String>) -> Self {
        ParseError {
            line: span.line,
            column: span.column,
            message: message.into(),
            expected: Vec::new(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

/// Parses and resolves in one step.
pub fn load(source: &str) -> Result<Scene, ParseError> {
    resolve(&parse(source)?)
}
