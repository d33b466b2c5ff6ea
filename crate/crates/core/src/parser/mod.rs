//! Surface syntax: a parenthesized keyword form read into [`Program`]s and a
//! canonical printer.
//!
//! ```text
//! (pattern :version 1 :style sfp
//!   (canvas :width 256 :height 256 :background "#FFFFFF")
//!   (layer :opacity 1
//!     (grid :rows 2 :cols 2)
//!     (fill :color (cycle :key id :colors ("#112233" "#445566")))))
//! ```
//!
//! Keyword arguments may come in any order and may be omitted when the
//! parameter has a default; `;` starts a comment. The printer always emits
//! every parameter in schema order.

mod print;
mod read;
mod sexpr;

use std::fmt;

use thiserror::Error;

use crate::dsl::{validate, Diagnostic, Program, Severity};

pub use print::{print, print_field, print_layer, print_node, print_value};
pub use read::{Form, field_from_sexpr, layer_from_sexpr, node_from_sexpr, program_from_sexpr, value_from_sexpr};
pub use sexpr::{read_sexpr, Sexpr, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: &str, expected: &[&str]) -> ParseError {
        ParseError::owned(span, message.to_string(), expected.iter().map(|s| s.to_string()).collect())
    }

    pub fn owned(span: SourceSpan, message: String, expected: Vec<String>) -> ParseError {
        ParseError { span, message, expected }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// A tree that parsed but failed validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemanticError {
    pub diagnostics: Vec<Diagnostic>,
}

impl fmt::Display for SemanticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for SemanticError {}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid program:\n{0}")]
    Semantic(#[from] SemanticError),
}

/// Parses without running [`validate`].
pub fn parse_unchecked(text: &str) -> Result<Program, ParseError> {
    program_from_sexpr(&read_sexpr(text)?)
}

/// Parses and validates. Warnings do not fail the parse.
pub fn parse(text: &str) -> Result<Program, Error> {
    let program = parse_unchecked(text)?;
    let errors: Vec<Diagnostic> = validate(&program).into_iter().filter(|d| d.severity == Severity::Error).collect();
    if errors.is_empty() {
        Ok(program)
    } else {
        Err(SemanticError { diagnostics: errors }.into())
    }
}
