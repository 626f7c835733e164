//! The `.kz` input language: primes, presented rings over declared bases,
//! maps and check directives.

pub mod ast;
mod elaborate;
mod lexer;
mod parser;

use std::fmt;

pub use ast::SourceFile;
pub use elaborate::{elaborate, load, Program};
pub use parser::{parse, MAX_EXPONENT};

/// Byte range plus 1-based line and column of its start. Spans never take
/// part in AST equality.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Span {
    pub fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end.max(self.start),
            line: self.line,
            col: self.col,
        }
    }

    pub fn same_position(&self, other: &Span) -> bool {
        (self.start, self.end, self.line, self.col) == (other.start, other.end, other.line, other.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("{0} is not a prime in [2, 65536]")]
    NotPrime(u64),
    #[error("missing `prime` declaration before the first ring")]
    MissingPrime,
    #[error("duplicate `prime` declaration")]
    DuplicatePrime,
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("wrong variable count: expected {expected}, found {found}")]
    WrongVariableCount { expected: usize, found: usize },
    #[error("map is not well defined: relation #{relation} of the source does not map to zero")]
    NotWellDefined { relation: usize },
    #[error("cyclic base reference through `{0}`")]
    CyclicBase(String),
    #[error("invalid option: {0}")]
    InvalidOption(String),
    #[error(transparent)]
    Kernel(crate::Error),
}

/// A diagnostic anchored at a source span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub span: Span,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.span.line, self.span.col, self.kind)
    }
}

impl std::error::Error for DslError {}

impl DslError {
    pub fn new(kind: DslErrorKind, span: Span) -> Self {
        DslError { kind, span }
    }

    /// Diagnostic with the offending line and a caret marker.
    pub fn render(&self, src: &str, path: &str) -> String {
        let line = src.lines().nth(self.span.line.saturating_sub(1)).unwrap_or("");
        let width = src[self.span.start.min(src.len())..self.span.end.min(src.len())]
            .chars()
            .take_while(|&c| c != '\n')
            .count()
            .max(1);
        format!(
            "{path}:{self}\n  | {line}\n  | {}{}",
            " ".repeat(self.span.col.saturating_sub(1)),
            "^".repeat(width)
        )
    }

    pub fn is_budget(&self) -> bool {
        matches!(&self.kind, DslErrorKind::Kernel(e) if e.is_budget())
    }
}
