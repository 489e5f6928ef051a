use thiserror::Error;

use crate::ast::Span;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{span}: syntax error: expected {}, found {found}", expected.join(" or "))]
    Syntax { span: Span, expected: Vec<String>, found: String },

    #[error("{span}: unknown identifier `{name}`")]
    UnknownIdentifier { span: Span, name: String },

    #[error("{span}: `{name}` takes {expected} argument(s), got {found}")]
    Arity { span: Span, name: String, expected: usize, found: usize },

    #[error("{span}: {message}")]
    Usage { span: Span, message: String },

    #[error("{span}: {source}")]
    Core {
        span: Span,
        #[source]
        source: hecke_core::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn usage(span: Span, message: impl Into<String>) -> CliError {
        CliError::Usage { span, message: message.into() }
    }

    pub fn core(span: Span) -> impl FnOnce(hecke_core::Error) -> CliError {
        move |source| CliError::Core { span, source }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            CliError::Syntax { span, .. }
            | CliError::UnknownIdentifier { span, .. }
            | CliError::Arity { span, .. }
            | CliError::Usage { span, .. }
            | CliError::Core { span, .. } => Some(*span),
            CliError::Io { .. } => None,
        }
    }

    /// Exit status for this error: 2 for anything the caller got wrong, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use hecke_core::Error as E;
        match self {
            CliError::Core { source, .. } => match source {
                E::InvalidParameter(_)
                | E::UnknownGenerator(_)
                | E::WordSyntax { .. }
                | E::FilterSyntax { .. }
                | E::OrdinalSyntax(_)
                | E::FilterMismatch
                | E::UndecidableInclusion(_) => 2,
                _ => 1,
            },
            _ => 2,
        }
    }

    /// The message followed by the offending source line and a caret under the span.
    pub fn render(&self, source: &str) -> String {
        let mut out = format!("error: {self}");
        if let Some(span) = self.span() {
            if let Some(line) = source.lines().nth(span.line.saturating_sub(1)) {
                let width = span.end.saturating_sub(span.start).max(1);
                let width = width.min(line.chars().count().saturating_sub(span.col.saturating_sub(1)).max(1));
                out.push_str(&format!("\n  | {line}\n  | {}{}", " ".repeat(span.col.saturating_sub(1)), "^".repeat(width)));
            }
        }
        out
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
