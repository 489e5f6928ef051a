//! The pair-description language: parser, pretty-printer, evaluator and command runner
//! behind the `hecke` binary.

pub mod ast;
pub mod commands;
pub mod error;
pub mod eval;
pub mod parser;
pub mod pretty;

pub use ast::{Command, PairExpr, Program, Span, Statement, Verb};
pub use commands::{run_program, Outcome, RunResult, Session};
pub use error::{CliError, Result};
pub use parser::{parse_args, parse_command, parse_expr, parse_program};
pub use pretty::{print_command, print_program};
