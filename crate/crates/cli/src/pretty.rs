//! Canonical text for programs and commands; the parser reads it back to the same tree.

use std::fmt::Write;

use crate::ast::{Action, Command, OptionName, Program, Seed, Statement};

pub fn print_command(cmd: &Command) -> String {
    let mut out = String::from(cmd.verb.name());
    let mut push = |s: &str| {
        out.push(' ');
        out.push_str(s);
    };
    match &cmd.action {
        Action::Verify { target } | Action::Orbits { target } | Action::Ball { target } => push(&target.to_string()),
        Action::Index { target, words } => {
            push(&target.to_string());
            for w in words {
                push(&w.text);
            }
        }
        Action::Scale { target, word } => {
            push(&target.to_string());
            if let Some(w) = word {
                push(&w.text);
            }
        }
        Action::Complete { target, word } => {
            push(&target.to_string());
            push(&word.text);
        }
        Action::FilterCompare { lhs, rhs } => {
            push("compare");
            push(&lhs.path);
            push(&rhs.path);
        }
        Action::FilterShow { file } => {
            push("show");
            push(&file.path);
        }
        Action::Rank { target } => {
            if let Some(t) = target {
                push(&t.to_string());
            }
        }
        Action::Tower => {}
    }
    let o = &cmd.options;
    for name in OptionName::ALL {
        let value = match name {
            OptionName::Depth => o.depth.map(|v| v.to_string()),
            OptionName::Radius => o.radius.map(|v| v.to_string()),
            OptionName::Steps => o.steps.map(|v| v.to_string()),
            OptionName::N => o.n.map(|v| v.to_string()),
            OptionName::Caps => o.caps.map(|c| format!("{},{}", c.coset, c.orbit)),
            OptionName::Output => o.output.as_ref().map(|p| p.path.clone()),
            OptionName::Certificate => o.certificate.as_ref().map(|p| p.path.clone()),
            OptionName::Format => o.format.map(|f| f.name().to_string()),
            OptionName::Seed => o.seed.as_ref().map(|s| match s {
                Seed::Abstract => "abstract".to_string(),
                Seed::Expr(e) => e.to_string(),
            }),
        };
        if let Some(v) = value {
            let _ = write!(out, " --{} {v}", name.name());
        }
    }
    out
}

pub fn print_statement(stmt: &Statement) -> String {
    match stmt {
        Statement::Binding { name, expr, .. } => format!("pair {name} = {expr}"),
        Statement::Command(c) => print_command(c),
    }
}

/// One statement per line, each terminated by a newline.
pub fn print_program(program: &Program) -> String {
    program.statements.iter().map(|s| print_statement(s) + "\n").collect()
}
