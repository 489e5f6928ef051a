//! Line-oriented parser for `.pairs` programs and single command lines.
//!
//! ```text
//! program  := line*
//! line     := blank | '#' comment | binding | command
//! binding  := 'pair' IDENT '=' expr
//! command  := VERB chunk* ('--' OPTION chunk)*
//! expr     := IDENT | IDENT '(' [arg (',' arg)*] ')'
//! arg      := INT | 'contraction' '(' (INT | WORD) ')' | expr
//! ```
//!
//! A chunk is a run of non-blank characters; blanks are allowed inside parentheses.

use std::collections::BTreeSet;

use hecke_core::pair::Caps;

use crate::ast::{
    builtin_arity, Action, Command, ContractionPoint, Format, OptionName, Options, PairExpr, PathArg, Program, Seed, Span,
    Statement, Verb, WordArg,
};
use crate::error::{CliError, Result};

/// Constructor names that are not catalog builtins.
pub const CONSTRUCTORS: &[(&str, usize)] = &[("wreath", 2), ("iterwreath", 2), ("hnn", 2), ("perfectize", 1)];

/// Words that can never be bound by `pair`.
pub const RESERVED: &[&str] = &["pair", "contraction", "abstract"];

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '^' | '*' | '-')
}

fn is_blank(c: char) -> bool {
    c == ' ' || c == '\t' || c == '\r'
}

/// Position-tracking cursor over the whole source.
#[derive(Clone)]
struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0, line: 1, line_start: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(offset)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.line_start = self.pos;
        }
        Some(c)
    }

    fn col_of(&self, pos: usize) -> usize {
        self.src[self.line_start..pos].chars().count() + 1
    }

    fn span_from(&self, start: usize) -> Span {
        Span { start, end: self.pos, line: self.line, col: self.col_of(start) }
    }

    fn here(&self) -> Span {
        let end = self.pos + self.peek().map_or(0, char::len_utf8);
        Span { start: self.pos, end, line: self.line, col: self.col_of(self.pos) }
    }

    fn skip_blanks(&mut self) {
        while self.peek().is_some_and(is_blank) {
            self.bump();
        }
    }

    fn at_line_end(&self) -> bool {
        matches!(self.peek(), None | Some('\n') | Some('#'))
    }

    fn skip_to_line_end(&mut self) {
        while self.peek().is_some_and(|c| c != '\n') {
            self.bump();
        }
    }

    fn found(&self) -> String {
        match self.peek() {
            None => "end of input".into(),
            Some('\n') => "end of line".into(),
            Some(c) => format!("`{c}`"),
        }
    }

    fn syntax<T>(&self, expected: &[&str]) -> Result<T> {
        Err(CliError::Syntax { span: self.here(), expected: expected.iter().map(|s| s.to_string()).collect(), found: self.found() })
    }

    fn ident(&mut self) -> Option<(String, Span)> {
        if !self.peek().is_some_and(is_ident_start) {
            return None;
        }
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.bump();
        }
        Some((self.src[start..self.pos].to_string(), self.span_from(start)))
    }

    fn expect(&mut self, c: char) -> Result<()> {
        self.skip_blanks();
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            self.syntax(&[&format!("`{c}`")])
        }
    }

    fn integer(&mut self) -> Result<(i64, Span)> {
        self.skip_blanks();
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos = start;
            return self.syntax(&["integer"]);
        }
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
        }
        let span = self.span_from(start);
        let text = &self.src[start..self.pos];
        text.parse::<i64>()
            .map(|v| (v, span))
            .map_err(|_| CliError::Syntax { span, expected: vec!["integer in range".into()], found: format!("`{text}`") })
    }

    /// A run of non-blank characters; parentheses may enclose blanks.
    fn chunk(&mut self) -> Result<(String, Span)> {
        let start = self.pos;
        let mut depth = 0usize;
        while let Some(c) = self.peek() {
            if c == '\n' || (depth == 0 && (is_blank(c) || c == '#')) {
                break;
            }
            match c {
                '(' => depth += 1,
                ')' if depth == 0 => return self.syntax(&["argument"]),
                ')' => depth -= 1,
                _ => {}
            }
            self.bump();
        }
        if depth > 0 {
            return self.syntax(&["`)`"]);
        }
        Ok((self.src[start..self.pos].to_string(), self.span_from(start)))
    }
}

enum Arg {
    Int(i64, Span),
    Point(ContractionPoint, Span),
    Expr(PairExpr),
}

impl Arg {
    fn span(&self) -> Span {
        match self {
            Arg::Int(_, s) | Arg::Point(_, s) => *s,
            Arg::Expr(e) => e.span(),
        }
    }
}

struct ExprParser<'a, 'b> {
    cur: Cursor<'a>,
    names: &'b BTreeSet<String>,
}

impl ExprParser<'_, '_> {
    fn expr(&mut self) -> Result<PairExpr> {
        self.cur.skip_blanks();
        let start = self.cur.pos;
        let Some((name, name_span)) = self.cur.ident() else {
            return self.cur.syntax(&["pair expression"]);
        };
        let save = self.cur.clone();
        self.cur.skip_blanks();
        if self.cur.peek() != Some('(') {
            self.cur = save;
            if self.names.contains(&name) {
                return Ok(PairExpr::Ref { name, span: name_span });
            }
            if builtin_arity(&name).is_some() || CONSTRUCTORS.iter().any(|(c, _)| *c == name) {
                return self.cur.syntax(&["`(`"]);
            }
            return Err(CliError::UnknownIdentifier { span: name_span, name });
        }
        self.cur.bump();
        let args = self.args()?;
        let span = self.cur.span_from(start);
        self.build(name, name_span, args, span)
    }

    fn args(&mut self) -> Result<Vec<Arg>> {
        let mut args = Vec::new();
        self.cur.skip_blanks();
        if self.cur.peek() == Some(')') {
            self.cur.bump();
            return Ok(args);
        }
        loop {
            args.push(self.arg()?);
            self.cur.skip_blanks();
            match self.cur.peek() {
                Some(',') => {
                    self.cur.bump();
                }
                Some(')') => {
                    self.cur.bump();
                    return Ok(args);
                }
                _ => return self.cur.syntax(&["`,`", "`)`"]),
            }
        }
    }

    fn arg(&mut self) -> Result<Arg> {
        self.cur.skip_blanks();
        match self.cur.peek() {
            Some(c) if c == '-' || c.is_ascii_digit() => {
                let (v, span) = self.cur.integer()?;
                Ok(Arg::Int(v, span))
            }
            Some(c) if is_ident_start(c) => {
                let save = self.cur.clone();
                let start = self.cur.pos;
                let (name, _) = self.cur.ident().expect("identifier start");
                if name == "contraction" {
                    self.cur.expect('(')?;
                    let point = self.point()?;
                    self.cur.expect(')')?;
                    return Ok(Arg::Point(point, self.cur.span_from(start)));
                }
                self.cur = save;
                self.expr().map(Arg::Expr)
            }
            _ => self.cur.syntax(&["integer", "pair expression", "`contraction`"]),
        }
    }

    fn point(&mut self) -> Result<ContractionPoint> {
        self.cur.skip_blanks();
        match self.cur.peek() {
            Some(c) if c == '-' || c.is_ascii_digit() => Ok(ContractionPoint::Int(self.cur.integer()?.0)),
            Some(c) if is_ident_start(c) => {
                let start = self.cur.pos;
                while self.cur.peek().is_some_and(is_word_char) {
                    self.cur.bump();
                }
                Ok(ContractionPoint::Word(self.cur.src[start..self.cur.pos].to_string()))
            }
            _ => self.cur.syntax(&["integer", "word"]),
        }
    }

    fn build(&self, name: String, name_span: Span, args: Vec<Arg>, span: Span) -> Result<PairExpr> {
        let arity = builtin_arity(&name).or_else(|| CONSTRUCTORS.iter().find(|(c, _)| *c == name).map(|&(_, a)| a));
        let Some(arity) = arity else {
            return Err(CliError::UnknownIdentifier { span: name_span, name });
        };
        if args.len() != arity {
            return Err(CliError::Arity { span, name, expected: arity, found: args.len() });
        }
        let mismatch = |arg: &Arg, expected: &str| -> CliError {
            let found = match arg {
                Arg::Int(v, _) => format!("`{v}`"),
                Arg::Point(p, _) => format!("`contraction({p})`"),
                Arg::Expr(e) => format!("`{e}`"),
            };
            CliError::Syntax { span: arg.span(), expected: vec![expected.into()], found }
        };
        let mut it = args.into_iter();
        let mut next_expr = || -> Result<Box<PairExpr>> {
            match it.next().expect("arity checked") {
                Arg::Expr(e) => Ok(Box::new(e)),
                other => Err(mismatch(&other, "pair expression")),
            }
        };
        if builtin_arity(&name).is_some() {
            let params = it
                .map(|a| match a {
                    Arg::Int(v, _) => Ok(v),
                    other => Err(mismatch(&other, "integer")),
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(PairExpr::Builtin { name, params, span });
        }
        match name.as_str() {
            "wreath" => {
                let bottom = next_expr()?;
                let top = next_expr()?;
                Ok(PairExpr::Wreath { bottom, top, span })
            }
            "perfectize" => Ok(PairExpr::Perfectize { expr: next_expr()?, span }),
            "iterwreath" => {
                let expr = next_expr()?;
                match it.next().expect("arity checked") {
                    Arg::Int(k, s) => {
                        let k = u32::try_from(k).map_err(|_| CliError::Syntax {
                            span: s,
                            expected: vec!["non-negative integer".into()],
                            found: format!("`{k}`"),
                        })?;
                        Ok(PairExpr::IterWreath { expr, k, span })
                    }
                    other => Err(mismatch(&other, "integer")),
                }
            }
            "hnn" => {
                let expr = next_expr()?;
                match it.next().expect("arity checked") {
                    Arg::Point(point, _) => Ok(PairExpr::Hnn { expr, point, span }),
                    other => Err(mismatch(&other, "`contraction(x)`")),
                }
            }
            _ => unreachable!("constructor table covers every name"),
        }
    }
}

/// Parses `text[range]` as exactly one pair expression.
fn expr_in(src: &str, cur: &Cursor<'_>, end: usize, names: &BTreeSet<String>) -> Result<PairExpr> {
    let sub = Cursor { src: &src[..end], ..cur.clone() };
    let mut p = ExprParser { cur: sub, names };
    let e = p.expr()?;
    p.cur.skip_blanks();
    if p.cur.pos != end {
        return p.cur.syntax(&["end of expression"]);
    }
    Ok(e)
}

/// Parses a standalone pair expression; identifiers must be in `names`.
pub fn parse_expr(source: &str, names: &BTreeSet<String>) -> Result<PairExpr> {
    let mut cur = Cursor::new(source);
    cur.skip_blanks();
    let end = source.trim_end().len().max(cur.pos);
    expr_in(source, &cur, end, names)
}

struct Chunk<'a> {
    text: String,
    span: Span,
    cursor: Cursor<'a>,
}

impl Chunk<'_> {
    fn expr(&self, names: &BTreeSet<String>) -> Result<PairExpr> {
        expr_in(self.cursor.src, &self.cursor, self.span.end, names)
    }

    fn word(&self) -> Result<WordArg> {
        if let Some(bad) = self.text.chars().position(|c| !is_word_char(c)) {
            let mut cur = self.cursor.clone();
            for _ in 0..bad {
                cur.bump();
            }
            return cur.syntax(&["word"]);
        }
        Ok(WordArg { text: self.text.clone(), span: self.span })
    }

    fn path(&self) -> PathArg {
        PathArg { path: self.text.clone(), span: self.span }
    }

    fn number<T: std::str::FromStr>(&self, what: &str) -> Result<T> {
        self.text.parse::<T>().map_err(|_| CliError::Syntax {
            span: self.span,
            expected: vec![what.into()],
            found: format!("`{}`", self.text),
        })
    }
}

fn caps_value(chunk: &Chunk<'_>) -> Result<Caps> {
    let bad = || CliError::Syntax {
        span: chunk.span,
        expected: vec!["`COSET,ORBIT` positive integers".into()],
        found: format!("`{}`", chunk.text),
    };
    let (a, b) = chunk.text.split_once(',').ok_or_else(bad)?;
    let coset: usize = a.parse().map_err(|_| bad())?;
    let orbit: usize = b.parse().map_err(|_| bad())?;
    if coset == 0 || orbit == 0 {
        return Err(bad());
    }
    Ok(Caps { coset, orbit })
}

fn set_option(verb: Verb, opts: &mut Options, name: OptionName, value: &Chunk<'_>, names: &BTreeSet<String>) -> Result<()> {
    let dup = |present: bool| -> Result<()> {
        if present {
            Err(CliError::usage(value.span, format!("option `--{}` given twice", name.name())))
        } else {
            Ok(())
        }
    };
    match name {
        OptionName::Depth => {
            dup(opts.depth.is_some())?;
            opts.depth = Some(value.number("non-negative integer")?);
        }
        OptionName::Radius => {
            dup(opts.radius.is_some())?;
            opts.radius = Some(value.number("non-negative integer")?);
        }
        OptionName::Steps => {
            dup(opts.steps.is_some())?;
            opts.steps = Some(value.number("non-negative integer")?);
        }
        OptionName::N => {
            dup(opts.n.is_some())?;
            opts.n = Some(value.number("non-negative integer")?);
        }
        OptionName::Caps => {
            dup(opts.caps.is_some())?;
            opts.caps = Some(caps_value(value)?);
        }
        OptionName::Output => {
            dup(opts.output.is_some())?;
            opts.output = Some(value.path());
        }
        OptionName::Certificate => {
            dup(opts.certificate.is_some())?;
            opts.certificate = Some(value.path());
        }
        OptionName::Format => {
            dup(opts.format.is_some())?;
            let format = Format::from_name(&value.text).filter(|f| verb.formats().contains(f));
            let Some(format) = format else {
                let expected = verb.formats().iter().map(|f| format!("`{}`", f.name())).collect();
                return Err(CliError::Syntax { span: value.span, expected, found: format!("`{}`", value.text) });
            };
            opts.format = Some(format);
        }
        OptionName::Seed => {
            dup(opts.seed.is_some())?;
            opts.seed = Some(if value.text == "abstract" { Seed::Abstract } else { Seed::Expr(value.expr(names)?) });
        }
    }
    Ok(())
}

fn positional_count(verb: Verb, span: Span, found: usize, allowed: std::ops::RangeInclusive<usize>) -> Result<()> {
    if allowed.contains(&found) {
        Ok(())
    } else {
        Err(CliError::Arity { span, name: verb.name().into(), expected: *allowed.start(), found })
    }
}

fn build_action(verb: Verb, span: Span, pos: &[Chunk<'_>], opts: &Options, names: &BTreeSet<String>) -> Result<Action> {
    let count = |range| positional_count(verb, span, pos.len(), range);
    Ok(match verb {
        Verb::Verify => {
            count(1..=1)?;
            Action::Verify { target: pos[0].expr(names)? }
        }
        Verb::Orbits => {
            count(1..=1)?;
            Action::Orbits { target: pos[0].expr(names)? }
        }
        Verb::Ball => {
            count(1..=1)?;
            Action::Ball { target: pos[0].expr(names)? }
        }
        Verb::Index => {
            count(2..=usize::MAX)?;
            let words = pos[1..].iter().map(Chunk::word).collect::<Result<_>>()?;
            Action::Index { target: pos[0].expr(names)?, words }
        }
        Verb::Scale => {
            count(1..=2)?;
            let word = pos.get(1).map(Chunk::word).transpose()?;
            Action::Scale { target: pos[0].expr(names)?, word }
        }
        Verb::Complete => {
            count(2..=2)?;
            Action::Complete { target: pos[0].expr(names)?, word: pos[1].word()? }
        }
        Verb::Filter => {
            let Some(sub) = pos.first() else {
                return Err(CliError::Arity { span, name: verb.name().into(), expected: 2, found: 0 });
            };
            match sub.text.as_str() {
                "compare" => {
                    positional_count(verb, span, pos.len() - 1, 2..=2)?;
                    Action::FilterCompare { lhs: pos[1].path(), rhs: pos[2].path() }
                }
                "show" => {
                    positional_count(verb, span, pos.len() - 1, 1..=1)?;
                    Action::FilterShow { file: pos[1].path() }
                }
                _ => {
                    return Err(CliError::Syntax {
                        span: sub.span,
                        expected: vec!["`compare`".into(), "`show`".into()],
                        found: format!("`{}`", sub.text),
                    })
                }
            }
        }
        Verb::Rank => {
            count(0..=1)?;
            match (pos.first(), &opts.certificate) {
                (Some(t), None) => Action::Rank { target: Some(t.expr(names)?) },
                (None, Some(_)) => Action::Rank { target: None },
                (Some(t), Some(_)) => return Err(CliError::usage(t.span, "`rank` takes a target or `--certificate`, not both")),
                (None, None) => return Err(CliError::usage(span, "`rank` needs a target or `--certificate FILE`")),
            }
        }
        Verb::Tower => {
            count(0..=0)?;
            if opts.n.is_none() {
                return Err(CliError::usage(span, "`tower` needs `--n N`"));
            }
            Action::Tower
        }
    })
}

/// Parses the remainder of a command line whose verb has been read.
fn command_rest<'a>(cur: &mut Cursor<'a>, verb: Verb, start: usize, names: &BTreeSet<String>) -> Result<Command> {
    let mut positional = Vec::new();
    let mut options = Options::default();
    loop {
        cur.skip_blanks();
        if cur.at_line_end() {
            break;
        }
        if cur.peek() == Some('-') && cur.peek_at(1) == Some('-') {
            let opt_start = cur.pos;
            cur.bump();
            cur.bump();
            let Some((name, _)) = cur.ident() else {
                return cur.syntax(&["option name"]);
            };
            let opt_span = cur.span_from(opt_start);
            let Some(opt) = OptionName::from_name(&name) else {
                return Err(CliError::usage(opt_span, format!("unknown option `--{name}`")));
            };
            if !verb.options().contains(&opt) {
                return Err(CliError::usage(opt_span, format!("`{verb}` does not accept `--{name}`")));
            }
            cur.skip_blanks();
            if cur.at_line_end() {
                return cur.syntax(&[&format!("value for `--{name}`")]);
            }
            let cursor = cur.clone();
            let (text, span) = cur.chunk()?;
            set_option(verb, &mut options, opt, &Chunk { text, span, cursor }, names)?;
        } else {
            if options != Options::default() {
                return cur.syntax(&["option"]);
            }
            let cursor = cur.clone();
            let (text, span) = cur.chunk()?;
            positional.push(Chunk { text, span, cursor });
        }
    }
    let end_span = cur.span_from(start);
    let span = Span { end: cur.src[..end_span.end].trim_end().len(), ..end_span };
    let action = build_action(verb, span, &positional, &options, names)?;
    cur.skip_to_line_end();
    Ok(Command { verb, action, options, span })
}

fn verb_names() -> Vec<String> {
    Verb::ALL.iter().map(|v| format!("`{v}`")).collect()
}

fn statement(cur: &mut Cursor<'_>, names: &BTreeSet<String>) -> Result<Statement> {
    let start = cur.pos;
    let Some((head, head_span)) = cur.ident() else {
        let mut expected = vec!["`pair`".to_string()];
        expected.extend(verb_names());
        return Err(CliError::Syntax { span: cur.here(), expected, found: cur.found() });
    };
    if head == "pair" {
        cur.skip_blanks();
        let Some((name, name_span)) = cur.ident() else {
            return cur.syntax(&["identifier"]);
        };
        let taken = RESERVED.contains(&name.as_str())
            || Verb::from_name(&name).is_some()
            || builtin_arity(&name).is_some()
            || CONSTRUCTORS.iter().any(|(c, _)| *c == name);
        if taken {
            return Err(CliError::usage(name_span, format!("`{name}` is reserved")));
        }
        if names.contains(&name) {
            return Err(CliError::usage(name_span, format!("`{name}` is already bound")));
        }
        cur.expect('=')?;
        cur.skip_blanks();
        let expr_start = cur.clone();
        while !cur.at_line_end() {
            cur.bump();
        }
        let end = cur.src[..cur.pos].trim_end().len();
        if end <= expr_start.pos {
            return expr_start.syntax(&["pair expression"]);
        }
        let expr = expr_in(cur.src, &expr_start, end, names)?;
        let span = Span { end, ..cur.span_from(start) };
        cur.skip_to_line_end();
        return Ok(Statement::Binding { name, expr, span });
    }
    let Some(verb) = Verb::from_name(&head) else {
        let mut expected = vec!["`pair`".to_string()];
        expected.extend(verb_names());
        return Err(CliError::Syntax { span: head_span, expected, found: format!("`{head}`") });
    };
    command_rest(cur, verb, start, names).map(Statement::Command)
}

/// Parses a whole program. Bindings are visible to every later line.
pub fn parse_program(source: &str) -> Result<Program> {
    let mut cur = Cursor::new(source);
    let mut names = BTreeSet::new();
    let mut statements = Vec::new();
    loop {
        cur.skip_blanks();
        match cur.peek() {
            None => break,
            Some('\n') => {
                cur.bump();
                continue;
            }
            Some('#') => {
                cur.skip_to_line_end();
                continue;
            }
            _ => {}
        }
        let stmt = statement(&mut cur, &names)?;
        if let Statement::Binding { name, .. } = &stmt {
            names.insert(name.clone());
        }
        statements.push(stmt);
        if cur.peek().is_some_and(|c| c != '\n') {
            return cur.syntax(&["end of line"]);
        }
    }
    Ok(Program { statements })
}

/// Parses one command with no bindings in scope.
pub fn parse_command(source: &str) -> Result<Command> {
    let program = parse_program(source)?;
    let mut it = program.statements.into_iter();
    match (it.next(), it.next()) {
        (Some(Statement::Command(c)), None) => Ok(c),
        (Some(Statement::Binding { span, .. }), _) => Err(CliError::usage(span, "expected a command, found a binding")),
        (Some(Statement::Command(_)), Some(_)) => {
            Err(CliError::usage(Span::default(), "expected a single command"))
        }
        (None, _) => Err(CliError::Syntax { span: Span { line: 1, col: 1, ..Span::default() }, expected: verb_names(), found: "end of input".into() }),
    }
}

/// Parses command-line arguments, joined by single spaces, as one command.
pub fn parse_args<S: AsRef<str>>(args: &[S]) -> Result<(String, Command)> {
    let line = args.iter().map(AsRef::as_ref).collect::<Vec<_>>().join(" ");
    if line.contains('\n') {
        return Err(CliError::usage(Span::default(), "arguments may not contain newlines"));
    }
    let cmd = parse_command(&line)?;
    Ok((line, cmd))
}
